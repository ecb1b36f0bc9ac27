"""The five anonymization techniques and their regeneration rules.

Anonymization happens in two phases.  ``anonymize`` maps a (value, domain,
config) triple to an AnonymizedRecord: the shareable artifact that replaces
the raw value inside a trace.  ``regenerate`` maps a record plus a random
stream back to a concrete value that conforms to the original domain, so an
anonymized trace can be replayed.

Techniques and the records they produce:

* Global Recoding   -> IntervalGroup (numeric) / CategoryGroup (categorical)
* Rounding          -> Concrete (the nearest of k interval midpoints)
* Local Suppression -> Suppressed (value dropped entirely)
* SCD Local Suppression -> SpecialChars (value dropped, but the multiset of
  special characters survives; specials are everything outside [A-Za-z0-9]
  except the space character)
* Noise Addition    -> Concrete (uniform draw from a noise interval around
  the value; already random at anonymization time)

Regenerated numbers land on the decimal grid of the domain's precision (two
fraction digits by default for real domains) so they read like values a user
could actually have typed, and integer noise samples round half-up before
clamping into the domain.
"""

from __future__ import annotations

import logging
import math
import string
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Any, Union

import numpy as np

from .errors import (
    ConfigError,
    DegenerateIntervalError,
    MissingHierarchyError,
    NonConformingValueError,
    TraceParseError,
    UnsupportedTechniqueError,
    ValidationError,
)
from .model import (
    Categorical,
    CategoricalDomain,
    Continuous,
    DataValue,
    DomainSpec,
    NumericDomain,
    StringDomain,
    Text,
    TupleDomain,
    TupleValue,
    conforms,
    domain_from_json,
    domain_to_json,
    value_from_json,
    value_to_json,
)
from .rng import split

log = logging.getLogger(__name__)

_ALNUM = frozenset(string.ascii_letters + string.digits)


def is_special_char(char: str) -> bool:
    """Special characters: not alphanumeric ASCII and not the space."""
    return char not in _ALNUM and char != " "


def special_characters(text: str) -> str:
    """The multiset of special characters in ``text``, sorted."""
    return "".join(sorted(c for c in text if is_special_char(c)))


# ---------------------------------------------------------------------------
# technique configurations


class LengthPolicy(str, Enum):
    """How suppression picks the length of a regenerated string."""

    PRESERVE_ORIGINAL = "preserve_original"
    RANDOM_IN_RANGE = "random_in_range"


@dataclass(frozen=True)
class GlobalRecodingConfig:
    """Coarsen to one of ``partitions`` equal-width sub-intervals, or to a
    hierarchy group for categorical values (``partitions`` ignored there)."""

    partitions: int | None = None
    label: str | None = None

    def __post_init__(self) -> None:
        if self.partitions is not None and self.partitions < 2:
            raise ConfigError("recoding needs at least 2 partitions")


@dataclass(frozen=True)
class RoundingConfig:
    partitions: int
    label: str | None = None

    def __post_init__(self) -> None:
        if self.partitions < 2:
            raise ConfigError("rounding needs at least 2 partitions")


@dataclass(frozen=True)
class LocalSuppressionConfig:
    length_policy: LengthPolicy = LengthPolicy.RANDOM_IN_RANGE
    label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "length_policy", LengthPolicy(self.length_policy))


@dataclass(frozen=True)
class SCDLocalSuppressionConfig:
    length_policy: LengthPolicy = LengthPolicy.RANDOM_IN_RANGE
    label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "length_policy", LengthPolicy(self.length_policy))


@dataclass(frozen=True)
class NoiseAdditionConfig:
    """Relative noise magnitude in (0, 1]."""

    noise: float
    label: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.noise <= 1.0:
            raise ConfigError(f"noise must be in (0, 1], got {self.noise}")


TechniqueConfig = Union[
    GlobalRecodingConfig,
    RoundingConfig,
    LocalSuppressionConfig,
    SCDLocalSuppressionConfig,
    NoiseAdditionConfig,
]


# ---------------------------------------------------------------------------
# anonymized records


@dataclass(frozen=True)
class Suppressed:
    """The value is gone; only an optional original-length hint remains."""

    domain: DomainSpec
    length_hint: int | None = None

    def __post_init__(self) -> None:
        if self.length_hint is not None:
            if not isinstance(self.domain, StringDomain):
                raise ValidationError("length hints only apply to string domains")
            if not self.domain.length_min <= self.length_hint <= self.domain.length_max:
                raise ValidationError("length hint outside domain bounds")


@dataclass(frozen=True)
class SpecialChars:
    """Suppressed string that keeps its special-character multiset."""

    domain: StringDomain
    specials: str
    length_hint: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.domain, StringDomain):
            raise ValidationError("special-character records need a string domain")
        object.__setattr__(self, "specials", "".join(sorted(self.specials)))
        bad = [c for c in self.specials if not is_special_char(c)]
        if bad:
            raise ValidationError(f"not special characters: {bad!r}")
        if self.length_hint is not None and not (
            self.domain.length_min <= self.length_hint <= self.domain.length_max
        ):
            raise ValidationError("length hint outside domain bounds")


@dataclass(frozen=True)
class IntervalGroup:
    """A numeric value coarsened to the sub-interval that contained it."""

    domain: NumericDomain
    lo: float
    hi: float
    hi_inclusive: bool

    def __post_init__(self) -> None:
        if not isinstance(self.domain, NumericDomain):
            raise ValidationError("interval groups need a numeric domain")
        if not (self.domain.min <= self.lo < self.hi <= self.domain.max):
            raise ValidationError(
                f"interval [{self.lo}, {self.hi}] not inside the domain"
            )


@dataclass(frozen=True)
class CategoryGroup:
    """A categorical value coarsened to its hierarchy group."""

    domain: CategoricalDomain
    group_label: str

    def __post_init__(self) -> None:
        if self.domain.hierarchy is None:
            raise MissingHierarchyError("domain has no hierarchy")
        self.domain.group_members(self.group_label)  # validates


@dataclass(frozen=True)
class Concrete:
    """An already-concrete replacement value (rounding, noise addition)."""

    domain: DomainSpec
    value: DataValue

    def __post_init__(self) -> None:
        if not conforms(self.value, self.domain):
            raise NonConformingValueError(
                f"concrete record value {self.value!r} outside its domain"
            )


@dataclass(frozen=True)
class TupleRecord:
    components: tuple["AnonymizedRecord", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))


AnonymizedRecord = Union[
    Suppressed, SpecialChars, IntervalGroup, CategoryGroup, Concrete, TupleRecord
]


def record_domain(record: AnonymizedRecord) -> DomainSpec:
    """The domain a record regenerates into."""
    if isinstance(record, TupleRecord):
        return TupleDomain(tuple(record_domain(c) for c in record.components))
    return record.domain


# ---------------------------------------------------------------------------
# shared numeric helpers


def _grid_ceil(x: float, scale: int) -> int:
    """Smallest integer i with i/scale >= x."""
    idx = math.ceil(x * scale)
    if (idx - 1) / scale >= x:
        idx -= 1
    elif idx / scale < x:
        idx += 1
    return idx


def _grid_floor(x: float, scale: int) -> int:
    """Largest integer i with i/scale <= x."""
    idx = math.floor(x * scale)
    if (idx + 1) / scale <= x:
        idx += 1
    elif idx / scale > x:
        idx -= 1
    return idx


def _sample_real(
    lo: float, hi: float, hi_inclusive: bool, precision: int, rng: np.random.Generator
) -> float:
    """Uniform draw from [lo, hi] (or [lo, hi)) on the decimal grid with
    ``precision`` fraction digits.  Falls back to a raw uniform draw when the
    interval is narrower than one grid step."""
    scale = 10**precision
    lo_idx = _grid_ceil(lo, scale)
    hi_idx = _grid_floor(hi, scale)
    if not hi_inclusive and hi_idx / scale == hi:
        hi_idx -= 1
    if lo_idx > hi_idx:
        return float(rng.uniform(lo, hi))
    return int(rng.integers(lo_idx, hi_idx + 1)) / scale


def integer_bounds(lo: float, hi: float, hi_inclusive: bool) -> tuple[int, int]:
    """Inclusive integer bounds of the interval; raises when it holds none."""
    lo_i = math.ceil(lo)
    hi_i = math.floor(hi)
    if not hi_inclusive and float(hi).is_integer():
        hi_i = int(hi) - 1
    if lo_i > hi_i:
        raise DegenerateIntervalError(
            f"no integer inside [{lo}, {hi}{']' if hi_inclusive else ')'}"
        )
    return lo_i, hi_i


def _sample_numeric(
    domain: NumericDomain,
    lo: float,
    hi: float,
    hi_inclusive: bool,
    rng: np.random.Generator,
) -> Continuous:
    if domain.integer:
        lo_i, hi_i = integer_bounds(lo, hi, hi_inclusive)
        return Continuous(float(rng.integers(lo_i, hi_i + 1)), 0)
    p = domain.effective_precision
    return Continuous(_sample_real(lo, hi, hi_inclusive, p, rng), p)


def _require_conforms(value: DataValue, domain: DomainSpec) -> None:
    if not conforms(value, domain):
        raise NonConformingValueError(
            f"value {value!r} does not conform to {domain!r}"
        )


def _tuple_pairs(value: DataValue, domain: DomainSpec):
    """Component pairs when both sides are tuples, else None."""
    if isinstance(domain, TupleDomain):
        if not isinstance(value, TupleValue) or len(value.components) != len(
            domain.components
        ):
            raise NonConformingValueError("tuple value does not match tuple domain")
        return list(zip(value.components, domain.components))
    return None


# ---------------------------------------------------------------------------
# global recoding


def partition_boundaries(domain: NumericDomain, partitions: int) -> list[float]:
    """The partitions-1 interior boundaries of the equal-width split."""
    width = (domain.max - domain.min) / partitions
    return [domain.min + i * width for i in range(1, partitions)]


def global_recoding_anonymize(
    value: DataValue, domain: DomainSpec, cfg: GlobalRecodingConfig
) -> AnonymizedRecord:
    """Coarsen ``value`` to the sub-interval or hierarchy group holding it.

    Interior boundaries belong to the sub-interval on their right; only the
    last sub-interval inherits the domain's max inclusiveness.
    """
    pairs = _tuple_pairs(value, domain)
    if pairs is not None:
        return TupleRecord(
            tuple(global_recoding_anonymize(v, d, cfg) for v, d in pairs)
        )
    _require_conforms(value, domain)
    if isinstance(domain, NumericDomain):
        if cfg.partitions is None:
            raise ConfigError("recoding a numeric value needs a partition count")
        bounds = partition_boundaries(domain, cfg.partitions)
        index = bisect_right(bounds, value.value)  # type: ignore[union-attr]
        lo = domain.min if index == 0 else bounds[index - 1]
        last = index == len(bounds)
        hi = domain.max if last else bounds[index]
        return IntervalGroup(domain, lo, hi, domain.max_inclusive if last else False)
    if isinstance(domain, CategoricalDomain):
        if domain.hierarchy is None:
            raise MissingHierarchyError(
                "recoding a categorical value needs a hierarchy"
            )
        return CategoryGroup(domain, domain.group_of(value.label))  # type: ignore[union-attr]
    raise UnsupportedTechniqueError(
        "global recoding applies to numeric and categorical values only"
    )


# ---------------------------------------------------------------------------
# rounding


def rounding_points(domain: NumericDomain, partitions: int) -> tuple[float, ...]:
    """Midpoints of the equal-width sub-intervals; integer domains round each
    midpoint half-up and clamp it into the domain."""
    width = (domain.max - domain.min) / partitions
    points = [domain.min + (i + 0.5) * width for i in range(partitions)]
    if domain.integer:
        lo_i, hi_i = integer_bounds(domain.min, domain.max, domain.max_inclusive)
        points = [float(min(max(math.floor(p + 0.5), lo_i), hi_i)) for p in points]
    return tuple(points)


def rounding_anonymize(
    value: DataValue, domain: DomainSpec, cfg: RoundingConfig
) -> AnonymizedRecord:
    """Replace ``value`` with the nearest rounding point (ties go lower)."""
    pairs = _tuple_pairs(value, domain)
    if pairs is not None:
        return TupleRecord(tuple(rounding_anonymize(v, d, cfg) for v, d in pairs))
    _require_conforms(value, domain)
    if not isinstance(domain, NumericDomain):
        raise UnsupportedTechniqueError("rounding applies to numeric values only")
    assert isinstance(value, Continuous)
    nearest = min(rounding_points(domain, cfg.partitions),
                  key=lambda p: abs(value.value - p))
    return Concrete(domain, Continuous(nearest, domain.effective_precision))


# ---------------------------------------------------------------------------
# suppression


def local_suppression_anonymize(
    value: DataValue, domain: DomainSpec, cfg: LocalSuppressionConfig
) -> AnonymizedRecord:
    """Drop the value.  Strings keep their length when the policy says so;
    nothing else about the original survives."""
    pairs = _tuple_pairs(value, domain)
    if pairs is not None:
        return TupleRecord(
            tuple(local_suppression_anonymize(v, d, cfg) for v, d in pairs)
        )
    _require_conforms(value, domain)
    hint = None
    if (
        isinstance(domain, StringDomain)
        and cfg.length_policy is LengthPolicy.PRESERVE_ORIGINAL
    ):
        hint = len(value.value)  # type: ignore[union-attr]
    return Suppressed(domain, hint)


def scd_local_suppression_anonymize(
    value: DataValue, domain: DomainSpec, cfg: SCDLocalSuppressionConfig
) -> AnonymizedRecord:
    """Drop the string but keep its special-character multiset."""
    pairs = _tuple_pairs(value, domain)
    if pairs is not None:
        return TupleRecord(
            tuple(scd_local_suppression_anonymize(v, d, cfg) for v, d in pairs)
        )
    _require_conforms(value, domain)
    if not isinstance(domain, StringDomain):
        raise UnsupportedTechniqueError(
            "special-character suppression applies to string values only"
        )
    assert isinstance(value, Text)
    hint = (
        len(value.value)
        if cfg.length_policy is LengthPolicy.PRESERVE_ORIGINAL
        else None
    )
    return SpecialChars(domain, special_characters(value.value), hint)


# ---------------------------------------------------------------------------
# noise addition


def noise_interval(
    value: float, domain: NumericDomain, noise: float
) -> tuple[float, float]:
    """[value - noise*(value-min), value + noise*(max-value)]."""
    return (
        value - noise * (value - domain.min),
        value + noise * (domain.max - value),
    )


def noise_addition_anonymize(
    value: DataValue,
    domain: DomainSpec,
    cfg: NoiseAdditionConfig,
    rng: np.random.Generator,
) -> AnonymizedRecord:
    """Replace the value with a uniform draw from its noise interval.

    Integer domains draw a real, round half-up and clamp into the domain.
    """
    pairs = _tuple_pairs(value, domain)
    if pairs is not None:
        streams = split(rng, len(pairs))
        return TupleRecord(
            tuple(
                noise_addition_anonymize(v, d, cfg, r)
                for (v, d), r in zip(pairs, streams)
            )
        )
    _require_conforms(value, domain)
    if not isinstance(domain, NumericDomain):
        raise UnsupportedTechniqueError("noise addition applies to numeric values only")
    assert isinstance(value, Continuous)
    lo, hi = noise_interval(value.value, domain, cfg.noise)
    if domain.integer:
        drawn = math.floor(float(rng.uniform(lo, hi)) + 0.5)
        lo_i, hi_i = integer_bounds(domain.min, domain.max, domain.max_inclusive)
        out = Continuous(float(min(max(drawn, lo_i), hi_i)), 0)
    else:
        hi_inclusive = domain.max_inclusive if hi >= domain.max else True
        p = domain.effective_precision
        out = Continuous(_sample_real(lo, hi, hi_inclusive, p, rng), p)
    return Concrete(domain, out)


# ---------------------------------------------------------------------------
# dispatchers


def anonymize(
    value: DataValue,
    domain: DomainSpec,
    cfg: TechniqueConfig,
    rng: np.random.Generator | None = None,
) -> AnonymizedRecord:
    """Apply the technique selected by ``cfg``.

    Only noise addition draws randomness at this stage; the other techniques
    ignore ``rng``.
    """
    if isinstance(cfg, GlobalRecodingConfig):
        return global_recoding_anonymize(value, domain, cfg)
    if isinstance(cfg, RoundingConfig):
        return rounding_anonymize(value, domain, cfg)
    if isinstance(cfg, LocalSuppressionConfig):
        return local_suppression_anonymize(value, domain, cfg)
    if isinstance(cfg, SCDLocalSuppressionConfig):
        return scd_local_suppression_anonymize(value, domain, cfg)
    if isinstance(cfg, NoiseAdditionConfig):
        if rng is None:
            raise ConfigError("noise addition needs a random stream")
        return noise_addition_anonymize(value, domain, cfg, rng)
    raise ConfigError(f"unknown technique configuration {cfg!r}")


def _random_value(
    domain: DomainSpec, rng: np.random.Generator, length_hint: int | None = None
) -> DataValue:
    if isinstance(domain, NumericDomain):
        return _sample_numeric(
            domain, domain.min, domain.max, domain.max_inclusive, rng
        )
    if isinstance(domain, CategoricalDomain):
        return Categorical(domain.categories[int(rng.integers(len(domain.categories)))])
    if isinstance(domain, StringDomain):
        length = (
            length_hint
            if length_hint is not None
            else int(rng.integers(domain.length_min, domain.length_max + 1))
        )
        return Text(_random_string(domain, length, rng))
    if isinstance(domain, TupleDomain):
        streams = split(rng, len(domain.components))
        return TupleValue(
            tuple(_random_value(d, r) for d, r in zip(domain.components, streams))
        )
    raise ConfigError(f"unknown domain {domain!r}")


def _random_string(domain: StringDomain, length: int, rng: np.random.Generator) -> str:
    alphabet = domain.alphabet
    if length == 0:
        return ""
    picks = rng.integers(0, len(alphabet), size=length)
    return "".join(alphabet[int(i)] for i in picks)


def _regenerate_special_chars(rec: SpecialChars, rng: np.random.Generator) -> Text:
    domain = rec.domain
    length = (
        rec.length_hint
        if rec.length_hint is not None
        else int(rng.integers(domain.length_min, domain.length_max + 1))
    )
    needed = len(rec.specials)
    if length < needed:
        log.warning(
            "raising regenerated length %d to %d to fit special characters",
            length,
            needed,
        )
        length = needed
    chars = list(_random_string(domain, length, rng))
    positions = rng.choice(length, size=needed, replace=False)
    order = rng.permutation(needed)
    for pos, which in zip(positions, order):
        chars[int(pos)] = rec.specials[int(which)]
    return Text("".join(chars))


def regenerate(record: AnonymizedRecord, rng: np.random.Generator) -> DataValue:
    """Draw a concrete value for ``record``; Concrete records are identity."""
    if isinstance(record, Concrete):
        return record.value
    if isinstance(record, TupleRecord):
        streams = split(rng, len(record.components))
        return TupleValue(
            tuple(regenerate(r, g) for r, g in zip(record.components, streams))
        )
    if isinstance(record, IntervalGroup):
        return _sample_numeric(
            record.domain, record.lo, record.hi, record.hi_inclusive, rng
        )
    if isinstance(record, CategoryGroup):
        members = record.domain.group_members(record.group_label)
        return Categorical(members[int(rng.integers(len(members)))])
    if isinstance(record, SpecialChars):
        return _regenerate_special_chars(record, rng)
    if isinstance(record, Suppressed):
        return _random_value(record.domain, rng, record.length_hint)
    raise ConfigError(f"unknown anonymized record {record!r}")


# ---------------------------------------------------------------------------
# JSON codecs for configurations and records


_CONFIG_TYPES: dict[str, type] = {
    "global_recoding": GlobalRecodingConfig,
    "rounding": RoundingConfig,
    "local_suppression": LocalSuppressionConfig,
    "scd_local_suppression": SCDLocalSuppressionConfig,
    "noise_addition": NoiseAdditionConfig,
}

_CONFIG_NAMES = {cls: name for name, cls in _CONFIG_TYPES.items()}


def technique_name(cfg: TechniqueConfig) -> str:
    return _CONFIG_NAMES[type(cfg)]


def config_to_json(cfg: TechniqueConfig) -> dict[str, Any]:
    out: dict[str, Any] = {"technique": technique_name(cfg)}
    if isinstance(cfg, (GlobalRecodingConfig, RoundingConfig)):
        if cfg.partitions is not None:
            out["partitions"] = cfg.partitions
    elif isinstance(cfg, (LocalSuppressionConfig, SCDLocalSuppressionConfig)):
        out["length_policy"] = cfg.length_policy.value
    elif isinstance(cfg, NoiseAdditionConfig):
        out["noise"] = cfg.noise
    if cfg.label is not None:
        out["label"] = cfg.label
    return out


_CONFIG_KEYS = {
    "global_recoding": {"technique", "partitions", "label"},
    "rounding": {"technique", "partitions", "label"},
    "local_suppression": {"technique", "length_policy", "label"},
    "scd_local_suppression": {"technique", "length_policy", "label"},
    "noise_addition": {"technique", "noise", "label"},
}


def config_from_json(raw: Any) -> TechniqueConfig:
    if not isinstance(raw, dict) or "technique" not in raw:
        raise ConfigError(f"a technique config is an object with 'technique': {raw!r}")
    name = raw["technique"]
    if name not in _CONFIG_TYPES:
        raise ConfigError(
            f"unknown technique {name!r}; expected one of {sorted(_CONFIG_TYPES)}"
        )
    unknown = set(raw) - _CONFIG_KEYS[name]
    if unknown:
        raise ConfigError(
            f"unknown key(s) for {name!r}: {', '.join(sorted(unknown))}"
        )
    label = raw.get("label")
    try:
        if name == "global_recoding":
            return GlobalRecodingConfig(partitions=raw.get("partitions"), label=label)
        if name == "rounding":
            return RoundingConfig(partitions=raw["partitions"], label=label)
        if name == "local_suppression":
            return LocalSuppressionConfig(
                length_policy=raw.get("length_policy", "random_in_range"), label=label
            )
        if name == "scd_local_suppression":
            return SCDLocalSuppressionConfig(
                length_policy=raw.get("length_policy", "random_in_range"), label=label
            )
        return NoiseAdditionConfig(noise=raw["noise"], label=label)
    except KeyError as exc:
        raise ConfigError(f"technique {name!r} is missing {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def record_to_json(record: AnonymizedRecord) -> dict[str, Any]:
    if isinstance(record, Suppressed):
        return {
            "record": "suppressed",
            "domain": domain_to_json(record.domain),
            "length_hint": record.length_hint,
        }
    if isinstance(record, SpecialChars):
        return {
            "record": "special_chars",
            "domain": domain_to_json(record.domain),
            "specials": record.specials,
            "length_hint": record.length_hint,
        }
    if isinstance(record, IntervalGroup):
        return {
            "record": "interval_group",
            "domain": domain_to_json(record.domain),
            "lo": record.lo,
            "hi": record.hi,
            "hi_inclusive": record.hi_inclusive,
        }
    if isinstance(record, CategoryGroup):
        return {
            "record": "category_group",
            "domain": domain_to_json(record.domain),
            "group": record.group_label,
        }
    if isinstance(record, Concrete):
        return {
            "record": "concrete",
            "domain": domain_to_json(record.domain),
            "value": value_to_json(record.value),
        }
    if isinstance(record, TupleRecord):
        return {
            "record": "tuple",
            "components": [record_to_json(c) for c in record.components],
        }
    raise ConfigError(f"unknown anonymized record {record!r}")


def record_from_json(raw: Any) -> AnonymizedRecord:
    if not isinstance(raw, dict) or "record" not in raw:
        raise TraceParseError(f"a record is an object with a 'record' kind: {raw!r}")
    kind = raw["record"]
    try:
        if kind == "suppressed":
            return Suppressed(
                domain=domain_from_json(raw["domain"]),
                length_hint=raw.get("length_hint"),
            )
        if kind == "special_chars":
            domain = domain_from_json(raw["domain"])
            if not isinstance(domain, StringDomain):
                raise TraceParseError("special_chars records need a string domain")
            return SpecialChars(
                domain=domain,
                specials=raw["specials"],
                length_hint=raw.get("length_hint"),
            )
        if kind == "interval_group":
            domain = domain_from_json(raw["domain"])
            if not isinstance(domain, NumericDomain):
                raise TraceParseError("interval_group records need a numeric domain")
            return IntervalGroup(
                domain=domain,
                lo=raw["lo"],
                hi=raw["hi"],
                hi_inclusive=raw["hi_inclusive"],
            )
        if kind == "category_group":
            domain = domain_from_json(raw["domain"])
            if not isinstance(domain, CategoricalDomain):
                raise TraceParseError("category_group records need a categorical domain")
            return CategoryGroup(domain=domain, group_label=raw["group"])
        if kind == "concrete":
            domain = domain_from_json(raw["domain"])
            return Concrete(domain=domain, value=value_from_json(raw["value"], domain))
        if kind == "tuple":
            return TupleRecord(
                components=tuple(record_from_json(c) for c in raw["components"])
            )
    except KeyError as exc:
        raise TraceParseError(f"record is missing key {exc.args[0]!r}") from exc
    raise TraceParseError(f"unknown record kind {kind!r}")
