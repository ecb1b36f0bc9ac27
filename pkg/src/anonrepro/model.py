"""Failure traces and the typed values they carry.

A failure trace is an ordered list of GUI events.  An event may carry a data
value (the text typed into a widget, a picked date component, ...) together
with a domain describing which values that widget accepts.  Domains are what
the anonymization techniques operate on: they bound what a value can reveal
and what a regenerated value may look like.

Value kinds and domain kinds pair up one-to-one:

* ``Continuous``  <-> ``NumericDomain``   (reals or integers in an interval)
* ``Categorical`` <-> ``CategoricalDomain`` (a label from a finite set)
* ``Text``        <-> ``StringDomain``    (bounded-length string over a
  character class such as ``[0-9.,]``)
* ``TupleValue``  <-> ``TupleDomain``     (one level of composition, e.g. the
  day/month/year of a date picker)

Traces serialize to JSON as ``{"events": [{"action", "widget", "data"?}]}``
where ``data`` is ``{"value": ..., "domain": {...}}``.  Numeric values are
written as string literals ("4.60") so the number of fraction digits the
user actually typed survives a round-trip.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from functools import lru_cache
from typing import Any, Iterable, Mapping, Union

from .errors import (
    DomainError,
    NonConformingValueError,
    TraceParseError,
)

#: Fraction digits assumed for real-valued domains that do not declare any.
DEFAULT_REAL_PRECISION = 2


# ---------------------------------------------------------------------------
# character classes


@lru_cache(maxsize=None)
def expand_char_class(spec: str) -> str:
    """Expand a bracketed character class like ``[0-9.,]`` into its alphabet.

    Supports literal characters and ``a-z`` ranges.  A ``-`` first or last in
    the class is a literal.  Negation is not supported.  The result is sorted
    by codepoint with duplicates removed.
    """
    if len(spec) < 3 or not spec.startswith("[") or not spec.endswith("]"):
        raise DomainError(f"malformed character class {spec!r}")
    body = spec[1:-1]
    if body.startswith("^"):
        raise DomainError(f"negated character class {spec!r} is not supported")
    chars: set[str] = set()
    i = 0
    while i < len(body):
        if i + 2 < len(body) and body[i + 1] == "-":
            lo, hi = body[i], body[i + 2]
            if ord(lo) > ord(hi):
                raise DomainError(f"inverted range {lo}-{hi} in {spec!r}")
            chars.update(chr(c) for c in range(ord(lo), ord(hi) + 1))
            i += 3
        else:
            chars.add(body[i])
            i += 1
    return "".join(sorted(chars))


@lru_cache(maxsize=None)
def _char_class_set(spec: str) -> frozenset[str]:
    return frozenset(expand_char_class(spec))


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class Continuous:
    """A numeric value plus the fraction digits of the literal it came from.

    ``precision`` only affects how the value renders ("4.60" vs "4.6"); two
    values that differ only in precision compare equal.
    """

    value: float
    precision: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        if self.precision < 0:
            raise DomainError("precision must be >= 0")

    def rendered(self) -> str:
        return format_number(self.value, self.precision)


@dataclass(frozen=True)
class Categorical:
    label: str


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class TupleValue:
    components: tuple["DataValue", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))


DataValue = Union[Continuous, Categorical, Text, TupleValue]


def format_number(value: float, precision: int) -> str:
    """Render ``value`` with exactly ``precision`` fraction digits."""
    text = f"{value:.{precision}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]  # avoid "-0.00"
    return text


def literal_precision(literal: str) -> int:
    """Fraction digits of a numeric literal: "4.60" -> 2, "29" -> 0."""
    text = literal.strip()
    if "e" in text.lower():
        return max(0, -Decimal(text).as_tuple().exponent)
    if "." in text:
        return len(text.split(".", 1)[1])
    return 0


def float_precision(value: float) -> int:
    """Fraction digits of the shortest literal that round-trips ``value``."""
    if float(value).is_integer():
        return 0
    return max(0, -Decimal(repr(float(value))).as_tuple().exponent)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class NumericDomain:
    """An interval of reals or integers.  ``min`` is always inclusive."""

    min: float
    max: float
    max_inclusive: bool = True
    integer: bool = False
    precision: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise DomainError("domain bounds must be finite")
        if self.min >= self.max:
            raise DomainError(f"empty numeric domain [{self.min}, {self.max}]")
        if self.integer:
            if not (self.min.is_integer() and self.max.is_integer()):
                raise DomainError("integer domain bounds must be integers")
            if self.precision not in (None, 0):
                raise DomainError("integer domains have precision 0")
        if self.precision is not None and self.precision < 0:
            raise DomainError("precision must be >= 0")

    @property
    def effective_precision(self) -> int:
        if self.integer:
            return 0
        if self.precision is not None:
            return self.precision
        return DEFAULT_REAL_PRECISION


@dataclass(frozen=True)
class CategoricalDomain:
    """A finite label set, optionally partitioned into named groups."""

    categories: tuple[str, ...]
    hierarchy: tuple[tuple[str, tuple[str, ...]], ...] | None = None

    def __init__(
        self,
        categories: Iterable[str],
        hierarchy: Mapping[str, Iterable[str]] | None = None,
    ) -> None:
        cats = tuple(categories)
        if not cats:
            raise DomainError("categorical domain needs at least one category")
        if len(set(cats)) != len(cats):
            raise DomainError("duplicate categories")
        object.__setattr__(self, "categories", cats)
        if hierarchy is None:
            object.__setattr__(self, "hierarchy", None)
            return
        groups = tuple((name, tuple(members)) for name, members in hierarchy.items())
        seen: set[str] = set()
        for name, members in groups:
            if not members:
                raise DomainError(f"hierarchy group {name!r} is empty")
            overlap = seen.intersection(members)
            if overlap:
                raise DomainError(f"categories {sorted(overlap)} appear in two groups")
            seen.update(members)
        if seen != set(cats):
            raise DomainError("hierarchy groups must cover exactly the categories")
        object.__setattr__(self, "hierarchy", groups)

    def group_of(self, label: str) -> str:
        """Name of the hierarchy group containing ``label``."""
        assert self.hierarchy is not None
        for name, members in self.hierarchy:
            if label in members:
                return name
        raise DomainError(f"label {label!r} is in no hierarchy group")

    def group_members(self, group: str) -> tuple[str, ...]:
        assert self.hierarchy is not None
        for name, members in self.hierarchy:
            if name == group:
                return members
        raise DomainError(f"unknown hierarchy group {group!r}")


@dataclass(frozen=True)
class StringDomain:
    """Strings over a character class with an inclusive length interval."""

    char_class: str
    length_min: int
    length_max: int

    def __post_init__(self) -> None:
        expand_char_class(self.char_class)  # validates
        if self.length_min < 0 or self.length_min > self.length_max:
            raise DomainError(
                f"bad length bounds [{self.length_min}, {self.length_max}]"
            )

    @property
    def alphabet(self) -> str:
        return expand_char_class(self.char_class)


@dataclass(frozen=True)
class TupleDomain:
    components: tuple["DomainSpec", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise DomainError("tuple domain needs at least one component")
        for comp in self.components:
            if isinstance(comp, TupleDomain):
                raise DomainError("tuple domains do not nest")


DomainSpec = Union[NumericDomain, CategoricalDomain, StringDomain, TupleDomain]


# ---------------------------------------------------------------------------
# conformance


def conforms(value: DataValue, domain: DomainSpec) -> bool:
    """Whether ``value`` is a member of ``domain``.  Total: never raises."""
    if isinstance(domain, NumericDomain):
        if not isinstance(value, Continuous) or not math.isfinite(value.value):
            return False
        v = value.value
        if domain.integer and not v.is_integer():
            return False
        if v < domain.min:
            return False
        return v <= domain.max if domain.max_inclusive else v < domain.max
    if isinstance(domain, CategoricalDomain):
        return isinstance(value, Categorical) and value.label in domain.categories
    if isinstance(domain, StringDomain):
        if not isinstance(value, Text):
            return False
        if not domain.length_min <= len(value.value) <= domain.length_max:
            return False
        allowed = _char_class_set(domain.char_class)
        return all(c in allowed for c in value.value)
    if isinstance(domain, TupleDomain):
        if not isinstance(value, TupleValue):
            return False
        if len(value.components) != len(domain.components):
            return False
        return all(
            conforms(v, d) for v, d in zip(value.components, domain.components)
        )
    return False


def values_equal(reference: DataValue, other: DataValue) -> bool:
    """Equality as a user would read the values back.

    Strings and labels compare exactly; numbers compare by their rendering at
    the *reference* value's precision, so regenerating 4.603 against an
    original "4.60" counts as equal while 4.61 does not.
    """
    if isinstance(reference, Continuous):
        return isinstance(other, Continuous) and (
            format_number(other.value, reference.precision) == reference.rendered()
        )
    if isinstance(reference, TupleValue):
        return (
            isinstance(other, TupleValue)
            and len(reference.components) == len(other.components)
            and all(
                values_equal(r, o)
                for r, o in zip(reference.components, other.components)
            )
        )
    return reference == other


# ---------------------------------------------------------------------------
# events and traces


@dataclass(frozen=True)
class Event:
    """One GUI interaction; ``data`` pairs the entered value with its domain."""

    action: str
    widget: str
    data: tuple[DataValue, DomainSpec] | None = None

    def __post_init__(self) -> None:
        if self.data is not None:
            value, domain = self.data
            if not conforms(value, domain):
                raise NonConformingValueError(
                    f"value {value!r} does not conform to its domain"
                )


@dataclass(frozen=True)
class FailureTrace:
    events: tuple[Event, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))


# ---------------------------------------------------------------------------
# JSON codec


def domain_to_json(domain: DomainSpec) -> dict[str, Any]:
    if isinstance(domain, NumericDomain):
        out: dict[str, Any] = {
            "kind": "numeric",
            "min": domain.min,
            "max": domain.max,
            "max_inclusive": domain.max_inclusive,
            "integer": domain.integer,
        }
        if domain.precision is not None:
            out["precision"] = domain.precision
        return out
    if isinstance(domain, CategoricalDomain):
        out = {"kind": "categorical", "categories": list(domain.categories)}
        if domain.hierarchy is not None:
            out["hierarchy"] = {name: list(m) for name, m in domain.hierarchy}
        return out
    if isinstance(domain, StringDomain):
        return {
            "kind": "string",
            "char_class": domain.char_class,
            "length_min": domain.length_min,
            "length_max": domain.length_max,
        }
    if isinstance(domain, TupleDomain):
        return {
            "kind": "tuple",
            "components": [domain_to_json(c) for c in domain.components],
        }
    raise DomainError(f"unknown domain {domain!r}")


def domain_from_json(raw: Any) -> DomainSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise TraceParseError(f"domain must be an object with a 'kind': {raw!r}")
    kind = raw["kind"]
    try:
        if kind == "numeric":
            return NumericDomain(
                min=raw["min"],
                max=raw["max"],
                max_inclusive=raw.get("max_inclusive", True),
                integer=raw.get("integer", False),
                precision=raw.get("precision"),
            )
        if kind == "categorical":
            return CategoricalDomain(
                categories=raw["categories"],
                hierarchy=raw.get("hierarchy"),
            )
        if kind == "string":
            return StringDomain(
                char_class=raw["char_class"],
                length_min=raw["length_min"],
                length_max=raw["length_max"],
            )
        if kind == "tuple":
            return TupleDomain(
                components=tuple(domain_from_json(c) for c in raw["components"])
            )
    except KeyError as exc:
        raise TraceParseError(f"domain is missing key {exc.args[0]!r}") from exc
    raise TraceParseError(f"unknown domain kind {kind!r}")


def value_to_json(value: DataValue) -> Any:
    if isinstance(value, Continuous):
        rendered = value.rendered()
        # Keep the exact float when the fixed-point literal would change it.
        if float(rendered) != value.value:
            rendered = repr(value.value)
        return rendered
    if isinstance(value, Categorical):
        return value.label
    if isinstance(value, Text):
        return value.value
    if isinstance(value, TupleValue):
        return [value_to_json(c) for c in value.components]
    raise DomainError(f"unknown value {value!r}")


def value_from_json(raw: Any, domain: DomainSpec) -> DataValue:
    if isinstance(domain, NumericDomain):
        if isinstance(raw, bool) or not isinstance(raw, (str, int, float)):
            raise TraceParseError(f"expected a numeric literal, got {raw!r}")
        try:
            if isinstance(raw, str):
                return Continuous(float(raw), literal_precision(raw))
            if isinstance(raw, int):
                return Continuous(float(raw), 0)
            return Continuous(raw, float_precision(raw))
        except (ValueError, ArithmeticError) as exc:
            raise TraceParseError(f"bad numeric literal {raw!r}") from exc
    if isinstance(domain, CategoricalDomain):
        if not isinstance(raw, str):
            raise TraceParseError(f"expected a category label, got {raw!r}")
        return Categorical(raw)
    if isinstance(domain, StringDomain):
        if not isinstance(raw, str):
            raise TraceParseError(f"expected a string, got {raw!r}")
        return Text(raw)
    if isinstance(domain, TupleDomain):
        if not isinstance(raw, list) or len(raw) != len(domain.components):
            raise TraceParseError(
                f"expected {len(domain.components)} tuple components, got {raw!r}"
            )
        return TupleValue(
            tuple(value_from_json(r, d) for r, d in zip(raw, domain.components))
        )
    raise DomainError(f"unknown domain {domain!r}")


def event_to_json(event: Event) -> dict[str, Any]:
    out: dict[str, Any] = {"action": event.action, "widget": event.widget}
    if event.data is not None:
        value, domain = event.data
        out["data"] = {
            "value": value_to_json(value),
            "domain": domain_to_json(domain),
        }
    return out


def event_from_json(raw: Any, index: int) -> Event:
    where = f"event {index}"
    if not isinstance(raw, dict):
        raise TraceParseError(f"{where}: expected an object, got {raw!r}")
    for key in ("action", "widget"):
        if not isinstance(raw.get(key), str):
            raise TraceParseError(f"{where}: missing or non-string {key!r}")
    data = raw.get("data")
    if data is None:
        return Event(action=raw["action"], widget=raw["widget"])
    if not isinstance(data, dict) or "value" not in data or "domain" not in data:
        raise TraceParseError(f"{where}: data needs 'value' and 'domain'")
    domain = domain_from_json(data["domain"])
    value = value_from_json(data["value"], domain)
    try:
        return Event(action=raw["action"], widget=raw["widget"], data=(value, domain))
    except NonConformingValueError as exc:
        raise NonConformingValueError(
            f"{where} (widget {raw['widget']!r}): {exc}"
        ) from exc


def parse_trace(text: str) -> FailureTrace:
    """Parse a trace from its JSON text.

    Raises TraceParseError for malformed input and NonConformingValueError
    when an event's value lies outside its declared domain.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("events"), list):
        raise TraceParseError("a trace is an object with an 'events' array")
    events = tuple(
        event_from_json(item, index) for index, item in enumerate(raw["events"])
    )
    return FailureTrace(events=events)


def serialize_trace(trace: FailureTrace) -> str:
    """Render a trace to canonical JSON text (stable across runs)."""
    payload = {"events": [event_to_json(e) for e in trace.events]}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
