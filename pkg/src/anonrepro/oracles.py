"""Bug oracles: predicates over named input fields.

A BugOracle states, for a set of named fields with domains, the condition
under which an input triggers a failure.  Predicates are small expression
trees built from a fixed vocabulary of primitives (value comparisons, string
probes, a leap-day test, ...) combined with and/or/not, and they serialize
to JSON so oracles can live in data files.

``evaluate`` applies an oracle to an assignment of field values.
``exhaustive_probability`` computes the exact trigger probability under a
per-field regeneration distribution; ``technique_distribution`` derives that
distribution for technique configurations whose output space is finite and
small enough to enumerate (integer and categorical domains generally;
strings only when short over a small alphabet).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Union

from .errors import (
    EnumerationInfeasibleError,
    EvaluationError,
    OracleError,
    UnsupportedTechniqueError,
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
    conforms,
    domain_from_json,
    domain_to_json,
    expand_char_class,
)
from .techniques import (
    CategoryGroup,
    GlobalRecodingConfig,
    IntervalGroup,
    LengthPolicy,
    LocalSuppressionConfig,
    NoiseAdditionConfig,
    RoundingConfig,
    SCDLocalSuppressionConfig,
    TechniqueConfig,
    global_recoding_anonymize,
    integer_bounds,
    noise_interval,
    rounding_anonymize,
)

#: Hard cap on how many joint outcomes exact enumeration may visit.
ENUMERATION_LIMIT = 10_000_000
#: String supports enumerate only up to this length ...
STRING_ENUM_MAX_LENGTH = 4
#: ... and only over alphabets up to this size.
STRING_ENUM_MAX_ALPHABET = 16


# ---------------------------------------------------------------------------
# predicate expressions


@dataclass(frozen=True)
class Equals:
    field: str
    value: float | str


@dataclass(frozen=True)
class InRange:
    """lo <= field <= hi, both ends inclusive."""

    field: str
    lo: float
    hi: float


@dataclass(frozen=True)
class Contains:
    field: str
    substring: str


@dataclass(frozen=True)
class MatchesClass:
    """Every character of the field lies in the character class."""

    field: str
    char_class: str


@dataclass(frozen=True)
class EndsWith:
    field: str
    suffix: str


@dataclass(frozen=True)
class CharAt:
    """The character at ``index`` (negative counts from the end) equals
    ``char``; out-of-range indexes make the predicate false."""

    field: str
    index: int
    char: str


@dataclass(frozen=True)
class IsLeapDay:
    """day == 29, month == 2, and the Gregorian leap rule holds for year."""

    day: str
    month: str
    year: str


@dataclass(frozen=True)
class DecimalSeparatorIs:
    """The field is a decimal literal using ``separator``.

    For strings: exactly one occurrence of the separator, every other
    character a digit, at least one digit.  For numeric values: true iff the
    separator is "." and the value renders with fraction digits.
    """

    field: str
    separator: str


@dataclass(frozen=True)
class LengthGt:
    field: str
    length: int


@dataclass(frozen=True)
class And:
    args: tuple["OracleExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or:
    args: tuple["OracleExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not:
    arg: "OracleExpr"


OracleExpr = Union[
    Equals,
    InRange,
    Contains,
    MatchesClass,
    EndsWith,
    CharAt,
    IsLeapDay,
    DecimalSeparatorIs,
    LengthGt,
    And,
    Or,
    Not,
]


def _text(value: DataValue, field: str) -> str:
    if isinstance(value, Text):
        return value.value
    if isinstance(value, Categorical):
        return value.label
    raise EvaluationError(f"field {field!r} is not string-valued")


def _number(value: DataValue, field: str) -> float:
    if isinstance(value, Continuous):
        return value.value
    raise EvaluationError(f"field {field!r} is not numeric")


def is_gregorian_leap_year(year: int) -> bool:
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


def _is_decimal_literal(text: str, separator: str) -> bool:
    if text.count(separator) != 1:
        return False
    rest = text.replace(separator, "", 1)
    return len(rest) > 0 and all(c.isdigit() and c.isascii() for c in rest)


def evaluate_expr(expr: OracleExpr, assignment: Mapping[str, DataValue]) -> bool:
    """Evaluate a predicate node against field values."""
    if isinstance(expr, And):
        return all(evaluate_expr(a, assignment) for a in expr.args)
    if isinstance(expr, Or):
        return any(evaluate_expr(a, assignment) for a in expr.args)
    if isinstance(expr, Not):
        return not evaluate_expr(expr.arg, assignment)
    if isinstance(expr, IsLeapDay):
        day = _number(_lookup(assignment, expr.day), expr.day)
        month = _number(_lookup(assignment, expr.month), expr.month)
        year = _number(_lookup(assignment, expr.year), expr.year)
        return day == 29 and month == 2 and is_gregorian_leap_year(int(year))
    value = _lookup(assignment, expr.field)
    if isinstance(expr, Equals):
        if isinstance(expr.value, str):
            return _text(value, expr.field) == expr.value
        return _number(value, expr.field) == float(expr.value)
    if isinstance(expr, InRange):
        return expr.lo <= _number(value, expr.field) <= expr.hi
    if isinstance(expr, Contains):
        return expr.substring in _text(value, expr.field)
    if isinstance(expr, MatchesClass):
        allowed = set(expand_char_class(expr.char_class))
        return all(c in allowed for c in _text(value, expr.field))
    if isinstance(expr, EndsWith):
        return _text(value, expr.field).endswith(expr.suffix)
    if isinstance(expr, CharAt):
        text = _text(value, expr.field)
        if not -len(text) <= expr.index < len(text):
            return False
        return text[expr.index] == expr.char
    if isinstance(expr, DecimalSeparatorIs):
        if isinstance(value, Continuous):
            return expr.separator == "." and value.precision > 0
        return _is_decimal_literal(_text(value, expr.field), expr.separator)
    if isinstance(expr, LengthGt):
        return len(_text(value, expr.field)) > expr.length
    raise EvaluationError(f"unknown predicate node {expr!r}")


def _lookup(assignment: Mapping[str, DataValue], field: str) -> DataValue:
    try:
        return assignment[field]
    except KeyError:
        raise EvaluationError(f"assignment is missing oracle field {field!r}") from None


# ---------------------------------------------------------------------------
# oracles


@dataclass(frozen=True)
class BugOracle:
    """Named fields plus the predicate that makes an input failure-inducing."""

    name: str
    fields: tuple[tuple[str, DomainSpec], ...]
    predicate: OracleExpr
    description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "fields", tuple(self.fields))
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise OracleError(f"oracle {self.name!r} repeats a field name")
        _check_expr(self.predicate, dict(self.fields), self.name)

    @property
    def field_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.fields)

    def domain_of(self, field: str) -> DomainSpec:
        for name, domain in self.fields:
            if name == field:
                return domain
        raise OracleError(f"oracle {self.name!r} has no field {field!r}")


def _check_expr(
    expr: OracleExpr, domains: Mapping[str, DomainSpec], oracle: str
) -> None:
    """Static type check: every primitive must fit its field's domain."""

    def fail(msg: str) -> OracleError:
        return OracleError(f"oracle {oracle!r}: {msg}")

    def domain_for(field: str) -> DomainSpec:
        if field not in domains:
            raise fail(f"predicate references unknown field {field!r}")
        return domains[field]

    def expect_string(field: str) -> None:
        if not isinstance(domain_for(field), (StringDomain, CategoricalDomain)):
            raise fail(f"field {field!r} must be string-valued")

    def expect_numeric(field: str) -> None:
        if not isinstance(domain_for(field), NumericDomain):
            raise fail(f"field {field!r} must be numeric")

    if isinstance(expr, (And, Or)):
        if not expr.args:
            raise fail("and/or needs at least one argument")
        for arg in expr.args:
            _check_expr(arg, domains, oracle)
    elif isinstance(expr, Not):
        _check_expr(expr.arg, domains, oracle)
    elif isinstance(expr, Equals):
        if isinstance(expr.value, str):
            expect_string(expr.field)
        else:
            expect_numeric(expr.field)
    elif isinstance(expr, InRange):
        expect_numeric(expr.field)
        if expr.lo > expr.hi:
            raise fail(f"empty range [{expr.lo}, {expr.hi}]")
    elif isinstance(expr, (Contains, MatchesClass, EndsWith, CharAt, LengthGt)):
        expect_string(expr.field)
        if isinstance(expr, MatchesClass):
            expand_char_class(expr.char_class)
        if isinstance(expr, CharAt) and len(expr.char) != 1:
            raise fail("char_at compares a single character")
        if isinstance(expr, EndsWith) and not expr.suffix:
            raise fail("ends_with needs a non-empty suffix")
    elif isinstance(expr, IsLeapDay):
        for field in (expr.day, expr.month, expr.year):
            domain = domain_for(field)
            if not (isinstance(domain, NumericDomain) and domain.integer):
                raise fail(f"leap-day component {field!r} must be an integer field")
    elif isinstance(expr, DecimalSeparatorIs):
        if len(expr.separator) != 1:
            raise fail("decimal separator is a single character")
        domain = domain_for(expr.field)
        if not isinstance(domain, (StringDomain, NumericDomain)):
            raise fail(f"field {expr.field!r} must be string or numeric")
    else:
        raise fail(f"unknown predicate node {expr!r}")


def evaluate(oracle: BugOracle, assignment: Mapping[str, DataValue]) -> bool:
    """Whether ``assignment`` triggers the oracle.

    Every oracle field must be present and conforming, otherwise an
    EvaluationError names the offending field.
    """
    for name, domain in oracle.fields:
        value = _lookup(assignment, name)
        if not conforms(value, domain):
            raise EvaluationError(
                f"field {name!r} value {value!r} does not conform to its domain"
            )
    return evaluate_expr(oracle.predicate, assignment)


# ---------------------------------------------------------------------------
# exact enumeration


@dataclass(frozen=True)
class FiniteDistribution:
    """A finite support with outcome probabilities (sums to 1)."""

    outcomes: tuple[tuple[DataValue, float], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        total = math.fsum(p for _, p in self.outcomes)
        if not self.outcomes or abs(total - 1.0) > 1e-9:
            raise OracleError(f"outcome probabilities sum to {total}, not 1")


def _uniform(values: Iterable[DataValue]) -> FiniteDistribution:
    vals = list(values)
    p = 1.0 / len(vals)
    return FiniteDistribution(tuple((v, p) for v in vals))


def _integer_range_values(lo: int, hi: int) -> list[DataValue]:
    return [Continuous(float(i), 0) for i in range(lo, hi + 1)]


def _string_support(
    domain: StringDomain, lengths: list[int]
) -> FiniteDistribution:
    alphabet = domain.alphabet
    if len(alphabet) > STRING_ENUM_MAX_ALPHABET:
        raise EnumerationInfeasibleError(
            f"alphabet of {len(alphabet)} characters is too large to enumerate"
        )
    if max(lengths) > STRING_ENUM_MAX_LENGTH:
        raise EnumerationInfeasibleError(
            f"strings of length {max(lengths)} are too long to enumerate"
        )
    outcomes: list[tuple[DataValue, float]] = []
    length_weight = 1.0 / len(lengths)
    for length in lengths:
        string_weight = length_weight / len(alphabet) ** length
        for chars in itertools.product(alphabet, repeat=length):
            outcomes.append((Text("".join(chars)), string_weight))
    return FiniteDistribution(tuple(outcomes))


def _noise_int_distribution(
    value: float, domain: NumericDomain, noise: float
) -> FiniteDistribution:
    lo, hi = noise_interval(value, domain, noise)
    width = hi - lo
    lo_d, hi_d = integer_bounds(domain.min, domain.max, domain.max_inclusive)
    masses: dict[int, float] = defaultdict(float)
    # round half-up maps x to j iff x is in [j - 0.5, j + 0.5)
    for j in range(math.floor(lo + 0.5), math.floor(hi + 0.5) + 1):
        overlap = min(hi, j + 0.5) - max(lo, j - 0.5)
        if overlap > 0:
            masses[min(max(j, lo_d), hi_d)] += overlap / width
    total = math.fsum(masses.values())
    return FiniteDistribution(
        tuple(
            (Continuous(float(j), 0), p / total) for j, p in sorted(masses.items())
        )
    )


def technique_distribution(
    cfg: TechniqueConfig, value: DataValue, domain: DomainSpec
) -> FiniteDistribution:
    """Exact distribution of anonymize-then-regenerate for one field.

    Raises EnumerationInfeasibleError when the output space is continuous or
    too large (real-valued domains, long strings, special-character
    placement).
    """
    if isinstance(cfg, RoundingConfig):
        record = rounding_anonymize(value, domain, cfg)
        return FiniteDistribution(((record.value, 1.0),))  # type: ignore[union-attr]
    if isinstance(domain, NumericDomain) and not domain.integer:
        raise EnumerationInfeasibleError(
            "real-valued domains have no finite enumeration"
        )
    if isinstance(cfg, LocalSuppressionConfig):
        if isinstance(domain, NumericDomain):
            lo, hi = integer_bounds(domain.min, domain.max, domain.max_inclusive)
            return _uniform(_integer_range_values(lo, hi))
        if isinstance(domain, CategoricalDomain):
            return _uniform(Categorical(c) for c in domain.categories)
        if isinstance(domain, StringDomain):
            if cfg.length_policy is LengthPolicy.PRESERVE_ORIGINAL:
                lengths = [len(value.value)]  # type: ignore[union-attr]
            else:
                lengths = list(range(domain.length_min, domain.length_max + 1))
            return _string_support(domain, lengths)
    if isinstance(cfg, GlobalRecodingConfig):
        record = global_recoding_anonymize(value, domain, cfg)
        if isinstance(record, IntervalGroup):
            lo, hi = integer_bounds(record.lo, record.hi, record.hi_inclusive)
            return _uniform(_integer_range_values(lo, hi))
        if isinstance(record, CategoryGroup):
            members = record.domain.group_members(record.group_label)
            return _uniform(Categorical(m) for m in members)
    if isinstance(cfg, NoiseAdditionConfig):
        if isinstance(domain, NumericDomain):
            return _noise_int_distribution(value.value, domain, cfg.noise)  # type: ignore[union-attr]
        raise UnsupportedTechniqueError(
            "noise addition applies to numeric values only"
        )
    if isinstance(cfg, SCDLocalSuppressionConfig):
        raise EnumerationInfeasibleError(
            "special-character placement is not enumerated"
        )
    raise EnumerationInfeasibleError(
        f"no enumeration for {type(cfg).__name__} over {type(domain).__name__}"
    )


def exhaustive_probability(
    oracle: BugOracle, distributions: Mapping[str, FiniteDistribution]
) -> float:
    """Exact trigger probability of the oracle under per-field distributions.

    Every oracle field needs a distribution; the joint support must stay
    within ENUMERATION_LIMIT points.
    """
    supports: list[tuple[tuple[DataValue, float], ...]] = []
    for name, _ in oracle.fields:
        if name not in distributions:
            raise EvaluationError(f"no distribution for oracle field {name!r}")
        supports.append(distributions[name].outcomes)
    size = math.prod(len(s) for s in supports)
    if size > ENUMERATION_LIMIT:
        raise EnumerationInfeasibleError(
            f"joint support of {size} points exceeds the {ENUMERATION_LIMIT} cap"
        )
    names = oracle.field_names
    predicate = oracle.predicate
    assignment: dict[str, DataValue] = {}
    total = 0.0
    for combo in itertools.product(*supports):
        probability = 1.0
        for name, (value, p) in zip(names, combo):
            assignment[name] = value
            probability *= p
        if evaluate_expr(predicate, assignment):
            total += probability
    return total


# ---------------------------------------------------------------------------
# JSON codec


_SIMPLE_OPS: dict[str, tuple[type, tuple[str, ...]]] = {
    "equals": (Equals, ("field", "value")),
    "in_range": (InRange, ("field", "lo", "hi")),
    "contains": (Contains, ("field", "substring")),
    "matches_class": (MatchesClass, ("field", "char_class")),
    "ends_with": (EndsWith, ("field", "suffix")),
    "char_at": (CharAt, ("field", "index", "char")),
    "is_leap_day": (IsLeapDay, ("day", "month", "year")),
    "decimal_separator_is": (DecimalSeparatorIs, ("field", "separator")),
    "length_gt": (LengthGt, ("field", "length")),
}

_OP_NAMES = {cls: name for name, (cls, _) in _SIMPLE_OPS.items()}


def expr_to_json(expr: OracleExpr) -> dict[str, Any]:
    if isinstance(expr, And):
        return {"op": "and", "args": [expr_to_json(a) for a in expr.args]}
    if isinstance(expr, Or):
        return {"op": "or", "args": [expr_to_json(a) for a in expr.args]}
    if isinstance(expr, Not):
        return {"op": "not", "arg": expr_to_json(expr.arg)}
    name = _OP_NAMES[type(expr)]
    _, keys = _SIMPLE_OPS[name]
    out: dict[str, Any] = {"op": name}
    for key in keys:
        out[key] = getattr(expr, key)
    return out


def expr_from_json(raw: Any) -> OracleExpr:
    if not isinstance(raw, dict) or "op" not in raw:
        raise OracleError(f"a predicate node is an object with an 'op': {raw!r}")
    op = raw["op"]
    try:
        if op == "and":
            return And(tuple(expr_from_json(a) for a in raw["args"]))
        if op == "or":
            return Or(tuple(expr_from_json(a) for a in raw["args"]))
        if op == "not":
            return Not(expr_from_json(raw["arg"]))
        if op in _SIMPLE_OPS:
            cls, keys = _SIMPLE_OPS[op]
            return cls(**{k: raw[k] for k in keys})
    except KeyError as exc:
        raise OracleError(f"predicate op {op!r} is missing {exc.args[0]!r}") from exc
    raise OracleError(f"unknown predicate op {op!r}")


def oracle_to_json(oracle: BugOracle) -> dict[str, Any]:
    return {
        "name": oracle.name,
        "description": oracle.description,
        "fields": {name: domain_to_json(d) for name, d in oracle.fields},
        "predicate": expr_to_json(oracle.predicate),
    }


def oracle_from_json(raw: Any) -> BugOracle:
    if not isinstance(raw, dict):
        raise OracleError(f"an oracle is a JSON object, got {raw!r}")
    try:
        fields = tuple(
            (name, domain_from_json(d)) for name, d in raw["fields"].items()
        )
        return BugOracle(
            name=raw["name"],
            fields=fields,
            predicate=expr_from_json(raw["predicate"]),
            description=raw.get("description", ""),
        )
    except KeyError as exc:
        raise OracleError(f"oracle is missing key {exc.args[0]!r}") from exc
