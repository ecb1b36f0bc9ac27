"""Monte-Carlo measurement of reproduction and disclosure frequencies.

A trial anonymizes each oracle field of the original failure-inducing
assignment, regenerates a concrete value from each record, and asks the
bug oracle whether the regenerated assignment still triggers the failure.
Every trial draws from its own random substream keyed by (seed, trial,
field index), so results do not depend on execution order and a parallel
run reproduces a serial one bit for bit.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from scipy.stats import binom

from .corpus import CorpusEntry
from .errors import ConfigError, InvalidBaselineError
from .model import DataValue, values_equal
from .oracles import (
    BugOracle,
    evaluate,
    exhaustive_probability,
    technique_distribution,
)
from .rng import substream
from .techniques import (
    GlobalRecodingConfig,
    LocalSuppressionConfig,
    NoiseAdditionConfig,
    RoundingConfig,
    SCDLocalSuppressionConfig,
    TechniqueConfig,
    anonymize,
    regenerate,
    technique_name,
)

DEFAULT_CONFIDENCE = 0.95

ConfigLike = TechniqueConfig | Mapping[str, TechniqueConfig]


def attempts_for_confidence(
    probability: float, confidence: float = DEFAULT_CONFIDENCE
) -> int | None:
    """Smallest n with 1 - (1-p)^n >= confidence; None when p == 0.

    A bug seen in a fraction p of trials needs this many reproduction
    attempts before at least one is expected to succeed with the given
    confidence.
    """
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {probability!r}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence!r}")
    if probability == 0.0:
        return None
    if probability == 1.0:
        return 1
    n = math.ceil(math.log(1.0 - confidence) / math.log(1.0 - probability))
    # ceil can overshoot by one when the ratio lands on an integer and
    # floating point pushes it just above; step back while n-1 still works.
    while n > 1 and (1.0 - probability) ** (n - 1) <= 1.0 - confidence:
        n -= 1
    return n


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one oracle x configuration Monte-Carlo run."""

    oracle: str
    technique: str
    label: str
    config: str
    trials: int
    successes: int
    disclosures: int
    seed: int
    confidence: float = DEFAULT_CONFIDENCE

    @property
    def reproduction_frequency(self) -> float:
        return self.successes / self.trials

    @property
    def disclosure_frequency(self) -> float:
        return self.disclosures / self.trials

    @property
    def attempts(self) -> int | None:
        """Attempts needed for the report's confidence; None if never seen."""
        return attempts_for_confidence(self.reproduction_frequency, self.confidence)


def _summarize(cfg: TechniqueConfig) -> str:
    if isinstance(cfg, GlobalRecodingConfig):
        return "hierarchy" if cfg.partitions is None else f"partitions={cfg.partitions}"
    if isinstance(cfg, RoundingConfig):
        return f"partitions={cfg.partitions}"
    if isinstance(cfg, (LocalSuppressionConfig, SCDLocalSuppressionConfig)):
        return f"length={cfg.length_policy.value}"
    if isinstance(cfg, NoiseAdditionConfig):
        return f"noise={cfg.noise:g}"
    raise ConfigError(f"unknown technique configuration {cfg!r}")


def resolve_configs(
    oracle: BugOracle, config: ConfigLike
) -> tuple[TechniqueConfig, ...]:
    """Expand a single config or a field->config mapping into field order."""
    if isinstance(config, Mapping):
        missing = [n for n in oracle.field_names if n not in config]
        if missing:
            raise ConfigError(
                f"no technique configured for field(s) {', '.join(missing)}"
            )
        extra = [n for n in config if n not in oracle.field_names]
        if extra:
            raise ConfigError(
                f"configured field(s) {', '.join(extra)} not in oracle "
                f"{oracle.name!r}"
            )
        return tuple(config[n] for n in oracle.field_names)
    return tuple(config for _ in oracle.field_names)


def _describe(
    oracle: BugOracle, per_field: Sequence[TechniqueConfig]
) -> tuple[str, str, str]:
    """(technique, label, config summary) columns for a per-field setup."""
    names: list[str] = []
    for cfg in per_field:
        name = technique_name(cfg)
        if name not in names:
            names.append(name)
    labels: list[str] = []
    for cfg in per_field:
        if cfg.label is not None and cfg.label not in labels:
            labels.append(cfg.label)
    if len(set(map(_summarize, per_field))) == 1 and len(names) == 1:
        summary = _summarize(per_field[0])
    else:
        summary = "; ".join(
            f"{field}: {technique_name(cfg)} {_summarize(cfg)}"
            for field, cfg in zip(oracle.field_names, per_field)
        )
    return "+".join(names), "+".join(labels), summary


def _run_chunk(
    oracle: BugOracle,
    originals: tuple[DataValue, ...],
    per_field: tuple[TechniqueConfig, ...],
    seed: int,
    start: int,
    stop: int,
) -> tuple[int, int]:
    """Successes and disclosures over trials [start, stop)."""
    successes = 0
    disclosures = 0
    fields = oracle.fields
    for trial in range(start, stop):
        assignment: dict[str, DataValue] = {}
        disclosed = True
        for index, (name, domain) in enumerate(fields):
            rng = substream(seed, trial, index)
            record = anonymize(originals[index], domain, per_field[index], rng)
            value = regenerate(record, rng)
            assignment[name] = value
            if disclosed and not values_equal(originals[index], value):
                disclosed = False
        if evaluate(oracle, assignment):
            successes += 1
        if disclosed:
            disclosures += 1
    return successes, disclosures


def run_trials(
    oracle: BugOracle,
    original: Mapping[str, DataValue],
    config: ConfigLike,
    *,
    trials: int = 100,
    seed: int = 0,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int = 1,
) -> TrialReport:
    """Monte-Carlo run of one oracle under one technique setup.

    The original assignment must itself trigger the oracle; anything else
    would measure reproduction of a non-failure.
    """
    if trials < 1:
        raise ConfigError(f"trials must be positive, got {trials}")
    if workers < 1:
        raise ConfigError(f"workers must be positive, got {workers}")
    if not evaluate(oracle, original):
        raise InvalidBaselineError(
            f"original assignment does not trigger oracle {oracle.name!r}"
        )
    per_field = resolve_configs(oracle, config)
    originals = tuple(original[name] for name in oracle.field_names)
    if workers == 1 or trials < 2 * workers:
        successes, disclosures = _run_chunk(
            oracle, originals, per_field, seed, 0, trials
        )
    else:
        # Totals are order-independent sums, so any chunking reproduces
        # the serial run exactly.
        bounds = [round(trials * i / workers) for i in range(workers + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    _run_chunk,
                    [oracle] * workers,
                    [originals] * workers,
                    [per_field] * workers,
                    [seed] * workers,
                    bounds[:-1],
                    bounds[1:],
                )
            )
        successes = sum(s for s, _ in parts)
        disclosures = sum(d for _, d in parts)
    technique, label, summary = _describe(oracle, per_field)
    return TrialReport(
        oracle=oracle.name,
        technique=technique,
        label=label,
        config=summary,
        trials=trials,
        successes=successes,
        disclosures=disclosures,
        seed=seed,
        confidence=confidence,
    )


def run_entry(
    entry: CorpusEntry,
    configs: Sequence[ConfigLike] | None = None,
    *,
    trials: int = 100,
    seed: int = 0,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int = 1,
) -> list[TrialReport]:
    """Run one corpus entry under each configuration (its own by default)."""
    selected: Sequence[ConfigLike] = entry.configs if configs is None else configs
    return [
        run_trials(
            entry.oracle,
            entry.original_assignment,
            cfg,
            trials=trials,
            seed=seed,
            confidence=confidence,
            workers=workers,
        )
        for cfg in selected
    ]


@dataclass(frozen=True)
class AggregateRow:
    """Per technique x label summary across oracles."""

    technique: str
    label: str
    oracles: int
    mean_frequency: float
    mean_attempts: float | None
    max_attempts: int | None
    not_reproduced: int
    mean_disclosure: float


def aggregate(reports: Sequence[TrialReport]) -> list[AggregateRow]:
    """Group reports by (technique, label), in first-seen order.

    Attempts averages skip oracles that were never reproduced; those are
    counted separately.
    """
    groups: dict[tuple[str, str], list[TrialReport]] = {}
    for report in reports:
        groups.setdefault((report.technique, report.label), []).append(report)
    rows: list[AggregateRow] = []
    for (technique, label), members in groups.items():
        attempts = [r.attempts for r in members]
        defined = [a for a in attempts if a is not None]
        rows.append(
            AggregateRow(
                technique=technique,
                label=label,
                oracles=len(members),
                mean_frequency=math.fsum(r.reproduction_frequency for r in members)
                / len(members),
                mean_attempts=math.fsum(defined) / len(defined) if defined else None,
                max_attempts=max(defined) if defined else None,
                not_reproduced=attempts.count(None),
                mean_disclosure=math.fsum(r.disclosure_frequency for r in members)
                / len(members),
            )
        )
    return rows


@dataclass(frozen=True)
class VerificationResult:
    """Monte-Carlo successes checked against the exact trigger probability."""

    oracle: str
    technique: str
    label: str
    config: str
    trials: int
    successes: int
    exact_probability: float
    lower: int
    upper: int

    @property
    def passed(self) -> bool:
        return self.lower <= self.successes <= self.upper


def acceptance_region(trials: int, probability: float) -> tuple[int, int]:
    """Central 99% acceptance region for Binomial(trials, probability)."""
    lower = int(binom.ppf(0.005, trials, probability))
    upper = int(binom.ppf(0.995, trials, probability))
    return lower, upper


def verify_against_bruteforce(
    oracle: BugOracle,
    original: Mapping[str, DataValue],
    config: ConfigLike,
    *,
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> VerificationResult:
    """Cross-check a Monte-Carlo run against exhaustive enumeration.

    The exact trigger probability comes from enumerating every joint
    outcome of the per-field anonymize/regenerate distributions; the run
    passes when its success count falls inside the central 99% binomial
    acceptance region around that probability.  Raises
    EnumerationInfeasibleError when any field cannot be enumerated.
    """
    per_field = resolve_configs(oracle, config)
    distributions = {
        name: technique_distribution(cfg, original[name], domain)
        for (name, domain), cfg in zip(oracle.fields, per_field)
    }
    exact = exhaustive_probability(oracle, distributions)
    report = run_trials(
        oracle, original, config, trials=trials, seed=seed, workers=workers
    )
    lower, upper = acceptance_region(trials, exact)
    return VerificationResult(
        oracle=oracle.name,
        technique=report.technique,
        label=report.label,
        config=report.config,
        trials=trials,
        successes=report.successes,
        exact_probability=exact,
        lower=lower,
        upper=upper,
    )
