"""CSV persistence and aligned-table rendering for harness results.

CSV files carry raw counts so they round-trip exactly; derived columns
(frequencies, attempts) are included for spreadsheet use but recomputed on
read.  Oracles that were never reproduced render as "-" in the attempts
columns.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

from .errors import ValidationError
from .harness import AggregateRow, TrialReport, VerificationResult

TRIAL_FIELDS = (
    "oracle",
    "technique",
    "label",
    "config",
    "trials",
    "successes",
    "reproduction_frequency",
    "attempts",
    "disclosures",
    "disclosure_frequency",
    "seed",
    "confidence",
)

AGGREGATE_FIELDS = (
    "technique",
    "label",
    "oracles",
    "mean_frequency",
    "mean_attempts",
    "max_attempts",
    "not_reproduced",
    "mean_disclosure",
)

VERIFICATION_FIELDS = (
    "oracle",
    "technique",
    "label",
    "config",
    "trials",
    "successes",
    "exact_probability",
    "lower",
    "upper",
    "verdict",
)

NOT_REPRODUCED = "-"


def format_percent(fraction: float) -> str:
    """Frequency as a percentage with four significant digits."""
    return f"{fraction * 100:.4g}%"


def format_disclosure(fraction: float) -> str:
    """Disclosure as a percentage with two fixed decimals."""
    return f"{fraction * 100:.2f}%"


def _attempts_cell(value: int | float | None, *, mean: bool = False) -> str:
    if value is None:
        return NOT_REPRODUCED
    return f"{value:.1f}" if mean else str(int(value))


# ---------------------------------------------------------------------------
# CSV writers and readers


def _write_csv(path: str | Path, header: Sequence[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def trials_to_csv(reports: Sequence[TrialReport], path: str | Path) -> None:
    rows = [
        [
            r.oracle,
            r.technique,
            r.label,
            r.config,
            r.trials,
            r.successes,
            repr(r.reproduction_frequency),
            NOT_REPRODUCED if r.attempts is None else r.attempts,
            r.disclosures,
            repr(r.disclosure_frequency),
            r.seed,
            repr(r.confidence),
        ]
        for r in reports
    ]
    _write_csv(path, TRIAL_FIELDS, rows)


def aggregate_to_csv(rows: Sequence[AggregateRow], path: str | Path) -> None:
    out = [
        [
            row.technique,
            row.label,
            row.oracles,
            repr(row.mean_frequency),
            NOT_REPRODUCED if row.mean_attempts is None else repr(row.mean_attempts),
            NOT_REPRODUCED if row.max_attempts is None else row.max_attempts,
            row.not_reproduced,
            repr(row.mean_disclosure),
        ]
        for row in rows
    ]
    _write_csv(path, AGGREGATE_FIELDS, out)


def verification_to_csv(
    results: Sequence[VerificationResult], path: str | Path
) -> None:
    rows = [
        [
            r.oracle,
            r.technique,
            r.label,
            r.config,
            r.trials,
            r.successes,
            repr(r.exact_probability),
            r.lower,
            r.upper,
            "PASS" if r.passed else "FAIL",
        ]
        for r in results
    ]
    _write_csv(path, VERIFICATION_FIELDS, rows)


def _read_csv(path: str | Path, expected: Sequence[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != tuple(expected):
            raise ValidationError(
                f"{path}: expected columns {', '.join(expected)}, "
                f"got {', '.join(reader.fieldnames or ())}"
            )
        return list(reader)


def trials_from_csv(path: str | Path) -> list[TrialReport]:
    reports = []
    for row in _read_csv(path, TRIAL_FIELDS):
        try:
            reports.append(
                TrialReport(
                    oracle=row["oracle"],
                    technique=row["technique"],
                    label=row["label"],
                    config=row["config"],
                    trials=int(row["trials"]),
                    successes=int(row["successes"]),
                    disclosures=int(row["disclosures"]),
                    seed=int(row["seed"]),
                    confidence=float(row["confidence"]),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"{path}: bad row {row!r}: {exc}") from exc
    return reports


def aggregate_from_csv(path: str | Path) -> list[AggregateRow]:
    rows = []
    for row in _read_csv(path, AGGREGATE_FIELDS):
        try:
            rows.append(
                AggregateRow(
                    technique=row["technique"],
                    label=row["label"],
                    oracles=int(row["oracles"]),
                    mean_frequency=float(row["mean_frequency"]),
                    mean_attempts=(
                        None
                        if row["mean_attempts"] == NOT_REPRODUCED
                        else float(row["mean_attempts"])
                    ),
                    max_attempts=(
                        None
                        if row["max_attempts"] == NOT_REPRODUCED
                        else int(row["max_attempts"])
                    ),
                    not_reproduced=int(row["not_reproduced"]),
                    mean_disclosure=float(row["mean_disclosure"]),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"{path}: bad row {row!r}: {exc}") from exc
    return rows


def verification_from_csv(path: str | Path) -> list[VerificationResult]:
    results = []
    for row in _read_csv(path, VERIFICATION_FIELDS):
        try:
            results.append(
                VerificationResult(
                    oracle=row["oracle"],
                    technique=row["technique"],
                    label=row["label"],
                    config=row["config"],
                    trials=int(row["trials"]),
                    successes=int(row["successes"]),
                    exact_probability=float(row["exact_probability"]),
                    lower=int(row["lower"]),
                    upper=int(row["upper"]),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"{path}: bad row {row!r}: {exc}") from exc
    return results


def sniff_csv(path: str | Path) -> str:
    """Which result kind a CSV holds: 'trials', 'aggregate' or 'verification'."""
    with open(path, newline="", encoding="utf-8") as handle:
        header = tuple(next(csv.reader(handle), ()))
    for kind, fields in (
        ("trials", TRIAL_FIELDS),
        ("aggregate", AGGREGATE_FIELDS),
        ("verification", VERIFICATION_FIELDS),
    ):
        if header == fields:
            return kind
    raise ValidationError(f"{path}: not a recognized results CSV")


# ---------------------------------------------------------------------------
# aligned tables


def render_table(
    headers: Sequence[str], rows: Sequence[Sequence[str]], aligns: str
) -> str:
    """Space-padded columns; aligns is one 'l'/'r' per column."""
    if len(aligns) != len(headers):
        raise ValueError("one alignment per column")
    table = [list(map(str, headers))] + [list(map(str, row)) for row in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    out = io.StringIO()
    for index, row in enumerate(table):
        cells = [
            cell.ljust(width) if align == "l" else cell.rjust(width)
            for cell, width, align in zip(row, widths, aligns)
        ]
        print("  ".join(cells).rstrip(), file=out)
        if index == 0:
            print("  ".join("-" * w for w in widths), file=out)
    return out.getvalue()


def trials_table(reports: Sequence[TrialReport]) -> str:
    headers = (
        "oracle",
        "technique",
        "label",
        "config",
        "trials",
        "frequency",
        "attempts",
        "disclosure",
    )
    rows = [
        (
            r.oracle,
            r.technique,
            r.label,
            r.config,
            str(r.trials),
            format_percent(r.reproduction_frequency),
            _attempts_cell(r.attempts),
            format_disclosure(r.disclosure_frequency),
        )
        for r in reports
    ]
    return render_table(headers, rows, "llllrrrr")


def aggregate_table(rows: Sequence[AggregateRow]) -> str:
    headers = (
        "technique",
        "label",
        "oracles",
        "mean_freq",
        "mean_attempts",
        "max_attempts",
        "not_reproduced",
        "mean_disclosure",
    )
    body = [
        (
            row.technique,
            row.label,
            str(row.oracles),
            format_percent(row.mean_frequency),
            _attempts_cell(row.mean_attempts, mean=True),
            _attempts_cell(row.max_attempts),
            str(row.not_reproduced),
            format_disclosure(row.mean_disclosure),
        )
        for row in rows
    ]
    return render_table(headers, body, "llrrrrrr")


def verification_table(results: Sequence[VerificationResult]) -> str:
    headers = (
        "oracle",
        "technique",
        "label",
        "config",
        "exact",
        "trials",
        "successes",
        "region",
        "verdict",
    )
    rows = [
        (
            r.oracle,
            r.technique,
            r.label,
            r.config,
            f"{r.exact_probability:.6g}",
            str(r.trials),
            str(r.successes),
            f"[{r.lower}, {r.upper}]",
            "PASS" if r.passed else "FAIL",
        )
        for r in results
    ]
    return render_table(headers, rows, "llllrrrrl")
