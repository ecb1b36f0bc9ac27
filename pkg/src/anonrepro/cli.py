"""Command line interface.

Subcommands:

* ``anonymize``   apply techniques to a failure trace
* ``regenerate``  draw concrete values from an anonymized trace
* ``simulate``    Monte-Carlo runs over bug oracles, with optional
                  verification against exhaustive enumeration
* ``report``      re-render a results CSV as an aligned table

Exit codes: 0 success, 1 invalid input, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import corpus, report as report_mod
from .errors import (
    AnonReproError,
    ConfigError,
    EnumerationInfeasibleError,
    TraceParseError,
    ValidationError,
)
from .harness import (
    DEFAULT_CONFIDENCE,
    TrialReport,
    VerificationResult,
    aggregate,
    run_trials,
    verify_against_bruteforce,
)
from .model import Event, FailureTrace, parse_trace, serialize_trace
from .rng import substream
from .techniques import (
    TechniqueConfig,
    anonymize,
    config_from_json,
    record_domain,
    record_from_json,
    record_to_json,
    regenerate,
)

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 100
VERIFY_MIN_TRIALS = 100_000


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _read_json(path: str) -> Any:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# anonymize / regenerate


def _widget_configs(raw: Any) -> tuple[TechniqueConfig | None, dict[str, TechniqueConfig]]:
    """A config file is one technique object or {"widgets": {name: object}}."""
    if isinstance(raw, dict) and "widgets" in raw:
        if not isinstance(raw["widgets"], dict):
            raise ConfigError("'widgets' must map widget names to technique configs")
        return None, {
            name: config_from_json(cfg) for name, cfg in raw["widgets"].items()
        }
    return config_from_json(raw), {}


def cmd_anonymize(args: argparse.Namespace) -> int:
    trace = parse_trace(_read_text(args.trace))
    default, per_widget = _widget_configs(_read_json(args.config))
    events_out: list[dict[str, Any]] = []
    for index, event in enumerate(trace.events):
        item: dict[str, Any] = {"action": event.action, "widget": event.widget}
        if event.data is not None:
            cfg = per_widget.get(event.widget, default)
            if cfg is None:
                raise ConfigError(
                    f"no technique configured for widget {event.widget!r}"
                )
            value, domain = event.data
            record = anonymize(value, domain, cfg, substream(args.seed, index))
            item["record"] = record_to_json(record)
        events_out.append(item)
    _write_text(
        Path(args.out),
        json.dumps({"events": events_out}, indent=2, ensure_ascii=False) + "\n",
    )
    print(f"anonymized {len(trace.events)} event(s) -> {args.out}")
    return 0


def cmd_regenerate(args: argparse.Namespace) -> int:
    raw = _read_json(args.trace)
    if not isinstance(raw, dict) or not isinstance(raw.get("events"), list):
        raise TraceParseError("a trace is an object with an 'events' array")
    events: list[Event] = []
    for index, item in enumerate(raw["events"]):
        if not isinstance(item, dict):
            raise TraceParseError(f"event {index}: expected an object")
        if "data" in item:
            raise ValidationError(
                f"event {index} holds a raw value; regenerate expects an "
                "anonymized trace (run 'anonymize' first)"
            )
        for key in ("action", "widget"):
            if not isinstance(item.get(key), str):
                raise TraceParseError(f"event {index}: missing or non-string {key!r}")
        if "record" not in item:
            events.append(Event(action=item["action"], widget=item["widget"]))
            continue
        record = record_from_json(item["record"])
        value = regenerate(record, substream(args.seed, index))
        events.append(
            Event(
                action=item["action"],
                widget=item["widget"],
                data=(value, record_domain(record)),
            )
        )
    _write_text(Path(args.out), serialize_trace(FailureTrace(tuple(events))))
    print(f"regenerated {len(events)} event(s) -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# simulate / report


def _parse_technique_item(item: Any) -> TechniqueConfig | dict[str, TechniqueConfig]:
    if isinstance(item, dict) and "per_field" in item:
        if not isinstance(item["per_field"], dict):
            raise ConfigError("'per_field' must map field names to technique configs")
        return {
            field: config_from_json(cfg) for field, cfg in item["per_field"].items()
        }
    return config_from_json(item)


def _load_run_config(args: argparse.Namespace) -> dict[str, Any]:
    raw = _read_json(args.config) if args.config else {}
    if not isinstance(raw, dict):
        raise ConfigError("a run config is a JSON object")
    known = {
        "oracles",
        "techniques",
        "trials",
        "seed",
        "confidence",
        "workers",
        "format",
        "verify",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(
            f"unknown run config key(s): {', '.join(sorted(unknown))}"
        )
    merged = {
        "oracles": raw.get("oracles"),
        "techniques": raw.get("techniques"),
        "trials": args.trials if args.trials is not None else raw.get("trials", DEFAULT_TRIALS),
        "seed": args.seed if args.seed is not None else raw.get("seed", 0),
        "confidence": (
            args.confidence
            if args.confidence is not None
            else raw.get("confidence", DEFAULT_CONFIDENCE)
        ),
        "workers": args.workers if args.workers is not None else raw.get("workers", 1),
        "format": args.format if args.format is not None else raw.get("format", "csv"),
        "verify": args.verify or bool(raw.get("verify", False)),
    }
    if merged["format"] not in ("csv", "table", "both"):
        raise ConfigError(f"format must be csv, table or both, got {merged['format']!r}")
    if not isinstance(merged["trials"], int) or merged["trials"] < 1:
        raise ConfigError(f"trials must be a positive integer, got {merged['trials']!r}")
    if not isinstance(merged["seed"], int):
        raise ConfigError(f"seed must be an integer, got {merged['seed']!r}")
    if not isinstance(merged["workers"], int) or merged["workers"] < 1:
        raise ConfigError(f"workers must be a positive integer, got {merged['workers']!r}")
    return merged


def _run_simulation(
    cfg: Mapping[str, Any]
) -> tuple[list[TrialReport], list[VerificationResult], int]:
    names = cfg["oracles"] or corpus.available()
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ConfigError("'oracles' must be a list of corpus names or paths")
    raw_techniques = cfg["techniques"] or []
    if not isinstance(raw_techniques, list):
        raise ConfigError("'techniques' must be a list of technique configs")
    shared = [_parse_technique_item(item) for item in raw_techniques]

    reports: list[TrialReport] = []
    verifications: list[VerificationResult] = []
    skipped = 0
    for name in names:
        entry = corpus.load(name)
        configs: Sequence[Any] = shared if shared else entry.configs
        for technique_cfg in configs:
            trial = run_trials(
                entry.oracle,
                entry.original_assignment,
                technique_cfg,
                trials=cfg["trials"],
                seed=cfg["seed"],
                confidence=cfg["confidence"],
                workers=cfg["workers"],
            )
            reports.append(trial)
            if cfg["verify"]:
                try:
                    verifications.append(
                        verify_against_bruteforce(
                            entry.oracle,
                            entry.original_assignment,
                            technique_cfg,
                            trials=max(cfg["trials"], VERIFY_MIN_TRIALS),
                            seed=cfg["seed"],
                            workers=cfg["workers"],
                        )
                    )
                except EnumerationInfeasibleError:
                    skipped += 1
    return reports, verifications, skipped


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_run_config(args)
    reports, verifications, skipped = _run_simulation(cfg)
    rows = aggregate(reports)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if cfg["format"] in ("csv", "both"):
        report_mod.trials_to_csv(reports, out_dir / "trials.csv")
        report_mod.aggregate_to_csv(rows, out_dir / "aggregate.csv")
        written += [out_dir / "trials.csv", out_dir / "aggregate.csv"]
        if verifications:
            report_mod.verification_to_csv(verifications, out_dir / "verification.csv")
            written.append(out_dir / "verification.csv")
    if cfg["format"] in ("table", "both"):
        _write_text(out_dir / "trials.txt", report_mod.trials_table(reports))
        _write_text(out_dir / "aggregate.txt", report_mod.aggregate_table(rows))
        written += [out_dir / "trials.txt", out_dir / "aggregate.txt"]
        if verifications:
            _write_text(
                out_dir / "verification.txt",
                report_mod.verification_table(verifications),
            )
            written.append(out_dir / "verification.txt")

    print(report_mod.aggregate_table(rows), end="")
    if verifications:
        failed = sum(1 for v in verifications if not v.passed)
        print(
            f"\nverification: {len(verifications) - failed}/{len(verifications)} "
            f"passed"
            + (f", {skipped} not enumerable" if skipped else "")
        )
        if failed:
            print(f"{failed} verification(s) FAILED", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return 2 if verifications and any(not v.passed for v in verifications) else 0


def cmd_report(args: argparse.Namespace) -> int:
    text = _read_text(args.infile)
    kind = report_mod.sniff_csv(args.infile)
    if args.format == "csv":
        sys.stdout.write(text)
        return 0
    if kind == "trials":
        text = report_mod.trials_table(report_mod.trials_from_csv(args.infile))
    elif kind == "aggregate":
        text = report_mod.aggregate_table(report_mod.aggregate_from_csv(args.infile))
    else:
        text = report_mod.verification_table(
            report_mod.verification_from_csv(args.infile)
        )
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonrepro",
        description=(
            "Anonymize failure traces and measure how often regenerated "
            "inputs still reproduce the recorded bugs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_anon = sub.add_parser("anonymize", help="apply techniques to a failure trace")
    p_anon.add_argument("--trace", required=True, help="input trace JSON")
    p_anon.add_argument("--config", required=True, help="technique config JSON")
    p_anon.add_argument("--out", required=True, help="anonymized trace output path")
    p_anon.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_anon.set_defaults(func=cmd_anonymize)

    p_regen = sub.add_parser(
        "regenerate", help="draw concrete values from an anonymized trace"
    )
    p_regen.add_argument("--trace", required=True, help="anonymized trace JSON")
    p_regen.add_argument("--out", required=True, help="regenerated trace output path")
    p_regen.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_regen.set_defaults(func=cmd_regenerate)

    p_sim = sub.add_parser(
        "simulate", help="Monte-Carlo reproduction runs over bug oracles"
    )
    p_sim.add_argument("--config", help="run config JSON (optional)")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--trials", type=int, help=f"trials per run (default {DEFAULT_TRIALS})")
    p_sim.add_argument("--seed", type=int, help="random seed (default 0)")
    p_sim.add_argument("--confidence", type=float, help="attempts confidence (default 0.95)")
    p_sim.add_argument("--workers", type=int, help="parallel worker processes")
    p_sim.add_argument(
        "--verify",
        action="store_true",
        help="cross-check against exhaustive enumeration where feasible",
    )
    p_sim.add_argument("--format", choices=("csv", "table", "both"), help="output format")
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="re-render a results CSV")
    p_rep.add_argument("--in", dest="infile", required=True, help="results CSV path")
    p_rep.add_argument(
        "--format", choices=("table", "csv"), default="table", help="output format"
    )
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AnonReproError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last resort
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
