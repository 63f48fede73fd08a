"""Command-line entry point.

Subcommands: `satcount` runs the satellite-count sweep, `areamap` runs
the grid study, `validate` parses a configuration and echoes it fully
resolved without running anything. Exit codes: 0 on success, 2 on
configuration problems (missing file, malformed JSON, schema violation),
3 on runtime failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import InvalidScenario, ParseError, PebsimError, ValidationError
from .scenario import (
    apply_overrides,
    parse_config,
    run_area_map,
    run_satcount_sweep,
    summary_lines,
    write_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pebsim",
        description="Position error bound studies for satellite downlink "
        "localization with optional reconfigurable surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("satcount", "run the satellite-count sweep"),
        ("areamap", "run the area grid study"),
        ("validate", "parse a configuration and echo it resolved"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON configuration path")
        p.add_argument(
            "--out",
            default=".",
            help="output directory for CSV files (default: current directory)",
        )
        p.add_argument(
            "--seeds",
            default=None,
            help="comma-separated seed list overriding the configuration",
        )
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="set a configuration field by dotted path; repeatable",
        )
    return parser


def _load_document(path: str) -> dict:
    if not os.path.exists(path):
        raise FileNotFoundError(f"configuration file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"configuration is not valid JSON: {exc}") from exc


def _apply_seed_flag(doc: dict, seeds_flag) -> dict:
    if seeds_flag is None:
        return doc
    try:
        seeds = [int(s) for s in seeds_flag.split(",") if s.strip() != ""]
    except ValueError as exc:
        raise ValidationError("--seeds", f"expected integers, got {seeds_flag!r}") from exc
    if not seeds:
        raise ValidationError("--seeds", "at least one seed is required")
    out = dict(doc)
    out["seeds"] = seeds
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = _load_document(args.config)
        doc = apply_overrides(doc, args.override)
        doc = _apply_seed_flag(doc, args.seeds)
        config = parse_config(json.dumps(doc))
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, ValidationError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        print(json.dumps(config.resolved, indent=2, sort_keys=True))
        return EXIT_OK

    try:
        if args.command == "satcount":
            result = run_satcount_sweep(config)
        else:
            result = run_area_map(config)
    except InvalidScenario as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except PebsimError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    os.makedirs(args.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    out_path = os.path.join(args.out, f"{stem}_peb.csv")
    write_csv(result, out_path)
    for line in summary_lines(result, config):
        print(line)
    print(f"wrote {out_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
