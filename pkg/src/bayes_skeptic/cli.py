"""Command-line front end: ``run``, ``table``, ``verify`` and ``sweep``.

Exit status: 0 on success, 1 when ``verify`` finds a failing property, 2 on
a configuration error (bad flag, spec string or missing input file), 3 when
the game itself fails (e.g. a move file ends before ``--n`` rounds).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import tables, verify
from .errors import BadDigit, CoinGameError, MissingData, ParseError, SpecError, TooShort
from .game import NEG_INFINITY, check_rho, play
from .ingest import load_path_file, prices_to_moves, read_price_csv, resolve_data_path
from .reality import parse_reality
from .strategies import parse_strategy

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_GAME = 3


class ConfigError(Exception):
    pass


def parse_rho(text) -> float:
    try:
        value = float(Fraction(str(text)))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--rho: cannot parse {text!r}") from None
    try:
        return check_rho(value)
    except ValueError as exc:
        raise ConfigError(f"--rho: {exc}") from None


def fmt_float(value: float, precision: int | None) -> str:
    if value == NEG_INFINITY:
        return "-inf"
    return repr(float(value)) if precision is None else f"{value:.{precision}g}"


def json_float(value: float, precision: int | None):
    if value == NEG_INFINITY:
        return None
    return float(value) if precision is None else float(f"{value:.{precision}g}")


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_game(rho, strategy_spec: str, reality_spec: str, seed: int | None):
    rho = parse_rho(rho)
    try:
        strategy = parse_strategy(strategy_spec)
    except SpecError as exc:
        raise ConfigError(f"--strategy: {exc}") from None
    try:
        reality = parse_reality(reality_spec, default_seed=seed)
    except (SpecError, MissingData) as exc:
        raise ConfigError(f"--reality: {exc}") from None
    return rho, strategy, reality


def run_game(rho, strategy_spec, reality_spec, n, seed=None):
    rho, strategy, reality = build_game(rho, strategy_spec, reality_spec, seed)
    if n < 1:
        raise ConfigError(f"--n: must be a positive integer, got {n}")
    return play(strategy, reality, n, rho)


# -- run -----------------------------------------------------------------------


def render_trace(records, fmt: str, precision: int | None, meta: dict) -> str:
    if fmt == "json":
        doc = dict(meta)
        doc["records"] = [
            {"n": r.n, "nu": json_float(r.nu, precision), "x": r.x.symbol, "log_capital": json_float(r.log_capital, precision)}
            for r in records
        ]
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "nu", "x", "log_capital"])
    for r in records:
        writer.writerow([r.n, fmt_float(r.nu, precision), r.x.symbol, fmt_float(r.log_capital, precision)])
    return buf.getvalue()


def cmd_run(args) -> int:
    records = run_game(args.rho, args.strategy, args.reality, args.n, args.seed)
    meta = {"rho": args.rho, "strategy": args.strategy, "reality": args.reality, "n_rounds": args.n}
    emit(render_trace(records, args.format or "csv", args.precision, meta), args.out)
    return 0


# -- table ---------------------------------------------------------------------


def source_moves(source: str):
    path = resolve_data_path(source)
    if path.suffix.lower() == ".csv":
        return prices_to_moves(read_price_csv(path))
    return load_path_file(path)


def cmd_table(args) -> int:
    try:
        if args.source:
            moves = source_moves(args.source)
            table = tables.compute_table(path=moves, title=f"Log capital at n={len(moves)} for {args.source}")
        elif args.which == "pi":
            table = tables.pi_table()
        else:
            table = tables.nikkei_counts_table()
    except (ParseError, BadDigit, TooShort) as exc:
        raise ConfigError(f"--source: {exc}") from None
    precision = args.precision or 7
    if args.format == "json":
        recs = tables.table_records(table)
        doc = {"title": table.title, "n": table.n, "heads": table.h, "cells": recs}
        for rec in recs:
            v = rec["log_capital"]
            rec["log_capital"] = None if v is None else json_float(v, precision)
        text = json.dumps(doc, indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row", "variant", "rho", "log_capital"])
        for rec in tables.table_records(table):
            v = rec["log_capital"]
            writer.writerow([rec["row"], rec["variant"], rec["rho"], "n/a" if v is None else tables.format_value(v, precision)])
        text = buf.getvalue()
    else:
        text = tables.render_text(table, precision)
    emit(text, args.out)
    return 0


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, digits_path=args.digits)
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        text = json.dumps(
            [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results], indent=1
        ) + "\n"
    else:
        lines = [r.line() for r in results]
        lines.append(f"{len(results) - len(failed)}/{len(results)} properties passed ({args.suite})")
        text = "\n".join(lines) + "\n"
    emit(text, args.out)
    return EXIT_VERIFY_FAILED if failed else 0


# -- sweep ---------------------------------------------------------------------


def load_sweep_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"sweep config {path!r} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"sweep config {path!r}: {exc}") from None
    for key in ("rho", "strategy", "reality", "n"):
        if key not in cfg:
            raise ConfigError(f"sweep config: missing field {key!r}")
    for key in ("rho", "strategy", "reality"):
        if not isinstance(cfg[key], list) or not cfg[key]:
            raise ConfigError(f"sweep config: field {key!r} must be a non-empty list")
    if not isinstance(cfg["n"], int) or cfg["n"] < 1:
        raise ConfigError("sweep config: field 'n' must be a positive integer")
    unknown = set(cfg) - {"rho", "strategy", "reality", "n", "seed", "trace"}
    if unknown:
        raise ConfigError(f"sweep config: unknown field(s) {', '.join(sorted(unknown))}")
    return cfg


def _sweep_cell(cell):
    rho, strategy, reality, n, seed = cell
    return run_game(rho, strategy, reality, n, seed)


def cmd_sweep(args) -> int:
    cfg = load_sweep_config(args.config)
    seed = cfg.get("seed", args.seed)
    cells = [(str(r), s, q, cfg["n"], seed) for r, s, q in itertools.product(cfg["rho"], cfg["strategy"], cfg["reality"])]
    # fail fast on bad specs before spawning workers
    for rho, s, q, _, _ in cells:
        build_game(rho, s, q, seed)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]

    p = args.precision
    rows = []
    for (rho, s, q, n, _), records in zip(cells, results):
        if cfg.get("trace"):
            for r in records:
                rows.append({"rho": rho, "strategy": s, "reality": q, "n": r.n, "nu": r.nu, "x": r.x.symbol, "log_capital": r.log_capital})
        else:
            logs = [r.log_capital for r in records]
            rows.append({"rho": rho, "strategy": s, "reality": q, "n": n, "log_capital": logs[-1], "min_log_capital": min(logs), "max_log_capital": max(logs)})

    float_keys = {"nu", "log_capital", "min_log_capital", "max_log_capital"}
    if args.format == "json":
        for row in rows:
            for k in float_keys & row.keys():
                row[k] = json_float(row[k], p)
        text = json.dumps(rows, indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: fmt_float(v, p) if k in float_keys else v for k, v in row.items()})
        text = buf.getvalue()
    emit(text, args.out)
    return 0


# -- entry point -----------------------------------------------------------------


def _add_output_flags(parser, top: bool) -> None:
    default = None if top else argparse.SUPPRESS
    parser.add_argument("--out", default=default, help="write output to this file instead of stdout")
    parser.add_argument("--format", choices=["csv", "json"], default=default, help="machine-readable output format")
    parser.add_argument("--precision", type=int, default=default, help="significant figures for printed numbers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayes-skeptic",
        description="Bayesian Skeptic strategies for the biased-coin game.",
    )
    _add_output_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play one game and write the per-round trace")
    _add_output_flags(p, top=False)
    p.add_argument("--rho", required=True, help="ticket price in (0, 1); fractions like 2/3 allowed")
    p.add_argument("--strategy", required=True, help="e.g. beta:a=100,b=100 or const:p=0.6:+")
    p.add_argument("--reality", required=True, help="e.g. file:pi500.txt, iid:p=0.5,seed=42, adversary")
    p.add_argument("--n", type=int, required=True, help="number of rounds")
    p.add_argument("--seed", type=int, default=None, help="seed used by iid reality specs that omit one")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("table", help="regenerate a log-capital table")
    _add_output_flags(p, top=False)
    p.add_argument("which", choices=["nikkei_counts", "pi"])
    p.add_argument("--source", help="digit/move file (pi) or price CSV / move file (nikkei_counts)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the property suites")
    _add_output_flags(p, top=False)
    p.add_argument("suite", nargs="?", choices=["fast", "all"], default="fast")
    p.add_argument("--digits", help="check this digit file instead of the bundled one")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a grid of games from a JSON config")
    _add_output_flags(p, top=False)
    p.add_argument("config", help="JSON file with rho, strategy, reality lists and n")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--seed", type=int, default=None, help="seed for iid realities without one")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingData as exc:
        print(f"error: missing data: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CoinGameError as exc:
        print(f"error: game failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GAME


if __name__ == "__main__":
    sys.exit(main())
