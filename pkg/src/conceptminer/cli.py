"""Command-line front end: ``conceptminer {mine,compare,concepts,bench}``.

Exit status: 0 success, 2 bad input or arguments, 3 a size guard refused the
job, 4 the SFC2A rules were not a subset of the Apriori rules.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .concepts import DEFAULT_MAX_PROPERTIES, enumerate_concepts, export_dot
from .context import FORMATS, FormalContext, ParseError, load
from .coverage import Coverage, itemsets_of, sfc2a
from .errors import GuardError
from .relevance import PcfFormula, RelevanceConfig
from .rules import (
    AssociationRule,
    MiningParams,
    apriori_frequent,
    apriori_rules,
    format_rules_tsv,
    rules_from_coverage,
)

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_SUBSET = 0, 2, 3, 4
ALGORITHMS = ("sfc2a", "apriori")
METRICS_HEADER = ["dataset", "algorithm", "min_sup", "min_conf", "runtime_ms", "n_itemsets", "n_rules"]
GUARD_ENV = "CONCEPTMINER_GUARD_PROPS"


class InputError(Exception):
    pass


@dataclass
class RunMetrics:
    dataset: str
    algorithm: str
    min_sup: float
    min_conf: float
    runtime_ms: float
    n_itemsets: int
    n_rules: int

    def row(self) -> List[str]:
        return [
            self.dataset,
            self.algorithm,
            f"{self.min_sup:g}",
            f"{self.min_conf:g}",
            f"{self.runtime_ms:.3f}",
            str(self.n_itemsets),
            str(self.n_rules),
        ]


@dataclass
class RunResult:
    metrics: RunMetrics
    rules: List[AssociationRule]
    coverage: Optional[Coverage] = None


def run_algorithm(
    ctx: FormalContext, dataset: str, algorithm: str, params: MiningParams, cfg: RelevanceConfig
) -> RunResult:
    """Mine ``ctx`` with one algorithm; only the mining itself is timed."""
    start = time.perf_counter()
    coverage = None
    if algorithm == "sfc2a":
        coverage = sfc2a(ctx, cfg)
        rules = rules_from_coverage(coverage, params)
        n_itemsets = len(itemsets_of(coverage))
    elif algorithm == "apriori":
        n_itemsets = len(apriori_frequent(ctx, params.min_sup))
        rules = apriori_rules(ctx, params)
    else:
        raise InputError(f"unknown algorithm {algorithm!r}")
    elapsed = (time.perf_counter() - start) * 1000.0
    metrics = RunMetrics(dataset, algorithm, params.min_sup, params.min_conf, elapsed, n_itemsets, len(rules))
    return RunResult(metrics, rules, coverage)


def metrics_csv(rows: Sequence[RunMetrics], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(METRICS_HEADER)
    for m in rows:
        writer.writerow(m.row())
    return buf.getvalue()


def _load_context(path, fmt, limit) -> FormalContext:
    try:
        return load(path, fmt, limit=limit)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except (ParseError, UnicodeDecodeError, IsADirectoryError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _params(args) -> MiningParams:
    try:
        return MiningParams(args.min_sup, args.min_conf, args.max_rule_items)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _config(args) -> RelevanceConfig:
    return RelevanceConfig(PcfFormula(args.relevance))


def _dataset_name(args) -> str:
    return args.name or Path(args.input).stem


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_mine(args) -> int:
    params = _params(args)
    ctx = _load_context(args.input, args.format, args.limit)
    result = run_algorithm(ctx, _dataset_name(args), args.algo, params, _config(args))
    Path(args.out).write_text(format_rules_tsv(ctx, result.rules, args.algo))
    if args.dump_coverage:
        if result.coverage is None:
            raise InputError("--dump-coverage needs --algo sfc2a")
        Path(args.dump_coverage).write_text(result.coverage.serialize())
    sys.stdout.write(metrics_csv([result.metrics]))
    return EXIT_OK


def rule_diff(sfc: Sequence[AssociationRule], apr: Sequence[AssociationRule]):
    """Rule keys only in Apriori, only in SFC2A, and in both."""
    a = {r.key for r in apr}
    s = {r.key for r in sfc}
    return sorted(a - s), sorted(s - a), sorted(a & s)


def cmd_compare(args) -> int:
    params = _params(args)
    ctx = _load_context(args.input, args.format, args.limit)
    name = _dataset_name(args)
    cfg = _config(args)
    sfc = run_algorithm(ctx, name, "sfc2a", params, cfg)
    apr = run_algorithm(ctx, name, "apriori", params, cfg)
    sys.stdout.write(metrics_csv([sfc.metrics, apr.metrics]))
    only_apr, only_sfc, common = rule_diff(sfc.rules, apr.rules)
    print(
        f"only_in_apriori={len(only_apr)} only_in_sfc2a={len(only_sfc)} common={len(common)}",
        file=sys.stderr,
    )
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sfc2a.tsv").write_text(format_rules_tsv(ctx, sfc.rules, "sfc2a"))
        (out / "apriori.tsv").write_text(format_rules_tsv(ctx, apr.rules, "apriori"))
    if only_sfc:
        for ant, cons in only_sfc:
            print(
                "subset violation: "
                f"{','.join(ctx.property_names(ant))} -> {','.join(ctx.property_names(cons))}",
                file=sys.stderr,
            )
        return EXIT_SUBSET
    return EXIT_OK


def _guard_limit() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_MAX_PROPERTIES
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None


def cmd_concepts(args) -> int:
    ctx = _load_context(args.input, args.format, args.limit)
    limit = ctx.n_properties if args.force else _guard_limit()
    lattice = enumerate_concepts(ctx, max_properties=limit)
    if args.dot:
        text = export_dot(lattice)
    else:
        text = "".join(c.describe(ctx) + "\n" for c in lattice)
    _write(args.out, text)
    return EXIT_OK


def _read_manifest(path: Path) -> list:
    try:
        entries = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"no such manifest: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(entries, list):
        raise InputError(f"{path}: manifest must be a JSON list of entries")
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict) or not {"path", "min_sup", "min_conf"} <= set(entry):
            raise InputError(f"{path}: entry {k} needs path, min_sup and min_conf")
    return entries


def cmd_bench(args) -> int:
    manifest = Path(args.manifest)
    entries = _read_manifest(manifest)
    if args.repeat < 1:
        raise InputError("--repeat must be at least 1")
    rows: List[RunMetrics] = []
    for entry in entries:
        data = manifest.parent / entry["path"]
        ctx = _load_context(data, entry.get("format"), entry.get("limit"))
        try:
            params = MiningParams(float(entry["min_sup"]), float(entry["min_conf"]))
            cfg = RelevanceConfig(PcfFormula(entry.get("relevance", "def10")))
        except (TypeError, ValueError) as exc:
            raise InputError(f"{manifest}: {exc}") from None
        name = entry.get("dataset", Path(entry["path"]).stem)
        for algorithm in entry.get("algorithms", ALGORITHMS):
            runs = [run_algorithm(ctx, name, algorithm, params, cfg) for _ in range(args.repeat)]
            best = runs[0].metrics
            best.runtime_ms = statistics.median(r.metrics.runtime_ms for r in runs)
            rows.append(best)
    if args.out:
        out = Path(args.out)
        fresh = not out.exists() or out.stat().st_size == 0
        with out.open("a") as fh:
            fh.write(metrics_csv(rows, header=fresh))
    else:
        sys.stdout.write(metrics_csv(rows))
    return EXIT_OK


def _fraction(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptminer",
        description="Association rules from optimal concept coverages, with an Apriori baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("--input", required=True, help="dataset path")
        p.add_argument("--format", choices=FORMATS, help="default: from the file suffix")
        p.add_argument("--limit", type=int, help="keep only the first N objects")

    def add_mining(p):
        p.add_argument("--min-sup", type=_fraction, default=0.35)
        p.add_argument("--min-conf", type=_fraction, default=0.75)
        p.add_argument("--relevance", choices=[f.value for f in PcfFormula], default="def10")
        p.add_argument("--max-rule-items", type=int, default=16,
                       help="refuse to expand frequent itemsets larger than this")
        p.add_argument("--name", help="dataset name for the metrics row")

    mine = sub.add_parser("mine", help="mine rules with one algorithm")
    add_input(mine)
    add_mining(mine)
    mine.add_argument("--algo", choices=ALGORITHMS, default="sfc2a")
    mine.add_argument("--out", default="rules.tsv", help="rule TSV path")
    mine.add_argument("--dump-coverage", metavar="PATH")
    mine.set_defaults(func=cmd_mine)

    compare = sub.add_parser("compare", help="run both algorithms and diff their rules")
    add_input(compare)
    add_mining(compare)
    compare.add_argument("--out-dir", help="also write both rule TSVs here")
    compare.set_defaults(func=cmd_compare)

    concepts = sub.add_parser("concepts", help="list every formal concept")
    add_input(concepts)
    concepts.add_argument("--dot", action="store_true", help="emit the Hasse diagram as DOT")
    concepts.add_argument("--force", action="store_true", help=f"ignore the {GUARD_ENV} guard")
    concepts.add_argument("--out")
    concepts.set_defaults(func=cmd_concepts)

    bench = sub.add_parser("bench", help="run a manifest of datasets through both algorithms")
    bench.add_argument("--manifest", required=True)
    bench.add_argument("--repeat", type=int, default=1, help="report the median of N runs")
    bench.add_argument("--out", help="append metrics rows to this CSV")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"conceptminer: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardError as exc:
        print(f"conceptminer: {exc}", file=sys.stderr)
        return EXIT_GUARD


def entry_point() -> None:
    sys.exit(main())
