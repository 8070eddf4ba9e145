"""Command-line front end.

::

    hybridmoea run 100,300,500 -a NSGAI,IMGA+HGS+NSGAI -p ZDT1,UF1 -N 2 -j 4
    hybridmoea metrics --metrics igd,hv
    hybridmoea summary --metrics igd
    hybridmoea plot convergence

Lists are comma separated; whitespace around commas is ignored, so
``-p ZDT1 , UF1`` works. Exit status: 0 on success, 1 when a job failed (or
there is nothing to summarize or plot), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hybridmoea.benchmarks import get_problem
from hybridmoea.core import BudgetMode, ConfigurationError
from hybridmoea.hybrid import validate_chain
from hybridmoea.indicators import INDICATORS, parse_indicator_list
from hybridmoea.plotting import PLOT_KINDS, convergence_plots, front_plots, sample_std, violin_plots
from hybridmoea.simulation.config import RunConfig, warn_unused_sections
from hybridmoea.simulation.jobs import SimulationJob, expand_jobs
from hybridmoea.simulation.metrics import compute_metrics
from hybridmoea.simulation.persistence import ChunkFormatError, load_chunks
from hybridmoea.simulation.runner import run_job

log = logging.getLogger("hybridmoea")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SUMMARY_HEADER = ("problem", "chain", "checkpoint", "indicator", "mean", "std", "min", "max", "runs")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class CliInvocation:
    subcommand: str
    budgets: tuple[int, ...] = ()
    chains: tuple[str, ...] = ()
    problems: tuple[str, ...] = ()
    repeats: int = 1
    workers: int = 1
    config: Path | None = None
    output_root: Path = Path("results")
    budget_mode: BudgetMode = BudgetMode.FITNESS_CALLS
    indicators: tuple[str, ...] = field(default_factory=lambda: tuple(INDICATORS))
    seed: int = 0
    fmt: str = "pickle"
    plot_kind: str | None = None
    dest: Path | None = None
    verbose: bool = False


def split_list(tokens: Sequence[str] | str) -> list[str]:
    """Join argv fragments and split on commas, dropping blanks."""
    if isinstance(tokens, str):
        tokens = [tokens]
    return [t.strip() for t in ",".join(tokens).split(",") if t.strip()]


def parse_budgets(tokens: Sequence[str]) -> tuple[int, ...]:
    out: list[int] = []
    for tok in split_list(tokens):
        try:
            value = int(tok)
        except ValueError:
            raise UsageError(f"budget {tok!r} is not an integer") from None
        if value <= 0:
            raise UsageError(f"budget {tok!r} must be positive")
        if out and value <= out[-1]:
            raise UsageError(f"budget {tok!r} does not increase on {out[-1]}")
        out.append(value)
    if not out:
        raise UsageError("no budgets given")
    return tuple(out)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hybridmoea", description="Run and analyse composed MOEA simulations.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, default=Path("results"), help="results root (default: results)")

    def metrics_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--metrics", nargs="+", default=None, help=f"indicators, default all of {','.join(INDICATORS)}")

    run = sub.add_parser("run", help="run simulations")
    run.add_argument("budgets", nargs="+", help="comma-separated increasing budget checkpoints")
    run.add_argument("-a", dest="chains", nargs="+", required=True, help="comma-separated algorithm chains")
    run.add_argument("-p", dest="problems", nargs="+", required=True, help="comma-separated problems")
    run.add_argument("-N", "--runs", dest="repeats", type=_positive, default=1, help="repeat each simulation N times")
    run.add_argument("-j", "--jobs", dest="workers", type=_positive, default=1, help="worker processes")
    run.add_argument("--config", type=Path, default=None, help="JSON parameter file")
    run.add_argument("--budget-mode", choices=[m.value for m in BudgetMode], default=BudgetMode.FITNESS_CALLS.value)
    run.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    run.add_argument("--format", dest="fmt", choices=("pickle", "json"), default="pickle", help="chunk encoding")
    common(run)

    met = sub.add_parser("metrics", help="compute and cache indicator values")
    metrics_flag(met)
    common(met)

    summ = sub.add_parser("summary", help="CSV table of cached indicator statistics")
    metrics_flag(summ)
    summ.add_argument("--dest", type=Path, default=None, help="write CSV here instead of stdout")
    common(summ)

    plot = sub.add_parser("plot", help="plot data and SVG images")
    plot.add_argument("plot_kind", choices=PLOT_KINDS)
    plot.add_argument("--dest", type=Path, default=None, help="output directory (default: <out>/plots)")
    metrics_flag(plot)
    common(plot)
    return ap


def parse_args(argv: Sequence[str]) -> CliInvocation:
    ns = build_parser().parse_args(list(argv))
    try:
        indicators = tuple(parse_indicator_list(",".join(ns.metrics))) if getattr(ns, "metrics", None) else tuple(INDICATORS)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    base = dict(subcommand=ns.subcommand, output_root=ns.out, indicators=indicators, verbose=ns.verbose)
    if ns.subcommand == "run":
        chains = split_list(ns.chains)
        problems = split_list(ns.problems)
        if not chains:
            raise UsageError("no algorithm chains given")
        if not problems:
            raise UsageError("no problems given")
        return CliInvocation(
            budgets=parse_budgets(ns.budgets),
            chains=tuple(chains),
            problems=tuple(problems),
            repeats=ns.repeats,
            workers=ns.workers,
            config=ns.config,
            budget_mode=BudgetMode(ns.budget_mode),
            seed=ns.seed,
            fmt=ns.fmt,
            **base,
        )
    return CliInvocation(plot_kind=getattr(ns, "plot_kind", None), dest=getattr(ns, "dest", None), **base)


def format_args(inv: CliInvocation) -> list[str]:
    """argv that parses back to ``inv``."""
    argv = ["-v"] if inv.verbose else []
    argv.append(inv.subcommand)
    if inv.subcommand == "run":
        argv += [",".join(map(str, inv.budgets)), "-a", ",".join(inv.chains), "-p", ",".join(inv.problems)]
        argv += ["-N", str(inv.repeats), "-j", str(inv.workers), "--budget-mode", inv.budget_mode.value]
        argv += ["--seed", str(inv.seed), "--format", inv.fmt]
        if inv.config is not None:
            argv += ["--config", str(inv.config)]
    else:
        if inv.subcommand == "plot":
            argv.append(str(inv.plot_kind))
        argv += ["--metrics", ",".join(inv.indicators)]
        if inv.dest is not None:
            argv += ["--dest", str(inv.dest)]
    argv += ["--out", str(inv.output_root)]
    return argv


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _execute(job: SimulationJob, config: RunConfig | None, root: Path, fmt: str) -> tuple[int, int, float, str | None]:
    start = time.perf_counter()
    try:
        chunks = run_job(job, config, root, fmt)
    except Exception as exc:  # reported per job; the pool keeps going
        return 0, 0, time.perf_counter() - start, f"{type(exc).__name__}: {exc}"
    return len(chunks), chunks[-1].consumed, time.perf_counter() - start, None


def _plan(inv: CliInvocation) -> tuple[list[SimulationJob], RunConfig | None]:
    try:
        chains = [validate_chain(c) for c in inv.chains]
        problems = [get_problem(p).name for p in inv.problems]
        config = RunConfig.load(inv.config) if inv.config is not None else None
    except (ConfigurationError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    warn_unused_sections(config, chains)
    jobs = expand_jobs(inv.budgets, [str(c) for c in chains], problems, inv.repeats, inv.seed, inv.budget_mode)
    return jobs, config


def run_command(inv: CliInvocation, out=None) -> int:
    out = out or sys.stdout
    jobs, config = _plan(inv)
    total = len(jobs)
    print(f"{total} simulation(s), budgets {','.join(map(str, inv.budgets))}, {inv.workers} worker(s)", file=out)
    failed = 0

    def report(i: int, job: SimulationJob, res: tuple[int, int, float, str | None]) -> None:
        nonlocal failed
        n, consumed, secs, err = res
        if err is None:
            print(f"[{i}/{total}] {job.describe()}: {n} chunk(s), consumed {consumed} ({secs:.1f}s)", file=out, flush=True)
        else:
            failed += 1
            print(f"[{i}/{total}] {job.describe()}: FAILED {err}", file=out, flush=True)

    if inv.workers == 1:
        for i, job in enumerate(jobs, 1):
            report(i, job, _execute(job, config, inv.output_root, inv.fmt))
    else:
        with ProcessPoolExecutor(max_workers=inv.workers) as pool:
            futures = [pool.submit(_execute, job, config, inv.output_root, inv.fmt) for job in jobs]
            for i, (job, fut) in enumerate(zip(jobs, futures), 1):
                try:
                    res = fut.result()
                except Exception as exc:  # worker died
                    res = (0, 0, 0.0, f"{type(exc).__name__}: {exc}")
                report(i, job, res)
    print(f"done: {total - failed} succeeded, {failed} failed", file=out)
    return EXIT_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# metrics / summary / plot
# ---------------------------------------------------------------------------


def _load(inv: CliInvocation, out) -> list | None:
    try:
        chunks = load_chunks(inv.output_root)
    except ChunkFormatError as exc:
        raise UsageError(str(exc)) from None
    if not chunks:
        print(f"no result chunks found under {inv.output_root}", file=out)
        return None
    return chunks


def metrics_command(inv: CliInvocation, out=None) -> int:
    out = out or sys.stdout
    chunks = _load(inv, out)
    if chunks is None:
        return EXIT_FAILED
    n = compute_metrics(chunks, inv.indicators)
    print(f"{n} indicator value(s) computed over {len(chunks)} chunk(s)", file=out)
    return EXIT_OK


def summary_rows(chunks, indicators: Sequence[str]) -> list[tuple]:
    """One row per (problem, chain, checkpoint, indicator) with cached values."""
    groups: dict[tuple, list[float]] = defaultdict(list)
    for c in chunks:
        for token in indicators:
            if token in c.metrics:
                groups[(c.problem, c.chain, c.checkpoint, token)].append(float(c.metrics[token]))
    rows = []
    for key in sorted(groups):
        v = groups[key]
        rows.append((*key, float(np.mean(v)), sample_std(v), min(v), max(v), len(v)))
    return rows


def format_summary(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def summary_command(inv: CliInvocation, out=None) -> int:
    out = out or sys.stdout
    chunks = _load(inv, out)
    if chunks is None:
        return EXIT_FAILED
    rows = summary_rows(chunks, inv.indicators)
    if not rows:
        print("no cached indicator values; run the metrics subcommand first", file=out)
        return EXIT_FAILED
    text = format_summary(rows)
    if inv.dest is not None:
        inv.dest.parent.mkdir(parents=True, exist_ok=True)
        inv.dest.write_text(text, encoding="utf-8")
        print(f"{len(rows)} row(s) -> {inv.dest}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def plot_command(inv: CliInvocation, out=None) -> int:
    out = out or sys.stdout
    chunks = _load(inv, out)
    if chunks is None:
        return EXIT_FAILED
    dest = inv.dest if inv.dest is not None else inv.output_root / "plots"
    dest.mkdir(parents=True, exist_ok=True)
    if inv.plot_kind == "convergence":
        files = convergence_plots(chunks, inv.indicators, dest)
    elif inv.plot_kind == "violin":
        files = violin_plots(chunks, inv.indicators, dest)
    else:
        files = front_plots(chunks, dest)
    if not files:
        print(f"nothing to plot for {inv.plot_kind}; run the metrics subcommand first", file=out)
        return EXIT_FAILED
    for f in files:
        print(f, file=out)
    return EXIT_OK


COMMANDS = {"run": run_command, "metrics": metrics_command, "summary": summary_command, "plot": plot_command}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        inv = parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if inv.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[inv.subcommand](inv)
    except UsageError as exc:
        print(f"hybridmoea: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
