"""Plot data (CSV) and standalone SVG images built from primitive shapes.

Every writer is byte-deterministic for a given chunk set: rows are sorted,
floats are written with ``repr`` in CSV and fixed precision in SVG.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from hybridmoea.benchmarks import DEFAULT_FRONT_POINTS, get_problem, reference_front
from hybridmoea.core import ConfigurationError
from hybridmoea.simulation.persistence import ResultChunk

log = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
PLOT_KINDS = ("convergence", "front", "violin")


def _num(v: float) -> str:
    return f"{v:.3f}"


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "+-_." else "_" for c in name)


def sample_std(values: Sequence[float]) -> float:
    """Sample standard deviation (n-1 denominator); 0 for a single value."""
    if len(values) < 2:
        return 0.0
    return float(np.std(np.asarray(values, dtype=np.float64), ddof=1))


@dataclass
class SvgCanvas:
    """Axis-aligned plot area mapping data coordinates to pixels."""

    xlim: tuple[float, float]
    ylim: tuple[float, float]
    width: int = 640
    height: int = 480
    margin: int = 60
    items: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.xlim = _padded(self.xlim)
        self.ylim = _padded(self.ylim)

    def px(self, x: float) -> float:
        lo, hi = self.xlim
        return self.margin + (x - lo) / (hi - lo) * (self.width - 2 * self.margin)

    def py(self, y: float) -> float:
        lo, hi = self.ylim
        return self.height - self.margin - (y - lo) / (hi - lo) * (self.height - 2 * self.margin)

    def line(self, x0: float, y0: float, x1: float, y1: float, color: str = "#000", width: float = 1.0) -> None:
        self.items.append(
            f'<line x1="{_num(self.px(x0))}" y1="{_num(self.py(y0))}" x2="{_num(self.px(x1))}" '
            f'y2="{_num(self.py(y1))}" stroke="{color}" stroke-width="{width}"/>'
        )

    def polyline(self, xs: Iterable[float], ys: Iterable[float], color: str, width: float = 1.5) -> None:
        pts = " ".join(f"{_num(self.px(x))},{_num(self.py(y))}" for x, y in zip(xs, ys))
        self.items.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def polygon(self, xs: Iterable[float], ys: Iterable[float], color: str, opacity: float = 0.4) -> None:
        pts = " ".join(f"{_num(self.px(x))},{_num(self.py(y))}" for x, y in zip(xs, ys))
        self.items.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="{opacity}" stroke="{color}"/>')

    def circle(self, x: float, y: float, color: str, r: float = 2.5) -> None:
        self.items.append(f'<circle cx="{_num(self.px(x))}" cy="{_num(self.py(y))}" r="{r}" fill="{color}"/>')

    def text(self, x: float, y: float, s: str, anchor: str = "middle", size: int = 12, pixels: bool = False) -> None:
        if not pixels:
            x, y = self.px(x), self.py(y)
        self.items.append(
            f'<text x="{_num(x)}" y="{_num(y)}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}">{escape(s)}</text>'
        )

    def axes(self, title: str, xlabel: str, ylabel: str, xticks: Sequence[float] | None = None) -> None:
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        self.line(x0, y0, x1, y0)
        self.line(x0, y0, x0, y1)
        for t in xticks if xticks is not None else np.linspace(x0, x1, 5):
            self.line(t, y0, t, y0 - (y1 - y0) * 0.015)
            self.text(self.px(t), self.height - self.margin + 16, f"{t:.4g}", pixels=True, size=10)
        for t in np.linspace(y0, y1, 5):
            self.line(x0, t, x0 - (x1 - x0) * 0.015, t)
            self.text(self.margin - 6, self.py(t) + 4, f"{t:.4g}", anchor="end", pixels=True, size=10)
        self.text(self.width / 2, 24, title, pixels=True, size=14)
        self.text(self.width / 2, self.height - 16, xlabel, pixels=True)
        self.items.append(
            f'<text x="16" y="{_num(self.height / 2)}" font-size="12" font-family="sans-serif" '
            f'text-anchor="middle" transform="rotate(-90 16 {_num(self.height / 2)})">{escape(ylabel)}</text>'
        )

    def legend(self, labels: Sequence[str]) -> None:
        for i, label in enumerate(labels):
            x, y = self.width - self.margin - 150, self.margin + 16 * i
            self.items.append(f'<rect x="{x}" y="{y - 9}" width="10" height="10" fill="{PALETTE[i % len(PALETTE)]}"/>')
            self.text(x + 14, y, label, anchor="start", pixels=True, size=11)

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="#fff"/>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _padded(lim: tuple[float, float]) -> tuple[float, float]:
    lo, hi = float(lim[0]), float(lim[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return 0.0, 1.0
    if hi <= lo:
        pad = abs(lo) * 0.05 or 0.5
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")


def _final_chunks(chunks: Iterable[ResultChunk]) -> dict[tuple[str, str], list[ResultChunk]]:
    """Per (problem, chain): each run's chunk at its largest checkpoint, by run."""
    last: dict[tuple[str, str, int], ResultChunk] = {}
    for c in chunks:
        key = (c.problem, c.chain, c.run)
        if key not in last or c.checkpoint > last[key].checkpoint:
            last[key] = c
    out: dict[tuple[str, str], list[ResultChunk]] = defaultdict(list)
    for (problem, chain, _), c in sorted(last.items()):
        out[(problem, chain)].append(c)
    return out


def convergence_plots(chunks: Sequence[ResultChunk], indicators: Sequence[str], dest: Path) -> list[Path]:
    """Mean and std of each indicator against checkpoint, one curve per chain."""
    values: dict[tuple[str, str], dict[str, dict[int, list[float]]]] = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    for c in chunks:
        for token in indicators:
            if token in c.metrics:
                values[(c.problem, token)][c.chain][c.checkpoint].append(c.metrics[token])
    written = []
    for (problem, token), per_chain in sorted(values.items()):
        rows = []
        for chain in sorted(per_chain):
            for cp in sorted(per_chain[chain]):
                v = per_chain[chain][cp]
                rows.append((chain, cp, float(np.mean(v)), sample_std(v), len(v)))
        stem = dest / f"convergence_{_safe(problem)}_{token}"
        _write_csv(stem.with_suffix(".csv"), ("chain", "checkpoint", "mean", "std", "runs"), rows)
        xs = [r[1] for r in rows]
        lows = [r[2] - r[3] for r in rows]
        highs = [r[2] + r[3] for r in rows]
        canvas = SvgCanvas((min(xs), max(xs)), (min(lows), max(highs)))
        canvas.axes(f"{problem}: {token}", "budget", token, xticks=sorted(set(xs)))
        chains = sorted(per_chain)
        for i, chain in enumerate(chains):
            color = PALETTE[i % len(PALETTE)]
            mine = [r for r in rows if r[0] == chain]
            canvas.polyline([r[1] for r in mine], [r[2] for r in mine], color)
            for _, cp, mean, std, _ in mine:
                canvas.line(cp, mean - std, cp, mean + std, color)
                canvas.circle(cp, mean, color)
        canvas.legend(chains)
        stem.with_suffix(".svg").write_text(canvas.render(), encoding="utf-8")
        written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
    return written


def front_plots(chunks: Sequence[ResultChunk], dest: Path, front_points: int = DEFAULT_FRONT_POINTS) -> list[Path]:
    """Final population of the lowest-numbered run over the reference front.

    Only the first two objectives are drawn.
    """
    written = []
    for (problem, chain), finals in sorted(_final_chunks(chunks).items()):
        chunk = finals[0]
        F = chunk.objectives[:, :2]
        try:
            ref = reference_front(get_problem(problem), front_points)[:, :2]
        except ConfigurationError as exc:
            log.warning("%s; front plot without overlay", exc)
            ref = None
        rows = [("result", a, b) for a, b in F]
        if ref is not None:
            rows += [("reference", a, b) for a, b in ref]
        stem = dest / f"front_{_safe(problem)}_{_safe(chain)}"
        _write_csv(stem.with_suffix(".csv"), ("series", "f1", "f2"), rows)
        allpts = F if ref is None else np.concatenate([F, ref])
        canvas = SvgCanvas((allpts[:, 0].min(), allpts[:, 0].max()), (allpts[:, 1].min(), allpts[:, 1].max()))
        canvas.axes(f"{problem}: {chain} (run {chunk.run}, budget {chunk.checkpoint})", "f1", "f2")
        if ref is not None:
            canvas.polyline(ref[:, 0], ref[:, 1], "#888", width=1.0)
        for a, b in F:
            canvas.circle(a, b, PALETTE[0])
        stem.with_suffix(".svg").write_text(canvas.render(), encoding="utf-8")
        written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
    return written


def _kde(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    std = values.std(ddof=1) if values.size > 1 else 0.0
    h = 1.06 * std * values.size ** (-0.2) if std > 0 else 1.0
    z = (grid[:, None] - values[None, :]) / h
    return np.exp(-0.5 * z * z).sum(axis=1)


def violin_plots(chunks: Sequence[ResultChunk], indicators: Sequence[str], dest: Path) -> list[Path]:
    """Distribution of final-checkpoint indicator values per chain."""
    finals = _final_chunks(chunks)
    written = []
    for problem in sorted({p for p, _ in finals}):
        for token in indicators:
            rows = [
                (chain, c.run, c.metrics[token])
                for (p, chain), cs in sorted(finals.items())
                if p == problem
                for c in cs
                if token in c.metrics
            ]
            if not rows:
                continue
            stem = dest / f"violin_{_safe(problem)}_{token}"
            _write_csv(stem.with_suffix(".csv"), ("chain", "run", "value"), rows)
            chains = sorted({r[0] for r in rows})
            vals = np.array([r[2] for r in rows])
            canvas = SvgCanvas((-0.5, len(chains) - 0.5), (vals.min(), vals.max()))
            canvas.axes(f"{problem}: final {token}", "", token, xticks=[])
            for i, chain in enumerate(chains):
                color = PALETTE[i % len(PALETTE)]
                v = np.array([r[2] for r in rows if r[0] == chain])
                canvas.text(canvas.px(i), canvas.height - canvas.margin + 16, chain, pixels=True, size=10)
                if np.ptp(v) == 0:
                    canvas.line(i - 0.3, v[0], i + 0.3, v[0], color, width=2.0)
                    continue
                grid = np.linspace(v.min(), v.max(), 64)
                dens = _kde(v, grid)
                half = 0.4 * dens / dens.max()
                canvas.polygon(np.concatenate([i - half, (i + half)[::-1]]), np.concatenate([grid, grid[::-1]]), color)
                canvas.line(i - 0.1, float(np.median(v)), i + 0.1, float(np.median(v)), "#000", width=2.0)
            stem.with_suffix(".svg").write_text(canvas.render(), encoding="utf-8")
            written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
    return written
