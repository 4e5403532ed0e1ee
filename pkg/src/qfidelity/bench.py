"""Timing sweep over system sizes and fidelity routes.

For each qubit count k the sweep draws ``run_schedule(k, runs_base)`` fresh
full-rank random pairs of dimension 2**k and times every selected route on
the same pair sequence, one call at a time on ``time.perf_counter_ns``.
Pair generation is outside the timed region.  BLAS/LAPACK threads are pinned
to one worker for the duration of the sweep.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping
from xml.sax.saxutils import escape

import numpy as np
from threadpoolctl import threadpool_limits

from . import _jit
from .routes import METHODS, FidelityMethod
from .states import random_density

CSV_HEADER = ("k", "dim", "method", "runs", "mean_s", "median_s", "std_s")
CONFIG_KEYS = ("k_min", "k_max", "runs_base", "methods", "seed", "warmup_runs")


def run_schedule(k: int, runs_base: int) -> int:
    """ceil(runs_base / 2**(k - 3)) in exact integer arithmetic."""
    if k < 1 or runs_base < 1:
        raise ValueError("k and runs_base must be >= 1")
    if k <= 3:
        return runs_base * 2 ** (3 - k)
    return -(-runs_base // 2 ** (k - 3))


def _parse_methods(value) -> tuple[FidelityMethod, ...]:
    if isinstance(value, str):
        if value.strip() in ("", "all"):
            return tuple(FidelityMethod)
        value = [v.strip() for v in value.split(",") if v.strip()]
    return tuple(FidelityMethod(m) for m in value)


@dataclass(frozen=True)
class BenchConfig:
    k_min: int = 1
    k_max: int = 10
    runs_base: int = 1000
    methods: tuple[FidelityMethod, ...] = tuple(FidelityMethod)
    seed: int = 0
    warmup_runs: int = 3

    def __post_init__(self):
        object.__setattr__(self, "methods", _parse_methods(self.methods))
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError(f"need 1 <= k_min <= k_max, got {self.k_min}..{self.k_max}")
        if self.runs_base < 1:
            raise ValueError("runs_base must be >= 1")
        if not self.methods:
            raise ValueError("methods must not be empty")
        if self.warmup_runs < 0:
            raise ValueError("warmup_runs must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def full_scale(cls, **overrides) -> "BenchConfig":
        """k = 1..13 with 10**4 base runs."""
        return cls(**{"k_min": 1, "k_max": 13, "runs_base": 10_000, **overrides})

    @classmethod
    def from_text(cls, text: str, **overrides) -> "BenchConfig":
        """Parse ``key = value`` lines; ``#`` starts a comment."""
        kw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in CONFIG_KEYS:
                raise ValueError(f"config line {lineno}: expected one of {CONFIG_KEYS} = value")
            kw[key] = value if key == "methods" else int(value)
        kw.update(overrides)
        return cls(**kw)

    def schedule(self) -> list[tuple[int, int, int]]:
        """(k, dim, runs) for every size in the sweep."""
        return [(k, 2**k, run_schedule(k, self.runs_base))
                for k in range(self.k_min, self.k_max + 1)]


@dataclass
class BenchCell:
    k: int
    dim: int
    method: str
    runs: int
    mean_s: float
    median_s: float
    std_s: float
    error: str | None = None


@dataclass
class BenchReport:
    cells: list[BenchCell] = field(default_factory=list)
    seed: int | None = None
    timestamp: str | None = None
    workers: int = 1
    backend: str = _jit.BACKEND
    input_digests: dict[int, str] = field(default_factory=dict)

    def cell(self, k: int, method) -> BenchCell:
        tag = method.value if isinstance(method, FidelityMethod) else method
        for c in self.cells:
            if c.k == k and c.method == tag:
                return c
        raise KeyError((k, tag))

    @property
    def failed(self) -> list[BenchCell]:
        return [c for c in self.cells if c.error is not None]

    def fastest(self) -> dict[int, str]:
        best = {}
        for c in self.cells:
            if c.error is None and (c.k not in best or c.mean_s < best[c.k].mean_s):
                best[c.k] = c
        return {k: c.method for k, c in sorted(best.items())}


def bench_pair(seed: int, k: int, index: int):
    """The ``index``-th input pair of size 2**k for a sweep seeded by ``seed``."""
    a, b = np.random.SeedSequence([seed, k, index]).generate_state(2, np.uint64)
    dim = 2**k
    return random_density(dim, dim, int(a)), random_density(dim, dim, int(b))


def _time_calls(fn, rho, sigma) -> int:
    t0 = time.perf_counter_ns()
    fn(rho, sigma)
    return time.perf_counter_ns() - t0


def _summarize(k: int, tag: str, ns: list[int], error: str | None) -> BenchCell:
    if error is not None or not ns:
        nan = float("nan")
        return BenchCell(k, 2**k, tag, len(ns), nan, nan, nan, error or "no runs")
    s = np.asarray(ns, dtype=np.float64) * 1e-9
    std = float(np.std(s, ddof=1)) if len(s) > 1 else 0.0
    return BenchCell(k, 2**k, tag, len(s), float(np.mean(s)), float(np.median(s)), std)


def bench_sweep(cfg: BenchConfig,
                extra_kernels: Mapping[str, Callable] | None = None,
                progress: Callable[[str], None] | None = None) -> BenchReport:
    """Run the timing sweep described by ``cfg``.

    ``extra_kernels`` adds named callables ``f(rho, sigma)`` that are timed
    alongside the fidelity routes (used for overhead baselines).  A route that
    raises is recorded as an error cell and skipped for the rest of that size.
    """
    kernels: list[tuple[str, Callable]] = [(m.value, METHODS[m]) for m in cfg.methods]
    kernels += list((extra_kernels or {}).items())
    report = BenchReport(seed=cfg.seed,
                         timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))
    with threadpool_limits(limits=1):
        for k, dim, runs in cfg.schedule():
            if progress:
                progress(f"k={k} dim={dim} runs={runs}")
            ns: dict[str, list[int]] = {tag: [] for tag, _ in kernels}
            err: dict[str, str | None] = {tag: None for tag, _ in kernels}
            if cfg.warmup_runs:
                wr, ws = bench_pair(cfg.seed, k, -1 % 2**32)
                for tag, fn in kernels:
                    try:
                        for _ in range(cfg.warmup_runs):
                            fn(wr, ws)
                    except Exception as exc:  # noqa: BLE001 - recorded per cell
                        err[tag] = f"{type(exc).__name__}: {exc}"
            digest = hashlib.sha256()
            for i in range(runs):
                rho, sigma = bench_pair(cfg.seed, k, i)
                digest.update(rho.mat.tobytes())
                digest.update(sigma.mat.tobytes())
                for tag, fn in kernels:
                    if err[tag] is not None:
                        continue
                    try:
                        ns[tag].append(_time_calls(fn, rho, sigma))
                    except Exception as exc:  # noqa: BLE001
                        err[tag] = f"{type(exc).__name__}: {exc}"
            report.input_digests[k] = digest.hexdigest()
            for tag, _ in kernels:
                report.cells.append(_summarize(k, tag, ns[tag], err[tag]))
    report.cells.sort(key=_cell_order)
    return report


_METHOD_ORDER = {m.value: i for i, m in enumerate(FidelityMethod)}


def _cell_order(c: BenchCell):
    return (c.k, _METHOD_ORDER.get(c.method, len(_METHOD_ORDER)), c.method)


# -- CSV ---------------------------------------------------------------------

def _num(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))


def emit_csv(report: BenchReport) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in sorted(report.cells, key=_cell_order):
        w.writerow([c.k, c.dim, c.method, c.runs, _num(c.mean_s), _num(c.median_s), _num(c.std_s)])
    return buf.getvalue().encode("utf-8")


def parse_csv(data: bytes | str) -> BenchReport:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError("not a benchmark CSV: header mismatch")
    cells = []
    for r in rows[1:]:
        k, dim, method, runs, mean, median, std = r
        cells.append(BenchCell(int(k), int(dim), method, int(runs),
                               float(mean), float(median), float(std),
                               "error" if math.isnan(float(mean)) else None))
    return BenchReport(cells=cells)


# -- SVG ---------------------------------------------------------------------

DECADE_PX = 60.0
_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f")


def _label(tag: str) -> str:
    try:
        return FidelityMethod(tag).label
    except ValueError:
        return tag


def emit_plot(report: BenchReport, title: str = "Fidelity computation time") -> bytes:
    """Mean seconds per call against k, log10 y-axis, one polyline per route.

    Decades are ``DECADE_PX`` pixels apart, so the vertical distance between
    two points is exactly ``DECADE_PX * log10(ratio of their means)``.
    """
    good = [c for c in report.cells if c.error is None]
    if not good:
        raise ValueError("report has no successful cells to plot")
    if any(c.mean_s <= 0 for c in good):
        raise ValueError("non-positive timing in report")
    series: dict[str, list[BenchCell]] = {}
    for c in sorted(good, key=_cell_order):
        series.setdefault(c.method, []).append(c)

    ks = [c.k for c in good]
    k_lo, k_hi = min(ks), max(ks)
    logs = [math.log10(c.mean_s) for c in good]
    dec_lo, dec_hi = math.floor(min(logs)), math.ceil(max(logs))
    if dec_hi == dec_lo:
        dec_hi += 1
    left, top, right, bottom = 70.0, 40.0, 180.0, 50.0
    plot_w = 420.0
    plot_h = DECADE_PX * (dec_hi - dec_lo)
    width, height = left + plot_w + right, top + plot_h + bottom

    def x_of(k):
        return left + (plot_w * (k - k_lo) / (k_hi - k_lo) if k_hi > k_lo else plot_w / 2)

    def y_of(mean):
        return top + (dec_hi - math.log10(mean)) * DECADE_PX

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}" data-decade-px="{DECADE_PX:g}">',
        f'<title>{escape(title)}</title>',
        f'<rect x="{left:g}" y="{top:g}" width="{plot_w:g}" height="{plot_h:g}" '
        'fill="none" stroke="#000"/>',
    ]
    for d in range(dec_lo, dec_hi + 1):
        y = top + (dec_hi - d) * DECADE_PX
        out.append(f'<line class="grid" x1="{left:g}" x2="{left + plot_w:g}" '
                   f'y1="{y:g}" y2="{y:g}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6:g}" y="{y + 4:g}" text-anchor="end" '
                   f'font-size="11">1e{d}</text>')
    for k in range(k_lo, k_hi + 1):
        out.append(f'<text x="{x_of(k):g}" y="{top + plot_h + 16:g}" '
                   f'text-anchor="middle" font-size="11">{k}</text>')
    out.append(f'<text x="{left + plot_w / 2:g}" y="{height - 12:g}" text-anchor="middle" '
               'font-size="12">number of qubits k</text>')
    out.append(f'<text x="16" y="{top + plot_h / 2:g}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + plot_h / 2:g})">mean time per call [s]</text>')
    for i, (tag, cells) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{x_of(c.k):.3f},{y_of(c.mean_s):.3f}" for c in cells)
        out.append(f'<polyline class="series" data-method="{escape(tag)}" points="{pts}" '
                   f'fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 14 + 18 * i
        lx = left + plot_w + 12
        out.append(f'<line x1="{lx:g}" x2="{lx + 20:g}" y1="{ly - 4:g}" y2="{ly - 4:g}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{lx + 26:g}" y="{ly:g}" font-size="12">'
                   f'{escape(_label(tag))}</text>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def format_fastest(report: BenchReport) -> str:
    lines = ["k    dim   fastest            mean_s"]
    for k, tag in report.fastest().items():
        c = report.cell(k, tag)
        lines.append(f"{k:<4d} {c.dim:<5d} {tag:<18s} {c.mean_s:.6g}")
    return "\n".join(lines)


def iter_methods(names: Iterable[str]) -> tuple[FidelityMethod, ...]:
    return _parse_methods(list(names))
