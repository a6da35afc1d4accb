"""Figure rendering for the report bundle.

Everything draws through the Agg backend straight to files; nothing
here opens a display.  The bundle view is intentionally small: quotient
profiles (the staircase fingerprint), weight curves, falsifier traces,
and the ratio scan behind an index bracket.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend pinned first)
import numpy as np  # noqa: E402

from .conditions import _defect_trace  # noqa: E402
from .indices import default_K_grid  # noqa: E402
from .sequences import (BlockSequence, build_gevrey, build_nq,  # noqa: E402
                        build_qa_diverging, build_qa_oscillating,
                        build_qa_vanishing, log_of_int)
from .verdicts import Window  # noqa: E402
from .weights import WeightFn, associated, log_power, power_weight  # noqa: E402

_DPI = 144


def _finish(fig: plt.Figure, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def quotient_profile_figure(seqs: Mapping[str, BlockSequence],
                            path: str | Path) -> Path:
    """Checkpoint trend of ``mu_k / k`` per sequence, log scale."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, seq in seqs.items():
        levels, starts, ends = [], [], []
        for cp in seq.checkpoints:
            levels.append(cp.level)
            starts.append(cp.log_mu_start - log_of_int(cp.ladder_start))
            ends.append(cp.log_mu_end - log_of_int(cp.ladder_end))
        if not levels:
            continue
        line, = ax.plot(levels, starts, marker="o", label=label)
        ax.plot(levels, ends, marker="s", linestyle="--",
                color=line.get_color())
    ax.axhline(0.0, color="grey", linewidth=0.8)
    ax.set_xlabel("level")
    ax.set_ylabel("log(mu/k) at ladder start (o) and end (s)")
    ax.set_title("quotient-over-index profiles")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def weight_curves_figure(weights: Mapping[str, WeightFn], window: Window,
                         path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    xs = window.grid_log(512)
    for label, omega in weights.items():
        top = omega.domain_log_max
        keep = xs if top is None else xs[xs <= top]
        vals = omega.eval_log_many(keep)
        good = np.isfinite(vals) & (vals > 0.0)
        ax.plot(keep[good] / math.log(10.0), np.log10(vals[good]),
                label=label)
    ax.set_xlabel("log10 t")
    ax.set_ylabel("log10 omega(t)")
    ax.set_title("weight growth")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def defect_trace_figure(traces: Mapping[str, tuple[Sequence[float],
                                                   Sequence[float]]],
                        path: str | Path) -> Path:
    """Running-max subadditivity defect against the decade marks."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, (marks, trace) in traces.items():
        shifted = [max(v, 1.0e-3) for v in trace]
        ax.semilogy(marks, shifted, marker=".", label=label)
    ax.set_xlabel("log10 of the argument sum")
    ax.set_ylabel("running max defect (clipped at 1e-3)")
    ax.set_title("subadditivity defect traces")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def ratio_scan_figure(omega: WeightFn, window: Window,
                      gammas: Iterable[float], path: str | Path,
                      margin: float = 1.0e-3) -> Path:
    """Tail ratio against K for a few exponents, with the pass line."""
    from .indices import _RatioScan

    Ks = default_K_grid()
    scan = _RatioScan(omega, window, Ks, margin)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for gamma in gammas:
        vals = [scan.cell_max(float(gamma), float(K)) for K in Ks]
        xs = [math.log10(K) for K, v in zip(Ks, vals) if v is not None]
        ys = [math.log10(v) for v in vals if v is not None]
        ax.plot(xs, ys, marker=".", label=f"exponent {gamma:g}")
    ax.plot(np.log10(Ks), np.log10(Ks * (1.0 - margin)), color="black",
            linestyle=":", label="confirmation line")
    ax.set_xlabel("log10 K")
    ax.set_ylabel("log10 max tail ratio")
    ax.set_title(f"index scan cells for {omega.name}")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def report_figures(out_dir: str | Path, A: float = 3.0,
                   j_max: int = 8) -> list[Path]:
    """Desk-default figure bundle written next to the report tables."""
    out = Path(out_dir)
    seqs = {
        "staircase A=%g" % A: build_nq(A, j_max),
        "vanishing": build_qa_vanishing(1.5, 1.75, j_max),
        "diverging": build_qa_diverging(A, j_max),
        "oscillating": build_qa_oscillating(A, j_max),
    }
    paths = [quotient_profile_figure(seqs, out / "quotients.png")]

    nq_seq = seqs["staircase A=%g" % A]
    weights = {
        "staircase": associated(nq_seq),
        "smooth s=2": associated(build_gevrey(2.0, 1 << 40)),
        "power s=2": power_weight(2.0),
        "log power s=2": log_power(2.0),
    }
    paths.append(weight_curves_figure(weights, Window(1.0e1, 1.0e12),
                                      out / "weights.png"))

    window = Window(1.0e2, 1.0e14)
    traces = {}
    for label, omega in (("staircase q=1.05", associated(nq_seq)),
                         ("power s=2 q=1.05", power_weight(2.0))):
        marks, trace, _ = _defect_trace(omega, 1.05, window)
        traces[label] = (marks, trace)
    paths.append(defect_trace_figure(traces, out / "defects.png"))

    paths.append(ratio_scan_figure(power_weight(2.0), Window(1.0e3, 1.0e9),
                                   (1.0, 2.0, 3.0), out / "scan.png"))
    return paths
