"""Growth-index estimation and the derived bounds.

The growth index of a weight is the supremum of exponents ``gamma`` for
which some ``K > 1`` keeps ``limsup_t omega(K^gamma t)/omega(t) < K``.
The scan below approximates that limsup per ``(gamma, K)`` cell by the
maximum over the last decade of usable arguments, confirms ``gamma``
when some ``K`` stays below ``K (1 - margin)``, and exploits the
downward monotonicity in ``gamma`` (smaller exponents inherit the same
witness ``K``) to bisect on the grid and then refine continuously.

Weights stored on a finite range shorten the usable tail per ``K`` (the
shifted argument must stay inside the range); the scan therefore takes
each cell's maximum over the *last usable* decade, which keeps both
small-``K`` cells (needing deep-tail pairs) and large-``K`` cells
(needing room for the shift) meaningful on the staircase transforms.

``+oo`` is reported only through the square-argument shortcut
(``omega(t^2) <= C omega(t) + C`` absorbs every power of ``t``) or when
the whole grid is confirmed, flagged explicitly as a scan ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .conditions import probe_gamma_relation, probe_square_condition, check_mg
from .errors import ParameterError, WeightDomainError
from .sequences import BlockSequence
from .verdicts import Window, fmt_float
from .weights import WeightFn

LN10 = math.log(10.0)

#: default exponent grid: 0.05 steps on (0, 4]
GAMMA_GRID_STEP = 0.05
GAMMA_GRID_MAX = 4.0

#: default ratio grid: 48 log-spaced points in (1.01, 10^3]
K_GRID_SIZE = 48
K_GRID_LO = 1.01
K_GRID_HI = 1.0e3

#: limsup surrogate: maximum over this many decades of usable tail
TAIL_DECADES = 1.0


def default_gamma_grid() -> np.ndarray:
    n = int(round(GAMMA_GRID_MAX / GAMMA_GRID_STEP))
    return np.round(np.arange(1, n + 1) * GAMMA_GRID_STEP, 10)


def default_K_grid() -> np.ndarray:
    return np.geomspace(K_GRID_LO, K_GRID_HI, K_GRID_SIZE + 1)[1:]


@dataclass
class IndexEstimate:
    """Bracket for a growth index.

    ``gamma_lower`` is the largest confirmed exponent, ``gamma_upper``
    the smallest refuted one; both are None when the window was too
    short to probe.  ``sentinel_infinite`` marks the ``+oo`` outcome.
    ``K_witnesses`` lists ``{gamma, K}`` pairs that confirmed.
    """

    gamma_lower: float | None
    gamma_upper: float | None
    sentinel_infinite: bool
    K_witnesses: list[dict[str, float]]
    window: Window
    margin: float
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.gamma_lower is not None or self.sentinel_infinite

    @property
    def alpha_bounds(self) -> tuple[float, float]:
        """Reciprocal-index bracket (derived field, nothing more)."""
        if self.sentinel_infinite:
            return 0.0, 0.0
        if self.gamma_lower is None or self.gamma_upper is None:
            return 0.0, math.inf
        hi = math.inf if self.gamma_lower == 0.0 else 1.0 / self.gamma_lower
        lo = 0.0 if math.isinf(self.gamma_upper) else 1.0 / self.gamma_upper
        return lo, hi

    def to_json_dict(self) -> dict[str, Any]:
        def _num(v: float | None) -> Any:
            if v is None:
                return None
            return "inf" if math.isinf(v) else float(fmt_float(v))

        return {
            "gamma_lower": _num(self.gamma_lower),
            "gamma_upper": _num(self.gamma_upper),
            "sentinel": self.sentinel_infinite,
            "K_witnesses": [{"gamma": w["gamma"], "K": w["K"]}
                            for w in self.K_witnesses],
            "window": self.window.to_json_dict(),
            "margin": self.margin,
        }


class _RatioScan:
    """Cell evaluator for the (gamma, K) confirmation predicate."""

    def __init__(self, omega: WeightFn, window: Window,
                 K_grid: np.ndarray, margin: float) -> None:
        self.omega = omega
        self.K_grid = K_grid
        self.margin = margin
        samples = max(window.samples, int(32 * window.decades) + 1)
        self.xs = window.grid_log(samples)
        self.den = omega.eval_log_many(self.xs)
        self.dmax = omega.domain_log_max
        self.unusable_cells = 0

    def cell_max(self, gamma: float, K: float) -> float | None:
        """Max tail ratio for one cell, or None when unusable."""
        shift = gamma * math.log(K)
        x_hi = self.xs[-1]
        if self.dmax is not None:
            x_hi = min(x_hi, self.dmax - shift)
        if x_hi - self.xs[0] < TAIL_DECADES * LN10:
            self.unusable_cells += 1
            return None
        mask = (self.xs >= x_hi - TAIL_DECADES * LN10) & (self.xs <= x_hi)
        xs_t = self.xs[mask]
        den_t = self.den[mask]
        num = self.omega.eval_log_many(xs_t + shift)
        good = (den_t > 0.0) & np.isfinite(den_t) & np.isfinite(num)
        if np.count_nonzero(good) < 8:
            self.unusable_cells += 1
            return None
        return float(np.max(num[good] / den_t[good]))

    def confirmed(self, gamma: float) -> float | None:
        """The confirming K, if any (smallest-ratio grid point wins)."""
        for K in self.K_grid:
            r = self.cell_max(gamma, float(K))
            if r is not None and r < K * (1.0 - self.margin):
                return float(K)
        return None


def estimate_gamma_omega(omega: WeightFn, window: Window,
                         gamma_grid: Sequence[float] | None = None,
                         K_grid: Sequence[float] | None = None,
                         margin: float = 1.0e-3,
                         refine_steps: int = 8) -> IndexEstimate:
    """Bracket the growth index of ``omega`` by scanning ratio cells."""
    if not (0.0 < margin < 0.1):
        raise ParameterError("margin must lie in (0, 0.1)")
    gammas = np.asarray(gamma_grid if gamma_grid is not None
                        else default_gamma_grid(), dtype=np.float64)
    Ks = np.asarray(K_grid if K_grid is not None else default_K_grid(),
                    dtype=np.float64)
    if gammas.size == 0 or np.any(gammas <= 0.0) or \
            np.any(np.diff(gammas) <= 0.0):
        raise ParameterError("gamma grid must be positive and increasing")
    if np.any(Ks <= 1.0):
        raise ParameterError("K grid must lie above 1")
    try:
        window.require_span()
    except ParameterError as exc:
        return IndexEstimate(None, None, False, [], window, margin,
                             stats={"reason": str(exc)})

    # square-argument shortcut for the infinite index
    try:
        square = probe_square_condition(omega, window)
    except (WeightDomainError, ParameterError):
        square = None
    if square is not None and square.holds:
        return IndexEstimate(math.inf, math.inf, True, [], window, margin,
                             stats={"square_condition": "holds",
                                    "C_hat": square.stats.get("C_hat")})

    scan = _RatioScan(omega, window, Ks, margin)
    witnesses: list[dict[str, float]] = []

    def confirm(gamma: float) -> bool:
        K = scan.confirmed(float(gamma))
        if K is not None:
            witnesses.append({"gamma": float(gamma), "K": K})
            return True
        return False

    # grid bisection on the monotone predicate
    lo_idx, hi_idx = -1, gammas.size  # confirmed / refuted sentinels
    if not confirm(gammas[0]):
        hi_idx = 0
    elif confirm(gammas[-1]):
        lo_idx = gammas.size - 1
    else:
        lo_idx, hi_idx = 0, gammas.size - 1
        while hi_idx - lo_idx > 1:
            mid = (lo_idx + hi_idx) // 2
            if confirm(gammas[mid]):
                lo_idx = mid
            else:
                hi_idx = mid
    stats: dict[str, Any] = {"grid_points": int(gammas.size),
                             "unusable_cells": scan.unusable_cells}
    if lo_idx == gammas.size - 1:
        # every grid exponent confirmed: report the ceiling explicitly
        stats["scan_ceiling"] = float(gammas[-1])
        return IndexEstimate(float(gammas[-1]), math.inf, True, witnesses,
                             window, margin, stats)
    g_lo = 0.0 if lo_idx < 0 else float(gammas[lo_idx])
    g_hi = float(gammas[hi_idx])
    # continuous refinement inside the bracketing pair
    for _ in range(refine_steps):
        mid = 0.5 * (g_lo + g_hi)
        if confirm(mid):
            g_lo = mid
        else:
            g_hi = mid
    stats["unusable_cells"] = scan.unusable_cells
    return IndexEstimate(g_lo, g_hi, False, witnesses, window, margin,
                         stats)


# ---------------------------------------------------------------------------
# closed-form bounds


@dataclass(frozen=True)
class BoundReport:
    """Index lower bound implied by a generalized subadditivity constant.

    A weight with ``omega(s+t) <= q (omega(s)+omega(t)) + C_q`` for all
    ``q > q0`` has ``gamma >= log 2 / (log 2 + log q0)``; the threshold
    ``q0 = 1/2`` forces the infinite index.
    """

    q0: float
    bound: float

    def to_json_dict(self) -> dict[str, Any]:
        return {"q0": self.q0,
                "bound": "inf" if math.isinf(self.bound)
                else float(fmt_float(self.bound))}


def lemma_bound(q0: float) -> BoundReport:
    if q0 < 0.5:
        raise ParameterError(
            "q0 below 1/2 contradicts monotonicity: it would force "
            "omega(2t) < omega(t) in the limit")
    if q0 == 0.5:
        return BoundReport(0.5, math.inf)
    return BoundReport(float(q0),
                       math.log(2.0) / (math.log(2.0) + math.log(q0)))


@dataclass(frozen=True)
class Interval:
    """Open interval ``(0, upper)``; ``empty`` when no exponent works."""

    upper: float
    empty: bool = False

    def __contains__(self, a: float) -> bool:
        return (not self.empty) and 0.0 < a < self.upper

    def to_json_dict(self) -> dict[str, Any]:
        if self.empty:
            return {"empty": True}
        return {"lower": 0.0,
                "upper": "inf" if math.isinf(self.upper)
                else float(fmt_float(self.upper))}


def interval_I_omega(gamma: float, q0: float = 1.0) -> Interval:
    """Exponent range whose argument powers admit no equivalent weight
    with the (generalized) almost subadditivity property.

    ``(0, gamma^-1)`` for the plain case, shrunk by the factor
    ``1/(1 + log(q0)/log 2)`` in the generalized one; the conventions
    are ``(0, oo)`` for index zero and empty for the infinite index.
    """
    if gamma < 0.0:
        raise ParameterError("index must be non-negative")
    if q0 < 0.5:
        raise ParameterError(
            "q0 below 1/2 contradicts monotonicity: it would force "
            "omega(2t) < omega(t) in the limit")
    if math.isinf(gamma):
        return Interval(0.0, empty=True)
    if gamma == 0.0 or q0 == 0.5:
        return Interval(math.inf)
    factor = 1.0 / (1.0 + math.log(q0) / math.log(2.0))
    return Interval(factor / gamma)


def estimate_gamma_M_upper(seq: BlockSequence,
                           ell_set: Iterable[int] = (2, 3, 4),
                           j_window: tuple[int, int] | Sequence[int]
                           | None = None) -> float:
    """Empirical index upper bound from quotient spreads.

    Returns ``min`` over multipliers of ``log(min_j mu_{lj}/mu_j)/log l``,
    the exponent pattern that caps the sequence index from above.  The
    cap transfers to the weight-function index only when the quotient
    doubling check holds, so that is a precondition here.
    """
    verdict, _ = check_mg(seq)
    if not verdict.holds:
        raise ParameterError(
            "quotient doubling must be bounded before quotient spreads "
            "can cap the index of the weight function")
    rows = probe_gamma_relation(seq, ell_set, j_window)
    return min(row["exponent"] for row in rows)
