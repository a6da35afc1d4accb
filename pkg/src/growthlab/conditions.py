"""Probes for growth and regularity conditions.

Function-level probes sample a weight over a log-spaced window and judge
the quarter-by-quarter trend of the relevant ratio; sequence-level
checks use the exact block aggregates.  The outcomes are tri-state (see
``verdicts``): a finite window can exhibit a violation (Fails, with a
reproducible witness), show a trend stable enough to accept (Holds), or
stay silent (Inconclusive).

Condition identifiers keep the customary short aliases alongside the
behavioural name: (om1) doubling ratio, (om2)/(om5) linear growth,
(om3) log domination, (om4) log-scale convexity, (omnq)/(omsnq) the
tail-integral conditions, (om7) the square-argument bound, and on the
sequence side (mg), (nq), (beta3).
"""

from __future__ import annotations

import math
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (DivergenceError, ParameterError, SequenceIndexError,
                     WeightDomainError)
from .sequences import LOG2, BlockSequence, Family, log_of_int
from .verdicts import (FLAT_FACTOR, GROWTH_FACTOR, Verdict, Window, fails,
                       holds, inconclusive)
from .weights import (WeightFn, kappa_transform)

#: Defects below this are treated as "not meaningfully positive" when a
#: running maximum crosses zero (subadditivity probes).
DEFECT_FLOOR = 1.0


# ---------------------------------------------------------------------------
# quarter-trend machinery


def _quarter_maxima(xs: np.ndarray, vals: np.ndarray
                    ) -> tuple[list[float], list[float]] | None:
    """Maxima of ``vals`` over four equal log-width quarters of ``xs``.

    Returns ``(maxima, arg_positions)`` or None if a quarter is empty.
    """
    edges = np.linspace(float(xs[0]), float(xs[-1]), 5)
    maxima: list[float] = []
    args: list[float] = []
    for k in range(4):
        mask = (xs >= edges[k]) & (xs <= edges[k + 1])
        if not np.any(mask):
            return None
        sub = vals[mask]
        maxima.append(float(np.max(sub)))
        args.append(float(xs[mask][int(np.argmax(sub))]))
    return maxima, args


def _bounded_trend(condition: str, xs: np.ndarray, vals: np.ndarray,
                   window: Window, value_key: str,
                   extra: dict[str, Any] | None = None) -> Verdict:
    """Holds iff the quarter maxima stay flat, Fails iff they grow."""
    got = _quarter_maxima(xs, vals)
    if got is None:
        return inconclusive(condition, stats={"empty_quarter": True},
                            window=window)
    maxima, args = got
    m2, m3, m4 = maxima[1:]
    stats: dict[str, Any] = {"quarter_maxima": maxima}
    if extra:
        stats.update(extra)
    if not math.isfinite(m4):
        return fails(condition, witness={"log_t": args[3], value_key: m4},
                     stats=stats, window=window)
    if m4 <= FLAT_FACTOR * m2 and m3 <= FLAT_FACTOR * m2:
        return holds(condition, stats=stats, window=window,
                     witness={f"tail_{value_key}": m4})
    if m2 < m3 < m4 and m4 >= GROWTH_FACTOR * m2:
        return fails(condition, witness={"log_t": args[3], value_key: m4,
                                         "quarter_maxima": maxima},
                     stats=stats, window=window)
    return inconclusive(condition, stats=stats, window=window)


def _vanishing_trend(condition: str, xs: np.ndarray, vals: np.ndarray,
                     window: Window, value_key: str,
                     threshold: float = 1.0e-2) -> Verdict:
    """Little-o probe: quarter maxima must decrease monotonically and the
    final quarter must fall below ``threshold``."""
    got = _quarter_maxima(xs, vals)
    if got is None:
        return inconclusive(condition, stats={"empty_quarter": True},
                            window=window)
    maxima, args = got
    m1, m2, m3, m4 = maxima
    stats: dict[str, Any] = {"quarter_maxima": maxima,
                             "threshold": threshold}
    decreasing = m2 >= m3 >= m4
    if decreasing and m4 < threshold:
        return holds(condition, stats=stats, window=window,
                     witness={f"tail_{value_key}": m4})
    if m4 >= threshold and m4 >= 0.9 * m2:
        # ratio is not decaying: the little-o claim fails on this window
        return fails(condition, witness={"log_t": args[3], value_key: m4,
                                         "quarter_maxima": maxima},
                     stats=stats, window=window)
    return inconclusive(condition, stats=stats, window=window)


def _valid_ratio(num: np.ndarray, den: np.ndarray
                 ) -> tuple[np.ndarray, int]:
    mask = (den > 0.0) & np.isfinite(den) & np.isfinite(num)
    return mask, int(np.size(mask) - np.count_nonzero(mask))


# ---------------------------------------------------------------------------
# function-level probes


def probe_om1(omega: WeightFn, window: Window) -> tuple[Verdict, float]:
    """Doubling-ratio condition (om1): ``omega(2t) = O(omega(t))``.

    Returns the verdict and ``L_hat``, the largest tail-quarter ratio.
    """
    window.require_span()
    xs = window.grid_log()
    v1 = omega.eval_log_many(xs)
    v2 = omega.eval_log_many(xs + LOG2)
    mask, skipped = _valid_ratio(v2, v1)
    xs_v = xs[mask]
    if xs_v.size < 16:
        return (inconclusive("doubling ratio bounded (om1)",
                             stats={"valid_samples": int(xs_v.size)},
                             window=window), math.nan)
    ratio = v2[mask] / v1[mask]
    verdict = _bounded_trend("doubling ratio bounded (om1)", xs_v, ratio,
                             window, "ratio",
                             extra={"skipped_samples": skipped})
    tail = ratio[xs_v >= xs_v[0] + 0.75 * (xs_v[-1] - xs_v[0])]
    l_hat = float(np.max(tail)) if tail.size else float(ratio[-1])
    verdict.stats["L_hat"] = l_hat
    return verdict, l_hat


def probe_ratio_condition(omega: WeightFn, mode: str,
                          window: Window) -> Verdict:
    """Growth comparisons against ``t``:

    * ``om2``: ``omega(t) = O(t)`` (bounded trend of ``omega(t)/t``);
    * ``om5``: ``omega(t) = o(t)`` (vanishing trend of the same ratio);
    * ``om3``: ``log t = o(omega(t))`` (vanishing trend of
      ``log t / omega(t)``).
    """
    window.require_span()
    xs = window.grid_log()
    vals = omega.eval_log_many(xs)
    if mode == "om2":
        cond = "linear growth bound (om2)"
        mask, skipped = _valid_ratio(vals, np.exp(xs))
        ratio = vals[mask] / np.exp(xs[mask])
        return _bounded_trend(cond, xs[mask], ratio, window, "ratio",
                              extra={"skipped_samples": skipped})
    if mode == "om5":
        cond = "sublinear growth (om5)"
        mask, skipped = _valid_ratio(vals, np.exp(xs))
        return _vanishing_trend(cond, xs[mask],
                                vals[mask] / np.exp(xs[mask]),
                                window, "ratio")
    if mode == "om3":
        cond = "log domination (om3)"
        mask, skipped = _valid_ratio(xs, vals)
        mask &= xs > 0.0
        return _vanishing_trend(cond, xs[mask], xs[mask] / vals[mask],
                                window, "ratio")
    raise ParameterError(f"unknown ratio mode {mode!r}")


def probe_convexity(omega: WeightFn, window: Window) -> Verdict:
    """Midpoint convexity of ``x -> omega(e^x)`` on a uniform grid (om4)."""
    cond = "log-scale convexity (om4)"
    xs = window.grid_log()
    vals = omega.eval_log_many(xs)
    if not np.all(np.isfinite(vals)):
        return inconclusive(cond, stats={"non_finite_samples": True},
                            window=window)
    mid = vals[1:-1]
    avg = 0.5 * (vals[:-2] + vals[2:])
    tol = 1.0e-9 * max(1.0, float(np.max(np.abs(vals))))
    defect = mid - avg
    worst = int(np.argmax(defect))
    stats = {"max_midpoint_defect": float(defect[worst]),
             "tolerance": tol}
    if float(defect[worst]) > tol:
        return fails(cond,
                     witness={"log_t": float(xs[worst + 1]),
                              "midpoint_defect": float(defect[worst])},
                     stats=stats, window=window)
    return holds(cond, stats=stats, window=window)


def probe_omnq(omega: WeightFn) -> Verdict:
    """Tail-integral convergence (omnq): ``integral omega(t)/t^2 < oo``.

    Runs the octave quadrature at ``y = 1``; divergence detection turns
    into Fails with the witness panel.  Weights stored only on a finite
    range can end before the tail settles; that is Inconclusive.
    """
    cond = "tail integral converges (omnq)"
    try:
        kappa = kappa_transform(omega, check=True)
    except DivergenceError as exc:
        return fails(cond,
                     witness={"panel": exc.panel,
                              "growth_ratio": exc.growth_ratio},
                     stats={"reason": str(exc)})
    except WeightDomainError as exc:
        return inconclusive(cond, stats={"reason": str(exc)})
    return holds(cond, stats={"kappa_at_1": kappa.eval_log(0.0)})


def probe_omsnq(omega: WeightFn, window: Window) -> Verdict:
    """Strong tail-integral domination (omsnq):
    ``kappa(y) <= C omega(y) + C`` for some C on the tail.

    The smallest admissible constant at each sample is
    ``kappa(y) / (1 + omega(y))``; Holds when that profile stabilizes.
    """
    cond = "integral transform domination (omsnq)"
    window.require_span()
    try:
        kappa = kappa_transform(omega, check=True)
    except DivergenceError as exc:
        return fails(cond,
                     witness={"panel": exc.panel,
                              "growth_ratio": exc.growth_ratio},
                     stats={"reason": str(exc)}, window=window)
    except WeightDomainError as exc:
        return inconclusive(cond, stats={"reason": str(exc)}, window=window)
    xs = window.grid_log(96)  # each sample costs one tail integral
    try:
        kv = np.array([kappa.eval_log(float(x)) for x in xs])
    except WeightDomainError as exc:
        return inconclusive(cond, stats={"reason": str(exc)}, window=window)
    wv = omega.eval_log_many(xs)
    c_needed = kv / (1.0 + wv)
    verdict = _bounded_trend(cond, xs, c_needed, window, "constant")
    verdict.stats["C_hat"] = float(c_needed[-1])
    return verdict


#: Split fractions for pair sampling: the diagonal plus asymmetric splits.
_PAIR_FRACS = np.concatenate([np.geomspace(1.0e-4, 0.5, 33)[:-1], [0.5]])


def _defect_trace(omega: WeightFn, q: float, window: Window,
                  levels_per_decade: int = 8
                  ) -> tuple[list[float], list[float], dict[str, Any]]:
    """Running maximum of ``omega(s+t) - q(omega(s)+omega(t))`` over
    pairs with ``s + t <= T``, tracked at decade marks of ``T``.

    Pairs are sampled at ``levels_per_decade`` sum levels per decade; at
    each sum level the diagonal and 32 asymmetric log-spaced splits are
    probed.  Returns (decade marks in log10, running maxima, best pair).
    """
    lg_lo = math.log10(window.t_min)
    lg_hi = math.log10(window.t_max)
    marks = [float(m) for m in
             np.arange(math.ceil(lg_lo), math.floor(lg_hi) + 1)]
    if len(marks) < 4:
        raise ParameterError("defect trace needs at least 4 decades")
    log_fracs = np.log(_PAIR_FRACS)
    log_cofracs = np.log(1.0 - _PAIR_FRACS)
    running = -math.inf
    trace: list[float] = []
    best: dict[str, Any] = {}
    prev_mark = lg_lo
    for mark in marks:
        sums = np.linspace(prev_mark, mark,
                           max(2, levels_per_decade)) * math.log(10.0)
        for x_sum in sums:
            w_sum = omega.eval_log(float(x_sum))
            w_s = omega.eval_log_many(x_sum + log_fracs)
            w_t = omega.eval_log_many(x_sum + log_cofracs)
            defects = w_sum - q * (w_s + w_t)
            i = int(np.argmax(defects))
            if float(defects[i]) > running:
                running = float(defects[i])
                best = {"log_s": float(x_sum + log_fracs[i]),
                        "log_t": float(x_sum + log_cofracs[i]),
                        "log_sum": float(x_sum),
                        "defect": running, "q": q}
        trace.append(running)
        prev_mark = mark
    return marks, trace, best


def _doubling_steps(trace: Sequence[float]) -> list[int]:
    """Decade steps where the running defect maximum doubles (or first
    crosses from non-positive to meaningfully positive)."""
    steps = []
    for i in range(1, len(trace)):
        a, b = trace[i - 1], trace[i]
        if a > 0.0 and b >= 2.0 * a:
            steps.append(i)
        elif a <= 0.0 and b > DEFECT_FLOOR:
            steps.append(i)
    return steps


def probe_subadditivity(omega: WeightFn, q: float,
                        window: Window) -> Verdict:
    """Defect probe for ``omega(s+t) <= q (omega(s) + omega(t)) + C``.

    Tracks ``W(T) = max_{s+t<=T} omega(s+t) - q(omega(s)+omega(t))``
    across decades.  ``W`` staying non-positive, or positive but flat,
    is Holds; ``W`` doubling across at least three decade steps with the
    growth still active near the window end is Fails.
    """
    if q < 0.5:
        raise ParameterError(
            "defect parameter q below 1/2 is vacuous: a non-decreasing "
            "weight always satisfies omega(2t) >= omega(t), so such a "
            "bound would force omega to be bounded")
    cond = f"subadditivity defect bounded (q={q:g})"
    window.require_span()
    marks, trace, best = _defect_trace(omega, q, window)
    steps = _doubling_steps(trace)
    stats: dict[str, Any] = {"decade_log10": marks,
                             "running_max": trace,
                             "doubling_steps": steps,
                             "q": q}
    w_end = trace[-1]
    if w_end <= DEFECT_FLOOR:
        # never meaningfully positive: the bounded-constant slack of the
        # property absorbs anything at this resolution
        return holds(cond, stats=stats, window=window,
                     witness={"final_defect": w_end})
    late = [s for s in steps if s >= len(trace) - 3]
    if len(steps) >= 3 and late:
        return fails(cond, witness=best, stats=stats, window=window)
    # positive but no longer growing: bounded evidence if the last three
    # decades stay within the flat factor
    tail = trace[-4:]
    if len(tail) == 4 and tail[0] > 0.0 and tail[-1] <= FLAT_FACTOR * tail[0]:
        return holds(cond, stats=stats, window=window,
                     witness={"final_defect": w_end})
    return inconclusive(cond, stats=stats, window=window)


def falsify_almost_subadditivity(omega: WeightFn, q_list: Iterable[float],
                                 window: Window) -> Verdict:
    """Almost subadditivity requires bounded defects for every ``q > 1``;
    a single ``q`` with diverging defect disproves it.

    Fails = disproved (with the diverging q's witness); Holds = every
    probed q showed bounded defects; otherwise Inconclusive.
    """
    cond = "almost subadditivity"
    q_list = list(q_list)
    if not q_list or any(q <= 1.0 for q in q_list):
        raise ParameterError("falsification probes need q values > 1")
    sub_stats: dict[str, Any] = {}
    all_bounded = True
    for q in q_list:
        verdict = probe_subadditivity(omega, q, window)
        sub_stats[f"q={q:g}"] = {
            "state": verdict.state.value,
            "running_max": verdict.stats["running_max"],
            "doubling_steps": verdict.stats["doubling_steps"],
        }
        if verdict.fails:
            return fails(cond, witness=dict(verdict.witness),
                         stats=sub_stats, window=window)
        all_bounded = all_bounded and verdict.holds
    if all_bounded:
        return holds(cond, stats=sub_stats, window=window)
    return inconclusive(cond, stats=sub_stats, window=window)


def probe_square_condition(omega: WeightFn, window: Window) -> Verdict:
    """Square-argument bound (om7): ``omega(t^2) <= C omega(t) + C``.

    Holds certifies an infinite growth index (the doubling chain
    ``t -> t^2`` absorbs every power of ``t``).
    """
    cond = "square-argument bound (om7)"
    window.require_span()
    xs = window.grid_log()
    v1 = omega.eval_log_many(xs)
    v2 = omega.eval_log_many(2.0 * xs)
    c_needed = v2 / (1.0 + v1)
    verdict = _bounded_trend(cond, xs, c_needed, window, "constant")
    verdict.stats["C_hat"] = float(c_needed[-1])
    return verdict


# ---------------------------------------------------------------------------
# sequence-level checks

SQRT2 = math.sqrt(2.0)


def check_mg(seq: BlockSequence, k_hi: int | None = None
             ) -> tuple[Verdict, float]:
    """Quotient doubling bound (mg): ``sup_k mu_{2k}/mu_k < oo``.

    The sup over each index range is exact (block extrema); the verdict
    compares three geometric segments of the range, so growth that would
    push the sup to infinity shows up as segment-to-segment increase.
    """
    cond = "quotient doubling bounded (mg)"
    if seq.empty:
        return inconclusive(cond, stats={"reason": "empty sequence"}), \
            math.nan
    k_hi = seq.k_max // 2 if k_hi is None else min(k_hi, seq.k_max // 2)
    if k_hi < 1:
        return inconclusive(cond, stats={"reason": "no index pairs"}), \
            math.nan
    log_sup, k_witness = seq.quotient_ratio_extrema(2, 1, k_hi)
    sup_ratio = math.exp(log_sup)
    # geometric thirds of the index range
    cuts = [1, max(2, _int_root(k_hi, 3)),
            max(3, _int_root(k_hi * k_hi, 3)), k_hi]
    seg_sups = []
    for lo, hi in zip(cuts, cuts[1:]):
        if lo <= hi:
            val, _ = seq.quotient_ratio_extrema(2, lo, hi)
            seg_sups.append(math.exp(val))
    stats = {"sup_ratio": sup_ratio, "witness_k": k_witness,
             "segment_sups": seg_sups}
    if len(seg_sups) == 3 and seg_sups[2] > FLAT_FACTOR * max(seg_sups[:2]):
        return fails(cond, witness={"k": k_witness, "ratio": sup_ratio,
                                    "segment_sups": seg_sups},
                     stats=stats), sup_ratio
    return holds(cond, stats=stats), sup_ratio


def _int_root(n: int, r: int) -> int:
    """Integer ``floor(n**(1/r))`` without float overflow."""
    if n < 2:
        return n
    k = int(round(n ** (1.0 / r))) if n.bit_length() < 500 else \
        1 << (n.bit_length() // r)
    while k ** r > n:
        k -= 1
    while (k + 1) ** r <= n:
        k += 1
    return k


def check_nq(seq: BlockSequence, k_hi: int | None = None
             ) -> tuple[Verdict, float]:
    """Reciprocal-sum condition (nq): ``sum_k 1/mu_k < oo``.

    Uses family structure for the full-range answer:

    * the summable staircase closes the tail analytically (the level
      bounds ``2^-j/(A-2) + 2^-(j+1)/2 / (2 - sqrt 2)`` sum geometrically),
    * formula sequences compare against the integral tail,
    * the quasianalytic staircases carry per-level lower bounds whose
      series diverge.
    """
    cond = "reciprocal sum converges (nq)"
    if seq.empty:
        return inconclusive(cond, stats={"reason": "empty sequence"}), 0.0
    k_hi = seq.k_max if k_hi is None else min(k_hi, seq.k_max)
    partial = seq.reciprocal_sum(k_hi)
    fam = seq.family
    if fam is Family.NON_QUASIANALYTIC:
        A = float(seq.params["A"])
        j_next = len(seq.checkpoints) + 1
        # levels j >= j_next contribute at most
        # 2^-j/(A-2) + 2^-(j+1)/2/(2-sqrt(2)) each; geometric closure
        tail = (2.0 ** (1 - j_next) / (A - 2.0)
                + 2.0 ** (-(j_next - 1) / 2.0) / (2.0 - SQRT2))
        bound = A / (2.0 * (A - 2.0)) + 0.5 / (SQRT2 - 1.0)
        stats = {"partial_sum": partial, "tail_bound": tail,
                 "closed_form_bound": bound}
        if partial + tail <= bound + 1.0e-9:
            return holds(cond, stats=stats), partial
        return inconclusive(cond, stats=stats), partial
    if fam is Family.GEVREY:
        s = float(seq.params["s"])
        if s > 1.0:
            tail = float(seq.k_max) ** (1.0 - s) / (s - 1.0)
            return holds(cond, stats={"partial_sum": partial,
                                      "tail_bound": tail}), partial
        # s <= 1: the halved range keeps a fixed share of the sum, the
        # signature of divergence (log or power growth)
        half = seq.reciprocal_sum(max(1, seq.k_max // 2))
        growth = partial - half
        return fails(cond,
                     witness={"k": seq.k_max, "partial_sum": partial,
                              "second_half_share": growth},
                     stats={"partial_sum": partial}), partial
    # quasianalytic staircases: per-level ladder sums admit closed lower
    # bounds forming divergent series
    level_bounds = _qa_level_lower_bounds(seq)
    stats = {"partial_sum": partial, "level_lower_bounds": level_bounds}
    last = seq.checkpoints[-1]
    return fails(cond,
                 witness={"k": last.ladder_end,
                          "level": last.level,
                          "level_lower_bound": level_bounds[-1],
                          "partial_sum": partial},
                 stats=stats), partial


def _qa_level_lower_bounds(seq: BlockSequence) -> list[float]:
    """Closed-form lower bounds for each level's reciprocal contribution
    (ladder range for the vanishing case, ramp range otherwise)."""
    out: list[float] = []
    for cp in seq.checkpoints:
        if seq.family is Family.QA_VANISHING:
            out.append(1.0 / float(seq.params["A"]))
        else:
            # ramp range: mu_{b_j}/b_j bounded by c_j sqrt(2) powers
            j = cp.level
            if j == 1:
                out.append(0.0)
            else:
                out.append((1.0 / (SQRT2 - 1.0))
                           / (j * math.log(j + 1.0)))
    return out


def check_beta3(seq: BlockSequence, Q: int,
                j_window: tuple[int, int] | None = None
                ) -> tuple[Verdict, float]:
    """Quotient-spread condition (beta3): ``inf_j mu_{Qj}/mu_j > 1``
    over the given index window (exact block extrema)."""
    cond = f"quotient spread exceeds one (beta3, Q={Q})"
    if seq.empty:
        return inconclusive(cond, stats={"reason": "empty sequence"}), \
            math.nan
    if Q < 2:
        raise ParameterError("spread factor Q must be >= 2")
    j_lo, j_hi = j_window if j_window else (1, seq.k_max // Q)
    log_inf, j_witness = seq.quotient_ratio_extrema(Q, j_lo, j_hi,
                                                    minimize=True)
    inf_ratio = math.exp(log_inf)
    stats = {"inf_ratio": inf_ratio, "witness_j": j_witness,
             "window": [j_lo, j_hi]}
    if inf_ratio > 1.0 + 1.0e-12:
        return holds(cond, stats=stats), inf_ratio
    return fails(cond, witness={"j": j_witness, "ratio": inf_ratio},
                 stats=stats), inf_ratio


def probe_gamma_relation(seq: BlockSequence, ell_set: Iterable[int],
                         j_window: tuple[int, int] | Sequence[int]
                         | None = None) -> list[dict[str, Any]]:
    """Per-multiplier spread table: the smallest ``mu_{l j}/mu_j`` over
    the window and the exponent ``log(min ratio)/log l`` it witnesses.

    ``j_window`` is either an inclusive index range ``(lo, hi)`` or an
    explicit list of probe indices (a checkpoint subsequence, say).  The
    smallest exponent over a multiplier set upper-bounds the growth
    index of the sequence (see ``indices.estimate_gamma_M_upper``).
    """
    points: list[int] | None = None
    if j_window is not None and not (isinstance(j_window, tuple)
                                     and len(j_window) == 2):
        points = sorted(int(j) for j in j_window)
        if not points or points[0] < 1:
            raise ParameterError("probe indices must be positive")
    rows: list[dict[str, Any]] = []
    for ell in sorted(set(int(e) for e in ell_set)):
        if ell < 2:
            raise ParameterError("multipliers must be >= 2")
        if points is not None:
            if points[-1] * ell > seq.k_max:
                raise SequenceIndexError(
                    f"probe index {points[-1]} leaves the stored range "
                    f"under multiplier {ell}")
            log_min, j_witness = min(
                (seq.quotient_log_ratio(ell, j), j) for j in points)
        else:
            j_lo, j_hi = j_window if j_window else (1, seq.k_max // ell)
            log_min, j_witness = seq.quotient_ratio_extrema(
                ell, j_lo, j_hi, minimize=True)
        rows.append({"ell": ell,
                     "min_ratio": math.exp(log_min),
                     "exponent": log_min / math.log(ell),
                     "witness_j": j_witness})
    return rows


def mu_over_k_profile(seq: BlockSequence, checkpoints_only: bool = True
                      ) -> tuple[list[dict[str, Any]], Verdict]:
    """Trend of ``mu_k / k`` at the staircase checkpoints.

    Classifies the limit behaviour from least-squares slopes of
    ``log(mu/k)`` against the level, separately at ladder starts and
    ladder ends: both negative means vanishing, both positive means
    diverging, opposite signs mean oscillation.
    """
    cond = "quotient-over-index trend"
    if not seq.checkpoints:
        return [], inconclusive(cond,
                                stats={"reason": "no checkpoint structure"})
    rows: list[dict[str, Any]] = []
    start_vals: list[float] = []
    end_vals: list[float] = []
    for cp in seq.checkpoints:
        r_start = cp.log_mu_start - log_of_int(cp.ladder_start)
        r_end = cp.log_mu_end - log_of_int(cp.ladder_end)
        rows.append({"level": cp.level,
                     "index_start": cp.ladder_start,
                     "log_ratio_start": r_start,
                     "index_end": cp.ladder_end,
                     "log_ratio_end": r_end})
        start_vals.append(r_start)
        end_vals.append(r_end)
    if not checkpoints_only:
        for b in seq.blocks:
            rows.append({"level": None, "index_start": b.start,
                         "log_ratio_start":
                             b.first_log_mu - log_of_int(b.start),
                         "index_end": b.end - 1,
                         "log_ratio_end":
                             b.last_log_mu - log_of_int(b.end - 1)})
    # the first level reflects seeding, not the asymptotic rule
    levels = np.array([cp.level for cp in seq.checkpoints], dtype=float)
    if levels.size < 4:
        return rows, inconclusive(cond,
                                  stats={"reason": "need 4 levels"})
    sl_start = _ols_slope(levels[1:], np.array(start_vals)[1:])
    sl_end = _ols_slope(levels[1:], np.array(end_vals)[1:])
    stats: dict[str, Any] = {"slope_at_starts": sl_start,
                             "slope_at_ends": sl_end}
    if sl_start <= -0.05 and sl_end <= -0.05:
        cls = "vanishing"
    elif sl_start >= 0.05 and sl_end >= 0.05:
        cls = "diverging"
    elif sl_start <= -0.05 and sl_end >= 0.05:
        cls = "oscillating"
    else:
        cls = "inconclusive"
    stats["classification"] = cls
    if cls == "inconclusive":
        return rows, inconclusive(cond, stats=stats)
    return rows, holds(cond, stats=stats)


def _ols_slope(x: np.ndarray, y: np.ndarray) -> float:
    x_c = x - x.mean()
    return float(np.dot(x_c, y - y.mean()) / np.dot(x_c, x_c))
