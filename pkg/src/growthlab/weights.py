"""Weight functions, their transforms, and the equivalence comparator.

A weight function here is a non-decreasing map ``omega: [0, oo) -> [0, oo)``
with ``omega(t) -> oo``.  Everything evaluates through the log-argument
``x = log t`` (``eval_log``), which is the only way to reach the staircase
sequences' checkpoints at ``t ~ exp(700)`` and beyond; the plain-argument
``eval`` is a convenience capped at ``t <= 1e300``.

Provided weights:

* ``power_weight(s)``:  ``t**(1/s)``, growth index ``s``.
* ``log_power(s)``:     ``max(0, log t)**s`` for ``s > 1``, index ``+oo``.
* ``exp_log_square()``: ``exp(log^2 t)`` for ``t >= 1``, index ``0``.
* ``associated(seq)``:  the sequence transform
  ``omega_M(t) = sup_j log(t^j / M_j)``, computed through the counting
  form ``n(t) log t - sum_{mu_k <= t} log mu_k``.
* ``power_compose(w, a)``: argument power ``t -> w(t**(1/a))``.
* ``scale(w, c, d)``:   ``c*w + d``.
* ``kappa_transform(w)``: ``y -> integral_1^oo w(y t) / t^2 dt``.

The kappa integral is evaluated octave by octave with 16-point
Gauss-Legendre panels after ``t = e^u``; once panel values decay
geometrically the remainder is closed with the observed ratio, which is
exact for power-law integrands and conservative for anything decaying
faster.  Non-decaying panels raise ``DivergenceError`` with the witness
panel and growth ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.special import gammaln

from .errors import (DivergenceError, ParameterError, WeightDomainError)
from .sequences import LOG2, BlockKind, BlockSequence
from .verdicts import (FLAT_FACTOR, GROWTH_FACTOR, Verdict, Window, fails,
                       fmt_float, holds, inconclusive)

#: plain-argument evaluation cap; beyond this use eval_log directly
PLAIN_ARG_MAX = 1.0e300

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class WeightFn:
    """Base weight function; subclasses implement ``eval_log``."""

    name: str = "weight"
    #: weights vanishing on [0, 1]
    normalized: bool = True
    #: largest admissible log-argument (None: unbounded)
    domain_log_max: float | None = None

    def eval_log(self, x: float) -> float:
        """``omega(exp(x))``; ``x = -inf`` gives ``omega(0)``."""
        raise NotImplementedError

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.eval_log(float(x)) for x in np.asarray(xs)])

    def eval(self, t: float) -> float:
        if t < 0.0:
            raise WeightDomainError("weight arguments are non-negative")
        if t > PLAIN_ARG_MAX:
            raise WeightDomainError(
                f"plain argument {t!r} exceeds {PLAIN_ARG_MAX:.0e}; use "
                "eval_log")
        x = math.log(t) if t > 0.0 else -math.inf
        return self.eval_log(x)

    def _check_domain(self, x_max: float) -> None:
        if self.domain_log_max is not None and x_max > self.domain_log_max:
            raise WeightDomainError(
                f"log-argument {x_max:.6g} beyond the stored range "
                f"(max {self.domain_log_max:.6g}) of {self.name}")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<WeightFn {self.name}>"


class PowerWeight(WeightFn):
    """``t**(1/s)``; the index parameter is the growth index itself."""

    def __init__(self, s: float) -> None:
        if s <= 0.0:
            raise ParameterError("power weight index must be positive")
        self.s = float(s)
        self.name = f"power:{s:g}"
        self.normalized = False

    def eval_log(self, x: float) -> float:
        if x == -math.inf:
            return 0.0
        return math.exp(x / self.s)

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        return np.exp(xs / self.s)


class LogPower(WeightFn):
    """``max(0, log t)**s`` with ``s > 1`` (so that ``log t = o(omega)``)."""

    def __init__(self, s: float) -> None:
        if s <= 1.0:
            raise ParameterError("log-power exponent must exceed 1")
        self.s = float(s)
        self.name = f"logpow:{s:g}"

    def eval_log(self, x: float) -> float:
        return max(0.0, x) ** self.s

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        return np.maximum(0.0, xs) ** self.s


class ExpLogSquare(WeightFn):
    """``exp(log^2 t)`` for ``t >= 1``: doubling ratios are unbounded,
    so no positive growth index is ever confirmed."""

    name = "explogsq"

    def eval_log(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        z = x * x
        return math.inf if z > 709.0 else math.exp(z)

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        z = np.where(xs > 0.0, xs, 0.0) ** 2
        with np.errstate(over="ignore"):
            out = np.exp(z)
        return np.where(xs > 0.0, out, 0.0)


class AssociatedWeight(WeightFn):
    """Sequence transform ``omega_M`` of a block sequence.

    For log-convex normalized ``M`` the supremum form equals the
    counting form ``n(t) log t - sum_{mu_k <= t} log mu_k``, which the
    block prefix sums give in closed form.  The scalar path is exact;
    the vectorised path recomputes the same quantities in float64.

    Valid up to the largest stored quotient; beyond it the finite
    sequence no longer determines the transform and evaluation raises.
    """

    def __init__(self, seq: BlockSequence) -> None:
        if seq.empty:
            raise ParameterError("cannot form the transform of an empty "
                                 "sequence")
        self.seq = seq
        self.name = f"assoc:{seq.family.value}"
        self.domain_log_max = seq.max_log_mu

    def eval_log(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        self._check_domain(x)
        n, logsum = self.seq.counting_prefix(x)
        return float(n) * x - logsum

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.size == 0:
            return np.zeros(0)
        self._check_domain(float(np.max(xs)))
        tab = self.seq.vector_tables()
        idx = np.searchsorted(tab["first_log"], xs, side="right") - 1
        inside = idx >= 0
        i = np.where(inside, idx, 0)
        # within-block count of quotients <= t
        with np.errstate(divide="ignore", invalid="ignore"):
            c_geo = np.floor((xs - tab["lms"][i]) / tab["lr"][i]) + 1.0
        c_const = np.where(xs >= tab["lms"][i], tab["count"][i], 0.0)
        c = np.where(tab["lr"][i] > 0.0, c_geo, c_const)
        if bool(np.any(tab["is_power"])):
            p = np.array([b.power if b.kind is BlockKind.POWER else 1.0
                          for b in self.seq.blocks])
            c_pow = np.floor(np.exp(xs / p[i])) - tab["start"][i] + 1.0
            c = np.where(tab["is_power"][i], c_pow, c)
        c = np.clip(c, 0.0, tab["count"][i])
        n = tab["start"][i] - 1.0 + c
        # prefix log-sum: whole blocks below, plus the partial block
        part_aff = c * tab["lms"][i] + tab["lr"][i] * c * (c - 1.0) / 2.0
        if bool(np.any(tab["is_power"])):
            last = tab["start"][i] + c - 1.0
            part_pow = p[i] * (gammaln(last + 1.0)
                               - gammaln(tab["start"][i]))
            part = np.where(tab["is_power"][i], part_pow, part_aff)
        else:
            part = part_aff
        omega = n * xs - (tab["cum_log"][i] + part)
        return np.where(inside & (xs > 0.0), omega, 0.0)


class PowerComposedWeight(WeightFn):
    """Argument power ``t -> base(t**(1/a))``; index scales by ``a``."""

    def __init__(self, base: WeightFn, a: float) -> None:
        if a <= 0.0:
            raise ParameterError("argument-power parameter must be positive")
        self.base = base
        self.a = float(a)
        self.name = f"powcomp:{base.name}:{a:g}"
        self.normalized = base.normalized
        if base.domain_log_max is not None:
            self.domain_log_max = base.domain_log_max * self.a

    def eval_log(self, x: float) -> float:
        return self.base.eval_log(x / self.a)

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        return self.base.eval_log_many(np.asarray(xs, dtype=np.float64)
                                       / self.a)


class ScaledWeight(WeightFn):
    """``c * base + d`` with ``c > 0``, ``d >= 0``."""

    def __init__(self, base: WeightFn, scale: float = 1.0,
                 shift: float = 0.0) -> None:
        if scale <= 0.0 or shift < 0.0:
            raise ParameterError("need scale > 0 and shift >= 0")
        self.base = base
        self.scale = float(scale)
        self.shift = float(shift)
        self.name = f"scaled:{base.name}:{scale:g}:{shift:g}"
        self.normalized = base.normalized and shift == 0.0
        self.domain_log_max = base.domain_log_max

    def eval_log(self, x: float) -> float:
        return self.scale * self.base.eval_log(x) + self.shift

    def eval_log_many(self, xs: np.ndarray) -> np.ndarray:
        return self.scale * self.base.eval_log_many(xs) + self.shift


# ---------------------------------------------------------------------------
# kappa transform


@dataclass(frozen=True)
class QuadratureParams:
    """Octave-panel quadrature controls for the kappa integral."""

    rel_tol: float = 1.0e-9
    max_panels: int = 2000
    #: consecutive non-decaying panels before divergence is declared
    flat_run: int = 12
    #: panel ratio treated as non-decaying
    flat_ratio: float = 0.999

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1.0e-2):
            raise ParameterError("rel_tol out of range")
        if self.max_panels < 16 or self.flat_run < 4:
            raise ParameterError("panel limits too small")


class KappaWeight(WeightFn):
    """``y -> integral_1^oo base(y t) / t^2 dt``.

    Substituting ``t = e^u`` turns octave ``[2^m, 2^(m+1)]`` into a
    fixed-width panel of ``base(y e^u) e^-u``, integrated with 16-point
    Gauss-Legendre.  Panels are accumulated until they decay below
    ``rel_tol`` of the running total, then the remainder is closed
    geometrically with the last observed decay ratio (exact whenever
    ``base`` is asymptotically a power law, the only inputs for which
    the integral has a closed form here).
    """

    def __init__(self, base: WeightFn,
                 quadrature: QuadratureParams | None = None) -> None:
        self.base = base
        self.quadrature = quadrature or QuadratureParams()
        self.name = f"kappa:{base.name}"
        self.normalized = False
        self._cache: dict[float, float] = {}

    def _panel(self, y_log: float, m: int) -> float:
        u0 = m * LOG2
        half = 0.5 * LOG2
        us = (u0 + half) + half * _GL_NODES
        vals = self.base.eval_log_many(y_log + us) * np.exp(-us)
        return half * float(np.dot(_GL_WEIGHTS, vals))

    def eval_log(self, x: float) -> float:
        if x == -math.inf:
            return self.base.eval_log(-math.inf)
        got = self._cache.get(x)
        if got is not None:
            return got
        qp = self.quadrature
        dmax = self.base.domain_log_max
        total = 0.0
        prev = math.nan
        ratio = math.nan
        flat = 0
        for m in range(qp.max_panels):
            if dmax is not None and x + (m + 1) * LOG2 > dmax:
                # domain edge: close the tail if panels already decay
                if ratio == ratio and ratio < 0.95 and total > 0.0:
                    total += prev * ratio / (1.0 - ratio)
                    break
                raise WeightDomainError(
                    f"stored range of {self.base.name} ends before the "
                    f"tail integral settles (panel {m})")
            cur = self._panel(x, m)
            total += cur
            if prev == prev and prev > 0.0:
                ratio = cur / prev
                if ratio >= qp.flat_ratio and cur > 1e-8 * total:
                    flat += 1
                    if flat >= qp.flat_run:
                        raise DivergenceError(
                            f"integrand of {self.name} shows no decay "
                            f"over {flat} consecutive octaves",
                            panel=m, growth_ratio=ratio)
                else:
                    flat = 0
                if (cur < qp.rel_tol * max(total, 1e-300)
                        and ratio < 0.95):
                    total += cur * ratio / (1.0 - ratio)
                    break
            prev = cur
        else:
            raise DivergenceError(
                f"{self.name} did not converge within "
                f"{qp.max_panels} octaves", panel=qp.max_panels,
                growth_ratio=ratio)
        self._cache[x] = total
        return total


def kappa_transform(base: WeightFn,
                    quadrature: QuadratureParams | None = None,
                    check: bool = True) -> KappaWeight:
    """Integral transform with eager divergence detection at ``y = 1``."""
    out = KappaWeight(base, quadrature)
    if check:
        out.eval_log(0.0)  # raises DivergenceError on non-decaying tails
    return out


# ---------------------------------------------------------------------------
# factories


def power_weight(s: float) -> PowerWeight:
    return PowerWeight(s)


def log_power(s: float) -> LogPower:
    return LogPower(s)


def exp_log_square() -> ExpLogSquare:
    return ExpLogSquare()


def associated(seq: BlockSequence) -> AssociatedWeight:
    """Weight function of a sequence (log-convexity is a construction
    invariant of ``BlockSequence``, so only emptiness can fail here)."""
    return AssociatedWeight(seq)


def power_compose(base: WeightFn, a: float) -> WeightFn:
    if a == 1.0:
        return base
    return PowerComposedWeight(base, a)


def scale(base: WeightFn, c: float = 1.0, d: float = 0.0) -> ScaledWeight:
    return ScaledWeight(base, c, d)


# ---------------------------------------------------------------------------
# spec mini-grammar


def parse_weight(spec: str,
                 load_sequence: Callable[[str], BlockSequence] | None = None
                 ) -> WeightFn:
    """Build a weight from a compact textual spec.

    Grammar: ``power:<s>`` | ``logpow:<s>`` | ``explogsq`` |
    ``assoc:<path>`` | ``powcomp:<spec>:<a>`` | ``kappa:<spec>``;
    the composite forms nest arbitrarily.
    """
    spec = spec.strip()
    if spec == "explogsq":
        return exp_log_square()
    head, _, rest = spec.partition(":")
    if not rest:
        raise ParameterError(f"malformed weight spec {spec!r}")
    if head == "power":
        return power_weight(_parse_positive(rest, spec))
    if head == "logpow":
        return log_power(_parse_positive(rest, spec))
    if head == "assoc":
        if load_sequence is None:
            raise ParameterError("assoc: specs need a sequence loader")
        return associated(load_sequence(rest))
    if head == "powcomp":
        inner, _, a_text = rest.rpartition(":")
        if not inner:
            raise ParameterError(f"malformed weight spec {spec!r}")
        return power_compose(parse_weight(inner, load_sequence),
                             _parse_positive(a_text, spec))
    if head == "kappa":
        return kappa_transform(parse_weight(rest, load_sequence))
    raise ParameterError(f"unknown weight spec {spec!r}")


def _parse_positive(text: str, spec: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ParameterError(f"bad number {text!r} in weight spec "
                             f"{spec!r}") from exc
    if value <= 0.0 or not math.isfinite(value):
        raise ParameterError(f"parameter in {spec!r} must be positive")
    return value


# ---------------------------------------------------------------------------
# comparison


@dataclass
class ComparisonReport:
    """Tail-ratio comparison of two weights over a log window.

    ``ratio_inf``/``ratio_sup`` are extrema of ``tau/sigma`` over the
    final quarter of the window.  Each direction verdict follows the
    quarter-maxima trend: bounded-and-flat across the last three
    quarters gives Holds, strictly growing by at least a factor two
    gives Fails, anything else is Inconclusive.
    """

    sigma_name: str
    tau_name: str
    window: Window
    ratio_inf: float
    ratio_sup: float
    tau_bounded_by_sigma: Verdict
    sigma_bounded_by_tau: Verdict
    equivalent: Verdict
    skipped_samples: int = 0

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "sigma": self.sigma_name,
            "tau": self.tau_name,
            "window": self.window.to_json_dict(),
            "ratio_inf": fmt_float(self.ratio_inf),
            "ratio_sup": fmt_float(self.ratio_sup),
            "tau_bounded_by_sigma": self.tau_bounded_by_sigma.to_json_dict(),
            "sigma_bounded_by_tau": self.sigma_bounded_by_tau.to_json_dict(),
            "equivalent": self.equivalent.to_json_dict(),
            "skipped_samples": self.skipped_samples,
        }


def _direction_verdict(condition: str, xs: np.ndarray, ratio: np.ndarray,
                       window: Window) -> Verdict:
    """Verdict for ``ratio = tau/sigma`` staying bounded on the tail."""
    lo, hi = float(xs[0]), float(xs[-1])
    edges = np.linspace(lo, hi, 5)
    maxima: list[float] = []
    arg: list[float] = []
    for k in range(4):
        mask = (xs >= edges[k]) & (xs <= edges[k + 1])
        if not np.any(mask):
            return inconclusive(condition,
                               stats={"empty_quarter": k + 1},
                               window=window)
        sub = ratio[mask]
        maxima.append(float(np.max(sub)))
        arg.append(float(xs[mask][int(np.argmax(sub))]))
    m2, m3, m4 = maxima[1:]
    stats = {"quarter_maxima": maxima}
    if not math.isfinite(m4):
        return fails(condition,
                     witness={"log_t": arg[3], "ratio": maxima[3]},
                     stats=stats, window=window)
    if m4 <= FLAT_FACTOR * m2 and m3 <= FLAT_FACTOR * m2:
        return holds(condition, stats=stats, window=window,
                     witness={"tail_ratio_max": m4})
    if m2 < m3 < m4 and m4 >= GROWTH_FACTOR * m2:
        return fails(condition,
                     witness={"log_t": arg[3], "ratio": m4,
                              "quarter_maxima": maxima},
                     stats=stats, window=window)
    return inconclusive(condition, stats=stats, window=window)


def compare(sigma: WeightFn, tau: WeightFn, window: Window
            ) -> ComparisonReport:
    """Tail comparison ``tau`` against ``sigma`` (both directions)."""
    if window.t_min < 1.0:
        raise ParameterError("comparison windows start at t >= 1")
    window.require_span()
    if window.samples < 64:
        raise ParameterError("comparison needs at least 64 samples")
    xs = window.grid_log()
    sv = sigma.eval_log_many(xs)
    tv = tau.eval_log_many(xs)
    valid = (sv > 0.0) & (tv > 0.0) & np.isfinite(sv) & np.isfinite(tv)
    skipped = int(np.size(valid) - np.count_nonzero(valid))
    xs_v, sv, tv = xs[valid], sv[valid], tv[valid]
    cond_ts = f"{tau.name} = O({sigma.name})"
    cond_st = f"{sigma.name} = O({tau.name})"
    cond_eq = f"{sigma.name} ~ {tau.name}"
    if xs_v.size < 16:
        empty = inconclusive(cond_eq, stats={"valid_samples": int(xs_v.size)},
                             window=window)
        return ComparisonReport(sigma.name, tau.name, window, math.nan,
                                math.nan,
                                inconclusive(cond_ts, stats={}, window=window),
                                inconclusive(cond_st, stats={}, window=window),
                                empty, skipped)
    ratio = tv / sv
    tail = ratio[xs_v >= xs_v[0] + 0.75 * (xs_v[-1] - xs_v[0])]
    if tail.size == 0:
        tail = ratio[-1:]
    v_ts = _direction_verdict(cond_ts, xs_v, ratio, window)
    v_st = _direction_verdict(cond_st, xs_v, 1.0 / ratio, window)
    if v_ts.holds and v_st.holds:
        v_eq = holds(cond_eq,
                     stats={"tail_ratio_inf": float(np.min(tail)),
                            "tail_ratio_sup": float(np.max(tail))},
                     window=window)
    elif v_ts.fails or v_st.fails:
        bad = v_ts if v_ts.fails else v_st
        v_eq = fails(cond_eq, witness=dict(bad.witness),
                     stats={"direction": bad.condition}, window=window)
    else:
        v_eq = inconclusive(cond_eq, stats={}, window=window)
    return ComparisonReport(sigma.name, tau.name, window,
                            float(np.min(tail)), float(np.max(tail)),
                            v_ts, v_st, v_eq, skipped)
