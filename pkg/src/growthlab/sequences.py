"""Closed-form block model for log-convex weight sequences.

A weight sequence ``M = (M_j)`` with ``M_0 = 1`` is handled entirely
through its quotient sequence ``mu_j = M_j / M_{j-1}`` (``mu_0 = 1``).
Log-convexity of ``M`` is equivalent to ``mu`` being non-decreasing, and
``M_j = prod_{k<=j} mu_k``, so every derived quantity used here reduces
to sums over quotient indices:

* ``log M_j            = sum_{k<=j} log mu_k``
* counting function      ``n(t) = #{k >= 1 : mu_k <= t}``
* reciprocal partial sums ``sum_{k<=j} 1/mu_k``

All families built in this module keep ``log mu`` affine on index
blocks, which makes those sums available in closed form at indices far
beyond anything that could be materialised (the staircase families reach
``k ~ 2^70`` at depth 8).  Indices are arbitrary-precision integers;
log-domain values are ordinary floats.

Families
--------
``gevrey``
    ``mu_j = j**s`` for ``s > 0``; a single formula block.

``nq``
    A staircase with summable reciprocals.  Levels ``j = 1, 2, ...``
    alternate a *ladder* range (quotients multiply by ``A > 2`` once per
    dyadic sub-range, ``d_j`` times) with a *ramp* range (quotients gain
    a factor ``sqrt(2)`` spread uniformly in log over each of ``j``
    dyadic sub-ranges).  Ladder depths are the smallest strictly
    increasing integers with ``(2/A)**d_j <= 2**-(j/2+1)``, which keeps
    ``a_j / mu_{a_j} <= 2**-j`` at the level starts.

``qa-vanishing``
    Quasianalytic variant for ``1 < A <= A0 < 2`` with ``d_j = j``;
    reciprocal sums diverge (each ladder range contributes at least
    ``1/A``) and ``mu_k / k`` falls to zero.

``qa-diverging``
    Quasianalytic variant for ``A > 2`` where ladder depths and ramp
    counts are chosen level by level so that ``mu_{b_j}/b_j`` lands in
    the band ``[sqrt(2)**(c_j-1) * log(j+1),
    (sqrt(2)**(c_j-1) - 1) * j * log(j+1)]``; reciprocal sums diverge
    like ``sum 1/(j log (j+1))`` while ``mu_k / k`` grows without bound.
    The band is provably empty at level 1, so both band inequalities are
    enforced from level 2 on.

``qa-oscillating``
    Quasianalytic variant for ``A > 2`` with the minimal ladder depth
    pushing ``mu_{b_j}/b_j`` above ``j`` and the minimal ramp count
    pulling ``mu_{a_{j+1}}/a_{j+1}`` below ``1/j``, so ``mu_k / k``
    oscillates between 0 and infinity.
"""

from __future__ import annotations

import enum
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (ConstructionError, ParameterError, SequenceIndexError)
from .verdicts import fmt_float

LOG2 = math.log(2.0)
HALF_LOG2 = 0.5 * LOG2

#: Hard cap on index magnitude: keeps float images of k, k**2 finite.
MAX_INDEX_BITS = 500

#: Boundary slack for closed-form comparisons done in the log domain.
EDGE_TOL = 1.0e-12


def log_of_int(n: int) -> float:
    """Natural log of a positive integer, safe for huge values."""
    if n <= 0:
        raise ParameterError(f"log of non-positive integer {n}")
    if n.bit_length() <= 960:
        return math.log(n)
    shift = n.bit_length() - 64
    return math.log(n >> shift) + shift * LOG2


class BlockKind(str, enum.Enum):
    CONSTANT = "constant"
    GEOMETRIC = "geometric"
    POWER = "power"


class Family(str, enum.Enum):
    GEVREY = "gevrey"
    NON_QUASIANALYTIC = "nq"
    QA_VANISHING = "qa-vanishing"
    QA_DIVERGING = "qa-diverging"
    QA_OSCILLATING = "qa-oscillating"


@dataclass(frozen=True)
class Block:
    """Quotient indices ``start <= k < end`` with closed-form ``log mu_k``.

    * ``constant``:  ``log mu_k = log_mu_start``
    * ``geometric``: ``log mu_k = log_mu_start + (k - start) * log_ratio``
    * ``power``:     ``log mu_k = power * log k``

    Aggregates (sum of ``log mu``, sum of ``1/mu``, counts below a
    threshold) are closed-form per block, so a sequence query costs one
    block lookup regardless of index magnitude.
    """

    kind: BlockKind
    start: int
    end: int
    log_mu_start: float = 0.0
    log_ratio: float = 0.0
    power: float = 0.0

    def __post_init__(self) -> None:
        if self.start < 1 or self.end <= self.start:
            raise ParameterError(f"bad block range [{self.start}, {self.end})")
        if self.log_ratio < 0.0:
            raise ParameterError("log_ratio must be >= 0 (mu non-decreasing)")
        if self.kind is BlockKind.POWER and self.power <= 0.0:
            raise ParameterError("power block needs power > 0")

    @property
    def count(self) -> int:
        return self.end - self.start

    # -- point values ----------------------------------------------------

    def log_mu_at(self, k: int) -> float:
        if not (self.start <= k < self.end):
            raise SequenceIndexError(f"index {k} outside [{self.start}, "
                                     f"{self.end})")
        if self.kind is BlockKind.POWER:
            return self.power * log_of_int(k)
        if self.kind is BlockKind.CONSTANT or self.log_ratio == 0.0:
            return self.log_mu_start
        return self.log_mu_start + float(k - self.start) * self.log_ratio

    @property
    def first_log_mu(self) -> float:
        if self.kind is BlockKind.POWER:
            return self.power * log_of_int(self.start)
        return self.log_mu_start

    @property
    def last_log_mu(self) -> float:
        return self.log_mu_at(self.end - 1)

    # -- aggregates ------------------------------------------------------

    def sum_log_upto(self, k: int) -> float:
        """``sum_{i=start..k} log mu_i`` (requires ``start <= k < end``)."""
        if not (self.start <= k < self.end):
            raise SequenceIndexError(f"index {k} outside [{self.start}, "
                                     f"{self.end})")
        m = k - self.start + 1
        if self.kind is BlockKind.POWER:
            return self.power * (math.lgamma(k + 1) - math.lgamma(self.start))
        m_f = float(m)
        tri = m_f * (m_f - 1.0) / 2.0
        return m_f * self.log_mu_start + self.log_ratio * tri

    def sum_recip_upto(self, k: int) -> float:
        """``sum_{i=start..k} 1/mu_i`` (requires ``start <= k < end``)."""
        if not (self.start <= k < self.end):
            raise SequenceIndexError(f"index {k} outside [{self.start}, "
                                     f"{self.end})")
        m = k - self.start + 1
        if self.kind is BlockKind.POWER:
            return _power_recip_sum(self.start, k, self.power)
        head = math.exp(-self.log_mu_start)
        if self.log_ratio == 0.0:
            return float(m) * head
        # geometric series with ratio exp(-log_ratio); expm1 keeps
        # precision when log_ratio is of order 2**-120
        num = -math.expm1(-float(m) * self.log_ratio)
        den = -math.expm1(-self.log_ratio)
        return head * num / den

    def count_leq(self, x: float) -> int:
        """``#{k in [start, end) : log mu_k <= x}``, exact against the
        block's own closed form.

        The float estimate seeds an in-block bisection; walking the
        boundary step by step is not an option, because a long geometric
        block can have a per-index ratio far below the float resolution
        of the estimate.
        """
        if self.kind is BlockKind.CONSTANT or (
                self.kind is BlockKind.GEOMETRIC and self.log_ratio == 0.0):
            return self.count if self.log_mu_start <= x else 0
        if self.kind is BlockKind.POWER:
            if x < self.first_log_mu:
                return 0
            if self.power * log_of_int(self.end - 1) <= x:
                return self.count
            lo, hi = self.start, self.end - 1  # mu_lo <= x < mu_hi
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if self.power * log_of_int(mid) <= x:
                    lo = mid
                else:
                    hi = mid
            return lo - self.start + 1
        if x < self.log_mu_start:
            return 0
        if self.log_mu_start + (self.count - 1) * self.log_ratio <= x:
            return self.count
        lo, hi = 0, self.count - 1  # offsets, value(lo) <= x < value(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.log_mu_start + mid * self.log_ratio <= x:
                lo = mid
            else:
                hi = mid
        return lo + 1

    def to_json_dict(self) -> dict[str, Any]:
        record: dict[str, Any] = {
            "kind": self.kind.value,
            "start": self.start,
            "end": self.end,
        }
        if self.kind is BlockKind.POWER:
            record["power"] = fmt_float(self.power)
        else:
            record["log_mu_start"] = fmt_float(self.log_mu_start)
            record["log_ratio"] = fmt_float(self.log_ratio)
        return record

    @classmethod
    def from_json_dict(cls, record: dict[str, Any]) -> "Block":
        kind = BlockKind(record["kind"])
        if kind is BlockKind.POWER:
            return cls(kind, int(record["start"]), int(record["end"]),
                       power=float(record["power"]))
        return cls(kind, int(record["start"]), int(record["end"]),
                   log_mu_start=float(record["log_mu_start"]),
                   log_ratio=float(record["log_ratio"]))


def _power_recip_sum(lo: int, hi: int, p: float) -> float:
    """``sum_{i=lo..hi} i**-p`` with an Euler-Maclaurin tail.

    Direct summation covers the first ``2**17`` terms exactly; the
    remainder uses the integral plus two correction terms, whose error
    is ``O(p^3 * m^-(p+3))`` at the splice point ``m`` and therefore far
    below any tolerance used in this package.
    """
    chunk = 1 << 17
    direct_hi = min(hi, lo + chunk - 1)
    idx = np.arange(lo, direct_hi + 1, dtype=np.float64)
    total = float(np.sum(idx ** (-p)))
    if direct_hi == hi:
        return total
    m0 = float(direct_hi + 1)
    n = float(hi)
    if abs(p - 1.0) < 1.0e-15:
        integral = math.log(n / m0)
    else:
        integral = (m0 ** (1.0 - p) - n ** (1.0 - p)) / (p - 1.0)
    correction = 0.5 * (m0 ** (-p) + n ** (-p))
    correction += (p / 12.0) * (m0 ** (-p - 1.0) - n ** (-p - 1.0))
    return total + integral + correction


@dataclass(frozen=True)
class Checkpoint:
    """Level boundary data for the staircase families.

    ``ladder_start``/``ladder_end`` are the quotient indices delimiting
    the ladder range of the level; ``ladder_steps`` counts its dyadic
    sub-ranges (each multiplying ``mu`` by ``A``), ``ramp_steps`` the
    dyadic sub-ranges of the following ramp (each adding ``log 2 / 2``).
    """

    level: int
    ladder_start: int
    ladder_end: int
    ladder_steps: int
    ramp_steps: int
    log_mu_start: float
    log_mu_end: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "ladder_start": self.ladder_start,
            "ladder_end": self.ladder_end,
            "ladder_steps": self.ladder_steps,
            "ramp_steps": self.ramp_steps,
            "log_mu_start": fmt_float(self.log_mu_start),
            "log_mu_end": fmt_float(self.log_mu_end),
        }

    @classmethod
    def from_json_dict(cls, record: dict[str, Any]) -> "Checkpoint":
        return cls(int(record["level"]), int(record["ladder_start"]),
                   int(record["ladder_end"]), int(record["ladder_steps"]),
                   int(record["ramp_steps"]), float(record["log_mu_start"]),
                   float(record["log_mu_end"]))


SCHEMA_VERSION = "v1"


class BlockSequence:
    """A quotient sequence stored as contiguous closed-form blocks.

    Blocks cover ``1 .. k_max`` without gaps; ``mu_0 = 1`` is implicit.
    Construction validates monotonicity at every block seam, so instances
    always describe a normalised log-convex sequence.
    """

    def __init__(self, family: Family, params: dict[str, Any],
                 blocks: Sequence[Block],
                 checkpoints: Sequence[Checkpoint] = ()) -> None:
        self.family = family
        self.params = dict(params)
        self.blocks = list(blocks)
        self.checkpoints = list(checkpoints)
        self._validate()
        self._first_logs = [b.first_log_mu for b in self.blocks]
        self._starts = [b.start for b in self.blocks]
        # cumulative aggregates over whole blocks (index i: blocks < i)
        self._cum_log = [0.0]
        self._cum_recip = [0.0]
        for b in self.blocks:
            self._cum_log.append(self._cum_log[-1]
                                 + b.sum_log_upto(b.end - 1))
            self._cum_recip.append(self._cum_recip[-1]
                                   + b.sum_recip_upto(b.end - 1))
        self._vectors: dict[str, np.ndarray] | None = None

    # -- invariants ------------------------------------------------------

    def _validate(self) -> None:
        prev_end = 1
        prev_last = 0.0  # log mu_0 = 0
        for b in self.blocks:
            if b.start != prev_end:
                raise ParameterError(f"block starting at {b.start} leaves a "
                                     f"gap after index {prev_end - 1}")
            if b.first_log_mu < prev_last - 1.0e-9:
                raise ParameterError(f"quotients decrease at index {b.start}")
            prev_end = b.end
            prev_last = b.last_log_mu
        if self.blocks and (self.k_max).bit_length() > MAX_INDEX_BITS:
            raise ParameterError(
                f"k_max needs {self.k_max.bit_length()} bits; the closed "
                f"forms are kept exact only up to {MAX_INDEX_BITS} bits")

    @property
    def k_max(self) -> int:
        return self.blocks[-1].end - 1 if self.blocks else 0

    @property
    def empty(self) -> bool:
        return not self.blocks

    @property
    def max_log_mu(self) -> float:
        if self.empty:
            raise SequenceIndexError("empty sequence has no quotients")
        return self.blocks[-1].last_log_mu

    @property
    def first_log_mu(self) -> float:
        if self.empty:
            raise SequenceIndexError("empty sequence has no quotients")
        return self.blocks[0].first_log_mu

    # -- lookups ---------------------------------------------------------

    def _block_index(self, k: int) -> int:
        if self.empty or not (1 <= k <= self.k_max):
            raise SequenceIndexError(f"index {k} outside 1..{self.k_max}")
        return bisect_right(self._starts, k) - 1

    def log_mu_at(self, k: int) -> float:
        """``log mu_k``; ``k = 0`` gives 0."""
        if k == 0:
            return 0.0
        return self.blocks[self._block_index(k)].log_mu_at(k)

    def log_M_at(self, j: int) -> float:
        """``log M_j = sum_{k<=j} log mu_k``."""
        if j == 0:
            return 0.0
        i = self._block_index(j)
        return self._cum_log[i] + self.blocks[i].sum_log_upto(j)

    def counting_prefix(self, log_t: float) -> tuple[int, float]:
        """``(n(t), sum_{mu_k <= t} log mu_k)`` for ``t = exp(log_t)``.

        The count is exact (the threshold is compared against the same
        closed forms that define the quotients).  Thresholds at or above
        the last stored quotient count every index; callers that need
        the sequel of the sequence must check ``max_log_mu`` themselves.
        """
        if self.empty or log_t < self._first_logs[0]:
            return 0, 0.0
        i = bisect_right(self._first_logs, log_t) - 1
        block = self.blocks[i]
        c = block.count_leq(log_t)
        if c == 0:  # threshold below every value of the located block
            return block.start - 1, self._cum_log[i]
        last = block.start + c - 1
        return last, self._cum_log[i] + block.sum_log_upto(last)

    def reciprocal_sum(self, k_hi: int) -> float:
        """``sum_{k=1..k_hi} 1/mu_k`` (``k_hi`` clamped to ``k_max``)."""
        if self.empty or k_hi < 1:
            return 0.0
        k_hi = min(k_hi, self.k_max)
        i = self._block_index(k_hi)
        return self._cum_recip[i] + self.blocks[i].sum_recip_upto(k_hi)

    def checkpoint_table(self) -> list[Checkpoint]:
        return list(self.checkpoints)

    # -- quotient ratio extrema -----------------------------------------

    def quotient_log_ratio(self, ell: int, k: int) -> float:
        """``log(mu_{ell*k} / mu_k)``."""
        if ell < 2:
            raise ParameterError("multiplier must be >= 2")
        return self.log_mu_at(ell * k) - self.log_mu_at(k)

    def quotient_ratio_extrema(self, ell: int, k_lo: int = 1,
                               k_hi: int | None = None,
                               minimize: bool = False) -> tuple[float, int]:
        """Exact extremum of ``log(mu_{ell*k}/mu_k)`` over ``k_lo..k_hi``.

        Within any maximal range where both ``k`` and ``ell*k`` stay in
        fixed blocks the objective is affine in ``k`` (constant for a
        formula block), so it suffices to evaluate at the range
        endpoints.  Those endpoints are all within one step of a block
        start or of ``ceil(start/ell)``, giving an O(#blocks) candidate
        set independent of ``k_hi``.

        Returns ``(log ratio, witness index)``.
        """
        if ell < 2:
            raise ParameterError("multiplier must be >= 2")
        if self.empty:
            raise SequenceIndexError("empty sequence")
        limit = self.k_max // ell
        k_hi = limit if k_hi is None else min(k_hi, limit)
        k_lo = max(1, k_lo)
        if k_hi < k_lo:
            raise ParameterError(f"no indices with k >= {k_lo} and "
                                 f"{ell}*k <= {self.k_max}")
        candidates: set[int] = {k_lo, k_hi}
        for s in self._starts:
            for base in (s, -(-s // ell)):
                for delta in (-1, 0, 1):
                    c = base + delta
                    if k_lo <= c <= k_hi:
                        candidates.add(c)
        best_val = math.inf if minimize else -math.inf
        best_k = k_lo
        for k in sorted(candidates):
            val = self.log_mu_at(ell * k) - self.log_mu_at(k)
            if (val < best_val) if minimize else (val > best_val):
                best_val, best_k = val, k
        return best_val, best_k

    # -- vector tables for weight evaluation ----------------------------

    def vector_tables(self) -> dict[str, np.ndarray]:
        """Float views of the block data for vectorised evaluation.

        Integer fields lose exactness beyond 2**53, which only affects
        relative accuracy at the 1e-16 level in the derived counts.
        """
        if self._vectors is None:
            b = self.blocks
            self._vectors = {
                "first_log": np.array(self._first_logs, dtype=np.float64),
                "start": np.array([float(x.start) for x in b]),
                "count": np.array([float(x.count) for x in b]),
                "lms": np.array([x.log_mu_start for x in b]),
                "lr": np.array([x.log_ratio for x in b]),
                "cum_log": np.array(self._cum_log[:-1], dtype=np.float64),
                "is_power": np.array(
                    [x.kind is BlockKind.POWER for x in b], dtype=bool),
            }
        return self._vectors

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict[str, Any]:
        params: dict[str, Any] = {}
        for key, value in sorted(self.params.items()):
            if isinstance(value, float):
                params[key] = fmt_float(value)
            elif isinstance(value, (list, tuple)):
                params[key] = list(value)
            else:
                params[key] = value
        return {
            "version": SCHEMA_VERSION,
            "family": self.family.value,
            "params": params,
            "checkpoints": [c.to_json_dict() for c in self.checkpoints],
            "blocks": [b.to_json_dict() for b in self.blocks],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, record: dict[str, Any]) -> "BlockSequence":
        version = record.get("version")
        if version != SCHEMA_VERSION:
            raise ParameterError(f"unsupported schema version {version!r}")
        family = Family(record["family"])
        params: dict[str, Any] = {}
        for key, value in record.get("params", {}).items():
            if isinstance(value, str):
                params[key] = float(value)
            else:
                params[key] = value
        blocks = [Block.from_json_dict(b) for b in record["blocks"]]
        checkpoints = [Checkpoint.from_json_dict(c)
                       for c in record.get("checkpoints", [])]
        return cls(family, params, blocks, checkpoints)

    @classmethod
    def from_json(cls, text: str) -> "BlockSequence":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"BlockSequence({self.family.value}, k_max={self.k_max}, "
                f"blocks={len(self.blocks)})")


# ---------------------------------------------------------------------------
# constructors


def build_gevrey(s: float, k_max: int) -> BlockSequence:
    """``mu_j = j**s``: the weight sequence of ``(j!)**s`` up to scaling."""
    if s <= 0.0:
        raise ParameterError("gevrey exponent s must be positive")
    if k_max < 2:
        raise ParameterError("gevrey sequence needs k_max >= 2")
    block = Block(BlockKind.POWER, 1, k_max + 1, power=float(s))
    return BlockSequence(Family.GEVREY, {"s": float(s), "k_max": int(k_max)},
                         [block])


def _append_ladder(blocks: list[Block], a: int, steps: int, log_mu_a: float,
                   log_step: float) -> tuple[int, float]:
    """Constant blocks on ``(2**i a, 2**(i+1) a]`` valued
    ``mu_a * A**(i+1)``; returns the end index and its log value."""
    for i in range(steps):
        blocks.append(Block(BlockKind.CONSTANT, (a << i) + 1,
                            (a << (i + 1)) + 1,
                            log_mu_start=log_mu_a + (i + 1) * log_step))
    return a << steps, log_mu_a + steps * log_step


def _append_ramp(blocks: list[Block], b: int, steps: int,
                 log_mu_b: float) -> tuple[int, float]:
    """Geometric blocks on ``(2**i b, 2**(i+1) b]`` each gaining a factor
    ``sqrt(2)`` spread uniformly in log; returns end index and value."""
    lm = log_mu_b
    for i in range(steps):
        base = b << i
        lr = LOG2 / (2.0 * float(base))
        blocks.append(Block(BlockKind.GEOMETRIC, base + 1, (base << 1) + 1,
                            log_mu_start=lm + lr, log_ratio=lr))
        lm += HALF_LOG2  # base * lr, exactly
    return b << steps, lm


def _guard_bits(a: int, level: int) -> None:
    if a.bit_length() > MAX_INDEX_BITS:
        raise ParameterError(
            f"indices reach 2**{a.bit_length()} at level {level}; reduce "
            "the depth or move A away from 2")


def _min_ladder_depth_nq(j: int, log_half_a: float) -> int:
    """Smallest ``d`` with ``d * log(A/2) >= (j/2 + 1) * log 2``."""
    need = (0.5 * j + 1.0) * LOG2
    d = max(1, math.ceil(need / log_half_a - EDGE_TOL))
    while d * log_half_a < need - EDGE_TOL:
        d += 1
    return d


def build_nq(A: float, j_max: int,
             ladder_steps: Sequence[int] | None = None) -> BlockSequence:
    """Staircase with ``sum 1/mu_k`` bounded by
    ``A/(2(A-2)) + 1/(2(sqrt 2 - 1))``.

    ``ladder_steps`` optionally overrides the per-level ladder depths
    ``d_j`` (they must stay strictly increasing and respect the growth
    restriction); passing the depths computed for a smaller ``A`` makes
    two staircases with identical index geometry comparable level by
    level.
    """
    if A <= 2.0:
        raise ParameterError("A must exceed 2")
    if j_max < 0:
        raise ParameterError("j_max must be >= 0")
    params: dict[str, Any] = {"A": float(A), "j_max": int(j_max)}
    if ladder_steps is not None:
        params["ladder_steps"] = [int(d) for d in ladder_steps]
    if j_max == 0:
        return BlockSequence(Family.NON_QUASIANALYTIC, params, [])

    log_a_step = math.log(A)
    log_half_a = math.log(A / 2.0)
    blocks: list[Block] = [Block(BlockKind.CONSTANT, 1, 2,
                                 log_mu_start=LOG2)]  # mu_1 = 2
    checkpoints: list[Checkpoint] = []
    a, log_mu_a = 1, LOG2
    d_prev = 0
    for j in range(1, j_max + 1):
        if ladder_steps is not None:
            d = int(ladder_steps[j - 1])
            if d <= d_prev:
                raise ParameterError("ladder_steps must increase strictly")
            if d * log_half_a < (0.5 * j + 1.0) * LOG2 - EDGE_TOL:
                raise ParameterError(
                    f"ladder_steps[{j - 1}] = {d} violates the growth "
                    f"restriction (2/A)**d <= 2**-(j/2+1)")
        else:
            d = max(d_prev + 1, _min_ladder_depth_nq(j, log_half_a))
        b, log_mu_b = _append_ladder(blocks, a, d, log_mu_a, log_a_step)
        checkpoints.append(Checkpoint(j, a, b, d, j, log_mu_a, log_mu_b))
        a, log_mu_a = _append_ramp(blocks, b, j, log_mu_b)
        _guard_bits(a, j)
        d_prev = d
    return BlockSequence(Family.NON_QUASIANALYTIC, params, blocks,
                         checkpoints)


def build_qa_vanishing(A: float, A0: float, j_max: int) -> BlockSequence:
    """Quasianalytic staircase with ``mu_k / k -> 0`` (``1 < A <= A0 < 2``).

    Ladder depths are ``d_j = j``.  Construction re-checks the level
    feasibility ``(a_j/mu_{a_j}) * ((2/A)**d_j - 1)/((2/A) - 1) >= 1``,
    which forces each ladder range to contribute at least ``1/A`` to the
    reciprocal sum.
    """
    if not (1.0 < A <= A0 < 2.0):
        raise ParameterError("need 1 < A <= A0 < 2")
    params = {"A": float(A), "A0": float(A0), "j_max": int(j_max)}
    if j_max < 0:
        raise ParameterError("j_max must be >= 0")
    if j_max == 0:
        return BlockSequence(Family.QA_VANISHING, params, [])

    log_a_step = math.log(A)
    q = 2.0 / A  # > 1
    blocks: list[Block] = [Block(BlockKind.CONSTANT, 1, 2,
                                 log_mu_start=0.0)]  # mu_1 = 1
    checkpoints: list[Checkpoint] = []
    a, log_mu_a = 1, 0.0
    for j in range(1, j_max + 1):
        d = j
        feas = ((log_of_int(a) - log_mu_a)
                + math.log((q ** d - 1.0) / (q - 1.0)))
        if feas < -1.0e-9:
            raise ConstructionError(
                f"level {j} infeasible: ladder range cannot reach its "
                f"reciprocal-sum share", level=j)
        b, log_mu_b = _append_ladder(blocks, a, d, log_mu_a, log_a_step)
        checkpoints.append(Checkpoint(j, a, b, d, j, log_mu_a, log_mu_b))
        a, log_mu_a = _append_ramp(blocks, b, j, log_mu_b)
        _guard_bits(a, j)
    return BlockSequence(Family.QA_VANISHING, params, blocks, checkpoints)


def _qa_band(c: int, j: int) -> tuple[float, float]:
    """Log-domain admissible band for ``mu_{b_j}/b_j`` at ramp count c.

    Lower edge: ``sqrt(2)**(c-1) * log(j+1)``;
    upper edge: ``(sqrt(2)**(c-1) - 1) * j * log(j+1)``.
    """
    log_s = 0.5 * (c - 1) * LOG2  # log sqrt(2)**(c-1)
    log_l = math.log(math.log(j + 1.0))
    lo = log_s + log_l
    # log(S - 1) = log S + log(1 - 1/S), finite for S > 1
    if c <= 1:
        return lo, -math.inf
    hi = log_s + math.log1p(-math.exp(-log_s)) + math.log(float(j)) + log_l
    return lo, hi


def build_qa_diverging(A: float, j_max: int,
                       max_band_attempts: int = 200) -> BlockSequence:
    """Quasianalytic staircase with ``mu_k / k -> infinity`` (``A > 2``).

    Level 1 takes the minimal choices ``d_1 = c_1 = 1``; the band
    constraints below are provably unsatisfiable there and are enforced
    from level 2 on.  At each later level the ramp count starts at
    ``max(c_{j-1} + 1, j)`` and the ladder depth is scanned upwards from
    ``d_{j-1} + 1`` until ``mu_{b_j}/b_j`` lands inside the admissible
    band; if the step factor ``A/2`` jumps across the band, the ramp
    count is incremented and the scan restarts.
    """
    if A <= 2.0:
        raise ParameterError("A must exceed 2")
    if j_max < 0:
        raise ParameterError("j_max must be >= 0")
    params = {"A": float(A), "j_max": int(j_max)}
    if j_max == 0:
        return BlockSequence(Family.QA_DIVERGING, params, [])

    log_a_step = math.log(A)
    log_half_a = math.log(A / 2.0)
    blocks: list[Block] = [Block(BlockKind.CONSTANT, 1, 2,
                                 log_mu_start=0.0)]  # mu_1 = 1
    checkpoints: list[Checkpoint] = []
    a, log_mu_a = 1, 0.0
    d_prev, c_prev = 0, 0
    for j in range(1, j_max + 1):
        r_a = log_mu_a - log_of_int(a)  # log of mu_{a_j} / a_j
        if j == 1:
            d, c = 1, 1
        else:
            c = max(c_prev + 1, j)
            chosen: tuple[int, int] | None = None
            lo = hi = 0.0
            for _ in range(max_band_attempts):
                lo, hi = _qa_band(c, j)
                d = max(d_prev + 1,
                        math.ceil((lo - r_a) / log_half_a - EDGE_TOL))
                while r_a + d * log_half_a < lo - EDGE_TOL:
                    d += 1
                if r_a + d * log_half_a <= hi + EDGE_TOL:
                    chosen = (d, c)
                    break
                c += 1
            if chosen is None:
                raise ConstructionError(
                    f"level {j}: ladder scan cannot land inside the "
                    f"admissible band", level=j,
                    band=(math.exp(lo), math.exp(hi)))
            d, c = chosen
        b, log_mu_b = _append_ladder(blocks, a, d, log_mu_a, log_a_step)
        checkpoints.append(Checkpoint(j, a, b, d, c, log_mu_a, log_mu_b))
        a, log_mu_a = _append_ramp(blocks, b, c, log_mu_b)
        _guard_bits(a, j)
        d_prev, c_prev = d, c
    return BlockSequence(Family.QA_DIVERGING, params, blocks, checkpoints)


def build_qa_oscillating(A: float, j_max: int) -> BlockSequence:
    """Quasianalytic staircase whose ``mu_k / k`` oscillates (``A > 2``).

    Each level pushes ``mu_{b_j}/b_j`` strictly above ``j`` with the
    minimal admissible ladder depth, then pulls ``mu_{a_{j+1}}/a_{j+1}``
    down to at most ``1/j`` with the minimal admissible ramp count.
    """
    if A <= 2.0:
        raise ParameterError("A must exceed 2")
    if j_max < 0:
        raise ParameterError("j_max must be >= 0")
    params = {"A": float(A), "j_max": int(j_max)}
    if j_max == 0:
        return BlockSequence(Family.QA_OSCILLATING, params, [])

    log_a_step = math.log(A)
    log_half_a = math.log(A / 2.0)
    blocks: list[Block] = [Block(BlockKind.CONSTANT, 1, 2,
                                 log_mu_start=0.0)]  # mu_1 = 1
    checkpoints: list[Checkpoint] = []
    a, log_mu_a = 1, 0.0
    d_prev, c_prev = 0, 0
    for j in range(1, j_max + 1):
        r_a = log_mu_a - log_of_int(a)
        log_j = math.log(float(j))
        # minimal depth with mu_{b_j}/b_j > j (strict)
        d = max(d_prev + 1,
                math.ceil((log_j - r_a) / log_half_a + EDGE_TOL))
        while r_a + d * log_half_a <= log_j + EDGE_TOL:
            d += 1
        r_b = r_a + d * log_half_a
        # minimal ramp count with sqrt(2)**c >= j * mu_{b_j}/b_j
        c = max(c_prev + 1, j,
                math.ceil(2.0 * (log_j + r_b) / LOG2 - EDGE_TOL))
        while 0.5 * c * LOG2 < log_j + r_b - EDGE_TOL:
            c += 1
        b, log_mu_b = _append_ladder(blocks, a, d, log_mu_a, log_a_step)
        checkpoints.append(Checkpoint(j, a, b, d, c, log_mu_a, log_mu_b))
        a, log_mu_a = _append_ramp(blocks, b, c, log_mu_b)
        _guard_bits(a, j)
        d_prev, c_prev = d, c
    return BlockSequence(Family.QA_OSCILLATING, params, blocks, checkpoints)


def build_sequence(family: str | Family, **params: Any) -> BlockSequence:
    """Dispatch on the family tag; used by the command line tools."""
    fam = Family(family)
    if fam is Family.GEVREY:
        return build_gevrey(params["s"], params.get("k_max", 1 << 40))
    if fam is Family.NON_QUASIANALYTIC:
        return build_nq(params["A"], params["j_max"],
                        params.get("ladder_steps"))
    if fam is Family.QA_VANISHING:
        return build_qa_vanishing(params["A"],
                                  params.get("A0", params["A"]),
                                  params["j_max"])
    if fam is Family.QA_DIVERGING:
        return build_qa_diverging(params["A"], params["j_max"])
    if fam is Family.QA_OSCILLATING:
        return build_qa_oscillating(params["A"], params["j_max"])
    raise ParameterError(f"unknown family {family!r}")
