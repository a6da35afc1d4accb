"""Block primitives against direct summation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from growthlab.errors import ParameterError, SequenceIndexError
from growthlab.sequences import Block, BlockKind


def brute(block: Block) -> np.ndarray:
    ks = range(block.start, block.end)
    return np.array([block.log_mu_at(k) for k in ks])


CASES = [
    Block(BlockKind.CONSTANT, 5, 37, log_mu_start=1.25),
    Block(BlockKind.GEOMETRIC, 9, 2057, log_mu_start=0.75,
          log_ratio=math.log(2.0) / 4096.0),
    Block(BlockKind.GEOMETRIC, 1, 513, log_mu_start=0.0, log_ratio=0.031),
    Block(BlockKind.POWER, 1, 5001, power=2.0),
    Block(BlockKind.POWER, 17, 9000, power=0.5),
]


@pytest.mark.parametrize("block", CASES)
def test_sum_log_matches_direct(block: Block) -> None:
    vals = brute(block)
    for k in (block.start, block.start + 1, (block.start + block.end) // 2,
              block.end - 1):
        expect = float(np.sum(vals[:k - block.start + 1]))
        got = block.sum_log_upto(k)
        assert got == pytest.approx(expect, rel=1e-12, abs=1e-10)


@pytest.mark.parametrize("block", CASES)
def test_sum_recip_matches_direct(block: Block) -> None:
    vals = brute(block)
    for k in (block.start, (block.start + block.end) // 2, block.end - 1):
        expect = float(np.sum(np.exp(-vals[:k - block.start + 1])))
        got = block.sum_recip_upto(k)
        assert got == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("block", CASES)
def test_count_leq_matches_direct(block: Block) -> None:
    vals = brute(block)
    probes = [vals[0] - 1.0, vals[-1] + 1.0,
              0.5 * (vals[0] + vals[-1])]
    # exact boundary values are the risky inputs
    probes.extend(vals[:: max(1, len(vals) // 7)])
    probes.append(math.nextafter(vals[0], -math.inf))
    for x in probes:
        assert block.count_leq(float(x)) == int(np.sum(vals <= x))


def test_power_recip_tail_closed_form() -> None:
    # huge power block: compare against the exact zeta tail for p = 2
    block = Block(BlockKind.POWER, 1, 10 ** 9, power=2.0)
    got = block.sum_recip_upto(10 ** 9 - 1)
    expect = math.pi ** 2 / 6.0 - 1.0 / (10 ** 9)  # zeta(2) minus tail
    assert got == pytest.approx(expect, rel=1e-9)


def test_geometric_recip_tiny_ratio() -> None:
    # ratios of order 2**-40 must not collapse to zero terms
    lr = math.log(2.0) / 2.0 ** 40
    block = Block(BlockKind.GEOMETRIC, 1, 1001, log_mu_start=0.0,
                  log_ratio=lr)
    got = block.sum_recip_upto(1000)
    expect = sum(math.exp(-(lr * i)) for i in range(1000))
    assert got == pytest.approx(expect, rel=1e-13)


def test_block_rejects_bad_ranges() -> None:
    with pytest.raises(ParameterError):
        Block(BlockKind.CONSTANT, 5, 5)
    with pytest.raises(ParameterError):
        Block(BlockKind.CONSTANT, 0, 4)
    with pytest.raises(ParameterError):
        Block(BlockKind.GEOMETRIC, 1, 4, log_ratio=-0.1)
    with pytest.raises(ParameterError):
        Block(BlockKind.POWER, 1, 4, power=0.0)


def test_block_rejects_outside_index() -> None:
    block = Block(BlockKind.CONSTANT, 5, 10, log_mu_start=1.0)
    with pytest.raises(SequenceIndexError):
        block.log_mu_at(4)
    with pytest.raises(SequenceIndexError):
        block.sum_log_upto(10)


def test_count_boundary_exact_on_long_tiny_ratio_block() -> None:
    # per-index ratio far below float resolution of the threshold: the
    # count must still sit exactly at the closed-form boundary
    base = 1 << 79
    lr = math.log(2.0) / (2.0 * base)
    block = Block(BlockKind.GEOMETRIC, base + 1, 2 * base + 1,
                  log_mu_start=55.0 + lr, log_ratio=lr)
    for frac in (0.1, 0.5, 0.9):
        x = 55.0 + lr + (block.count - 1) * lr * frac
        c = block.count_leq(x)
        assert 0 < c < block.count
        assert block.log_mu_at(block.start + c - 1) <= x
        assert block.log_mu_at(block.start + c) > x
    # the ratio is far below ulp(55), so many leading values round to
    # exactly 55.0; only a strictly smaller probe excludes them all
    assert block.count_leq(55.0 - 1.0e-12) == 0
    assert block.count_leq(55.0) > 0
    assert block.count_leq(56.0) == block.count
