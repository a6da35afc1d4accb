"""Weight functions, transforms, and the comparator."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import oracle_assoc, staircase_oracle
from growthlab.errors import (DivergenceError, ParameterError,
                              WeightDomainError)
from growthlab.sequences import build_gevrey, build_nq, build_qa_vanishing
from growthlab.verdicts import Window
from growthlab.weights import (QuadratureParams, associated, compare,
                               exp_log_square, kappa_transform, log_power,
                               parse_weight, power_compose, power_weight,
                               scale)


def test_closed_form_point_values() -> None:
    assert power_weight(2.0).eval(4.0) == pytest.approx(2.0, rel=1e-15)
    assert log_power(2.0).eval(math.e) == pytest.approx(1.0, rel=1e-12)
    assert exp_log_square().eval(math.e) == pytest.approx(math.e, rel=1e-12)
    # all vanish at zero
    for w in (power_weight(2.0), log_power(2.0), exp_log_square()):
        assert w.eval(0.0) == 0.0


def test_plain_argument_cap() -> None:
    w = power_weight(2.0)
    with pytest.raises(WeightDomainError):
        w.eval(1e301)
    assert w.eval_log(800.0) == pytest.approx(math.exp(400.0))


def test_weight_factories_validate() -> None:
    with pytest.raises(ParameterError):
        power_weight(0.0)
    with pytest.raises(ParameterError):
        log_power(1.0)  # needs s > 1 so that log t = o(omega)


def test_associated_vanishes_below_first_quotient() -> None:
    w = associated(build_nq(3.0, 3))
    assert w.eval(0.5) == 0.0
    assert w.eval(1.0) == 0.0
    # mu_1 = 2 here, so omega stays 0 up to t = 2
    assert w.eval(1.9) == 0.0
    assert w.eval(2.1) > 0.0


def test_associated_gevrey_point_value() -> None:
    # s = 1 at t = e: the sup is attained at j = 2, value 2 - log 2
    w = associated(build_gevrey(1.0, 1000))
    assert w.eval(math.e) == pytest.approx(2.0 - math.log(2.0), rel=1e-12)


@pytest.mark.parametrize("make,oracle_key", [
    (lambda: build_nq(3.0, 3), ("nq", 3.0, 3, None)),
    (lambda: build_qa_vanishing(1.5, 1.75, 3),
     ("qa-vanishing", 1.5, 3, 1.75)),
])
def test_associated_matches_direct_sup(make, oracle_key,
                                       rng: np.random.Generator) -> None:
    seq = make()
    fam, A, j_max, A0 = oracle_key
    log_mu = staircase_oracle(fam, A, j_max, A0)["log_mu"]
    w = associated(seq)
    xs = rng.uniform(0.1, float(log_mu[-1]), size=60)
    for x in xs:
        expect = oracle_assoc(log_mu, float(x))
        got = w.eval_log(float(x))
        assert got == pytest.approx(expect, rel=1e-11, abs=1e-9)


def test_associated_vector_path_matches_scalar(rng: np.random.Generator
                                               ) -> None:
    for seq in (build_nq(3.0, 5), build_gevrey(2.0, 100_000),
                build_qa_vanishing(1.5, 1.75, 4)):
        w = associated(seq)
        xs = rng.uniform(-1.0, w.domain_log_max, size=300)
        many = w.eval_log_many(xs)
        for x, v in zip(xs, many):
            assert v == pytest.approx(w.eval_log(float(x)), rel=1e-11,
                                      abs=1e-9)


def test_associated_domain_edges() -> None:
    seq = build_nq(3.0, 4)
    w = associated(seq)
    # evaluation exactly at the largest stored quotient is allowed
    top = w.domain_log_max
    assert w.eval_log(top) > 0.0
    with pytest.raises(WeightDomainError):
        w.eval_log(top + 1.0)
    with pytest.raises(WeightDomainError):
        w.eval_log_many(np.array([1.0, top + 1.0]))


def test_power_compose_identities(rng: np.random.Generator) -> None:
    # power_weight(1) composed with a=2 is the square root
    w = power_compose(power_weight(1.0), 2.0)
    assert w.eval(9.0) == pytest.approx(3.0, rel=1e-14)
    # composed power weights collapse to the product parameter
    ws = power_compose(power_weight(2.0), 0.25)
    direct = power_weight(0.5)
    xs = rng.uniform(0.1, 200.0, size=50)
    np.testing.assert_allclose(ws.eval_log_many(xs),
                               direct.eval_log_many(xs), rtol=1e-12)
    # nesting multiplies the parameters
    nested = power_compose(power_compose(power_weight(1.5), 0.5), 3.0)
    flat = power_compose(power_weight(1.5), 1.5)
    np.testing.assert_allclose(nested.eval_log_many(xs),
                               flat.eval_log_many(xs), rtol=1e-12)
    # a = 1 is the identity
    base = power_weight(2.0)
    assert power_compose(base, 1.0) is base


def test_kappa_power_weight_closed_form() -> None:
    # integral of (y t)^(1/2) t^-2 over t >= 1 equals 2 sqrt(y)
    kappa = kappa_transform(power_weight(2.0))
    for y in np.geomspace(1.0, 1e6, 25):
        got = kappa.eval(float(y))
        assert got == pytest.approx(2.0 * math.sqrt(y), rel=1e-6)


def test_kappa_at_zero_matches_weight() -> None:
    kappa = kappa_transform(power_weight(2.0))
    assert kappa.eval(0.0) == power_weight(2.0).eval(0.0) == 0.0


def test_kappa_divergence_detected() -> None:
    # omega(t) = t: integrand ~ y/t, harmonic divergence
    with pytest.raises(DivergenceError) as info:
        kappa_transform(power_weight(1.0))
    assert info.value.panel is not None
    assert info.value.growth_ratio == pytest.approx(1.0, abs=0.01)
    # omega(t) = t^2 diverges even faster
    with pytest.raises(DivergenceError):
        kappa_transform(power_weight(0.5))


def test_kappa_monotone_and_subadditive_for_power2() -> None:
    kappa = kappa_transform(power_weight(2.0))
    ys = np.geomspace(1.0, 1e4, 12)
    vals = [kappa.eval(float(y)) for y in ys]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    # concave with kappa(0) = 0 implies subadditivity; spot-check pairs
    for s, t in [(1.0, 1.0), (2.0, 50.0), (300.0, 7.0), (1e3, 1e3)]:
        assert kappa.eval(s + t) <= kappa.eval(s) + kappa.eval(t) + 1e-9


def test_kappa_quadrature_params_validate() -> None:
    with pytest.raises(ParameterError):
        QuadratureParams(rel_tol=0.5)
    with pytest.raises(ParameterError):
        QuadratureParams(max_panels=4)


def test_compare_affine_scaling_is_equivalent() -> None:
    w = power_weight(2.0)
    window = Window(10.0, 1e7, samples=256)
    report = compare(w, scale(w, 2.0, 5.0), window)
    assert report.equivalent.holds
    assert report.tau_bounded_by_sigma.holds
    assert report.sigma_bounded_by_tau.holds
    # tail ratios settle just above the scale factor
    assert 2.0 <= report.ratio_inf <= report.ratio_sup <= 2.1


def test_compare_power_weights_fails_equivalence() -> None:
    window = Window(10.0, 1e8, samples=256)
    report = compare(power_weight(2.0), power_weight(1.0), window)
    # tau/sigma = t^(1/2) grows without bound, the reverse direction holds
    assert report.sigma_bounded_by_tau.holds
    assert report.tau_bounded_by_sigma.fails
    assert report.equivalent.fails
    wit = report.equivalent.witness
    assert "log_t" in wit and "ratio" in wit
    # the witness reproduces the violation
    x = wit["log_t"]
    assert power_weight(1.0).eval_log(x) / power_weight(2.0).eval_log(x) \
        == pytest.approx(wit["ratio"], rel=1e-9)


def test_compare_window_validation() -> None:
    w = power_weight(2.0)
    with pytest.raises(ParameterError):
        compare(w, w, Window(0.5, 1e4))
    with pytest.raises(ParameterError):
        compare(w, w, Window(10.0, 100.0))
    with pytest.raises(ParameterError):
        compare(w, w, Window(10.0, 1e6, samples=32))


def test_parse_weight_grammar(rng: np.random.Generator) -> None:
    xs = rng.uniform(0.5, 30.0, size=20)
    pairs = [
        ("power:2", power_weight(2.0)),
        ("logpow:1.5", log_power(1.5)),
        ("explogsq", exp_log_square()),
        ("powcomp:power:2:0.25", power_compose(power_weight(2.0), 0.25)),
        ("kappa:power:2", kappa_transform(power_weight(2.0))),
        ("powcomp:powcomp:power:2:0.5:0.5",
         power_compose(power_compose(power_weight(2.0), 0.5), 0.5)),
    ]
    for spec, direct in pairs:
        parsed = parse_weight(spec)
        assert parsed.name == direct.name
        for x in xs:
            assert parsed.eval_log(float(x)) == pytest.approx(
                direct.eval_log(float(x)), rel=1e-9)


def test_parse_weight_assoc_round_trip(tmp_path) -> None:
    seq = build_nq(3.0, 3)
    path = tmp_path / "seq.json"
    path.write_text(seq.to_json())
    from growthlab.sequences import BlockSequence
    w = parse_weight(f"assoc:{path}",
                     lambda p: BlockSequence.from_json(
                         open(p, encoding="utf-8").read()))
    assert w.eval(100.0) == pytest.approx(
        associated(seq).eval(100.0), rel=1e-12)


def test_parse_weight_rejects_malformed() -> None:
    for bad in ("power", "power:x", "power:-2", "mystery:3",
                "powcomp:power:2", "assoc:file.json"):
        with pytest.raises(ParameterError):
            parse_weight(bad)
