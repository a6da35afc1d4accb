"""End-to-end verification scenarios.

Each scenario builds its objects from scratch, runs the relevant exact
checks and sampled probes, and records every comparison as an assertion
row (description, expected, observed, residual, pass flag).  A scenario
that cannot even construct its objects is reported as skipped with the
reason, never silently dropped.

The JSON and text renderings are deterministic for fixed inputs; wall
times are kept out of them unless explicitly requested.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .conditions import (check_beta3, check_mg, check_nq,
                         falsify_almost_subadditivity, mu_over_k_profile,
                         probe_gamma_relation, probe_square_condition,
                         probe_subadditivity)
from .errors import (ConstructionError, DivergenceError, GrowthLabError,
                     ParameterError)
from .indices import (estimate_gamma_omega, interval_I_omega, lemma_bound)
from .sequences import (HALF_LOG2, LOG2, BlockSequence, build_gevrey,
                        build_nq, build_qa_diverging, build_qa_oscillating,
                        build_qa_vanishing, log_of_int)
from .verdicts import Window, fmt_float
from .weights import (associated, compare, kappa_transform, power_compose,
                      power_weight)

SQRT2 = math.sqrt(2.0)

#: desk defaults shared by the scenarios and the report command
DESK_J_MAX = 8
DESK_A = 3.0
DESK_FALSIFIER_WINDOW = Window(1.0e2, 1.0e14)
DESK_SCAN_WINDOW = Window(1.0e3, 1.0e9)


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.6g}"
    return str(value)


@dataclass(frozen=True)
class Assertion:
    description: str
    expected: str
    observed: str
    residual: float | None
    passed: bool

    def to_json_dict(self) -> dict[str, Any]:
        return {"description": self.description,
                "expected": self.expected,
                "observed": self.observed,
                "residual": None if self.residual is None
                else float(fmt_float(self.residual)),
                "pass": self.passed}


@dataclass
class ScenarioReport:
    scenario: str
    inputs: dict[str, Any]
    assertions: list[Assertion] = field(default_factory=list)
    runtime_seconds: float = 0.0
    skipped_reason: str | None = None

    @property
    def passed(self) -> bool:
        return self.skipped_reason is None and \
            all(a.passed for a in self.assertions)

    @property
    def counts(self) -> tuple[int, int]:
        ok = sum(1 for a in self.assertions if a.passed)
        return ok, len(self.assertions)

    def to_json_dict(self, include_runtime: bool = False) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "scenario": self.scenario,
            "inputs": dict(self.inputs),
            "assertions": [a.to_json_dict() for a in self.assertions],
            "pass": self.passed,
        }
        if self.skipped_reason is not None:
            doc["skipped"] = self.skipped_reason
        if include_runtime:
            doc["runtime_seconds"] = round(self.runtime_seconds, 3)
        return doc

    def to_text(self) -> str:
        ok, total = self.counts
        if self.skipped_reason is not None:
            head = f"SKIP {self.scenario}: {self.skipped_reason}"
            return head
        state = "PASS" if self.passed else "FAIL"
        lines = [f"{state} {self.scenario}  ({ok}/{total} assertions)"]
        width = max((len(a.description) for a in self.assertions),
                    default=0)
        for a in self.assertions:
            mark = "ok  " if a.passed else "FAIL"
            row = (f"  [{mark}] {a.description.ljust(width)}  "
                   f"expected {a.expected}  observed {a.observed}")
            if a.residual is not None:
                row += f"  residual {_fmt(a.residual)}"
            lines.append(row)
        return "\n".join(lines)


class _Recorder:
    def __init__(self) -> None:
        self.rows: list[Assertion] = []

    def close(self, description: str, expected: float, observed: float,
              tol: float = 1.0e-9) -> None:
        resid = abs(observed - expected)
        self.rows.append(Assertion(description, _fmt(expected),
                                   _fmt(observed), resid, resid <= tol))

    def at_most(self, description: str, observed: float, bound: float,
                tol: float = 0.0) -> None:
        self.rows.append(Assertion(description, f"<= {_fmt(bound)}",
                                   _fmt(observed), observed - bound,
                                   observed <= bound + tol))

    def at_least(self, description: str, observed: float, bound: float,
                 tol: float = 0.0) -> None:
        self.rows.append(Assertion(description, f">= {_fmt(bound)}",
                                   _fmt(observed), bound - observed,
                                   observed >= bound - tol))

    def flag(self, description: str, expected: str, observed: str,
             passed: bool) -> None:
        self.rows.append(Assertion(description, expected, observed, None,
                                   passed))


# ---------------------------------------------------------------------------
# scenario bodies


def _scenario_claims(A: float = DESK_A, j_max: int = DESK_J_MAX,
                     **_: Any) -> tuple[dict[str, Any], list[Assertion]]:
    seq = build_nq(A, j_max)
    rec = _Recorder()
    log_A = math.log(A)

    # staircase recursion: ladder and ramp gains, integer boundaries
    for i, cp in enumerate(seq.checkpoints):
        rec.close(f"ladder gain at level {cp.level}",
                  cp.log_mu_start + cp.ladder_steps * log_A,
                  cp.log_mu_end)
        if i + 1 < len(seq.checkpoints):
            nxt = seq.checkpoints[i + 1]
            rec.close(f"ramp gain at level {cp.level}",
                      cp.log_mu_end + cp.ramp_steps * HALF_LOG2,
                      nxt.log_mu_start)
            rec.flag(f"octave boundaries at level {cp.level}",
                     "ladder doubles then ramp doubles",
                     "exact" if cp.ladder_end == cp.ladder_start *
                     (1 << cp.ladder_steps) and nxt.ladder_start ==
                     cp.ladder_end * (1 << cp.ramp_steps) else "broken",
                     cp.ladder_end == cp.ladder_start << cp.ladder_steps
                     and nxt.ladder_start == cp.ladder_end << cp.ramp_steps)
        # quotients outgrow the index by a full power of two per level
        rec.at_most(f"index/quotient gap at level {cp.level}",
                    log_of_int(cp.ladder_start) - cp.log_mu_start,
                    -cp.level * LOG2, tol=1.0e-9)

    # reciprocal tail: partial sums stay under the closed-form bound
    bound = A / (2.0 * (A - 2.0)) + 0.5 / (SQRT2 - 1.0)
    nq_verdict, partial = check_nq(seq)
    rec.flag("reciprocal sum convergence verdict", "Holds",
             nq_verdict.state.value.capitalize(), nq_verdict.holds)
    rec.at_most("reciprocal partial sum", partial, bound, tol=1.0e-9)

    # quotient doubling: bounded by sqrt(2) A, attained at the first step
    mg_verdict, sup_ratio = check_mg(seq)
    rec.flag("quotient doubling verdict", "Holds",
             mg_verdict.state.value.capitalize(), mg_verdict.holds)
    rec.at_most("doubling ratio supremum", sup_ratio, SQRT2 * A,
                tol=1.0e-9)
    rec.at_least("doubling ratio supremum attains the ladder step",
                 sup_ratio, A, tol=1.0e-12)

    # quadrupling stays bounded away from one
    b3_verdict, inf_ratio = check_beta3(seq, 4)
    rec.flag("quadrupling lower verdict", "Holds",
             b3_verdict.state.value.capitalize(), b3_verdict.holds)
    rec.at_least("quadrupling ratio infimum", inf_ratio, 2.0 ** 0.25,
                 tol=1.0e-9)

    # ramp power pattern at ladder ends, then the spread exponent
    for cp in seq.checkpoints:
        n = min(cp.level, 3)
        observed = seq.quotient_log_ratio(1 << n, cp.ladder_end)
        rec.close(f"ramp power pattern at level {cp.level} (x{1 << n})",
                  n * HALF_LOG2, observed)
    points = [cp.ladder_end for cp in seq.checkpoints]
    rows = probe_gamma_relation(seq, [2, 3, 4], points)
    beta_hat = min(r["exponent"] for r in rows)
    beta = 0.5 + LOG2 / (2.0 * math.log(3.0))
    rec.at_most("spread exponent at ladder ends", beta_hat, beta,
                tol=0.01)
    return {"A": A, "j_max": j_max}, rec.rows


def _scenario_step_v(A: float = DESK_A, A_prime: float = 4.0,
                     j_max: int = DESK_J_MAX, **_: Any
                     ) -> tuple[dict[str, Any], list[Assertion]]:
    base = build_nq(A, j_max)
    steps = [cp.ladder_steps for cp in base.checkpoints]
    twin = build_nq(A_prime, j_max, ladder_steps=steps)
    rec = _Recorder()
    log_q = math.log(A_prime / A)

    # shared geometry, ladder values scaled level by level
    same = all(b.ladder_start == t.ladder_start and
               b.ladder_end == t.ladder_end
               for b, t in zip(base.checkpoints, twin.checkpoints))
    rec.flag("identical level geometry", "yes", _fmt(same), same)
    total = 0
    for b_cp, t_cp in zip(base.checkpoints, twin.checkpoints):
        total += b_cp.ladder_steps
        rec.close(f"quotient offset after level {b_cp.level}",
                  total * log_q,
                  t_cp.log_mu_end - b_cp.log_mu_end)

    # normalised gap grows strictly level over level
    heads = [cp.ladder_start for cp in base.checkpoints[1:]]
    gaps = [(twin.log_M_at(j) - base.log_M_at(j)) / float(j)
            for j in heads]
    grew = all(b > a for a, b in zip(gaps, gaps[1:]))
    rec.flag("normalised log-term gap strictly increasing", "yes",
             _fmt(grew), grew)
    rec.at_least("final normalised gap", gaps[-1], gaps[0] + log_q)

    # root-compressed comparison fails for every small compression
    for c in (1, 2, 3, 4):
        probe = [j for j in heads if j * c <= base.k_max]
        vals = [twin.log_M_at(j) - base.log_M_at(c * j) / float(c)
                for j in probe]
        growing = all(b > a for a, b in zip(vals, vals[1:])) and \
            vals[-1] > vals[0] + LOG2
        rec.flag(f"term gap under root compression x{c}",
                 "growing without bound",
                 "growing" if growing else "bounded", growing)

    # the associated weights separate on a wide window
    window = Window(1.0e3, 1.0e12)
    report = compare(associated(base), associated(twin), window)
    rec.flag("weight equivalence verdict", "Fails",
             report.equivalent.state.value.capitalize(),
             report.equivalent.fails)
    rec.at_least("weight ratio spread across window",
                 report.ratio_sup / report.ratio_inf, 2.0)
    return ({"A": A, "A_prime": A_prime, "j_max": j_max,
             "ladder_steps": steps}, rec.rows)


def _scenario_family(s: float = 2.0,
                     a_list: Sequence[float] = (0.25, 0.4),
                     **_: Any) -> tuple[dict[str, Any], list[Assertion]]:
    rec = _Recorder()
    base = power_weight(s)
    est = estimate_gamma_omega(base, DESK_SCAN_WINDOW)
    rec.close("base index lower bound", s, est.gamma_lower,
              tol=0.05 * s)
    rec.close("base index upper bound", s, est.gamma_upper,
              tol=0.05 * s)

    taus = []
    for a in a_list:
        tau = power_compose(base, a)
        taus.append(tau)
        est_a = estimate_gamma_omega(tau, DESK_SCAN_WINDOW)
        rec.close(f"composed index bracket low (a={_fmt(a)})",
                  a * s, est_a.gamma_lower, tol=0.1)
        rec.close(f"composed index bracket high (a={_fmt(a)})",
                  a * s, est_a.gamma_upper, tol=0.1)
        verdict = falsify_almost_subadditivity(tau, [1.05, 1.5],
                                               Window(1.0e2, 1.0e10))
        rec.flag(f"almost subadditivity falsified (a={_fmt(a)})",
                 "Fails", verdict.state.value.capitalize(), verdict.fails)
        square = probe_square_condition(tau, DESK_SCAN_WINDOW)
        rec.flag(f"square-argument bound rejected (a={_fmt(a)})",
                 "Fails", square.state.value.capitalize(), square.fails)

    if len(taus) >= 2:
        report = compare(taus[0], taus[1], DESK_SCAN_WINDOW)
        rec.flag("pairwise non-equivalence of composed weights",
                 "Fails", report.equivalent.state.value.capitalize(),
                 report.equivalent.fails)
    return {"s": s, "a_list": list(a_list)}, rec.rows


def _scenario_qa(A: float = DESK_A, A0: float = 1.75,
                 A_small: float = 1.5, j_max: int = DESK_J_MAX,
                 **_: Any) -> tuple[dict[str, Any], list[Assertion]]:
    rec = _Recorder()
    cases: list[tuple[str, BlockSequence, str]] = [
        ("vanishing", build_qa_vanishing(A_small, A0, j_max),
         "vanishing"),
        ("diverging", build_qa_diverging(A, j_max), "diverging"),
        ("oscillating", build_qa_oscillating(A, j_max), "oscillating"),
    ]
    for label, seq, expected_class in cases:
        verdict, partial = check_nq(seq)
        rec.flag(f"reciprocal sum diverges ({label})", "Fails",
                 verdict.state.value.capitalize(), verdict.fails)
        _, profile = mu_over_k_profile(seq)
        observed = profile.stats.get("classification", "unknown")
        rec.flag(f"quotient-over-index class ({label})", expected_class,
                 observed, observed == expected_class)

    vanish = cases[0][1]
    for i, cp in enumerate(vanish.checkpoints):
        got = vanish.reciprocal_sum(cp.ladder_end) - \
            vanish.reciprocal_sum(cp.ladder_start)
        rec.at_least(f"ladder reciprocal mass at level {cp.level} "
                     f"(vanishing)", got, 1.0 / A_small, tol=1.0e-12)

    diverge = cases[1][1]
    for i, cp in enumerate(diverge.checkpoints[:-1]):
        nxt = diverge.checkpoints[i + 1]
        j = cp.level
        if j < 2:
            continue
        got = diverge.reciprocal_sum(nxt.ladder_start) - \
            diverge.reciprocal_sum(cp.ladder_end)
        floor = (1.0 / (SQRT2 - 1.0)) / (j * math.log(j + 1.0))
        rec.at_least(f"ramp reciprocal mass at level {j} (diverging)",
                     got, floor, tol=1.0e-12)

    osc = cases[2][1]
    for i, cp in enumerate(osc.checkpoints):
        j = cp.level
        up = cp.log_mu_end - log_of_int(cp.ladder_end)
        rec.at_least(f"peak quotient excess at level {j} (oscillating)",
                     up, math.log(float(j)) if j > 1 else 0.0,
                     tol=1.0e-12)
        if i + 1 < len(osc.checkpoints):
            nxt = osc.checkpoints[i + 1]
            down = nxt.log_mu_start - log_of_int(nxt.ladder_start)
            rec.at_most(f"trough quotient deficit at level {j} "
                        f"(oscillating)", down, -math.log(float(j)),
                        tol=1.0e-9)

    omega = associated(vanish)
    top = min(math.exp(omega.domain_log_max - LOG2), 1.0e14)
    verdict = falsify_almost_subadditivity(omega, [1.05],
                                           Window(1.0e2, top))
    rec.flag("almost subadditivity falsified (vanishing staircase)",
             "Fails", verdict.state.value.capitalize(), verdict.fails)
    return ({"A": A, "A0": A0, "A_small": A_small, "j_max": j_max},
            rec.rows)


def _scenario_lemma(q0_list: Sequence[float] = (0.5, 1.0, 1.17, 2.0),
                    **_: Any) -> tuple[dict[str, Any], list[Assertion]]:
    rec = _Recorder()
    for q0 in q0_list:
        report = lemma_bound(q0)
        if q0 == 0.5:
            rec.flag("index bound at threshold 1/2", "inf",
                     _fmt(report.bound), math.isinf(report.bound))
        else:
            rec.close(f"index bound at q0={_fmt(q0)}",
                      LOG2 / (LOG2 + math.log(q0)), report.bound)

    band = interval_I_omega(2.0, 1.0)
    rec.close("excluded-exponent band for index two", 0.5, band.upper)
    band = interval_I_omega(1.0, 2.0)
    rec.close("generalized band shrinks by half", 0.5, band.upper)
    rec.flag("band for infinite index", "empty",
             "empty" if interval_I_omega(math.inf).empty else "non-empty",
             interval_I_omega(math.inf).empty)
    rec.flag("band for index zero", "(0, inf)",
             "(0, inf)" if math.isinf(interval_I_omega(0.0).upper)
             else "finite", math.isinf(interval_I_omega(0.0).upper))

    # coherence: concave power weights never falsify, convex ones do
    window = Window(1.0e2, 1.0e10)
    for s in (1.0, 2.0):
        verdict = probe_subadditivity(power_weight(s), 1.0, window)
        rec.flag(f"subadditivity of the power weight s={_fmt(s)}",
                 "Holds", verdict.state.value.capitalize(), verdict.holds)
    verdict = falsify_almost_subadditivity(power_weight(0.5),
                                           [1.05, 1.5, 2.0], window)
    rec.flag("falsification below the index threshold", "Fails",
             verdict.state.value.capitalize(), verdict.fails)
    return {"q0_list": list(q0_list)}, rec.rows


def _scenario_kappa(s: float = 2.0, **_: Any
                    ) -> tuple[dict[str, Any], list[Assertion]]:
    rec = _Recorder()
    base = power_weight(s)
    kappa = kappa_transform(base)
    worst = 0.0
    for i in range(25):
        log_y = i * (6.0 * math.log(10.0)) / 24.0
        y = math.exp(log_y)
        expected = (s / (s - 1.0)) * y ** (1.0 / s) if s > 1.0 else None
        if expected is None:
            continue
        got = kappa.eval(y)
        worst = max(worst, abs(got - expected) / expected)
    rec.at_most("tail-transform closed form, max relative error",
                worst, 1.0e-6)
    rec.close("tail transform vanishes with its argument", 0.0,
              kappa.eval(0.0))

    try:
        kappa_transform(power_weight(1.0))
        rec.flag("tail transform of the linear weight", "diverges",
                 "converged", False)
    except DivergenceError as exc:
        detail = f"diverges (panel {exc.panel})"
        rec.flag("tail transform of the linear weight", "diverges",
                 detail, exc.panel is not None and
                 exc.growth_ratio is not None and exc.growth_ratio > 0.9)

    # the associated weight of the smooth family matches its transform
    seq = build_gevrey(s, 1 << 45)
    omega = associated(seq)
    kappa_m = kappa_transform(omega)
    report = compare(omega, kappa_m, Window(1.0e3, 1.0e9))
    rec.flag("weight equivalent to its tail transform", "Holds",
             report.equivalent.state.value.capitalize(),
             report.equivalent.holds)
    rec.at_most("equivalence ratio spread",
                report.ratio_sup / max(report.ratio_inf, 1.0e-300), 4.0)

    verdict = probe_subadditivity(kappa, 1.0, Window(1.0e2, 1.0e10))
    rec.flag("tail transform is subadditive", "Holds",
             verdict.state.value.capitalize(), verdict.holds)
    return {"s": s}, rec.rows


_SCENARIOS: dict[str, Callable[..., tuple[dict[str, Any],
                                          list[Assertion]]]] = {
    "claims-a-e": _scenario_claims,
    "step-v-nonequiv": _scenario_step_v,
    "main-thm-family": _scenario_family,
    "qa-cases": _scenario_qa,
    "lemma-bounds": _scenario_lemma,
    "kappa-remark": _scenario_kappa,
}


def scenario_ids() -> list[str]:
    return list(_SCENARIOS)


def run_scenario(scenario_id: str, **params: Any) -> ScenarioReport:
    """Run one registered scenario; unknown ids are parameter errors."""
    try:
        body = _SCENARIOS[scenario_id]
    except KeyError:
        known = ", ".join(_SCENARIOS)
        raise ParameterError(
            f"unknown scenario '{scenario_id}' (known: {known})") from None
    start = time.perf_counter()
    inputs, rows = body(**params)
    report = ScenarioReport(scenario_id, inputs, rows,
                            time.perf_counter() - start)
    return report


def full_report(**params: Any) -> list[ScenarioReport]:
    """All scenarios in registry order; construction failures become
    skipped reports instead of aborting the sweep."""
    reports: list[ScenarioReport] = []
    for sid in _SCENARIOS:
        try:
            reports.append(run_scenario(sid, **params))
        except (ConstructionError, GrowthLabError) as exc:
            reports.append(ScenarioReport(sid, dict(params), [],
                                          skipped_reason=str(exc)))
    return reports


def render_text(reports: Iterable[ScenarioReport]) -> str:
    items = list(reports)
    blocks = [r.to_text() for r in items]
    ok = sum(1 for r in items if r.passed)
    skipped = sum(1 for r in items if r.skipped_reason is not None)
    tail = f"{ok}/{len(items)} scenarios passed"
    if skipped:
        tail += f" ({skipped} skipped)"
    return "\n\n".join(blocks + [tail])
