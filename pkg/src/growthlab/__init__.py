"""Block-exact toolkit for log-convex weight sequences and growth indices."""

from .conditions import (check_beta3, check_mg, check_nq,
                         falsify_almost_subadditivity, mu_over_k_profile,
                         probe_convexity, probe_gamma_relation, probe_om1,
                         probe_omnq, probe_omsnq, probe_ratio_condition,
                         probe_square_condition, probe_subadditivity)
from .errors import (ConstructionError, DivergenceError, GrowthLabError,
                     ParameterError, SequenceIndexError, WeightDomainError)
from .indices import (BoundReport, IndexEstimate, Interval,
                      estimate_gamma_M_upper, estimate_gamma_omega,
                      interval_I_omega, lemma_bound)
from .scenarios import (Assertion, ScenarioReport, full_report, render_text,
                        run_scenario, scenario_ids)
from .sequences import (Block, BlockKind, BlockSequence, Checkpoint, Family,
                        build_gevrey, build_nq, build_qa_diverging,
                        build_qa_oscillating, build_qa_vanishing,
                        build_sequence, log_of_int)
from .verdicts import Verdict, VerdictState, Window
from .weights import (AssociatedWeight, ComparisonReport, ExpLogSquare,
                      KappaWeight, LogPower, PowerComposedWeight, PowerWeight,
                      QuadratureParams, ScaledWeight, WeightFn, associated,
                      compare, exp_log_square, kappa_transform, log_power,
                      parse_weight, power_compose, power_weight, scale)

__version__ = "0.1.0"

__all__ = [
    "Assertion", "AssociatedWeight", "Block", "BlockKind", "BlockSequence",
    "BoundReport", "Checkpoint", "ComparisonReport", "ConstructionError",
    "DivergenceError", "ExpLogSquare", "Family", "GrowthLabError",
    "IndexEstimate", "Interval", "KappaWeight", "LogPower", "ParameterError",
    "PowerComposedWeight", "PowerWeight", "QuadratureParams", "ScaledWeight",
    "ScenarioReport", "SequenceIndexError", "Verdict", "VerdictState",
    "WeightDomainError", "WeightFn", "Window",
    "associated", "build_gevrey", "build_nq", "build_qa_diverging",
    "build_qa_oscillating", "build_qa_vanishing", "build_sequence",
    "check_beta3", "check_mg", "check_nq", "compare", "estimate_gamma_M_upper",
    "estimate_gamma_omega", "exp_log_square", "falsify_almost_subadditivity",
    "full_report", "interval_I_omega", "kappa_transform", "lemma_bound",
    "log_of_int", "log_power", "mu_over_k_profile", "parse_weight",
    "power_compose", "power_weight", "probe_convexity",
    "probe_gamma_relation", "probe_om1", "probe_omnq", "probe_omsnq",
    "probe_ratio_condition", "probe_square_condition", "probe_subadditivity",
    "render_text", "run_scenario", "scale", "scenario_ids",
    "__version__",
]
