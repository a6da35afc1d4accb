"""Tri-state verdicts and evaluation windows.

Every numerical probe in this package answers with one of three states
rather than a bare boolean: asymptotic conditions can only be *sampled*,
so a finite window either exhibits a concrete counterexample (``FAILS``,
always with a witness), shows a trend stable enough to accept
(``HOLDS``), or does neither (``INCONCLUSIVE``).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ParameterError


class VerdictState(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


#: Exit codes used by the command line tools, keyed by verdict state.
EXIT_CODE = {
    VerdictState.HOLDS: 0,
    VerdictState.FAILS: 1,
    VerdictState.INCONCLUSIVE: 2,
}

#: Trend thresholds shared by every quarter-maxima probe: a tail quarter
#: within FLAT_FACTOR of the reference quarter counts as stable, strict
#: growth by GROWTH_FACTOR counts as diverging, anything between is
#: Inconclusive.
FLAT_FACTOR = 1.25
GROWTH_FACTOR = 2.0


def fmt_float(x: float) -> str:
    """Render a float with 17 significant digits (bit-exact round trip)."""
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return repr(x)
    return format(float(x), ".17g")


def _jsonable(value: Any) -> Any:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, (np.floating,)):
        return _jsonable(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    return value


@dataclass(frozen=True)
class Window:
    """Log-spaced sampling window ``[t_min, t_max]``.

    Asymptotic probes require at least three decades so that a trend can
    be read off sub-windows; ``samples`` points are placed uniformly in
    ``log t``.
    """

    t_min: float
    t_max: float
    samples: int = 384

    MIN_SPAN = 1.0e3  # t_max / t_min for asymptotic probes

    def __post_init__(self) -> None:
        if not (0 < self.t_min < self.t_max):
            raise ParameterError(f"window needs 0 < t_min < t_max, "
                                 f"got [{self.t_min}, {self.t_max}]")
        if self.samples < 8:
            raise ParameterError("window needs at least 8 samples")

    def require_span(self) -> None:
        if self.t_max / self.t_min < self.MIN_SPAN:
            raise ParameterError(
                f"window spans {self.t_max / self.t_min:.3g}x; asymptotic "
                f"probes need t_max/t_min >= {self.MIN_SPAN:.0e}")

    @property
    def log_min(self) -> float:
        return math.log(self.t_min)

    @property
    def log_max(self) -> float:
        return math.log(self.t_max)

    @property
    def decades(self) -> float:
        return math.log10(self.t_max / self.t_min)

    def grid_log(self, samples: int | None = None) -> np.ndarray:
        """Sample positions in log-argument form (natural log of t)."""
        n = self.samples if samples is None else samples
        return np.linspace(self.log_min, self.log_max, n)

    def to_json_dict(self) -> dict[str, Any]:
        return {"t_min": fmt_float(self.t_min),
                "t_max": fmt_float(self.t_max),
                "samples": self.samples}

    @classmethod
    def from_logs(cls, log_min: float, log_max: float,
                  samples: int = 384) -> "Window":
        return cls(math.exp(log_min), math.exp(log_max), samples)


@dataclass
class Verdict:
    """Outcome of one probe.

    ``witness`` holds the concrete data that re-establishes a failure
    (sample points, defect values); ``stats`` holds trend diagnostics.
    A failing verdict without a witness is rejected outright.
    """

    condition: str
    state: VerdictState
    witness: dict[str, Any] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)
    window: Window | None = None

    def __post_init__(self) -> None:
        if self.state is VerdictState.FAILS and not self.witness:
            raise ParameterError(f"failing verdict for {self.condition!r} "
                                 "requires a witness")

    @property
    def holds(self) -> bool:
        return self.state is VerdictState.HOLDS

    @property
    def fails(self) -> bool:
        return self.state is VerdictState.FAILS

    @property
    def exit_code(self) -> int:
        return EXIT_CODE[self.state]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "state": self.state.value,
            "witness": _jsonable(self.witness),
            "window": self.window.to_json_dict() if self.window else None,
            "statistics": _jsonable(self.stats),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=False)


def holds(condition: str, *, stats: dict[str, Any] | None = None,
          window: Window | None = None,
          witness: dict[str, Any] | None = None) -> Verdict:
    return Verdict(condition, VerdictState.HOLDS, witness or {},
                   stats or {}, window)


def fails(condition: str, witness: dict[str, Any], *,
          stats: dict[str, Any] | None = None,
          window: Window | None = None) -> Verdict:
    return Verdict(condition, VerdictState.FAILS, witness, stats or {}, window)


def inconclusive(condition: str, *, stats: dict[str, Any] | None = None,
                 window: Window | None = None) -> Verdict:
    return Verdict(condition, VerdictState.INCONCLUSIVE, {}, stats or {},
                   window)
