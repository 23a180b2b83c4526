"""Simulate -> bound -> compare pipeline and its text/JSON renderings."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Any

from . import quantum
from .lp import AssumptionSet, BoundsResult, ace_bounds
from .quantum import MarginalExogeneityReport, ObservedDistribution, QuantumInstrumentalScenario

VERDICT_SLACK = 1e-9
VERDICT_ASSUMPTIONS = AssumptionSet.JE_STRATIFIED_ER


class Verdict(str, enum.Enum):
    CONSISTENT = "CONSISTENT"
    JOINT_EXOGENEITY_FALSIFIED = "JOINT_EXOGENEITY_FALSIFIED"


def decide(true_ace: float, bounds: BoundsResult) -> tuple[Verdict, float | None]:
    """Verdict and signed margin of ``true_ace`` relative to ``bounds``.

    The margin is positive by the distance outside the interval and
    negative by the distance to the nearest edge inside it.  An infeasible
    program admits no ACE at all and is reported as falsified with margin
    ``None``.
    """
    if not bounds.optimal:
        return Verdict.JOINT_EXOGENEITY_FALSIFIED, None
    margin = max(bounds.lower - true_ace, true_ace - bounds.upper)
    outside = true_ace < bounds.lower - VERDICT_SLACK or true_ace > bounds.upper + VERDICT_SLACK
    return (Verdict.JOINT_EXOGENEITY_FALSIFIED if outside else Verdict.CONSISTENT), margin


@dataclass
class FalsificationReport:
    observed: ObservedDistribution
    bounds_by_assumption: dict[AssumptionSet, BoundsResult]
    true_ace: float
    marginal_exogeneity: MarginalExogeneityReport
    verdict: Verdict
    margin: float | None

    @property
    def falsified(self) -> bool:
        return self.verdict is Verdict.JOINT_EXOGENEITY_FALSIFIED

    def to_json(self) -> dict[str, Any]:
        return {
            "observed": self.observed.to_json(),
            "boundsByAssumption": {a.value: b.to_json() for a, b in self.bounds_by_assumption.items()},
            "trueAce": self.true_ace,
            "marginalExogeneity": self.marginal_exogeneity.to_json(),
            "verdict": self.verdict.value,
            "margin": self.margin,
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "FalsificationReport":
        me = doc["marginalExogeneity"]
        return cls(
            observed=ObservedDistribution.from_json(doc["observed"]),
            bounds_by_assumption={
                AssumptionSet(k): BoundsResult.from_json(v) for k, v in doc["boundsByAssumption"].items()
            },
            true_ace=float(doc["trueAce"]),
            marginal_exogeneity=MarginalExogeneityReport(bool(me["holds"]), float(me["maxDeviation"])),
            verdict=Verdict(doc["verdict"]),
            margin=None if doc["margin"] is None else float(doc["margin"]),
        )


def falsify_pipeline(s: QuantumInstrumentalScenario) -> FalsificationReport:
    observed = quantum.born_distribution(s)
    bounds = {a: ace_bounds(observed, a) for a in AssumptionSet}
    ace = quantum.true_ace(s)
    verdict, margin = decide(ace, bounds[VERDICT_ASSUMPTIONS])
    return FalsificationReport(
        observed=observed,
        bounds_by_assumption=bounds,
        true_ace=ace,
        marginal_exogeneity=quantum.check_marginal_exogeneity(s),
        verdict=verdict,
        margin=margin,
    )


def _fmt(v: float | None, spec: str = "+.4f") -> str:
    return "n/a" if v is None else format(v, spec)


def render_text(r: FalsificationReport) -> str:
    lines = ["Observed distribution p(x,y|z)", "  z  x  y       p"]
    for z in (0, 1):
        for x in (0, 1):
            for y in (0, 1):
                lines.append(f"  {z}  {x}  {y}  {r.observed.p[z, x, y]:.4f}")
    lines += ["", "ACE bounds", f"  {'assumptions':<18} {'lower':>8} {'upper':>8}  status"]
    for a, b in r.bounds_by_assumption.items():
        status = "OPTIMAL" if b.optimal else f"{b.lower_status.value}/{b.upper_status.value}"
        lines.append(f"  {a.value:<18} {_fmt(b.lower):>8} {_fmt(b.upper):>8}  {status}")
    me = r.marginal_exogeneity
    lines += [
        "",
        f"  true ACE            {r.true_ace:+.4f}",
        f"  marginal exog.      {'holds' if me.holds else 'fails'} (max deviation {me.max_deviation:.1e})",
        f"  margin              {_fmt(r.margin)}",
        f"  verdict             {r.verdict.value}",
    ]
    return "\n".join(lines) + "\n"


def render_json(r: FalsificationReport) -> str:
    return json.dumps(r.to_json(), sort_keys=True, indent=2) + "\n"


def render_report(r: FalsificationReport, fmt: str = "text") -> str:
    fmt = fmt.lower()
    if fmt == "text":
        return render_text(r)
    if fmt == "json":
        return render_json(r)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> FalsificationReport:
    return FalsificationReport.from_json(json.loads(text))
