"""
Consistency of a simulated series with the regime predicted by theory
"""
from dataclasses import dataclass
from typing import Optional

from diagnostics.series import (
    BLOWUP_SUSPECTED,
    BOUNDED,
    BlowupThresholds,
    TimeSeries,
    Verdict,
    detect_blowup,
)
from model.problem import ModelSpec
from theory.assumptions import RegimeReport, mass_bound

AGREEMENT = "Agreement"
TENSION = "Tension"
PENDING = "Pending"
NO_CLAIM = "NoClaim"

ADVICE = {
    AGREEMENT: "",
    TENSION: "theory predicts boundedness; refine the grid or lower cfl before trusting this run",
    PENDING: "no plateau yet; extend the horizon T",
    NO_CLAIM: "no theorem covers these parameters",
}


@dataclass(frozen=True)
class BoundednessReport:
    flag: str
    assessment: Verdict
    regime_verdict: Optional[str]
    mass_bound: Optional[float]
    mass_margin: Optional[float]
    advice: str

    def as_dict(self) -> dict:
        return {
            "flag": self.flag,
            "assessment": str(self.assessment),
            "regime": self.regime_verdict,
            "mass_bound": self.mass_bound,
            "mass_margin": self.mass_margin,
            "advice": self.advice,
        }


def boundedness_report(
    series: TimeSeries,
    regime: RegimeReport,
    model: ModelSpec,
    omega_measure: float,
    thresholds: BlowupThresholds = BlowupThresholds(),
) -> BoundednessReport:
    """
    Agreement: theory Bounded and series Bounded
    Tension:   theory Bounded and series BlowupSuspected
    Pending:   theory Bounded and series Inconclusive
    NoClaim:   theory NotCovered (or no regime available)

    The mass margin is 1 - max recorded mass / M; negative means the bound
    was exceeded. It is None when λ or μ vanish.
    """
    assessment = detect_blowup(series, thresholds)

    if regime is None or not regime.bounded:
        flag = NO_CLAIM
    elif assessment.kind == BOUNDED:
        flag = AGREEMENT
    elif assessment.kind == BLOWUP_SUSPECTED:
        flag = TENSION
    else:
        flag = PENDING

    bound = margin = None
    if model.lambda_ > 0 and model.mu > 0:
        bound = mass_bound(model.lambda_, model.mu, model.r, omega_measure, max(series.mass[0], 0.0))
        margin = 1.0 - max(series.mass) / bound

    return BoundednessReport(
        flag=flag,
        assessment=assessment,
        regime_verdict=None if regime is None else regime.verdict,
        mass_bound=bound,
        mass_margin=margin,
        advice=ADVICE[flag],
    )
