"""
Regime classification: the five exponent assumptions and the boundedness
verdicts built on them
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from core.errors import (
    InvalidHypothesisParameter,
    NonPositiveParameter,
    RNotGreaterThanOne,
)
from model.problem import ModelSpec, validate_model

logger = logging.getLogger(__name__)

BOUNDED = "Bounded"
NOT_COVERED = "NotCovered"

# theorem ids by signal regime
ELLIPTIC_SIGNALS = "parabolic-elliptic"
PARABOLIC_SIGNALS = "fully-parabolic"

PAIR_ORDER = (("A2", "A4"), ("A2", "A5"), ("A3", "A4"), ("A3", "A5"))


@dataclass(frozen=True)
class RegimeReport:
    a1: bool
    a2: bool
    a3: bool
    a4: bool
    a5: bool
    verdict: Optional[str] = None
    theorem: Optional[str] = None
    witnesses: Tuple[Tuple[str, ...], ...] = ()
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def bounded(self) -> bool:
        return self.verdict == BOUNDED

    def holds(self, label: str) -> bool:
        return getattr(self, label.lower())

    def witness_text(self) -> str:
        """'A1|A3' for single witnesses, 'A2+A4|A3+A5' for pairs, '' when none"""
        return "|".join("+".join(w) for w in self.witnesses)


def check_assumptions(m1, m2, m3, k, l, r, n) -> RegimeReport:
    """Evaluate the five strict inequalities; the verdict is left unset"""
    if not (k > 0 and l > 0):
        raise InvalidHypothesisParameter(f"k,l>0 required, got k={k}, l={l}")
    if not r > 1:
        raise InvalidHypothesisParameter(f"r>1 required, got r={r}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidHypothesisParameter(f"n must be a positive integer, got {n!r}")

    attract = m2 + k
    repel = m3 + l
    diffusion = m1 + 2.0 / n
    return RegimeReport(
        a1=attract < repel,
        a2=attract < r,
        a3=attract < diffusion,
        a4=repel < r,
        a5=repel < diffusion,
    )


def theorem_verdict(report: RegimeReport, tau: int) -> RegimeReport:
    """Apply the boundedness theorem for the given τ to an assumption report"""
    if tau == 0:
        witnesses = tuple((label,) for label in ("A1", "A2", "A3") if report.holds(label))
        theorem = ELLIPTIC_SIGNALS
    elif tau == 1:
        witnesses = tuple(
            pair for pair in PAIR_ORDER if report.holds(pair[0]) and report.holds(pair[1])
        )
        theorem = PARABOLIC_SIGNALS
    else:
        raise InvalidHypothesisParameter(f"tau must be 0 or 1, got {tau!r}")

    if witnesses:
        return replace(report, verdict=BOUNDED, theorem=theorem, witnesses=witnesses)
    return replace(report, verdict=NOT_COVERED, theorem=None, witnesses=())


def _notes(spec: ModelSpec, report: RegimeReport) -> Tuple[str, ...]:
    notes: List[str] = []

    if spec.k == 1 and spec.l == 1:
        big_theta = spec.chi * spec.attractant.coefficient - spec.xi * spec.repellent.coefficient
        if big_theta == 0:
            balance = "balanced"
        else:
            balance = f"{'attraction' if big_theta > 0 else 'repulsion'} dominated"
        notes.append(f"linear productions: Θ = χα − ξγ = {big_theta:g} ({balance}); informational only")

    if spec.variant == "nonlocal":
        notes.append("nonlocal variant: classified under the same hypotheses as the local one")
        if spec.k > 2.0 / spec.n and spec.k > spec.l:
            notes.append(
                "k > 2/n and k > l: unbounded solutions are known for related systems "
                "without logistic damping; informational only"
            )

    if report.verdict == NOT_COVERED:
        notes.append("NotCovered means no theorem applies; it does not assert blow-up")

    return tuple(notes)


def classify(spec: ModelSpec) -> RegimeReport:
    """
    Regime verdict for a model

    τ=0 (local or nonlocal): Bounded iff A1 or A2 or A3.
    τ=1: Bounded iff (A2 or A3) and (A4 or A5).
    """
    model = validate_model(spec)
    if model.test_mode or model.lambda_ == 0 or model.mu == 0:
        raise InvalidHypothesisParameter("classification needs λ, μ > 0 (test-mode specs refused)")

    report = check_assumptions(model.m1, model.m2, model.m3, model.k, model.l, model.r, model.n)
    report = theorem_verdict(report, model.tau)
    report = replace(report, notes=_notes(model, report))

    logger.debug(f"classified {model.variant} τ={model.tau}: {report.verdict} {report.witness_text()}")
    return report


def mass_bound(lambda_, mu, r, omega_measure, initial_mass) -> float:
    """M = max{∫u0, (λ/μ)^{1/(r-1)} |Ω|}"""
    for name, value in (("lambda", lambda_), ("mu", mu), ("|Ω|", omega_measure)):
        if not value > 0:
            raise NonPositiveParameter(f"{name} must be positive, got {value}")
    if not initial_mass >= 0:
        raise NonPositiveParameter(f"initial mass must be nonnegative, got {initial_mass}")
    if not r > 1:
        raise RNotGreaterThanOne(f"r>1 required, got {r}")

    return max(initial_mass, (lambda_ / mu * omega_measure ** (r - 1.0)) ** (1.0 / (r - 1.0)))
