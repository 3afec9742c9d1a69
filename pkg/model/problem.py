"""
Problem data for the local and nonlocal attraction-repulsion systems
"""
import math
from dataclasses import asdict, dataclass, field, fields
from typing import List, Tuple

from core.errors import ModelValidationError, NonPositiveParameter, RNotGreaterThanOne
from model.production import ProductionLaw, eval_production, make_production_law

VARIANTS = ("local", "nonlocal")


def _default_attractant() -> ProductionLaw:
    return make_production_law("attractant", "prototype", {"alpha": 1.0, "k": 1.0})


def _default_repellent() -> ProductionLaw:
    return make_production_law("repellent", "prototype", {"gamma0": 1.0, "gamma1": 1.0, "l": 1.0})


@dataclass(frozen=True)
class ModelSpec:
    """Full parameter set of the local or nonlocal system"""

    variant: str = "local"
    tau: int = 0
    chi: float = 1.0
    xi: float = 1.0
    lambda_: float = 1.0
    mu: float = 1.0
    r: float = 2.0
    m1: float = 1.0
    m2: float = 1.0
    m3: float = 1.0
    beta: float = 1.0
    delta: float = 1.0
    attractant: ProductionLaw = field(default_factory=_default_attractant)
    repellent: ProductionLaw = field(default_factory=_default_repellent)
    n: int = 1
    test_mode: bool = False

    @property
    def k(self) -> float:
        return self.attractant.k

    @property
    def l(self) -> float:
        return self.repellent.l

    def f(self, s):
        return eval_production(self.attractant, s)

    def g(self, s):
        return eval_production(self.repellent, s)


@dataclass(frozen=True)
class ValidatedModel(ModelSpec):
    """A ModelSpec that passed validate_model"""


@dataclass(frozen=True)
class DomainSpec:
    """Rectangular surrogate of the smooth domain"""

    dimension: int
    extents: Tuple[float, ...]
    cells: Tuple[int, ...]

    @property
    def measure(self) -> float:
        return math.prod(self.extents)


def _collect_issues(spec: ModelSpec) -> List[Tuple[str, str]]:
    issues = []

    if spec.variant not in VARIANTS:
        issues.append(("variant", f"must be one of {VARIANTS}, got {spec.variant!r}"))
    if spec.tau not in (0, 1):
        issues.append(("tau", f"must be 0 or 1, got {spec.tau!r}"))
    if spec.variant == "nonlocal" and spec.tau != 0:
        issues.append(("tau", "nonlocal requires τ=0"))

    if not spec.r > 1:
        issues.append(("r", "r>1 required"))

    for name in ("chi", "xi"):
        value = getattr(spec, name)
        if spec.test_mode:
            if not value >= 0:
                issues.append((name, f"must be nonnegative, got {value}"))
        elif not value > 0:
            issues.append((name, f"must be positive, got {value}"))

    for name in ("lambda_", "mu"):
        value = getattr(spec, name)
        if not value >= 0:
            issues.append((name, f"must be nonnegative, got {value}"))
        elif value == 0 and not spec.test_mode:
            issues.append((name, "zero only permitted in test mode"))

    if spec.variant == "local":
        for name in ("beta", "delta"):
            if not getattr(spec, name) > 0:
                issues.append((name, f"must be positive, got {getattr(spec, name)}"))

    for name in ("m1", "m2", "m3", "chi", "xi", "lambda_", "mu", "r", "beta", "delta"):
        if not math.isfinite(getattr(spec, name)):
            issues.append((name, "must be finite"))

    if not isinstance(spec.n, int) or isinstance(spec.n, bool) or spec.n < 1:
        issues.append(("n", f"must be a positive integer, got {spec.n!r}"))

    if not isinstance(spec.attractant, ProductionLaw) or spec.attractant.role != "attractant":
        issues.append(("attractant", "must be an attractant ProductionLaw"))
    if not isinstance(spec.repellent, ProductionLaw) or spec.repellent.role != "repellent":
        issues.append(("repellent", "must be a repellent ProductionLaw"))

    return issues


def validate_model(spec: ModelSpec) -> ValidatedModel:
    """
    Check every ModelSpec invariant

    Returns:
        A frozen ValidatedModel; validating one again returns it unchanged

    Raises:
        ModelValidationError listing every violated invariant by field
    """
    if isinstance(spec, ValidatedModel):
        return spec

    issues = _collect_issues(spec)
    if issues:
        raise ModelValidationError(issues)

    values = {f.name: getattr(spec, f.name) for f in fields(spec)}
    return ValidatedModel(**values)


def logistic_extremum(lambda_: float, mu: float, r: float) -> Tuple[float, float]:
    """Location u_M and value L of the maximum of λu − μu^r on u >= 0"""
    if not (lambda_ > 0 and mu > 0):
        raise NonPositiveParameter(f"lambda and mu must be positive, got {lambda_}, {mu}")
    if not r > 1:
        raise RNotGreaterThanOne(f"r>1 required, got {r}")

    u_max = (lambda_ / (r * mu)) ** (1.0 / (r - 1.0))
    return u_max, lambda_ * u_max - mu * u_max**r


def homogeneous_equilibrium(model: ModelSpec) -> Tuple[float, float, float]:
    """Positive constant steady state (u*, v*, w*)"""
    if not (model.lambda_ > 0 and model.mu > 0):
        raise NonPositiveParameter("the positive equilibrium needs lambda, mu > 0")

    u_star = (model.lambda_ / model.mu) ** (1.0 / (model.r - 1.0))
    if model.variant == "nonlocal":
        return u_star, 0.0, 0.0
    return u_star, model.f(u_star) / model.beta, model.g(u_star) / model.delta


def model_summary(model: ModelSpec) -> dict:
    """Flat parameter dictionary (production laws reduced to their envelopes)"""
    summary = asdict(model)
    summary.pop("attractant")
    summary.pop("repellent")
    summary.update(
        alpha=model.attractant.alpha,
        k=model.attractant.k,
        gamma0=model.repellent.gamma0,
        gamma1=model.repellent.gamma1,
        l=model.repellent.l,
    )
    return summary
