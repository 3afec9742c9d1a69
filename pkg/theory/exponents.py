"""
Gagliardo-Nirenberg exponents of the L^p energy estimates and the p̄ search

All exponents share the numerator scale A = (p+m1-1)/2 and the denominator
A - 1/2 + 1/n. The half-products sigma*theta/2 are evaluated in their reduced
forms, e.g. (p+m2+k-2)/(p+m1-2+2/n), which are exact at the critical cases.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from config.config import Config
from core.errors import DegenerateDenominator, InvalidHypothesisParameter, NotFoundWithinScan

logger = logging.getLogger(__name__)

RELATIONS = (
    "theta",
    "sigma_theta",
    "theta_bar",
    "sigma_theta_bar",
    "theta_hat",
    "sigma_theta_hat",
    "theta_tilde",
    "sigma_theta_tilde",
    "theta_under",
)

# relations that only exist for l > 1
L_DEPENDENT = ("theta_hat", "sigma_theta_hat")


def flag_column(relation: str) -> str:
    """CSV column of a relation flag; relation names overlap the exponent names"""
    return f"flag_{relation}"


# relation name -> quantity that must lie strictly inside (0, 1)
RELATION_QUANTITY = {
    "theta": "theta",
    "sigma_theta": "sigma_theta_half",
    "theta_bar": "theta1",
    "sigma_theta_bar": "sigma1_theta1_half",
    "theta_hat": "theta2",
    "sigma_theta_hat": "sigma1_theta2_half",
    "theta_tilde": "theta4",
    "sigma_theta_tilde": "sigma2_theta4_half",
    "theta_under": "theta3",
}


@dataclass(frozen=True)
class ExponentSet:
    """Exponents at one (p, q) with the relation flags they satisfy"""

    p: float
    q: float
    theta: float
    sigma: float
    theta1: float
    sigma1: float
    theta2: Optional[float]
    theta3: float
    theta4: float
    sigma2: float
    sigma_theta_half: float
    sigma1_theta1_half: float
    sigma1_theta2_half: Optional[float]
    sigma2_theta4_half: float
    flags: Dict[str, bool] = field(default_factory=dict)

    def as_row(self) -> Dict[str, object]:
        row = {
            name: getattr(self, name)
            for name in (
                "p", "q", "theta", "sigma", "sigma_theta_half", "theta1", "sigma1",
                "sigma1_theta1_half", "theta2", "sigma1_theta2_half", "theta3",
                "theta4", "sigma2", "sigma2_theta4_half",
            )
        }
        row.update({flag_column(name): value for name, value in self.flags.items()})
        return row


@dataclass(frozen=True)
class PbarResult:
    """Outcome of the p̄ scan"""

    p_bar: float
    q: float
    required: Tuple[str, ...]
    certificate: Tuple[float, ...]


def default_q(l: float, m3: float) -> float:
    """q = max{l, m3+l-1} + 1"""
    return max(l, m3 + l - 1.0) + 1.0


def exponent_arrays(p, q, n, m1, m2, m3, k, l) -> Dict[str, np.ndarray]:
    """
    Raw exponent values for an array of p

    Entries are NaN where a defining base or denominator is not positive;
    the "admissible" entry marks the valid points.
    """
    p = np.asarray(p, dtype=float)
    base = p + m1 - 1.0
    attract = p + m2 + k - 1.0
    repel = p + m3 + l - 1.0
    a = 0.5 * base
    den = a - 0.5 + 1.0 / n

    admissible = (base > 0) & (attract > 0) & (repel > 0) & (den > 0)

    with np.errstate(divide="ignore", invalid="ignore"):
        den_safe = np.where(admissible, den, np.nan)
        values = {
            "theta": (a - a / attract) / den_safe,
            "sigma": 2.0 * attract / base,
            "theta1": (a - a / repel) / den_safe,
            "sigma1": 2.0 * repel / base,
            "theta3": (a - a / p) / den_safe,
            "theta4": (a - a / q) / den_safe,
            "sigma2": 2.0 * (p + q) / base,
            "sigma_theta_half": (attract - 1.0) / (2.0 * den_safe),
            "sigma1_theta1_half": (repel - 1.0) / (2.0 * den_safe),
            "sigma2_theta4_half": (p + q) * (q - 1.0) / (2.0 * q * den_safe),
        }
        if l > 1:
            values["theta2"] = (a - a / l) / den_safe
            values["sigma1_theta2_half"] = repel * (1.0 - 1.0 / l) / (2.0 * den_safe)

    values["admissible"] = admissible
    return values


def relation_flags(values: Dict[str, np.ndarray], names: Iterable[str]) -> Dict[str, np.ndarray]:
    """Strict (0, 1) membership of every named relation; inadmissible points fail"""
    flags = {}
    for name in names:
        quantity = values.get(RELATION_QUANTITY[name])
        if quantity is None:
            continue
        with np.errstate(invalid="ignore"):
            flags[name] = values["admissible"] & (quantity > 0) & (quantity < 1)
    return flags


def _check_hypotheses(q: float, n: int, k: float, l: float):
    if not q > 1:
        raise InvalidHypothesisParameter(f"q>1 required, got {q}")
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidHypothesisParameter(f"n must be a positive integer, got {n!r}")
    if not (k > 0 and l > 0):
        raise InvalidHypothesisParameter(f"k,l>0 required, got k={k}, l={l}")


def gn_exponents(p, q, n, m1, m2, m3, k, l) -> ExponentSet:
    """All exponents and relation flags at a single (p, q)"""
    _check_hypotheses(q, n, k, l)
    if not p > 1:
        raise InvalidHypothesisParameter(f"p>1 required, got {p}")

    for label, value in (
        ("p+m1-1", p + m1 - 1), ("p+m2+k-1", p + m2 + k - 1), ("p+m3+l-1", p + m3 + l - 1),
    ):
        if value <= 0:
            raise DegenerateDenominator(f"{label}={value:g} must be positive")
    if (p + m1 - 1) / 2 - 0.5 + 1.0 / n <= 0:
        raise DegenerateDenominator(f"(p+m1-1)/2 - 1/2 + 1/n must be positive at p={p:g}")

    values = exponent_arrays(p, q, n, m1, m2, m3, k, l)
    flags = relation_flags(values, RELATIONS)

    def scalar(name):
        value = values.get(name)
        return None if value is None else float(value)

    return ExponentSet(
        p=float(p),
        q=float(q),
        theta=scalar("theta"),
        sigma=scalar("sigma"),
        theta1=scalar("theta1"),
        sigma1=scalar("sigma1"),
        theta2=scalar("theta2"),
        theta3=scalar("theta3"),
        theta4=scalar("theta4"),
        sigma2=scalar("sigma2"),
        sigma_theta_half=scalar("sigma_theta_half"),
        sigma1_theta1_half=scalar("sigma1_theta1_half"),
        sigma1_theta2_half=scalar("sigma1_theta2_half"),
        sigma2_theta4_half=scalar("sigma2_theta4_half"),
        flags={name: bool(flag) for name, flag in flags.items()},
    )


def _resolve_required(required: Optional[Iterable[str]], l: float) -> Tuple[str, ...]:
    names = tuple(RELATIONS if required is None else required)
    unknown = [name for name in names if name not in RELATIONS]
    if unknown:
        raise InvalidHypothesisParameter(f"unknown relations: {', '.join(unknown)}")
    if l <= 1:
        names = tuple(name for name in names if name not in L_DEPENDENT)
    return names


def find_pbar(
    q,
    n,
    m1,
    m2,
    m3,
    k,
    l,
    required: Optional[Iterable[str]] = None,
    step: float = Config.PBAR_STEP,
    p_max: float = Config.PBAR_MAX,
    window: float = Config.PBAR_WINDOW,
    samples: int = Config.PBAR_SAMPLES,
    chunk: int = 2000,
) -> PbarResult:
    """
    Smallest grid point p̄ = 1 + j*step at which the required relations hold,
    certified on `samples` equispaced points of (p̄, p̄+window]

    Raises:
        NotFoundWithinScan naming the relations violated at the largest p
    """
    _check_hypotheses(q, n, k, l)
    names = _resolve_required(required, l)
    offsets = window * np.arange(1, samples + 1) / samples

    def holds(p):
        flags = relation_flags(exponent_arrays(p, q, n, m1, m2, m3, k, l), names)
        result = np.ones(np.shape(p), dtype=bool)
        for flag in flags.values():
            result &= flag
        return result

    last_j = int(np.floor((p_max - 1.0) / step + 1e-9))
    for start in range(1, last_j + 1, chunk):
        js = np.arange(start, min(start + chunk, last_j + 1))
        grid = 1.0 + js * step
        for p_bar in grid[holds(grid)]:
            certificate = p_bar + offsets
            if np.all(holds(certificate)):
                logger.debug(f"p̄={p_bar:.4f} for q={q:g} with {len(names)} relations")
                return PbarResult(
                    p_bar=float(p_bar),
                    q=float(q),
                    required=names,
                    certificate=tuple(float(x) for x in certificate),
                )

    p_last = 1.0 + last_j * step
    flags = relation_flags(exponent_arrays(p_last, q, n, m1, m2, m3, k, l), names)
    violated = [name for name in names if not bool(flags[name])]
    raise NotFoundWithinScan(violated, p_last)
