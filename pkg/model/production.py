"""
Signal production laws f (attractant) and g (repellent)

Both laws live inside power envelopes:
    0 <= f(s) <= alpha (s+1)^k
    gamma0 (s+1)^l <= g(s) <= gamma1 (s+1)^l
"""
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import EnvelopeViolated, NegativeArgument, NonPositiveParameter

ROLES = ("attractant", "repellent")
KINDS = ("prototype", "tabulated")

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ProductionLaw:
    """A production rate with its declared envelope"""

    role: str
    kind: str
    alpha: Optional[float] = None
    k: Optional[float] = None
    gamma0: Optional[float] = None
    gamma1: Optional[float] = None
    l: Optional[float] = None
    s_samples: Tuple[float, ...] = ()
    value_samples: Tuple[float, ...] = ()

    @property
    def exponent(self) -> float:
        return self.k if self.role == "attractant" else self.l

    @property
    def coefficient(self) -> float:
        """Coefficient of the prototype law (alpha, or the repellent midpoint)"""
        if self.role == "attractant":
            return self.alpha
        return 0.5 * (self.gamma0 + self.gamma1)

    def lower(self, s: ArrayLike) -> ArrayLike:
        if self.role == "attractant":
            return np.zeros_like(np.asarray(s, dtype=float))
        return self.gamma0 * (np.asarray(s, dtype=float) + 1.0) ** self.l

    def upper(self, s: ArrayLike) -> ArrayLike:
        if self.role == "attractant":
            return self.alpha * (np.asarray(s, dtype=float) + 1.0) ** self.k
        return self.gamma1 * (np.asarray(s, dtype=float) + 1.0) ** self.l

    def midpoint(self, s: ArrayLike) -> ArrayLike:
        return 0.5 * (self.lower(s) + self.upper(s))

    def __call__(self, s: ArrayLike) -> ArrayLike:
        return eval_production(self, s)


def _require_positive(params: Dict[str, float], names: Sequence[str]):
    for name in names:
        value = params.get(name)
        if value is None:
            raise NonPositiveParameter(f"{name} is required")
        if not np.isfinite(value) or value <= 0:
            raise NonPositiveParameter(f"{name} must be positive, got {value}")


def make_production_law(role: str, kind: str, params: Dict) -> ProductionLaw:
    """
    Build a production law

    Args:
        role: "attractant" or "repellent"
        kind: "prototype" or "tabulated"
        params: alpha, k (attractant) or gamma0, gamma1, l (repellent);
            tabulated laws also take "s" and "values" sample sequences

    Returns:
        A law whose evaluation stays inside its envelope
    """
    if role not in ROLES:
        raise ValueError(f"unknown role {role!r}, expected one of {ROLES}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")

    if role == "attractant":
        _require_positive(params, ("alpha", "k"))
        envelope = {"alpha": float(params["alpha"]), "k": float(params["k"])}
    else:
        gamma0 = params.get("gamma0", params.get("gamma"))
        gamma1 = params.get("gamma1", gamma0)
        envelope = {"gamma0": gamma0, "gamma1": gamma1, "l": params.get("l")}
        _require_positive(envelope, ("gamma0", "gamma1", "l"))
        envelope = {key: float(value) for key, value in envelope.items()}
        if envelope["gamma0"] > envelope["gamma1"]:
            raise NonPositiveParameter(
                f"gamma0={envelope['gamma0']} must not exceed gamma1={envelope['gamma1']}"
            )

    if kind == "prototype":
        return ProductionLaw(role=role, kind=kind, **envelope)

    s = np.asarray(params.get("s", ()), dtype=float)
    values = np.asarray(params.get("values", ()), dtype=float)
    if s.ndim != 1 or s.size < 2 or s.shape != values.shape:
        raise ValueError("tabulated laws need matching 1D 's' and 'values' with at least 2 samples")
    if s[0] != 0.0 or np.any(np.diff(s) <= 0) or not np.all(np.isfinite(s)):
        raise ValueError("tabulated samples must start at s=0 and increase strictly")

    law = ProductionLaw(
        role=role,
        kind=kind,
        s_samples=tuple(s.tolist()),
        value_samples=tuple(values.tolist()),
        **envelope,
    )

    lower, upper = law.lower(s), law.upper(s)
    bad = ~np.isfinite(values) | (values < lower) | (values > upper)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EnvelopeViolated(float(s[i]), float(values[i]), float(lower[i]), float(upper[i]))
    return law


def eval_production(law: ProductionLaw, s: ArrayLike) -> ArrayLike:
    """Evaluate a production law at s >= 0 (scalar or array)"""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0) or np.any(np.isnan(s_arr)):
        raise NegativeArgument(f"production laws are defined for s >= 0, got min {np.nanmin(s_arr)}")

    if law.kind == "prototype":
        value = law.coefficient * (s_arr + 1.0) ** law.exponent
    else:
        samples = np.asarray(law.s_samples)
        value = np.interp(s_arr, samples, np.asarray(law.value_samples))
        beyond = s_arr > samples[-1]
        value = np.where(beyond, law.midpoint(s_arr), value)
        value = np.clip(value, law.lower(s_arr), law.upper(s_arr))

    if np.ndim(s) == 0:
        return float(value)
    return value
