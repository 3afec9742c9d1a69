# Model package
from model.production import ProductionLaw, eval_production, make_production_law
from model.problem import (
    DomainSpec,
    ModelSpec,
    ValidatedModel,
    homogeneous_equilibrium,
    logistic_extremum,
    validate_model,
)

__all__ = [
    'ProductionLaw', 'eval_production', 'make_production_law',
    'DomainSpec', 'ModelSpec', 'ValidatedModel',
    'homogeneous_equilibrium', 'logistic_extremum', 'validate_model',
]
