# Theory package
from theory.assumptions import (
    BOUNDED,
    NOT_COVERED,
    RegimeReport,
    check_assumptions,
    classify,
    mass_bound,
    theorem_verdict,
)
from theory.exponents import (
    RELATIONS,
    ExponentSet,
    PbarResult,
    default_q,
    find_pbar,
    gn_exponents,
)

__all__ = [
    'BOUNDED', 'NOT_COVERED', 'RegimeReport', 'check_assumptions', 'classify',
    'mass_bound', 'theorem_verdict',
    'RELATIONS', 'ExponentSet', 'PbarResult', 'default_q', 'find_pbar', 'gn_exponents',
]
