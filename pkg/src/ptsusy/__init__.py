"""SUSY partners of the PT-symmetric harmonic oscillator on the contour z = x - i*epsilon.

Closed-form potentials and states, the intertwining algebra, and an
independent finite-difference eigensolver that checks them.
"""

from .errors import (
    ContourSingularityError,
    DegenerateClosureError,
    EvaluationError,
    PTSusyError,
    SingularShiftError,
)
from .model import (
    AnsatzConfig,
    CESClosure,
    ModelParams,
    ces_closure,
    contour_point,
    potential_from_W,
    pt_defect,
    pt_reflect,
    superpotential,
    superpotential_deriv,
    v_base,
    v_minus,
    v_plus,
)
from .numeric import GridSpec, inverse_iteration, discretize, solve_shifted
from .states import StateLabel, energy_minus, energy_plus, eigenpair

__version__ = "0.1.0"
