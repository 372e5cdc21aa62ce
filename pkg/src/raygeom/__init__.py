"""Geometric phases, Bargmann invariants and null-phase curves on ray space."""
from .errors import (ConvergenceError, DimensionMismatchError, DomainError,
                     RaygeomError, UndefinedPhaseError, UnsupportedError)
from .state_space import (Ray, StateVector, in_phase, inner_product,
                          pancharatnam_phase, project_to_ray, wrap_phase)
from .curves import (ChartCurve, PiecewiseCurve, SampledCurve, concatenate,
                     curve_length, dynamical_phase, geometric_phase,
                     horizontal_lift, phase_composition_defect, total_phase)

__version__ = "0.1.0"
