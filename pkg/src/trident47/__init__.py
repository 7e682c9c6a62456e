"""Geometric control toolkit for the (4,7) trident mechanism."""

from .errors import (ChartMismatch, DegenerateGrowth, DivisionByZero, NotASymmetry,
                     SingularConfiguration, TridentError, ZeroCombination,
                     ZeroHorizontalMomentum)
from .fields import (ADAPTED, ORIGINAL, VectorFieldSym, coordinate_field, coords,
                     differentiate, eval_field, evaluate, fields_equal, lie_bracket,
                     zero_field)
from .mechanism import (Configuration, ControllabilityResult, DynamicPairResult,
                        MechanismConstants, SignatureResult, check_dynamic_pair,
                        controllability, horizontal_frame, horizontal_frame_slice,
                        leg_span, pfaff_matrix, pfaffian_signature,
                        reference_configuration, wheel_positions)
from .nilpotent import (AdaptedPoint, GroupElement, check_left_invariance,
                        check_path_geometry_conditions, from_adapted, group_identity,
                        group_inverse, group_mul, nilpotent_frame, to_adapted)
from .pmp import (BracketMotionParams, FibreState, SolutionConstants, Trajectory,
                  base_rhs, bracket_motion, closed_form_base, closed_form_fibre,
                  example_momenta, example_solution, fibre_rhs, hamiltonian,
                  integrate_extremal, normalize_arclength, read_trajectory_csv,
                  write_trajectory_csv)
from .symmetry import (SymmetryField, check_symmetry_conditions, fixed_point_set,
                       so3_combination, so3_structure, symmetry_flow, v_fields,
                       w_fields)

__version__ = "0.1.0"
