"""Continuum Fibonacci Schrodinger operators: spectra, trace maps, Prufer flows."""

from .words import (fib_number, substitution_word, approximant_word,
                    rotation_word, cyclic_shifts)
from .potentials import (ZeroPiece, ConstantPiece, PiecewiseConstantPiece,
                         PolynomialPiece, BumpPiece, splitcubic, discrete_split,
                         validate_split, assemble, parse_piece, SplitReport,
                         CellPotential)
from .transfer import (transfer_constant, transfer_ode, transfer_piece,
                       monodromy, monodromy_grid, half_trace, sl2_det,
                       suggested_steps)
from .tracemap import (TraceTriple, trace_map_step, fricke_vogt,
                       curve_of_initial_conditions, invariant_of_energy,
                       escape_test, dimension_upper_proxy, OrbitVerdict,
                       InvariantRecord)
from .prufer import (integrate_prufer, PruferState, ExponentFit,
                     measure_positive_growth, measure_rotation,
                     measure_negative_lognorm, measure_boundary_zero)
from .floquet import (Band, discriminant, discriminant_grid, band_scan,
                      level_roots, split_touching_bands, spectrum_slice)
from .nlevp import (NlevpProblem, build_period2, build_general, build_halfcell,
                    eigenvalue_scan, scaled_det, singular_values)
from .sl2util import (singular_directions, eigen_direction, angle_rp1,
                      check_angle_bound, check_angle_bound_constant_cell)
from .experiments import (CouplingHit, counterexample_search,
                          trace_divergence_check, invariant_scan)
from .kernels import BACKEND, USING_NUMBA

__version__ = "0.1.0"
