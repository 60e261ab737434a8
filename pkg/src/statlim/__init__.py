"""Exact p-adic functionals and invariants of stationary torsion-free
abelian groups presented as inductive limits of free abelian groups."""

from .exact import IntMatrix, charpoly, det_exact, hnf_int, lattice_member, p_valuation
from .factor import UnitIdealSplit, bezout_cofactors, hensel_split, unit_root_count
from .groups import (DEFAULT_PRECISION, FunctionalBasis, GroupElement,
                     InductivePrefix, StationaryPresentation, dp_distance,
                     element, functionals_basis, is_p_divisible,
                     limit_prefix_functionals, member, pro_p_corank,
                     unit_projection)
from .padic import (PadicMatrix, PadicRowVec, PadicScalar, PNorm, RowModule,
                    howell_form, left_kernel, matrix_poly_eval, padic_reduce,
                    row_module_contains)
from .quasi import (AdjoinResult, IncreasingPresentation, QuasiIsoData,
                    adjoin_element, increasing_to_limit, power_congruence,
                    quasi_to_stationary)

__version__ = "0.1.0"
