"""Spectral toolkit for weighted simplicial complexes."""

from .core import (EMPTY, GradedFunction, Simplex, SimplicialComplex,
                   WeightAssignment, build_complex, cofaces, check_local_summability,
                   indicator, inner, is_balanced, norm, normalizing_weights, simplex)
from .operators import (LevelOperator, OrientationAssignment, apply_boundary,
                        apply_coboundary, boundary_matrix, coboundary_matrix,
                        theta, verify_dd_zero, verify_stokes)
from .laplacian import (LaplacianSpec, Truncation, assemble, dn_form_gap,
                        gauss_bonnet_operator, gauss_bonnet_square_check,
                        symmetrize_to_euclidean, truncate_by_distance)
from .schrodinger import (SchrodingerData, apply_schrodinger, direct_energy,
                          forman_curvature, forman_curvature_combinatorial,
                          operator_matrix, quadratic_form_via_boc, row_l2_norm,
                          schrodinger_data)
from .spectral import (Spectrum, betti, compare_mod_zero, eigen, hodge_decompose,
                       level_spectrum, normalizing_bound_check,
                       verify_spectrum_identities, verify_truncation_pairings)
from .bridge import (AlternatingForm, OrientedSimplex, classical_coboundary,
                     from_function, oriented_norm_squared, oriented_sign,
                     to_function)
from .criteria import (ball_probe, boundedness_report, curvature_criterion,
                       degree_path_metric, hausdorff_lift, intrinsic_check,
                       metric_weights, path_metric, path_product_sums)
from . import generators

__version__ = "0.1.0"
