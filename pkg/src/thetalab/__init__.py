"""From binary self-dual codes to Siegel modular forms through second-order theta constants."""

from .algebra import GaussianRational, SparsePolynomial, apply_matrix_substitution
from .codes import BinaryCode, direct_sum, make_code, named_code, weight_enumerator
from .hgroup import check_invariance, d_s_matrix, group_closure, molien_dimension, t_g_matrix
from .symplectic import SiegelPoint, SymplecticMatrix, act, random_siegel_point
from .tangent import embedding_report, minimal_generators, t_formula
from .theta import Characteristic, construction_a, lattice_theta, theta, theta2_vector, vartheta
from .thetamap import schottky_polynomial, th2_evaluate, vanishing_experiment

__version__ = "0.1.0"

__all__ = [
    "BinaryCode",
    "Characteristic",
    "GaussianRational",
    "SiegelPoint",
    "SparsePolynomial",
    "SymplecticMatrix",
    "act",
    "apply_matrix_substitution",
    "check_invariance",
    "construction_a",
    "d_s_matrix",
    "direct_sum",
    "embedding_report",
    "group_closure",
    "lattice_theta",
    "make_code",
    "minimal_generators",
    "molien_dimension",
    "named_code",
    "random_siegel_point",
    "schottky_polynomial",
    "t_formula",
    "t_g_matrix",
    "th2_evaluate",
    "theta",
    "theta2_vector",
    "vanishing_experiment",
    "vartheta",
    "weight_enumerator",
]
