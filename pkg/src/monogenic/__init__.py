"""Orthonormal homogeneous monogenic polynomials in the unit ball of R^3.

The package evaluates the polynomials ``X_n^l`` and ``Y_n^m`` taking values
in the reduced quaternions, computes their norms by quadrature, expands
functions in the normalized basis and checks Bohr-type and derivative
inequalities numerically.
"""

from .basis import (
    BasisIndex,
    Family,
    basis_size,
    enumerate_basis,
    enumerate_upto,
    eval_all,
    eval_basis,
    exact_hyperderivative,
    pointwise_bound,
)
from .bohr import BohrVariant, bohr_sum, bohr_sup, majorant_radius, verify_derivative_bound
from .errors import ConfigurationError, DomainError, InvalidIndexError, MonogenicError
from .quadrature import BallRule, NormTable, gram_matrix, make_ball_rule, norm_table
from .quaternion import Quaternion, ReducedQuaternion
from .series import Constraint, MonogenicSeries, evaluate, project, sample_random

__all__ = [
    "BallRule",
    "BasisIndex",
    "BohrVariant",
    "ConfigurationError",
    "Constraint",
    "DomainError",
    "Family",
    "InvalidIndexError",
    "MonogenicError",
    "MonogenicSeries",
    "NormTable",
    "Quaternion",
    "ReducedQuaternion",
    "basis_size",
    "bohr_sum",
    "bohr_sup",
    "enumerate_basis",
    "enumerate_upto",
    "eval_all",
    "eval_basis",
    "evaluate",
    "exact_hyperderivative",
    "gram_matrix",
    "majorant_radius",
    "make_ball_rule",
    "norm_table",
    "pointwise_bound",
    "project",
    "sample_random",
    "verify_derivative_bound",
]

__version__ = "0.1.0"
