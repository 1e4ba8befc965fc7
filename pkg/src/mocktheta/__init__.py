"""Coefficients of the mock theta function f(q), partition rank counts
modulo 2, and finite-range verification of their effective bounds."""

from .modular import CertificationError, PrecisionPolicy, trace_alpha, trace_S
from .quadforms import QForm, assign_coset, reduce, reduced_primitive_forms
from .report import BoundReport
from .series import (
    f_weakly_holomorphic_coeffs,
    mock_theta_coeffs,
    partition_counts,
    rank_table,
)

__all__ = [
    "BoundReport",
    "CertificationError",
    "PrecisionPolicy",
    "QForm",
    "assign_coset",
    "f_weakly_holomorphic_coeffs",
    "mock_theta_coeffs",
    "partition_counts",
    "rank_table",
    "reduce",
    "reduced_primitive_forms",
    "trace_S",
    "trace_alpha",
]
__version__ = "0.1.0"
