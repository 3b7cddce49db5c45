"""Holonomic/dynamical decomposition of subspace time evolution."""

from ._holosep import (
    ConfigError,
    Error,
    InPhaseError,
    PreconditionError,
    case_i_analytic,
    case_ii_analytic,
    case_iii_analytic,
    commutator_norm,
    decompose_constant,
    decompose_driven,
    expm_skew,
    lambda_case,
    lambda_hamiltonian,
    min_eigenvalue_hermitian,
    polar_decompose,
)

__all__ = [
    "ConfigError",
    "Error",
    "InPhaseError",
    "PreconditionError",
    "case_i_analytic",
    "case_ii_analytic",
    "case_iii_analytic",
    "commutator_norm",
    "decompose_constant",
    "decompose_driven",
    "expm_skew",
    "lambda_case",
    "lambda_hamiltonian",
    "min_eigenvalue_hermitian",
    "polar_decompose",
]
