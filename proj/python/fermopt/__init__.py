"""Gaussian-state optimization for Majorana Hamiltonians."""

from ._fermopt import (
    FermoptError,
    Hamiltonian,
    canonical_sign,
    correlation_matrix,
    expectation,
    gaussian_numeric_max,
    gen_sparse_random,
    gen_ssyk,
    gen_syk,
    generate,
    lambda_max,
    optimize,
    pfaffian,
    run_study,
)

__all__ = [
    "FermoptError",
    "Hamiltonian",
    "canonical_sign",
    "correlation_matrix",
    "expectation",
    "gaussian_numeric_max",
    "gen_sparse_random",
    "gen_ssyk",
    "gen_syk",
    "generate",
    "lambda_max",
    "optimize",
    "pfaffian",
    "run_study",
]
