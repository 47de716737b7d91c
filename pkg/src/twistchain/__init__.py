"""Integrable quantum-group-invariant open spin chains of twisted affine type.

Construction and numerical verification of the bulk R-matrices and boundary
K-matrices, open-chain transfer matrices and Hamiltonians, quantum-group
symmetry analysis of the spectrum, and Bethe-ansatz solution with
completeness checks against exact diagonalization.
"""

from .rmatrix import FAMILY_A, FAMILY_D, ModelSpec, r_matrix, verify_r
from .kmatrix import BoundaryCase, k_minus, k_plus, kappa, verify_k
from .chain import ChainSpec, hamiltonian, transfer, two_site_hamiltonian
from .qsymm import algebra_for_case, decompose_spectrum, generators, weyl_dim
from .bethe import BetheRootSet, SolveConfig, canonicalize, completeness, energy, lambda_eval, solve

__version__ = "0.1.0"

__all__ = [
    "FAMILY_A", "FAMILY_D", "ModelSpec", "r_matrix", "verify_r",
    "BoundaryCase", "k_minus", "k_plus", "kappa", "verify_k",
    "ChainSpec", "transfer", "two_site_hamiltonian", "hamiltonian",
    "algebra_for_case", "generators", "weyl_dim", "decompose_spectrum",
    "BetheRootSet", "SolveConfig", "lambda_eval", "energy", "canonicalize",
    "solve", "completeness",
]
