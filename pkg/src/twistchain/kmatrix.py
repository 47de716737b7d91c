"""Boundary K-matrices and the reflection-equation checks.

Each supported boundary condition is identified by a (family, name) pair:

family "A" (d = 2n):
  "I"          identity matrix,
  "II"         diag(exp(-u) I_n, exp(u) I_n),
  "beta-diag"  one-parameter diagonal family; reduces to "I" as beta -> inf.

family "D" (d = 2n + 2):
  "I", "II"    the two quantum-group-invariant block solutions,
  "diag"       the parameter-free diagonal solution,
  "block-1"    one-parameter block solution reducing to "I" at xi_minus = 0,
  "block-2"    one-parameter block solution reducing to "II" at xi_minus = 0,
  "block-pair" same matrix as "block-1" but with independent left/right
               parameters mu_minus / mu_plus (xi = exp(mu -+ n eta)).

K+ is always obtained from K- through the reflection isomorphism
K+(u) = K-^t(-u - rho) M; for "block-pair" the right parameter is
substituted before applying it.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import identity, mat_norm, permutation, rel_residual
from .report import VerificationReport
from .rmatrix import FAMILY_A, FAMILY_D, ModelSpec, crossing_m, parse_family, r_matrix

_CASES = {
    FAMILY_A: ("I", "II", "beta-diag"),
    FAMILY_D: ("I", "II", "diag", "block-1", "block-2", "block-pair"),
}

# Default boundary parameters used throughout the tests and tables.
DEFAULT_BETA = 1.3
DEFAULT_XI = 0.7
DEFAULT_MU_MINUS = 0.2
DEFAULT_MU_PLUS = 1.0 / 7.0


@dataclass(frozen=True)
class BoundaryCase:
    family: str
    name: str
    beta: complex = DEFAULT_BETA
    xi_minus: complex = DEFAULT_XI
    mu_minus: complex = DEFAULT_MU_MINUS
    mu_plus: complex = DEFAULT_MU_PLUS

    def __post_init__(self):
        object.__setattr__(self, "family", parse_family(self.family))
        if self.name not in _CASES[self.family]:
            raise ValueError(
                f"boundary case {self.name!r} not defined for family {self.family}; "
                f"choose from {_CASES[self.family]}")

    @property
    def has_quantum_group_symmetry(self) -> bool:
        return self.name in ("I", "II")

    @property
    def is_symmetric(self) -> bool:
        """Cases for which K-^t = K- holds identically."""
        return self.name in ("I", "II", "beta-diag", "diag")


def all_cases(family: str) -> tuple:
    return _CASES[parse_family(family)]


def _check_compatible(spec: ModelSpec, case: BoundaryCase) -> None:
    if spec.family != case.family:
        raise ValueError(f"boundary case family {case.family} does not match model family {spec.family}")


def _k_minus_a(spec: ModelSpec, case: BoundaryCase, u: complex) -> np.ndarray:
    n, d, eta = spec.n, spec.d, spec.eta
    if case.name == "I":
        return identity(d)
    if case.name == "II":
        diag = [np.exp(-u)] * n + [np.exp(u)] * n
        return np.diag(np.asarray(diag, dtype=complex))
    beta = complex(case.beta)
    first = (np.exp(-u) + beta) / (np.exp(u) + beta)
    last = (np.exp(u + 4 * (n - 1) * eta) - beta) / (np.exp(-u + 4 * (n - 1) * eta) - beta)
    return np.diag(np.asarray([first] + [1.0] * (d - 2) + [last], dtype=complex))


def _block_matrix(n: int, corner_minus, mid, corner_plus) -> np.ndarray:
    """Assemble blockdiag(c- I_n, 2x2 mid, c+ I_n)."""
    d = 2 * n + 2
    k = np.zeros((d, d), dtype=complex)
    for i in range(n):
        k[i, i] = corner_minus
        k[n + 2 + i, n + 2 + i] = corner_plus
    k[n:n + 2, n:n + 2] = mid
    return k


def _k_minus_d(spec: ModelSpec, case: BoundaryCase, u: complex) -> np.ndarray:
    n, eta = spec.n, spec.eta
    sh, ch, ex = np.sinh, np.cosh, np.exp
    if case.name in ("I", "II"):
        if case.name == "I":
            km, kp = ex(-2 * u) * ch(u - n * eta), ex(2 * u) * ch(u - n * eta)
            k1, k2 = ch(u) * ch(n * eta), sh(u) * sh(n * eta)
        else:
            km, kp = ex(-2 * u) * sh(u - n * eta), ex(2 * u) * sh(u - n * eta)
            k1, k2 = -ch(u) * sh(n * eta), -sh(u) * ch(n * eta)
        pref = -2 * ex(2 * u + n * eta)
        return pref * _block_matrix(n, km, np.array([[k1, k2], [k2, k1]]), kp)
    if case.name == "diag":
        k1 = (ex(u) - 1j * ex(-n * eta)) / (ex(-u) - 1j * ex(-n * eta))
        k2 = (ex(u) + 1j * ex(-n * eta)) / (ex(-u) + 1j * ex(-n * eta))
        return _block_matrix(n, 1.0, np.diag([k1, k2]), ex(2 * u))
    if case.name in ("block-1", "block-pair"):
        xi = ex(case.mu_minus - n * eta) if case.name == "block-pair" else complex(case.xi_minus)
        kk = ex(2 * n * eta)
        x2, x1 = ex(2 * u), ex(u)
        k0 = (x2 + kk) * (xi ** 2 * x1 * kk - 1 / x1)
        k1 = 0.5 * (x2 + 1) * (2 * xi * kk * (x2 - 1) - x1 * (1 - xi ** 2 * kk) * (1 + kk))
        k2 = 0.5 * x1 * (x2 - 1) * (1 + xi ** 2 * kk) * (1 - kk)
        k4 = 0.5 * (x2 + 1) * (-2 * xi * kk * (x2 - 1) - x1 * (1 - xi ** 2 * kk) * (1 + kk))
        k5 = (x2 + kk) * (xi ** 2 * x1 * kk - x1 ** 3)
        return _block_matrix(n, k0, np.array([[k1, k2], [k2, k4]]), k5)
    # "block-2"
    xi = complex(case.xi_minus)
    kk = ex(2 * n * eta)
    x2, x1 = ex(2 * u), ex(u)
    k0 = (x2 - kk) * (xi ** 2 * x1 - 1 / x1)
    k14 = 0.5 * (x2 + 1) * x1 * (1 - kk) * (xi ** 2 - 1)
    k2 = 0.5 * (x2 - 1) * (2 * ex(n * eta) * (x2 + 1) * xi + x1 * (1 + kk) * (1 + xi ** 2))
    k3 = 0.5 * (x2 - 1) * (-2 * ex(n * eta) * (x2 + 1) * xi + x1 * (1 + kk) * (1 + xi ** 2))
    k5 = (x2 - kk) * (xi ** 2 - x2) * x1
    return _block_matrix(n, k0, np.array([[k14, k2], [k3, k14]]), k5)


def k_minus(spec: ModelSpec, case: BoundaryCase, u) -> np.ndarray:
    """Left boundary matrix K-(u), a d x d solution of the reflection equation."""
    _check_compatible(spec, case)
    u = complex(u)
    if spec.family == FAMILY_A:
        return _k_minus_a(spec, case, u)
    return _k_minus_d(spec, case, u)


def k_plus(spec: ModelSpec, case: BoundaryCase, u) -> np.ndarray:
    """Right boundary matrix K+(u) = K-^t(-u - rho) M.

    For "block-pair" the left parameter is swapped for the independent
    right one (xi_plus = exp(mu_plus + n eta)) before applying the map.
    """
    _check_compatible(spec, case)
    u = complex(u)
    if case.name == "block-pair":
        xi_plus = np.exp(case.mu_plus + spec.n * spec.eta)
        inner = BoundaryCase(case.family, "block-1", xi_minus=xi_plus)
        return k_minus(spec, inner, -u - spec.rho).T @ crossing_m(spec)
    return k_minus(spec, case, -u - spec.rho).T @ crossing_m(spec)


def kappa(spec: ModelSpec, case: BoundaryCase) -> complex:
    """Regularity constant: K-(0) = kappa * I."""
    _check_compatible(spec, case)
    n, eta = spec.n, spec.eta
    if spec.family == FAMILY_A or case.name == "diag":
        return 1.0 + 0j
    if case.name == "I":
        return -2 * np.exp(n * eta) * np.cosh(n * eta)
    if case.name == "II":
        return 2 * np.exp(n * eta) * np.sinh(n * eta)
    if case.name in ("block-1", "block-pair"):
        xi = np.exp(case.mu_minus - n * eta) if case.name == "block-pair" else complex(case.xi_minus)
        return (1 + np.exp(2 * n * eta)) * (xi ** 2 * np.exp(2 * n * eta) - 1)
    return (1 - np.exp(2 * n * eta)) * (complex(case.xi_minus) ** 2 - 1)


def _k_samples(spec: ModelSpec, case: BoundaryCase, count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        u = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        v = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        mats = [k_minus(spec, case, z) for z in (u, v)] + [k_plus(spec, case, z) for z in (u, v)]
        if all(np.all(np.isfinite(m)) and mat_norm(m) < 1e8 for m in mats):
            out.append((u, v))
    return out


def verify_k(spec: ModelSpec, case: BoundaryCase, sample_count: int = 20,
             rng_seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    """Check both reflection equations, regularity, and symmetry where asserted."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    _check_compatible(spec, case)
    d = spec.d
    p = permutation(d)
    m1 = np.kron(crossing_m(spec), identity(d))
    m1_inv = np.linalg.inv(m1)
    rho = spec.rho
    rep = VerificationReport(f"k-matrix {spec.family}-{case.name} n={spec.n}")

    def r12(z):
        return r_matrix(spec, z)

    def r21(z):
        return p @ r_matrix(spec, z) @ p

    res_m = res_p = res_sym = 0.0
    for u, v in _k_samples(spec, case, sample_count, rng_seed):
        km_u = np.kron(k_minus(spec, case, u), identity(d))
        km_v = np.kron(identity(d), k_minus(spec, case, v))
        lhs = r12(u - v) @ km_u @ r21(u + v) @ km_v
        rhs = km_v @ r12(u + v) @ km_u @ r21(u - v)
        res_m = max(res_m, rel_residual(lhs, rhs))

        kp_u = np.kron(k_plus(spec, case, u).T, identity(d))
        kp_v = np.kron(identity(d), k_plus(spec, case, v).T)
        lhs = r12(-u + v) @ kp_u @ m1_inv @ r21(-u - v - 2 * rho) @ m1 @ kp_v
        rhs = kp_v @ m1 @ r12(-u - v - 2 * rho) @ m1_inv @ kp_u @ r21(-u + v)
        res_p = max(res_p, rel_residual(lhs, rhs))

        if case.is_symmetric:
            km = k_minus(spec, case, u)
            res_sym = max(res_sym, rel_residual(km, km.T))

    rep.add("bybe-minus", res_m, tol)
    rep.add("bybe-plus", res_p, tol)
    rep.add("regularity", rel_residual(k_minus(spec, case, 0), kappa(spec, case) * identity(d)), tol)
    if case.is_symmetric:
        rep.add("symmetry", res_sym, tol)
    return rep
