"""Open-chain transfer matrices and Hamiltonians.

The transfer matrix t(u) = tr_a K+_a(u) T_a(u) K-_a(u) That_a(u) is built
without ever forming operators on the enlarged auxiliary space: the two
monodromies are kept as d x d arrays of d^N x d^N blocks (one block per
pair of auxiliary indices) and the auxiliary trace is a weighted sum of
block products.  Inhomogeneities shift the per-site spectral arguments.

The four quantum-group-invariant Hamiltonians are assembled from two-site
terms (plus a boundary term for the D family) and cross-checked against
finite-difference derivatives of t at the origin.
"""

from dataclasses import dataclass

import numpy as np

from .kmatrix import BoundaryCase, k_minus, k_plus, kappa
from .linalg import embed, embed_site, identity, permutation, rel_residual
from .report import VerificationReport
from .rmatrix import FAMILY_A, FAMILY_D, ModelSpec, r_matrix, xi, zeta

MEMORY_CAP_DIM = 4096  # largest d**N quantum space handled


@dataclass(frozen=True)
class ChainSpec:
    """Open chain: bulk model, boundary case, number of sites, inhomogeneities."""

    model: ModelSpec
    case: BoundaryCase
    n_sites: int
    thetas: tuple = ()

    def __post_init__(self):
        if self.model.family != self.case.family:
            raise ValueError("model and boundary case families differ")
        if self.n_sites < 1:
            raise ValueError("need at least one site")
        if self.model.d ** self.n_sites > MEMORY_CAP_DIM:
            raise ValueError(f"d^N = {self.model.d ** self.n_sites} exceeds cap {MEMORY_CAP_DIM}")
        thetas = tuple(complex(t) for t in (self.thetas or ()))
        if thetas and len(thetas) != self.n_sites:
            raise ValueError("need one inhomogeneity per site")
        object.__setattr__(self, "thetas", thetas or (0j,) * self.n_sites)

    @property
    def dim(self) -> int:
        return self.model.d ** self.n_sites


def _monodromy_blocks(spec: ChainSpec, u: complex, hat: bool) -> np.ndarray:
    """Auxiliary-index blocks of T_a(u) (hat=False) or That_a(u) (hat=True).

    Returns an array of shape (d, d, d^N, d^N); entry [a, b] is the operator
    on the quantum space between auxiliary states a and b.
    """
    d = spec.model.d
    blocks = None
    for k in range(1, spec.n_sites + 1):
        theta = spec.thetas[k - 1]
        r = r_matrix(spec.model, u + theta if hat else u - theta).reshape(d, d, d, d)
        # r[a, i, b, j]: row (a, i), column (b, j) on aux x site
        site = r.transpose(1, 3, 0, 2) if hat else r.transpose(0, 2, 1, 3)
        # site[a, b, i, j] is the site-k matrix between aux indices a, b
        if blocks is None:
            blocks = site.copy()
            continue
        dim = blocks.shape[2]
        if hat:
            # append site k on the right of the aux chain: T-hat = R_1a ... R_Na
            tmp = np.tensordot(blocks, site, axes=(1, 0))   # [a, x, y, b, i, j]
            blocks = np.ascontiguousarray(tmp.transpose(0, 3, 1, 4, 2, 5)).reshape(
                d, d, dim * d, dim * d)
        else:
            # prepend in aux order: T = R_aN ... R_a1, sites built 1 -> N
            tmp = np.tensordot(site, blocks, axes=(1, 0))   # [a, i, j, b, x, y]
            blocks = np.ascontiguousarray(tmp.transpose(0, 3, 4, 1, 5, 2)).reshape(
                d, d, dim * d, dim * d)
    return blocks


def transfer(spec: ChainSpec, u) -> np.ndarray:
    """Open-chain transfer matrix t(u) on the d^N-dimensional quantum space."""
    u = complex(u)
    d = spec.model.d
    t_blocks = _monodromy_blocks(spec, u, hat=False)
    km = k_minus(spec.model, spec.case, u)
    kp = k_plus(spec.model, spec.case, u)
    # fold the scalar boundary matrices into the auxiliary indices of T first
    weighted = np.tensordot(kp, t_blocks, axes=(1, 0))      # (a, c, x, y)
    weighted = np.tensordot(weighted, km, axes=(1, 0))      # (a, x, y, e)
    weighted = np.ascontiguousarray(weighted.transpose(0, 3, 1, 2))
    del t_blocks
    hat_blocks = _monodromy_blocks(spec, u, hat=True)
    out = np.zeros((spec.dim, spec.dim), dtype=complex)
    for a in range(d):
        for e in range(d):
            out += weighted[a, e] @ hat_blocks[e, a]
    return out


def _derivative(f, order: int, h: float = 1e-3):
    """4th-order central difference with one Richardson level."""

    def stencil1(step):
        return (-f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)) / (12 * step)

    def stencil2(step):
        return (-f(2 * step) + 16 * f(step) - 30 * f(0.0) + 16 * f(-step) - f(-2 * step)) / (
            12 * step ** 2)

    s = stencil1 if order == 1 else stencil2
    return (16.0 * s(h / 2) - s(h)) / 15.0


def r_prime_zero(model: ModelSpec) -> np.ndarray:
    return _derivative(lambda v: r_matrix(model, v), 1)


def k_minus_prime_zero(model: ModelSpec, case: BoundaryCase) -> np.ndarray:
    return _derivative(lambda v: k_minus(model, case, v), 1)


def boundary_u_matrix(model: ModelSpec) -> np.ndarray:
    """The 2x2 middle-block projector-like matrix entering the D-family Hamiltonians."""
    n, d = model.n, model.d
    u = np.zeros((d, d), dtype=complex)
    u[n:n + 2, n:n + 2] = 1.0
    return u


def boundary_mu(model: ModelSpec, case: BoundaryCase) -> complex:
    n, eta = model.n, model.eta
    if case.name == "I":
        return -4 * np.exp(n * eta) * np.sinh(n * eta)
    return 4 * np.exp(n * eta) * np.cosh(n * eta)


def boundary_nu(model: ModelSpec, case: BoundaryCase) -> complex:
    kk = np.exp(2 * model.n * model.eta)
    return -2 * (3 + kk) if case.name == "I" else 2 * (-3 + kk)


_H_CASES = ("I", "II")


def two_site_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Two-site Hamiltonian density for the quantum-group-invariant cases.

    h = P R'(0) / xi(0) for the A-family identity boundary; the other three
    cases add the boundary-derivative counterterm that restores the
    pure-two-site form of the full Hamiltonian.
    """
    model, case = spec.model, spec.case
    if case.name not in _H_CASES:
        raise ValueError(f"no two-site Hamiltonian for boundary case {case.name!r}")
    d = model.d
    h = permutation(d) @ r_prime_zero(model) / xi(model, 0)
    if model.family == FAMILY_A and case.name == "I":
        return h
    kp0 = k_minus_prime_zero(model, case)
    kap = kappa(model, case)
    return h + (np.kron(kp0, identity(d)) - np.kron(identity(d), kp0)) / (2 * kap)


def hamiltonian_constants(spec: ChainSpec):
    """Normalization constants (c1, c2) tying H to t'(0) (or t''(0))."""
    model, case = spec.model, spec.case
    n, eta, big_n = model.n, model.eta, spec.n_sites
    sh, ch, ex = np.sinh, np.cosh, np.exp
    if model.family == FAMILY_A:
        sign = 1 if case.name == "I" else -1
        off = 1 if case.name == "I" else -1
        c1 = sign * 4.0 ** (big_n + 1) * sh(2 * n * eta) * ch(2 * (n + off) * eta) \
            * sh(2 * eta) ** (2 * big_n - 1) * ch(2 * n * eta) ** (2 * big_n)
        c2 = ch(2 * (3 * n + off) * eta) / (2 * sh(4 * n * eta) * ch(2 * (n + off) * eta))
        return c1, c2
    if case.name == "I":
        c1 = 2.0 ** (4 * big_n + 4) * ex(6 * n * eta) * (sh(2 * n * eta) * sh(2 * eta)) ** (2 * big_n - 1) \
            * sh((n + 1) * eta) * sh(4 * n * eta) * ch(n * eta) ** 2 * ch((n - 1) * eta)
        c2 = 0.5 * (1 / np.tanh(eta) - 2 / np.tanh(2 * eta) + 2 / np.tanh(4 * n * eta)
                    + 1 / np.tanh((n + 1) * eta) + np.tanh(eta) + np.tanh((n - 1) * eta)
                    + 2 * np.tanh(n * eta))
        return c1, c2
    if n == 1:
        c1 = 2.0 ** (4 * big_n + 4) * ex(6 * eta) * sh(eta) ** 2 * sh(4 * eta) ** 2 \
            * sh(2 * eta) ** (4 * big_n - 3)
        c2 = np.tanh(2 * eta) + 0.25 * np.tanh(eta) + 1.25 / np.tanh(eta)
        return c1, c2
    c1 = -2.0 ** (4 * big_n + 4) * ex(6 * n * eta) * (sh(2 * n * eta) * sh(2 * eta)) ** (2 * big_n - 1) \
        * sh((n - 1) * eta) * sh(4 * n * eta) * sh(n * eta) ** 2 * ch((n + 1) * eta)
    c2 = 0.5 * (2 / np.tanh(4 * n * eta) + 1 / np.tanh((n - 1) * eta) + 2 / np.tanh(n * eta)
                + np.tanh((n + 1) * eta))
    return c1, c2


@dataclass
class HamiltonianBundle:
    matrix: np.ndarray
    c1: complex
    c2: complex
    two_site: np.ndarray
    boundary_u_coeff: complex        # mu / (2 kappa); zero for the A family
    uses_second_derivative: bool     # True only for D family, case II, n = 1


def hamiltonian(spec: ChainSpec) -> HamiltonianBundle:
    """Quantum-group-invariant open-chain Hamiltonian as a sum of two-site terms."""
    model, case = spec.model, spec.case
    if case.name not in _H_CASES:
        raise ValueError(f"no local Hamiltonian for boundary case {case.name!r}")
    d, big_n = model.d, spec.n_sites
    two = two_site_hamiltonian(spec)
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for k in range(1, big_n):
        h += embed(two, k, big_n, d)
    coeff = 0j
    if model.family == FAMILY_D:
        coeff = boundary_mu(model, case) / (2 * kappa(model, case))
        h += coeff * embed_site(boundary_u_matrix(model), big_n, big_n, d)
    second = model.family == FAMILY_D and case.name == "II" and model.n == 1
    c1, c2 = hamiltonian_constants(spec)
    return HamiltonianBundle(h, c1, c2, two, coeff, second)


def transfer_scalar_at_zero(spec: ChainSpec) -> complex:
    """t(0) = kappa xi(0)^(2N) tr K+(0) times the identity."""
    model = spec.model
    return kappa(model, spec.case) * xi(model, 0) ** (2 * spec.n_sites) \
        * np.trace(k_plus(model, spec.case, 0))


def verify_chain(spec: ChainSpec, sample_count: int = 3, rng_seed: int = 0,
                 tol_commute: float = 1e-9, tol_h: float = 1e-6) -> VerificationReport:
    """Chain-level identity suite.

    Checks commutativity [t(u), t(v)] = 0, crossing t(u) = t(-u-rho), the
    scalar value of t(0), and (for the quantum-group cases) the relation
    between the Hamiltonian and the derivative of t at the origin.
    """
    model, case = spec.model, spec.case
    rng = np.random.default_rng(rng_seed)
    rep = VerificationReport(
        f"chain {model.family}-{case.name} n={model.n} N={spec.n_sites}")

    res_comm = res_cross = 0.0
    for _ in range(sample_count):
        u = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        v = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        tu, tv = transfer(spec, u), transfer(spec, v)
        res_comm = max(res_comm, rel_residual(tu @ tv, tv @ tu))
        res_cross = max(res_cross, rel_residual(tu, transfer(spec, -u - model.rho)))
    rep.add("commutativity", res_comm, tol_commute)
    rep.add("crossing", res_cross, tol_commute)
    rep.add("t-at-zero", rel_residual(transfer(spec, 0),
                                      transfer_scalar_at_zero(spec) * identity(spec.dim)), tol_commute)
    if case.name in _H_CASES:
        second = model.family == FAMILY_D and case.name == "II" and model.n == 1
        rep.add("hamiltonian-vs-t", verify_h_t_relation(spec), 10 * tol_h if second else tol_h)
    return rep


def verify_h_t_relation(spec: ChainSpec) -> float:
    """Residual of H = t'(0)/c1 + c2 I (or t''(0)/c1 + c2 I where applicable)."""
    bundle = hamiltonian(spec)
    order = 2 if bundle.uses_second_derivative else 1
    deriv = _derivative(lambda v: transfer(spec, v), order)
    return rel_residual(bundle.matrix, deriv / bundle.c1 + bundle.c2 * identity(spec.dim))


def fusion_f0(spec: ChainSpec, u: complex) -> complex:
    """Product of bulk quantum determinants entering the fusion relation."""
    model = spec.model
    rho = model.rho
    out = 1.0 + 0j
    for theta in spec.thetas:
        out *= zeta(model, u - theta + rho) * zeta(model, u + theta + rho)
    return out


def fusion_f1(model: ModelSpec, u: complex) -> complex:
    """Boundary quantum determinant for the D-family case-I K-matrices."""
    if model.family != FAMILY_D:
        raise ValueError("fusion scalars are defined for the D family")
    n, eta = model.n, model.eta
    sh, ch, ex = np.sinh, np.cosh, np.exp
    return (2 ** 10 * ex(12 * n * eta) * ch(u - 3 * n * eta) ** 2 * ch(u - n * eta) ** 2
            * ch(u - (n + 1) * eta) * ch(u - (3 * n - 1) * eta)
            * sh(2 * u) * sh(u - (n - 1) * eta)
            * sh(2 * (u - 4 * n * eta)) * sh(u - (3 * n + 1) * eta))


def verify_fusion(spec: ChainSpec, site_index: int = 1, tol: float = 1e-8) -> VerificationReport:
    """Functional relation t(theta_i - rho) t(theta_i) = scalar * I (D family, case I)."""
    model = spec.model
    if model.family != FAMILY_D or spec.case.name != "I":
        raise ValueError("fusion relation check supports the D family, case I")
    if not 1 <= site_index <= spec.n_sites:
        raise ValueError("site index out of range")
    theta = spec.thetas[site_index - 1]
    if len(set(spec.thetas)) != spec.n_sites or abs(zeta(model, 2 * theta)) < 1e-8:
        raise ValueError("inhomogeneities must be distinct and away from singular points")
    prod = transfer(spec, theta - model.rho) @ transfer(spec, theta)
    scalar = fusion_f0(spec, theta - model.rho) * fusion_f1(model, theta - model.rho) \
        / zeta(model, 2 * theta)
    rep = VerificationReport(f"fusion D-I n={model.n} N={spec.n_sites}")
    mean = np.trace(prod) / spec.dim
    rep.add("product-is-scalar", rel_residual(prod, mean * identity(spec.dim)), tol)
    rep.add("functional-relation", rel_residual(prod, scalar * identity(spec.dim)), tol)
    return rep
