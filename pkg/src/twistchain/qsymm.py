"""Quantum-group generators, coproducts, and spectrum decomposition.

Three algebras act on the chains: C_n and D_n in their 2n-dimensional
vector representations (for the A-family boundary cases I and II), and
B_n embedded into a (2n+2)-dimensional space (for the D family).  Each
raising/lowering generator E carries a two-site coproduct of the form

    Delta(E) = E (x) X + Y (x) E

with X, Y diagonal exponentials of Cartan generators, which iterates to a
sum of N dressed single-site insertions.  The last simple-root generator
of D_n and B_n is reached through multiple commutators of an auxiliary
pair E0 with the other generators, both for the bare matrices and for
their coproducts.

`decompose_spectrum` block-diagonalizes a Hamiltonian inside Cartan weight
sectors, clusters eigenvalues across sectors, reads off highest weights
and Dynkin labels, and counts highest-weight vectors by a rank test.
"""

from dataclasses import dataclass, field

import numpy as np

from .chain import ChainSpec, hamiltonian
from .kmatrix import BoundaryCase
from .linalg import cluster_values, kron_all, mat_norm, rel_residual
from .report import VerificationReport
from .rmatrix import FAMILY_A

KIND_C = "C"
KIND_D = "D"
KIND_B = "B-embedded"

_HW_SVD_CUTOFF = 1e-8  # relative singular-value cutoff for highest-weight counting


@dataclass(frozen=True)
class AlgebraId:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (KIND_C, KIND_D, KIND_B):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == KIND_D and self.n < 2:
            raise ValueError("the D-series symmetry requires rank n >= 2")
        if self.n < 1:
            raise ValueError("rank must be positive")

    @property
    def rep_dim(self) -> int:
        return 2 * self.n + 2 if self.kind == KIND_B else 2 * self.n


def algebra_for_case(case: BoundaryCase, n: int) -> AlgebraId:
    """Symmetry algebra acting on a given boundary case."""
    if case.family == FAMILY_A:
        if case.name == "I":
            return AlgebraId(KIND_C, n)
        if case.name == "II":
            return AlgebraId(KIND_D, n)
    elif case.name in ("I", "II"):
        return AlgebraId(KIND_B, n)
    raise ValueError(f"boundary case {case.name!r} has no quantum-group symmetry")


def _elem(d, i, j):
    m = np.zeros((d, d), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


@dataclass
class GeneratorSet:
    algebra: AlgebraId
    cartan: list                       # H_1 .. H_n (diagonal)
    raising: list                      # E_1^+ .. E_n^+
    lowering: list                     # transposes of the raising set
    simple_roots: np.ndarray           # n x n integer array, orthogonal basis
    extra_raising: np.ndarray | None = None   # E_0^+ where defined
    extra_lowering: np.ndarray | None = None


def _nested_commutator(seed: np.ndarray, partners: list) -> np.ndarray:
    out = seed
    for p in partners:
        out = out @ p - p @ out
    return out


def _last_generator_recipe(alg: AlgebraId, sign: int):
    """(overall sign, partner index sequence) expressing E_n via E_0.

    For D_n the partners run 2..n-1, then 1, then 2..n-2 (opposite-sign
    generators); for embedded B_n they run 1..n-1.  sign is +1/-1 for the
    raising/lowering member of the pair.
    """
    n = alg.n
    if alg.kind == KIND_D:
        seq = [] if n == 2 else list(range(2, n)) + [1] + list(range(2, n - 1))
        return (-1) ** n, seq
    seq = list(range(1, n))
    overall = (-1) ** (n + 1) if sign > 0 else 1
    return overall, seq


def generators(alg: AlgebraId) -> GeneratorSet:
    """Exact matrix transcription of the generator sets."""
    n, d = alg.n, alg.rep_dim
    if alg.kind in (KIND_C, KIND_D):
        cartan = [_elem(d, i, i) - _elem(d, 2 * n + 1 - i, 2 * n + 1 - i) for i in range(1, n + 1)]
        raising = [_elem(d, i, i + 1) + _elem(d, 2 * n - i, 2 * n + 1 - i) for i in range(1, n)]
        roots = np.zeros((n, n), dtype=int)
        for j in range(1, n):
            roots[j - 1, j - 1], roots[j - 1, j] = 1, -1
        if alg.kind == KIND_C:
            raising.append(np.sqrt(2) * _elem(d, n, n + 1))
            roots[n - 1, n - 1] = 2
            extra = None
        else:
            raising.append(_elem(d, n - 1, n + 1) + _elem(d, n, n + 2))
            roots[n - 1, n - 2], roots[n - 1, n - 1] = 1, 1
            extra = _elem(d, 1, 2 * n - 1) + _elem(d, 2, 2 * n)
    else:
        cartan = [_elem(d, j, j) - _elem(d, 2 * n + 3 - j, 2 * n + 3 - j) for j in range(1, n + 1)]
        raising = [_elem(d, j, j + 1) + _elem(d, 2 * n + 2 - j, 2 * n + 3 - j) for j in range(1, n)]
        raising.append((_elem(d, n, n + 1) - _elem(d, n, n + 2)
                        + _elem(d, n + 2, n + 3) - _elem(d, n + 1, n + 3)) / np.sqrt(2))
        roots = np.zeros((n, n), dtype=int)
        for j in range(1, n):
            roots[j - 1, j - 1], roots[j - 1, j] = 1, -1
        roots[n - 1, n - 1] = 1
        extra = (_elem(d, 1, n + 1) - _elem(d, 1, n + 2)
                 + (-1) ** n * (_elem(d, n + 1, 2 * n + 2) - _elem(d, n + 2, 2 * n + 2))) / np.sqrt(2)
    return GeneratorSet(
        algebra=alg,
        cartan=cartan,
        raising=raising,
        lowering=[e.T.copy() for e in raising],
        simple_roots=roots,
        extra_raising=extra,
        extra_lowering=None if extra is None else extra.T.copy(),
    )


def _diag_exp(diag_coeffs: np.ndarray) -> np.ndarray:
    return np.diag(np.exp(diag_coeffs))


def _dressings(alg: AlgebraId, gen: GeneratorSet, eta: complex, j: int):
    """(Y, X) with Delta(E_j^pm) = E (x) X + Y (x) E; j = 0 selects E_0."""
    n = alg.n
    hdiag = [np.real(np.diag(h)) for h in gen.cartan]
    ipi = 1j * np.pi
    if alg.kind == KIND_C:
        if j == n:
            x = _diag_exp(2 * eta * hdiag[n - 1])
            y = _diag_exp(-2 * eta * hdiag[n - 1])
        else:
            x = _diag_exp(ipi * hdiag[j - 1] + eta * (hdiag[j - 1] - hdiag[j]))
            y = _diag_exp(-ipi * hdiag[j - 1] - eta * (hdiag[j - 1] - hdiag[j]))
        return y, x
    if alg.kind == KIND_D:
        if j == 0:
            x = _diag_exp(ipi * hdiag[1])
            y = _diag_exp(2 * eta * (hdiag[0] + hdiag[1]) + ipi * hdiag[1])
            return y, x
        if 1 <= j <= n - 1:
            x = _diag_exp(ipi * hdiag[j - 1] + eta * (hdiag[j - 1] - hdiag[j]))
            y = _diag_exp(-ipi * hdiag[j - 1] - eta * (hdiag[j - 1] - hdiag[j]))
            return y, x
        raise ValueError("the last D-series generator is coproducted via commutators")
    if j == 0:
        if n % 2 == 0:
            x = _diag_exp(-eta * hdiag[0])
            y = _diag_exp(eta * hdiag[0])
        else:
            x = _diag_exp((ipi - eta) * hdiag[0])
            y = _diag_exp(-(ipi - eta) * hdiag[0])
        return y, x
    if 1 <= j <= n - 1:
        x = _diag_exp(ipi * hdiag[j])
        y = _diag_exp(-2 * eta * (hdiag[j - 1] - hdiag[j]) + ipi * hdiag[j])
        return y, x
    raise ValueError("the last B-series generator is coproducted via commutators")


def _nfold_primitive(op: np.ndarray, d: int, n_sites: int) -> np.ndarray:
    out = np.zeros((d ** n_sites,) * 2, dtype=complex)
    for k in range(n_sites):
        out += kron_all(np.eye(d ** k), op, np.eye(d ** (n_sites - 1 - k)))
    return out


def _nfold_dressed(op: np.ndarray, y: np.ndarray, x: np.ndarray, n_sites: int) -> np.ndarray:
    """N-fold coproduct of a generator with group-like dressings:
    sum_k Y^(k-1) (x) op (x) X^(N-k)."""
    d = op.shape[0]
    out = np.zeros((d ** n_sites,) * 2, dtype=complex)
    for k in range(n_sites):
        left = y
        for _ in range(k - 1):
            left = np.kron(left, y)
        right = x
        for _ in range(n_sites - k - 2):
            right = np.kron(right, x)
        factors = []
        if k > 0:
            factors.append(left)
        factors.append(op)
        if k < n_sites - 1:
            factors.append(right)
        out += kron_all(*factors)
    return out


def coproduct_cartan(alg: AlgebraId, gen: GeneratorSet, j: int, n_sites: int) -> np.ndarray:
    return _nfold_primitive(gen.cartan[j - 1], alg.rep_dim, n_sites)


def coproduct_e(alg: AlgebraId, gen: GeneratorSet, eta: complex, j: int, sign: int,
                n_sites: int) -> np.ndarray:
    """N-fold coproduct of E_j^+ (sign=+1) or E_j^- (sign=-1); j=0 for E_0."""
    n = alg.n
    if j == 0 or j < n or alg.kind == KIND_C:
        if j == 0:
            op = gen.extra_raising if sign > 0 else gen.extra_lowering
        else:
            op = gen.raising[j - 1] if sign > 0 else gen.lowering[j - 1]
        if n_sites == 1:
            return op.copy()
        y, x = _dressings(alg, gen, eta, j)
        return _nfold_dressed(op, y, x, n_sites)
    # last generator of D_n / embedded B_n: commutators of coproducted operands
    overall, seq = _last_generator_recipe(alg, sign)
    seed = coproduct_e(alg, gen, eta, 0, sign, n_sites)
    partners = [coproduct_e(alg, gen, eta, i, -sign, n_sites) for i in seq]
    return overall * _nested_commutator(seed, partners)


def coproduct_n(alg: AlgebraId, gen_id: str, eta: complex, n_sites: int) -> np.ndarray:
    """Coproduct by generator id: 'H3', 'E2+', 'E0-' and so on."""
    gen = generators(alg)
    kind, rest = gen_id[0], gen_id[1:]
    if kind == "H":
        return coproduct_cartan(alg, gen, int(rest), n_sites)
    if kind == "E":
        sign = 1 if rest.endswith("+") else -1
        return coproduct_e(alg, gen, eta, int(rest[:-1]), sign, n_sites)
    raise ValueError(f"unknown generator id {gen_id!r}")


def all_symmetry_generators(alg: AlgebraId, eta: complex, n_sites: int,
                            cartan_only: bool = False) -> dict:
    """Every N-fold coproduct needed for a symmetry check, keyed by id."""
    gen = generators(alg)
    out = {}
    for j in range(1, alg.n + 1):
        out[f"H{j}"] = coproduct_cartan(alg, gen, j, n_sites)
    if cartan_only:
        return out
    for j in range(1, alg.n + 1):
        out[f"E{j}+"] = coproduct_e(alg, gen, eta, j, +1, n_sites)
        out[f"E{j}-"] = coproduct_e(alg, gen, eta, j, -1, n_sites)
    return out


def verify_symmetry(target: np.ndarray, alg: AlgebraId, eta: complex, n_sites: int,
                    cartan_only: bool = False, tol: float = 1e-9) -> VerificationReport:
    """Relative commutator norms of the target with the N-fold coproducts."""
    if target.shape[0] != alg.rep_dim ** n_sites:
        raise ValueError("target dimension does not match rep_dim^N")
    rep = VerificationReport(f"symmetry {alg.kind}{alg.n} N={n_sites}")
    for gen_id, op in all_symmetry_generators(alg, eta, n_sites, cartan_only).items():
        rep.add(f"[{gen_id}, target]", rel_residual(op @ target, target @ op), tol)
    return rep


def verify_algebra(alg: AlgebraId, eta: complex, tol: float = 1e-9) -> VerificationReport:
    """Defining relations of the bare generators and the coproduct q-relations."""
    gen = generators(alg)
    n = alg.n
    rep = VerificationReport(f"algebra {alg.kind}{alg.n}")

    res_cartan = res_ef = 0.0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ep, em = gen.raising[j - 1], gen.lowering[j - 1]
            hi = gen.cartan[i - 1]
            aij = gen.simple_roots[j - 1, i - 1]
            res_cartan = max(res_cartan, mat_norm(hi @ ep - ep @ hi - aij * ep))
            res_cartan = max(res_cartan, mat_norm(hi @ em - em @ hi + aij * em))
            rhs = np.zeros_like(hi)
            if i == j:
                for k in range(1, n + 1):
                    rhs = rhs + gen.simple_roots[j - 1, k - 1] * gen.cartan[k - 1]
            ei = gen.raising[i - 1]
            res_ef = max(res_ef, mat_norm(ei @ em - em @ ei - rhs))
    rep.add("cartan-weights", res_cartan, tol)
    rep.add("ladder-pairing", res_ef, tol)

    if alg.kind in (KIND_D, KIND_B):
        overall, seq = _last_generator_recipe(alg, +1)
        built = overall * _nested_commutator(gen.extra_raising, [gen.lowering[i - 1] for i in seq])
        rep.add("last-generator-raising", mat_norm(built - gen.raising[n - 1]), tol)
        overall, seq = _last_generator_recipe(alg, -1)
        built = overall * _nested_commutator(gen.extra_lowering, [gen.raising[i - 1] for i in seq])
        rep.add("last-generator-lowering", mat_norm(built - gen.lowering[n - 1]), tol)

    _coproduct_relations(rep, alg, gen, eta, tol)
    return rep


def _coproduct_relations(rep, alg, gen, eta, tol):
    n = alg.n
    q = np.exp(2 * eta)
    hs = {j: coproduct_cartan(alg, gen, j, 2) for j in range(1, n + 1)}
    eps = {(j, s): coproduct_e(alg, gen, eta, j, s, 2) for j in range(1, n + 1) for s in (1, -1)}

    res = 0.0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            aij = gen.simple_roots[j - 1, i - 1]
            for s in (1, -1):
                comm = hs[i] @ eps[(j, s)] - eps[(j, s)] @ hs[i]
                res = max(res, mat_norm(comm - s * aij * eps[(j, s)]))
    rep.add("coproduct-cartan-weights", res, tol)

    def qpow(diag_op, power_scale):
        return np.diag(np.exp(power_scale * np.diag(diag_op)))

    if alg.kind in (KIND_C, KIND_D):
        res = 0.0
        top = n if alg.kind == KIND_C else n - 1
        for i in range(1, top + 1):
            for j in range(1, top + 1):
                if abs(i - j) == 1 and 1 <= min(i, j) <= n - 2:
                    omega = np.kron(qpow(gen.cartan[max(i, j) - 1], 1j * np.pi),
                                    np.eye(alg.rep_dim))
                else:
                    omega = np.eye(alg.rep_dim ** 2)
                lhs = omega @ eps[(i, 1)] @ eps[(j, -1)] - eps[(j, -1)] @ eps[(i, 1)] @ omega
                if i != j:
                    rhs = np.zeros_like(lhs)
                elif i == n and alg.kind == KIND_C:
                    rhs = 2 * (qpow(hs[n], 4 * eta) - qpow(hs[n], -4 * eta)) / (q ** 2 - q ** -2)
                else:
                    karg = hs[i] - hs[i + 1]
                    rhs = (qpow(karg, 2 * eta) - qpow(karg, -2 * eta)) / (q - 1 / q)
                res = max(res, rel_residual(lhs, rhs))
        rep.add("coproduct-q-ladder", res, tol)
    else:
        res = 0.0
        for j in range(1, n):
            lhs = eps[(j, 1)] @ eps[(j, -1)] - np.exp(4 * eta) * eps[(j, -1)] @ eps[(j, 1)]
            karg = hs[j] - hs[j + 1]
            rhs = (qpow(karg, -4 * eta) - np.eye(alg.rep_dim ** 2)) / (np.exp(-4 * eta) - 1)
            res = max(res, rel_residual(lhs, rhs))
        e0p = coproduct_e(alg, gen, eta, 0, +1, 2)
        e0m = coproduct_e(alg, gen, eta, 0, -1, 2)
        lhs = e0p @ e0m - e0m @ e0p
        rhs = (qpow(hs[1], 2 * eta) - qpow(hs[1], -2 * eta)) / (np.exp(2 * eta) - np.exp(-2 * eta))
        res = max(res, rel_residual(lhs, rhs))
        rep.add("coproduct-q-ladder", res, tol)


# ---------------------------------------------------------------------------
# Representation theory: Weyl dimensions and Dynkin labels


def weyl_dim(kind: str, n: int, label) -> int:
    """Dimension of the irreducible highest-weight representation.

    kind is "B", "C" or "D"; label is the Dynkin label [a_1 .. a_n].
    Computed from the product formula over positive roots in the
    orthogonal basis.
    """
    label = list(label)
    if len(label) != n:
        raise ValueError("label length must equal the rank")
    if any(a < 0 for a in label):
        raise ValueError("Dynkin labels of a highest weight must be nonnegative")
    kind = kind[0].upper()
    lam = _label_to_weight(kind, n, label)
    if kind == "B":
        rho = np.array([n - i - 0.5 for i in range(n)])
    elif kind == "C":
        rho = np.array([n - i for i in range(n)])
    elif kind == "D":
        rho = np.array([n - i - 1.0 for i in range(n)])
    else:
        raise ValueError(f"unknown series {kind!r}")
    l, r = lam + rho, rho

    num, den = 1.0, 1.0
    for i in range(n):
        for j in range(i + 1, n):
            num *= (l[i] - l[j]) * (l[i] + l[j])
            den *= (r[i] - r[j]) * (r[i] + r[j])
    if kind == "B":
        for i in range(n):
            num *= l[i]
            den *= r[i]
    elif kind == "C":
        for i in range(n):
            num *= 2 * l[i]
            den *= 2 * r[i]
    return int(round(num / den))


def _label_to_weight(kind: str, n: int, label) -> np.ndarray:
    lam = np.zeros(n)
    if kind == "C":
        for i, a in enumerate(label):
            lam[: i + 1] += a
    elif kind == "B":
        for i, a in enumerate(label[:-1]):
            lam[: i + 1] += a
        lam += 0.5 * label[-1]
    else:
        for i, a in enumerate(label[: n - 2]):
            lam[: i + 1] += a
        lam[: n - 1] += 0.5 * label[n - 2]
        lam[n - 1] -= 0.5 * label[n - 2]
        lam += 0.5 * label[n - 1]
    return lam


def weight_to_label(kind: str, n: int, weight) -> list:
    """Inverse Cartan pairing: orthogonal-basis weight to Dynkin label."""
    w = list(weight)
    label = [int(round(w[i] - w[i + 1])) for i in range(n - 1)]
    kind = kind[0].upper()
    if kind == "C":
        label.append(int(round(w[n - 1])))
    elif kind == "B":
        label.append(int(round(2 * w[n - 1])))
    else:
        label.append(int(round(w[n - 2] + w[n - 1])))
    return label


def cartan_eigs_from_cardinalities(family: str, n: int, n_sites: int, m) -> list:
    """Cartan eigenvalues of a Bethe state with root cardinalities m."""
    m = list(m)
    if len(m) != n:
        raise ValueError("need one cardinality per level")
    if family == FAMILY_A:
        ext = [n_sites] + m
        h = [ext[i - 1] - ext[i] for i in range(1, n)]
        h.append(ext[n - 1] - 2 * ext[n])
        return h
    h = [n_sites - m[0]]
    for i in range(2, n + 1):
        h.append(m[i - 2] - m[i - 1])
    return h


def label_from_cardinalities(case: BoundaryCase, n: int, n_sites: int, m) -> list:
    """Dynkin label of the Bethe state with cardinalities m (may be negative)."""
    alg = algebra_for_case(case, n)
    h = cartan_eigs_from_cardinalities(case.family, n, n_sites, m)
    label = [h[i] - h[i + 1] for i in range(n - 1)]
    if alg.kind == KIND_C:
        label.append(h[n - 1])
    elif alg.kind == KIND_D:
        label.append(h[n - 2] + h[n - 1])
    else:
        label.append(2 * h[n - 1])
    return label


# ---------------------------------------------------------------------------
# Spectrum decomposition


@dataclass
class IrrepBlock:
    label: tuple
    dim: int                 # observed degeneracy (merged for starred blocks)
    multiplicity: int        # number of eigenvalue clusters with this (label, dim)
    starred: bool            # observed degeneracy differs from the single-irrep dimension
    weyl_dimension: int
    hw_count: int            # highest-weight vectors found in the label's sector
    eigenvalues: list = field(default_factory=list)


@dataclass
class SpectrumDecomposition:
    blocks: list
    anomalies: list
    cluster_count: int
    clusters: list = field(default_factory=list)  # per-cluster detail dicts

    def degeneracy_multiset(self) -> list:
        out = []
        for b in self.blocks:
            out.extend([b.dim] * b.multiplicity)
        return sorted(out)

    def total_dimension(self) -> int:
        return sum(b.dim * b.multiplicity for b in self.blocks)


def cartan_diagonals(family: str, n: int, n_sites: int) -> list:
    """Integer diagonals of the N-fold Cartan coproducts.

    The Cartan generators are shared across the boundary cases of a family
    (C_n and D_n use the same H_j), so only the family is needed; every
    supported transfer matrix commutes with these diagonals.
    """
    kind = KIND_C if family == FAMILY_A else KIND_B
    alg = AlgebraId(kind, n)
    gen = generators(alg)
    return [np.real(np.diag(coproduct_cartan(alg, gen, j, n_sites))).round().astype(int)
            for j in range(1, n + 1)]


def weight_sectors(alg: AlgebraId, eta: complex, n_sites: int) -> dict:
    """Basis indices grouped by the joint Cartan weight (integer tuples)."""
    gen = generators(alg)
    diags = [np.real(np.diag(coproduct_cartan(alg, gen, j, n_sites))) for j in range(1, alg.n + 1)]
    sectors = {}
    for idx in range(alg.rep_dim ** n_sites):
        w = tuple(int(round(dg[idx])) for dg in diags)
        sectors.setdefault(w, []).append(idx)
    return sectors


def decompose_spectrum(spec: ChainSpec, cluster_rtol: float = 1e-7) -> SpectrumDecomposition:
    """Decompose the Hamiltonian spectrum into irreducible blocks.

    Diagonalizes within Cartan weight sectors, clusters levels across
    sectors, extracts the highest weight of each cluster, and counts
    highest-weight vectors by a rank-revealing kernel test of the combined
    raising operators restricted to the cluster eigenspace.

    Accidental Hamiltonian degeneracies do occur (distinct multiplets can
    coincide to ten digits at generic anisotropy), so the sectors are
    diagonalized in the transfer matrix at a fixed generic spectral point
    and levels are merged only when the Hamiltonian AND transfer
    eigenvalues both agree.
    """
    from .chain import transfer

    alg = algebra_for_case(spec.case, spec.model.n)
    eta = spec.model.eta
    n_sites = spec.n_sites
    h = hamiltonian(spec).matrix
    t0 = transfer(spec, 0.37 + 0.11j)
    sectors = weight_sectors(alg, eta, n_sites)

    eigvals, lamvals, eigvecs, eigweights = [], [], [], []
    dim = h.shape[0]
    for w, idx in sorted(sectors.items()):
        idx = np.asarray(idx)
        sub_h = h[np.ix_(idx, idx)]
        vals_t, vecs = np.linalg.eig(t0[np.ix_(idx, idx)])
        for i in range(len(vals_t)):
            v = vecs[:, i]
            pivot = int(np.argmax(np.abs(v)))
            eigvals.append(complex((sub_h @ v)[pivot] / v[pivot]))
            lamvals.append(vals_t[i])
            full = np.zeros(dim, dtype=complex)
            full[idx] = v
            eigvecs.append(full)
            eigweights.append(w)
    eigvals = np.asarray(eigvals)
    lamvals = np.asarray(lamvals)
    tol_h = cluster_rtol * max(1.0, float(np.max(np.abs(eigvals))))
    tol_t = cluster_rtol * max(1.0, float(np.max(np.abs(lamvals))))
    groups = []
    for lam_group in cluster_values(lamvals, tol_t):
        lam_group = np.asarray(lam_group)
        for sub in cluster_values(eigvals[lam_group], tol_h):
            groups.append([int(lam_group[i]) for i in sub])
    groups.sort(key=lambda g: (np.mean(eigvals[g]).real, np.mean(eigvals[g]).imag))

    raising = [coproduct_e(alg, generators(alg), eta, j, +1, n_sites)
               for j in range(1, alg.n + 1)]
    kind = alg.kind[0]

    clusters = []
    anomalies = []
    for g in groups:
        weights = [eigweights[i] for i in g]
        top = max(weights)  # lexicographic maximum = highest weight for B/C/D dominance
        label = tuple(weight_to_label(kind, alg.n, top))
        if any(a < 0 for a in label):
            anomalies.append({"eigenvalue": complex(np.mean(eigvals[g])),
                              "degeneracy": len(g), "weight": top})
            continue
        wd = weyl_dim(kind, alg.n, label)
        vec_block = np.stack([eigvecs[i] for i in g if eigweights[i] == top], axis=1)
        stacked = np.vstack([e @ vec_block for e in raising])
        sv = np.linalg.svd(stacked, compute_uv=False)
        cutoff = _HW_SVD_CUTOFF * max(sv[0] if len(sv) else 1.0, 1.0)
        hw = vec_block.shape[1] - int(np.sum(sv > cutoff))
        clusters.append({
            "value": complex(np.mean(eigvals[g])),
            "deg": len(g),
            "label": label,
            "weyl": wd,
            "hw": hw,
            "weights": sorted(weights),
        })

    merged = {}
    for c in clusters:
        key = (c["label"], c["deg"])
        entry = merged.setdefault(key, {"mult": 0, "hw": 0, "weyl": c["weyl"], "vals": []})
        entry["mult"] += 1
        entry["hw"] += c["hw"]
        entry["vals"].append(c["value"])
    blocks = [
        IrrepBlock(label=key[0], dim=key[1], multiplicity=e["mult"],
                   starred=key[1] != e["weyl"], weyl_dimension=e["weyl"],
                   hw_count=e["hw"], eigenvalues=e["vals"])
        for key, e in sorted(merged.items())
    ]
    return SpectrumDecomposition(blocks=blocks, anomalies=anomalies,
                                 cluster_count=len(groups), clusters=clusters)
