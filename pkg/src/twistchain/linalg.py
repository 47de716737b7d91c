"""Dense complex linear algebra substrate.

Tensor products, site embeddings on a chain of d-dimensional sites,
partial transposes on two-site operators, and eigenvalue clustering.
Everything is plain numpy complex128; matrices stay dense (the largest
operator handled anywhere is 4096 x 4096).
"""

from dataclasses import dataclass, field

import numpy as np

# Absolute tolerance on max-entry residual norms for "identity holds" checks.
RESIDUAL_TOL = 1e-9
# Eigenvalue clustering tolerance, relative to the spectral radius.
CLUSTER_RTOL = 1e-7


def asoperator(m) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"operator must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("operator contains non-finite entries")
    return a


def mat_norm(m) -> float:
    """Max-absolute-entry norm."""
    m = np.asarray(m)
    return 0.0 if m.size == 0 else float(np.max(np.abs(m)))


def rel_residual(lhs, rhs) -> float:
    """Max-entry norm of lhs - rhs, relative to the larger side (floored at 1)."""
    scale = max(1.0, mat_norm(lhs), mat_norm(rhs))
    return mat_norm(np.asarray(lhs) - np.asarray(rhs)) / scale


def kron(a, b) -> np.ndarray:
    """Kronecker product with a finiteness check on the result."""
    return asoperator(np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def kron_all(*mats) -> np.ndarray:
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, m)
    return asoperator(out)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def elem(d: int, alpha: int, beta: int) -> np.ndarray:
    """Elementary matrix e_{alpha,beta} with 1-based indices."""
    m = np.zeros((d, d), dtype=complex)
    m[alpha - 1, beta - 1] = 1.0
    return m


def permutation(d: int) -> np.ndarray:
    """Permutation matrix on V x V: P (v x w) = w x v."""
    p = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            p[a * d + b, b * d + a] = 1.0
    return p


def embed(two_site, k: int, n_sites: int, d: int) -> np.ndarray:
    """Place a two-site operator on sites (k, k+1) of a chain of n_sites.

    Site indices are 1-based; the result acts on the d**n_sites space
    as I^(k-1) x two_site x I^(n_sites-k-1).
    """
    two_site = asoperator(two_site)
    if two_site.shape != (d * d, d * d):
        raise ValueError(f"two-site operator must be {d*d} x {d*d}")
    if not 1 <= k <= n_sites - 1:
        raise ValueError(f"site index k={k} out of range for N={n_sites}")
    return kron_all(identity(d ** (k - 1)), two_site, identity(d ** (n_sites - k - 1)))


def embed_site(one_site, k: int, n_sites: int, d: int) -> np.ndarray:
    """Place a single-site operator on site k (1-based) of a chain of n_sites."""
    one_site = asoperator(one_site)
    if one_site.shape != (d, d):
        raise ValueError(f"single-site operator must be {d} x {d}")
    if not 1 <= k <= n_sites:
        raise ValueError(f"site index k={k} out of range for N={n_sites}")
    return kron_all(identity(d ** (k - 1)), one_site, identity(d ** (n_sites - k)))


def partial_transpose(m, d: int, factor: int) -> np.ndarray:
    """Transpose one tensor factor of an operator on V x V (factor = 1 or 2)."""
    m = asoperator(m)
    if m.shape != (d * d, d * d):
        raise ValueError(f"operator must be {d*d} x {d*d} for local dimension {d}")
    t = m.reshape(d, d, d, d)
    if factor == 1:
        t = t.transpose(2, 1, 0, 3)
    elif factor == 2:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("factor must be 1 or 2")
    return t.reshape(d * d, d * d).copy()


@dataclass
class EigenClusterSet:
    """Eigenvalues of a general complex matrix, grouped into degenerate clusters.

    Clusters are sorted by (real, imaginary) part of the representative
    value; member_indices refer to columns of `vectors` when present.
    """

    values: list            # representative value per cluster (complex)
    degeneracies: list      # cluster sizes (ints)
    member_indices: list    # list of index lists
    tol: float
    vectors: np.ndarray | None = field(default=None, repr=False)
    raw_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return int(sum(self.degeneracies))

    def degeneracy_multiset(self) -> list:
        return sorted(self.degeneracies)


def cluster_values(w: np.ndarray, tol: float):
    """Group complex values into clusters by transitive proximity <= tol.

    Union-find over pairs whose real parts lie within tol of each other
    (a sliding window after sorting by real part), merging when the full
    complex distance is within tol.  Deterministic output: clusters sorted
    by (real, imag) of their mean value, members ascending.
    """
    w = np.asarray(w)
    k = len(w)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(w.real, kind="stable")
    for a in range(k):
        i = order[a]
        for b in range(a + 1, k):
            j = order[b]
            if w[j].real - w[i].real > tol:
                break
            if abs(w[i] - w[j]) <= tol:
                ri, rj = find(int(i)), find(int(j))
                if ri != rj:
                    parent[rj] = ri
    comps = {}
    for i in range(k):
        comps.setdefault(find(i), []).append(i)
    groups = sorted(comps.values())
    groups.sort(key=lambda g: (np.mean(w[g]).real, np.mean(w[g]).imag))
    return groups


def eig(m, rtol: float = CLUSTER_RTOL, vectors: bool = False) -> EigenClusterSet:
    """Full eigendecomposition with degeneracy clustering.

    The clustering tolerance is rtol * max(1, spectral radius).  Raises
    numpy.linalg.LinAlgError if the QR iteration fails to converge; no
    silent truncation.
    """
    m = asoperator(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eig requires a square matrix")
    if vectors:
        w, v = np.linalg.eig(m)
    else:
        w = np.linalg.eigvals(m)
        v = None
    tol = rtol * max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    groups = cluster_values(w, tol)
    return EigenClusterSet(
        values=[complex(np.mean(w[g])) for g in groups],
        degeneracies=[len(g) for g in groups],
        member_indices=groups,
        tol=tol,
        vectors=v,
        raw_values=w,
    )
