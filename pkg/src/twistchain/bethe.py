"""Bethe-ansatz machinery: eigenvalue formulas, equations, and a solver.

Transfer-matrix eigenvalues are rational-trigonometric expressions dressed
by n families of Q-functions built from Bethe roots.  The Bethe equations
are the pole-cancellation conditions of those expressions; this module
assembles them factor by factor, solves them by damped multi-start Newton
iteration on the branch-tracked logarithmic residual, canonicalizes roots
into the fundamental domain fixed by the reflection/shift symmetries, and
checks completeness against exact diagonalization.

Supported boundary cases: A-family I and II (any rank), D-family I (any
rank), and the two D-family boundaries without quantum-group symmetry at
rank 1 ("diag" and "block-pair", including the hybrid special manifold
mu_minus = mu_plus).  D-family case II has no known eigenvalue formula and
is rejected explicitly.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .chain import ChainSpec, hamiltonian, transfer, transfer_scalar_at_zero
from .linalg import CLUSTER_RTOL, eig
from .rmatrix import FAMILY_A, FAMILY_D

TWO_PI = 2 * np.pi


class UnsupportedCaseError(ValueError):
    """Raised for boundary conditions the source formulas do not cover."""


class PoleError(ArithmeticError):
    """Raised when an eigenvalue formula is evaluated at one of its poles."""


@dataclass(frozen=True)
class BetheRootSet:
    """Bethe roots organized in n levels."""

    levels: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "levels",
            tuple(tuple(complex(z) for z in lvl) for lvl in self.levels))

    @property
    def cardinalities(self) -> tuple:
        return tuple(len(lvl) for lvl in self.levels)

    @property
    def total(self) -> int:
        return sum(self.cardinalities)

    def flat(self) -> np.ndarray:
        return np.asarray([z for lvl in self.levels for z in lvl], dtype=complex)

    @staticmethod
    def from_flat(z, m) -> "BetheRootSet":
        z = list(z)
        levels, pos = [], 0
        for count in m:
            levels.append(tuple(z[pos:pos + count]))
            pos += count
        return BetheRootSet(tuple(levels))

    @staticmethod
    def empty(n_levels: int) -> "BetheRootSet":
        return BetheRootSet(((),) * n_levels)


@dataclass
class SolveConfig:
    starts: int = 2000
    newton_tol: float = 1e-12
    max_iter: int = 200
    dedup_tol: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("need at least one start")


def _check_supported(spec: ChainSpec, n_levels_only: bool = False):
    fam, name, n = spec.model.family, spec.case.name, spec.model.n
    if fam == FAMILY_A and name in ("I", "II"):
        return
    if fam == FAMILY_D:
        if name == "I":
            return
        if name == "II":
            raise UnsupportedCaseError(
                "no eigenvalue formula is known for the D-family case II "
                "(the doubling construction fails there)")
        if name in ("diag", "block-pair") and n == 1:
            return
        if name in ("diag", "block-pair"):
            raise UnsupportedCaseError(
                f"D-family case {name!r} formulas are available for rank 1 only")
    raise UnsupportedCaseError(f"no Bethe-ansatz formulas for case {spec.case.name!r}")


def is_special_manifold(spec: ChainSpec) -> bool:
    case = spec.case
    return (case.family == FAMILY_D and case.name == "block-pair"
            and complex(case.mu_minus) == complex(case.mu_plus))


# ---------------------------------------------------------------------------
# Fundamental domain


def level_periods(spec: ChainSpec, m) -> list:
    """Imaginary period of the shift symmetry per level.

    A family: 2*pi for levels below n, pi for level n.  D family: pi for
    all levels, except that level n widens to 2*pi when it holds more
    than one root.  The generic block-pair boundary breaks the pi shift
    outright (its half-angle boundary factors are only 2*pi periodic);
    on the special manifold the equations revert to the standard form.
    """
    n = spec.model.n
    if spec.model.family == FAMILY_A:
        periods = [TWO_PI] * (n - 1) + [np.pi]
    elif spec.case.name == "block-pair" and not is_special_manifold(spec):
        periods = [TWO_PI] * n
    else:
        periods = [np.pi] * n
        if m[n - 1] > 1:
            periods[n - 1] = TWO_PI
    return periods


def _reduce_imag(z: complex, period: float, snap: float = 1e-9) -> complex:
    k = np.floor(z.imag / period)
    y = z.imag - k * period
    if y < snap or period - y < snap:  # wrap boundary jitter onto the real axis
        y = 0.0
    return complex(z.real, y)


def canonicalize_root(z: complex, period: float, re_tol: float = 1e-9) -> complex:
    """Reflect/shift one root into {Re >= 0, Im in [0, period)}."""
    a = _reduce_imag(z, period)
    b = _reduce_imag(-z, period)
    if abs(z.real) <= re_tol:
        a = complex(0.0, a.imag)
        b = complex(0.0, b.imag)
        return a if a.imag <= b.imag else b
    return a if z.real > 0 else b


def _has_global_half_shift(spec: ChainSpec) -> bool:
    """Shifting ALL roots simultaneously by i*pi is a symmetry of every
    D-family system built from full-angle boundary factors; the generic
    block-pair boundary (half-angle boundary factors) is the exception.
    """
    if spec.model.family != FAMILY_D:
        return False
    return spec.case.name != "block-pair" or is_special_manifold(spec)


def _shift_all(roots: BetheRootSet) -> BetheRootSet:
    return BetheRootSet(tuple(tuple(z + 1j * np.pi for z in lvl) for lvl in roots.levels))


def _canonicalize_plain(spec: ChainSpec, roots: BetheRootSet) -> BetheRootSet:
    periods = level_periods(spec, roots.cardinalities)
    levels = []
    for lvl, period in zip(roots.levels, periods):
        canon = [canonicalize_root(z, period) for z in lvl]
        canon.sort(key=lambda w: (w.real, w.imag))
        levels.append(tuple(canon))
    return BetheRootSet(tuple(levels))


def _lex_key(roots: BetheRootSet):
    return tuple((round(z.real, 9), round(z.imag, 9)) for lvl in roots.levels for z in lvl)


def canonicalize(spec: ChainSpec, roots: BetheRootSet) -> BetheRootSet:
    """Map the root set into the fundamental domain.

    Each root is reflected/shifted into {Re >= 0, Im in [0, period)} and
    levels are sorted lexicographically; when the simultaneous half-period
    shift is a symmetry, the lexicographically smaller of the two orbits
    is returned.
    """
    _check_supported(spec)
    base = _canonicalize_plain(spec, roots)
    if _has_global_half_shift(spec):
        shifted = _canonicalize_plain(spec, _shift_all(roots))
        if _lex_key(shifted) < _lex_key(base):
            return shifted
    return base


def root_distance(a: complex, b: complex, period: float) -> float:
    """Distance modulo the reflection/shift symmetry group."""
    best = np.inf
    for base in (a, -a):
        for k in (-1, 0, 1):
            best = min(best, abs(base + 1j * k * period - b))
    return best


def rootset_distance(r1: BetheRootSet, r2: BetheRootSet, periods) -> float:
    """Max distance under an optimal per-level pairing; inf if shapes differ."""
    if r1.cardinalities != r2.cardinalities:
        return np.inf
    worst = 0.0
    for lvl1, lvl2, period in zip(r1.levels, r2.levels, periods):
        k = len(lvl1)
        if k == 0:
            continue
        cost = np.array([[root_distance(a, b, period) for b in lvl2] for a in lvl1])
        rows, cols = linear_sum_assignment(cost)
        worst = max(worst, float(cost[rows, cols].max()))
    return worst


def solution_distance(spec: ChainSpec, r1: BetheRootSet, r2: BetheRootSet) -> float:
    """Root-set distance modulo the full symmetry group of the equations."""
    periods = level_periods(spec, r1.cardinalities)
    d = rootset_distance(r1, r2, periods)
    if _has_global_half_shift(spec):
        d = min(d, rootset_distance(_shift_all(r1), r2, periods))
    return d


# ---------------------------------------------------------------------------
# Equation structure


@dataclass(frozen=True)
class _Factor:
    kind: str           # "e": sinh ratio, "f": half-angle sinh ratio, "c": cosh ratio
    index: complex      # the k of e_k / f_k / c_k
    power: float = 1.0
    shift: complex = 0.0


def _log_factor(fac: _Factor, z, eta):
    x = z + fac.shift
    k = fac.index * eta
    if fac.kind == "e":
        val = np.log(np.sinh(x + k)) - np.log(np.sinh(x - k))
    elif fac.kind == "f":
        val = np.log(np.sinh((x + k) / 2)) - np.log(np.sinh((x - k) / 2))
    else:
        val = np.log(np.cosh(x + k)) - np.log(np.cosh(x - k))
    return fac.power * val


def _dlog_factor(fac: _Factor, z, eta):
    x = z + fac.shift
    k = fac.index * eta
    if fac.kind == "e":
        val = 1 / np.tanh(x + k) - 1 / np.tanh(x - k)
    elif fac.kind == "f":
        val = 0.5 * (1 / np.tanh((x + k) / 2) - 1 / np.tanh((x - k) / 2))
    else:
        val = np.tanh(x + k) - np.tanh(x - k)
    return fac.power * val


def _value_factor(fac: _Factor, z, eta):
    x = z + fac.shift
    k = fac.index * eta
    if fac.kind == "e":
        val = np.sinh(x + k) / np.sinh(x - k)
    elif fac.kind == "f":
        val = np.sinh((x + k) / 2) / np.sinh((x - k) / 2)
    else:
        val = np.cosh(x + k) / np.cosh(x - k)
    return val ** fac.power


@dataclass
class _LevelEquation:
    lhs: list                   # _Factor list applied to the root itself
    pair: _Factor               # same-level coupling factor
    couplings: dict             # level index (0-based) -> _Factor


def _equations(spec: ChainSpec) -> list:
    """Per-level Bethe-equation structure for the supported cases."""
    _check_supported(spec)
    n = spec.model.n
    two_n = 2 * spec.n_sites
    fam, name = spec.model.family, spec.case.name
    eqs = []
    if fam == FAMILY_A:
        chi = [_Factor("c", -2, power=2.0)] if name == "II" else []
        if n == 1:
            eqs.append(_LevelEquation([_Factor("e", 2, power=two_n)] + chi,
                                      _Factor("e", 4), {}))
            return eqs
        first_coupling = _Factor("f", -2) if n > 2 else _Factor("e", -2)
        eqs.append(_LevelEquation([_Factor("f", 2, power=two_n)], _Factor("f", 4),
                                  {1: first_coupling}))
        for l in range(2, n - 1):  # levels 2 .. n-2 (1-based)
            eqs.append(_LevelEquation([], _Factor("f", 4),
                                      {l - 2: _Factor("f", -2), l: _Factor("f", -2)}))
        if n > 2:
            eqs.append(_LevelEquation([], _Factor("f", 4),
                                      {n - 3: _Factor("f", -2), n - 1: _Factor("e", -2)}))
        eqs.append(_LevelEquation(chi, _Factor("e", 4), {n - 2: _Factor("e", -2)}))
        return eqs
    if name == "I":
        if n == 1:
            eqs.append(_LevelEquation([_Factor("e", 1, power=two_n)], _Factor("f", 2), {}))
            return eqs
        eqs.append(_LevelEquation([_Factor("e", 1, power=two_n)], _Factor("e", 2),
                                  {1: _Factor("e", -1)}))
        for l in range(2, n):  # levels 2 .. n-1
            eqs.append(_LevelEquation([], _Factor("e", 2),
                                      {l - 2: _Factor("e", -1), l: _Factor("e", -1)}))
        eqs.append(_LevelEquation([], _Factor("f", 2), {n - 2: _Factor("e", -1)}))
        return eqs
    if name == "diag":
        eqs.append(_LevelEquation(
            [_Factor("e", 1, power=two_n), _Factor("e", -1, shift=0.5j * np.pi)],
            _Factor("f", 2), {}))
        return eqs
    # block-pair, rank 1
    eta = spec.model.eta
    if is_special_manifold(spec):
        eqs.append(_LevelEquation([_Factor("e", 1, power=two_n)], _Factor("f", 2), {}))
        return eqs
    mu_m, mu_p = complex(spec.case.mu_minus), complex(spec.case.mu_plus)
    eqs.append(_LevelEquation(
        [_Factor("e", 1, power=two_n),
         _Factor("f", 1 + mu_p / eta, shift=1j * np.pi),
         _Factor("f", -1 - mu_m / eta, shift=1j * np.pi)],
        _Factor("f", 2), {}))
    return eqs


def special_root_values(spec: ChainSpec, level_period: float) -> list:
    """Canonical representatives of the boundary-pinned root on the special manifold."""
    mu, eta = complex(spec.case.mu_minus), spec.model.eta
    base = mu + eta
    values, seen = [], set()
    for l in range(-3, 4):
        z = canonicalize_root(base + 1j * np.pi * l, level_period)
        key = (round(z.real, 9), round(z.imag, 9))
        if key not in seen:
            seen.add(key)
            values.append(z)
    values.sort(key=lambda w: (w.real, w.imag))
    return values


def _log_system(spec: ChainSpec, m, frozen=None):
    """Batched log-residual and Jacobian closures for cardinalities m.

    frozen: optional list (per level) of fixed roots that participate in
    the products but are not unknowns (special-manifold boundary roots).
    """
    eqs = _equations(spec)
    eta = spec.model.eta
    n = len(eqs)
    m = list(m)
    frozen = [list(f) for f in (frozen or [[]] * n)]
    level_of = [l for l in range(n) for _ in range(m[l])]
    offsets = np.cumsum([0] + m)

    def evaluate(z):
        """z: (S, M) complex -> (residual (S, M), jacobian (S, M, M))."""
        s_count, m_total = z.shape
        g = np.zeros((s_count, m_total), dtype=complex)
        jac = np.zeros((s_count, m_total, m_total), dtype=complex)
        for i in range(m_total):
            l = level_of[i]
            eq = eqs[l]
            zi = z[:, i]
            for fac in eq.lhs:
                g[:, i] += _log_factor(fac, zi, eta)
                jac[:, i, i] += _dlog_factor(fac, zi, eta)
            for j in range(offsets[l], offsets[l + 1]):
                if j == i:
                    continue
                zj = z[:, j]
                g[:, i] -= _log_factor(eq.pair, zi - zj, eta) + _log_factor(eq.pair, zi + zj, eta)
                jac[:, i, i] -= _dlog_factor(eq.pair, zi - zj, eta) + _dlog_factor(eq.pair, zi + zj, eta)
                jac[:, i, j] += _dlog_factor(eq.pair, zi - zj, eta) - _dlog_factor(eq.pair, zi + zj, eta)
            for w in frozen[l]:
                g[:, i] -= _log_factor(eq.pair, zi - w, eta) + _log_factor(eq.pair, zi + w, eta)
                jac[:, i, i] -= _dlog_factor(eq.pair, zi - w, eta) + _dlog_factor(eq.pair, zi + w, eta)
            for lvl, fac in eq.couplings.items():
                for j in range(offsets[lvl], offsets[lvl + 1]):
                    zj = z[:, j]
                    g[:, i] -= _log_factor(fac, zi - zj, eta) + _log_factor(fac, zi + zj, eta)
                    jac[:, i, i] -= _dlog_factor(fac, zi - zj, eta) + _dlog_factor(fac, zi + zj, eta)
                    jac[:, i, j] += _dlog_factor(fac, zi - zj, eta) - _dlog_factor(fac, zi + zj, eta)
                for w in frozen[lvl]:
                    g[:, i] -= _log_factor(fac, zi - w, eta) + _log_factor(fac, zi + w, eta)
                    jac[:, i, i] -= _dlog_factor(fac, zi - w, eta) + _dlog_factor(fac, zi + w, eta)
        res = g - TWO_PI * 1j * np.round(g.imag / TWO_PI)
        return res, jac

    return evaluate


def residuals(spec: ChainSpec, roots: BetheRootSet) -> np.ndarray:
    """LHS - RHS of the Bethe equation for every root (rational form).

    On the special manifold each residual is the smaller of the standard
    factor and the boundary factor vanishing at the pinned root.
    """
    _check_supported(spec)
    eqs = _equations(spec)
    eta = spec.model.eta
    m = roots.cardinalities
    out = []
    for l, eq in enumerate(eqs):
        lvl = roots.levels[l]
        for k, zk in enumerate(lvl):
            lhs = np.prod([_value_factor(fac, zk, eta) for fac in eq.lhs]) if eq.lhs else 1.0
            rhs = 1.0 + 0j
            for j, zj in enumerate(lvl):
                if j != k:
                    rhs *= _value_factor(eq.pair, zk - zj, eta) * _value_factor(eq.pair, zk + zj, eta)
            for lvl_idx, fac in eq.couplings.items():
                for zj in roots.levels[lvl_idx]:
                    rhs *= _value_factor(fac, zk - zj, eta) * _value_factor(fac, zk + zj, eta)
            if not (np.isfinite(lhs) and np.isfinite(rhs)):
                raise PoleError(f"Bethe-equation factor singular at root {zk} (level {l + 1})")
            r = lhs - rhs
            if is_special_manifold(spec):
                mu = complex(spec.case.mu_minus)
                special = min(abs(np.sinh(zk - mu - eta)), abs(np.sinh(zk + mu + eta)))
                r = r if abs(r) <= special else special
            out.append(r)
    return np.asarray(out, dtype=complex)


# ---------------------------------------------------------------------------
# Eigenvalue and energy formulas


def _q_poly(roots_level, u, half_angle: bool):
    out = 1.0 + 0j
    for r in roots_level:
        if half_angle:
            out = out * np.sinh((u - r) / 2) * np.sinh((u + r) / 2)
        else:
            out = out * np.sinh(u - r) * np.sinh(u + r)
    return out


def _div(num, den, name, checked: bool):
    # products of many factors can be legitimately small; only an exact hit
    # on a zero (a factor at rounding level) counts as a pole
    if checked and np.any(np.abs(den) < 1e-25):
        raise PoleError(f"eigenvalue formula pole: factor {name} vanishes")
    return num / den


def _lambda_a_family(spec: ChainSpec, levels, u, checked: bool = True):
    n, eta, big_n = spec.model.n, spec.model.eta, spec.n_sites
    if any(abs(t) > 0 for t in spec.thetas):
        raise UnsupportedCaseError("inhomogeneous eigenvalues are available for the D family only")
    rho = spec.model.rho
    sh, ch = np.sinh, np.cosh
    case2 = spec.case.name == "II"

    def q(l, x):  # 1-based level
        return _q_poly(levels[l - 1], x, half_angle=(l < n))

    def a_fun(x):
        return _div(q(1, x + 2 * eta), q(1, x - 2 * eta), "Q1", checked)

    def b_fun(l, x):
        if l == n - 1:
            num = q(n - 1, x - 2 * (n + 1) * eta) * q(n, x - 2 * (n - 2) * eta)
            den = q(n - 1, x - 2 * (n - 1) * eta) * q(n, x - 2 * n * eta)
        else:
            num = q(l, x - 2 * (l + 2) * eta) * q(l + 1, x - 2 * (l - 1) * eta)
            den = q(l, x - 2 * l * eta) * q(l + 1, x - 2 * (l + 1) * eta)
        return _div(num, den, f"Q{l}", checked)

    def z_fun(l, x):
        return _div(sh(x) * sh(x - 4 * n * eta) * ch(x - 2 * (n + 1) * eta),
                    sh(x - 2 * l * eta) * sh(x - 2 * (l + 1) * eta) * ch(x - 2 * n * eta),
                    "z-denominator", checked)

    def psi(x):
        if not case2:
            return 1.0 + 0j
        return -_div(ch(x - 2 * (n - 1) * eta), ch(x - 2 * (n + 1) * eta), "psi", checked)

    uc = -u - rho
    term1 = (a_fun(u) * psi(u)
             * _div(sh(u - 4 * n * eta) * ch(u - 2 * (n + 1) * eta),
                    sh(u - 2 * eta) * ch(u - 2 * n * eta), "first-term", checked)
             * (2 * sh(u / 2 - 2 * eta) * ch(u / 2 - 2 * n * eta)) ** (2 * big_n))
    term2 = (a_fun(uc) * psi(uc)
             * _div(sh(u) * ch(u - 2 * (n - 1) * eta),
                    sh(u - 2 * (2 * n - 1) * eta) * ch(u - 2 * n * eta), "last-term", checked)
             * (2 * sh(u / 2) * ch(u / 2 - 2 * (n - 1) * eta)) ** (2 * big_n))
    total = term1 + term2
    if n > 1:
        mid = 0.0 + 0j
        for l in range(1, n):
            mid = mid + z_fun(l, u) * psi(u) * b_fun(l, u)
            mid = mid + z_fun(l, uc) * psi(uc) * b_fun(l, uc)
        total = total + mid * (2 * sh(u / 2) * ch(u / 2 - 2 * n * eta)) ** (2 * big_n)
    return total


def _d_family_a_of_u(spec: ChainSpec, u, checked: bool = True):
    """Dressing-free first coefficient for the three supported D-family cases."""
    n, eta = spec.model.n, spec.model.eta
    sh, ch, ex = np.sinh, np.cosh, np.exp
    name = spec.case.name
    if name == "diag":
        return _div(4 * ex(2 * n * eta) * ch(u) * ch(u - (n - 1) * eta)
                    * sh(u - 2 * n * eta) * sh(u - (n + 1) * eta),
                    sh(2 * (u - eta)) * sh(2 * (u - n * eta)), "a-denominator", checked)
    base = _div(4 * ex(6 * n * eta) * ch(u - n * eta) * ch(u - (n - 1) * eta)
                * sh(2 * (u - 2 * n * eta)) * sh(u - (n + 1) * eta),
                sh(2 * (u - eta)) * sh(u - n * eta), "a-denominator", checked)
    if name == "I":
        return base
    mu_m, mu_p = complex(spec.case.mu_minus), complex(spec.case.mu_plus)
    return base * (-4 * ex(2 * n * eta + mu_m + mu_p)
                   * sh(u + mu_m) * sh(u - mu_p - 2 * n * eta))


def _d_family_g_of_u(spec: ChainSpec, u, checked: bool = True):
    if not (spec.case.name == "block-pair"):
        return 1.0 + 0j
    mu_m, mu_p = complex(spec.case.mu_minus), complex(spec.case.mu_plus)
    eta = spec.model.eta
    ch = np.cosh
    return _div(ch((u + mu_p) / 2) * ch((u - mu_m - 2 * eta) / 2),
                ch((u + mu_m) / 2) * ch((u - mu_p - 2 * eta) / 2), "G", checked)


def _lambda_d_family(spec: ChainSpec, levels, u, checked: bool = True):
    n, eta, big_n = spec.model.n, spec.model.eta, spec.n_sites
    rho = spec.model.rho
    sh = np.sinh
    name = spec.case.name
    ipi = 1j * np.pi

    def q(l, x):
        return _q_poly(levels[l - 1], x, half_angle=True)

    def a_dress(x):
        num = q(1, x + eta) * q(1, x + eta + ipi)
        den = q(1, x - eta) * q(1, x - eta + ipi)
        return _div(num, den, "Q1", checked)

    def b_dress(l, x):
        if l < n - 1:
            num = (q(l, x - (l + 2) * eta) * q(l, x - (l + 2) * eta + ipi)
                   * q(l + 1, x - (l - 1) * eta) * q(l + 1, x - (l - 1) * eta + ipi))
            den = (q(l, x - l * eta) * q(l, x - l * eta + ipi)
                   * q(l + 1, x - (l + 1) * eta) * q(l + 1, x - (l + 1) * eta + ipi))
        elif l == n - 1:
            num = (q(n - 1, x - (n + 1) * eta) * q(n - 1, x - (n + 1) * eta + ipi)
                   * q(n, x - (n - 2) * eta) * q(n, x - (n - 2) * eta + ipi))
            den = (q(n - 1, x - (n - 1) * eta) * q(n - 1, x - (n - 1) * eta + ipi)
                   * q(n, x - n * eta) * q(n, x - n * eta + ipi))
        else:
            num = q(n, x - (n + 2) * eta) * q(n, x - (n - 2) * eta + ipi)
            den = q(n, x - n * eta) * q(n, x - n * eta + ipi)
        return _div(num, den, f"Q{l}", checked)

    def a_scalar(x):
        return _d_family_a_of_u(spec, x, checked)

    def b_scalar(l, x):
        if name == "diag":
            # rank-1 closed form; the recursion below is for the case-I chain
            ex = np.exp
            return _div(ex(2 * eta) * sh(2 * x) * sh(2 * (x - 2 * eta)),
                        sh(2 * (x - eta)) ** 2, "b1-denominator", checked)
        if name == "block-pair":
            return (_div(sh(x), sh(x - 2 * eta), "b1-denominator", checked)
                    * a_scalar(x) * _d_family_g_of_u(spec, x, checked))
        if l == n and n == 1:
            return a_scalar(x) * _div(sh(x), sh(x - 2 * eta), "b1-denominator", checked)
        out = a_scalar(x) * _div(sh(2 * x), sh(2 * x - 4 * eta), "b1-denominator", checked)
        for j in range(2, l + 1):
            if j < n:
                out = out * _div(sh(2 * x - 2 * (j - 1) * eta), sh(2 * x - 2 * (j + 1) * eta),
                                 f"b{j}-denominator", checked)
        if l == n:
            out = out * _div(sh(x - (n - 1) * eta), sh(x - (n + 1) * eta),
                             f"b{n}-denominator", checked)
        return out

    def bracket(x, kind):
        # kind 0: first term, 1: middle, 2: last; inhomogeneous products
        shifts = {0: (2 * eta, 2 * n * eta), 1: (0.0, 2 * n * eta),
                  2: (0.0, 2 * (n - 1) * eta)}[kind]
        out = 1.0 + 0j
        for theta in spec.thetas:
            for s in (-1, 1):
                out = out * 4 * sh(x + s * theta - shifts[0]) * sh(x + s * theta - shifts[1])
        return out

    uc = -u - rho
    total = a_scalar(u) * a_dress(u) * bracket(u, 0)
    total = total + a_scalar(uc) * a_dress(uc) * bracket(u, 2)
    mid = 0.0 + 0j
    for l in range(1, n + 1):
        mid = mid + b_scalar(l, u) * b_dress(l, u)
        mid = mid + b_scalar(l, uc) * b_dress(l, uc)
    return total + mid * bracket(u, 1)


def lambda_eval(spec: ChainSpec, roots: BetheRootSet, u) -> complex:
    """Transfer-matrix eigenvalue formula evaluated at spectral parameter u."""
    _check_supported(spec)
    u = complex(u)
    if len(roots.levels) != spec.model.n:
        raise ValueError("root set has the wrong number of levels")
    if spec.model.family == FAMILY_A:
        return complex(_lambda_a_family(spec, roots.levels, u))
    return complex(_lambda_d_family(spec, roots.levels, u))


def _lambda_batch(spec: ChainSpec, m, z: np.ndarray, probes) -> np.ndarray:
    """Formula values for a batch of flattened root vectors at several probes.

    z has shape (S, M); returns (S, P).  Unchecked: poles propagate as
    inf/nan and are filtered by callers.
    """
    offsets = np.cumsum([0] + list(m))
    levels = [[z[:, j:j + 1] for j in range(offsets[l], offsets[l + 1])]
              for l in range(len(m))]
    u = np.asarray(probes, dtype=complex)[None, :]
    with np.errstate(all="ignore"):
        if spec.model.family == FAMILY_A:
            out = _lambda_a_family(spec, levels, u, checked=False)
        else:
            out = _lambda_d_family(spec, levels, u, checked=False)
    return np.broadcast_to(out, (z.shape[0], len(probes))).copy()


def energy(spec: ChainSpec, roots: BetheRootSet) -> complex:
    """Hamiltonian eigenvalue from the level-1 roots."""
    fam, name = spec.model.family, spec.case.name
    if not ((fam == FAMILY_A and name in ("I", "II")) or (fam == FAMILY_D and name == "I")):
        raise UnsupportedCaseError(f"no energy formula for boundary case {name!r}")
    n, eta, big_n = spec.model.n, spec.model.eta, spec.n_sites
    sh, ch = np.sinh, np.cosh
    first = roots.levels[0]
    total = 0j
    if fam == FAMILY_A:
        if n > 1:
            for u in first:
                total -= _div(sh(2 * eta), 2 * sh(u / 2 - eta) * sh(u / 2 + eta),
                              "energy denominator", True)
            total -= (big_n - 1) * ch(2 * (n + 1) * eta) / (2 * sh(2 * eta) * ch(2 * n * eta))
        else:
            for u in first:
                total -= _div(sh(4 * eta), sh(u - 2 * eta) * sh(u + 2 * eta),
                              "energy denominator", True)
            total -= (big_n - 1) * ch(4 * eta) / sh(4 * eta)
        return complex(total)
    for u in first:
        total -= _div(sh(2 * eta), sh(u - eta) * sh(u + eta), "energy denominator", True)
    total -= (big_n - 1) * sh(2 * (n + 1) * eta) / (sh(2 * eta) * sh(2 * n * eta))
    return complex(total)


# ---------------------------------------------------------------------------
# Multi-start Newton solver


def _seed_starts(spec: ChainSpec, m, cfg: SolveConfig, count: int) -> np.ndarray:
    """Random starts in the fundamental domain.

    Start styles rotate between independent roots, conjugate-reflected
    pairs, and pi-shifted string pairs; imaginary parts snap onto the
    half-period lines where many solutions live, and a fraction of real
    parts sits on the imaginary axis (a reflection-symmetric manifold
    that hosts many table solutions).
    """
    rng = np.random.default_rng(cfg.rng_seed)
    periods = level_periods(spec, m)
    total = sum(m)
    z = np.zeros((count, total), dtype=complex)
    for s in range(count):
        pair_mode = s % 3  # 0: independent, 1: conjugate pair, 2: pi-string pair
        pos = 0
        for l, ml in enumerate(m):
            period = periods[l]
            lines = [x for x in (0.0, np.pi / 2, np.pi, 1.5 * np.pi) if x < period - 1e-9]
            k = 0
            while k < ml:
                re = 0.0 if rng.random() < 0.35 else rng.uniform(0.0, 2.0)
                if rng.random() < 0.35:
                    im = lines[rng.integers(len(lines))]
                else:
                    im = rng.uniform(0.0, period)
                z[s, pos + k] = complex(re, im)
                if pair_mode and k + 1 < ml:
                    if pair_mode == 1:
                        partner = canonicalize_root(complex(re, -im), period)
                    else:
                        partner = canonicalize_root(complex(re, im + np.pi), period)
                    z[s, pos + k + 1] = partner
                    k += 2
                else:
                    k += 1
            pos += ml
    return z


def _solve_steps(jac: np.ndarray, res: np.ndarray) -> np.ndarray:
    """Batched Newton steps, tolerating singular or non-finite members."""
    step = np.zeros_like(res)
    finite = np.isfinite(res).all(axis=1) & np.isfinite(jac).all(axis=(1, 2))
    if np.any(finite):
        sub_j, sub_r = jac[finite], res[finite]
        try:
            sol = np.linalg.solve(sub_j, sub_r[..., None])[..., 0]
        except np.linalg.LinAlgError:
            sol = np.empty_like(sub_r)
            for i in range(len(sub_r)):
                try:
                    sol[i] = np.linalg.solve(sub_j[i], sub_r[i])
                except np.linalg.LinAlgError:
                    sol[i] = np.nan
        step[finite] = sol
    step[~finite] = np.nan
    return step


def _newton_batch(evaluate, z0: np.ndarray, cfg: SolveConfig):
    """Damped Newton on the residual system; returns converged root vectors."""
    z = z0.copy()
    solutions = []
    with np.errstate(all="ignore"):
        res, jac = evaluate(z)
        norm = np.max(np.abs(res), axis=1)
        norm[~np.isfinite(norm)] = np.inf
        for _ in range(cfg.max_iter):
            if len(z) == 0:
                break
            done = norm <= cfg.newton_tol
            if np.any(done):
                solutions.extend(list(z[done]))
                keep = ~done
                z, res, jac, norm = z[keep], res[keep], jac[keep], norm[keep]
                if len(z) == 0:
                    break
            step = _solve_steps(jac, res)
            z_new = z - step
            res_new, jac_new = evaluate(z_new)
            norm_new = np.max(np.abs(res_new), axis=1)
            norm_new[~np.isfinite(norm_new)] = np.inf
            # step halving for starts whose residual grew
            scale = np.ones(len(z))
            for _ in range(8):
                worse = np.nonzero(norm_new > norm)[0]
                if len(worse) == 0:
                    break
                scale[worse] *= 0.5
                z_try = z[worse] - scale[worse, None] * step[worse]
                res_try, jac_try = evaluate(z_try)
                norm_try = np.max(np.abs(res_try), axis=1)
                norm_try[~np.isfinite(norm_try)] = np.inf
                z_new[worse] = z_try
                res_new[worse] = res_try
                jac_new[worse] = jac_try
                norm_new[worse] = norm_try
            z, res, jac, norm = z_new, res_new, jac_new, norm_new
            alive = np.isfinite(norm) & (np.max(np.abs(z), axis=1) < 60.0)
            if not np.all(alive):
                z, res, jac, norm = z[alive], res[alive], jac[alive], norm[alive]
        if len(z):
            solutions.extend(list(z[norm <= cfg.newton_tol]))
    return solutions


# ---------------------------------------------------------------------------
# Eigenvalue-guided root extraction
#
# Random multi-start Newton occasionally misses solutions with many roots
# (their basins occupy a vanishing fraction of the search box).  Those are
# recovered deterministically: every transfer eigenvalue can be evaluated
# at ANY spectral parameter through a fixed eigenvector (the commuting
# family shares eigenvectors), its root cardinalities follow from the
# eigenvector's Cartan weight, and Newton can then fit the eigenvalue
# formula to the exact eigenvalue data before polishing on the equations.


def _weight_to_cardinality(spec: ChainSpec, h) -> tuple | None:
    """Invert the weight/cardinality relation; None if not a valid count."""
    n, big_n = spec.model.n, spec.n_sites
    h = list(h)
    if spec.model.family == FAMILY_A:
        if n == 1:
            m = [(big_n - h[0]) / 2]
        else:
            m = [big_n - h[0]]
            for i in range(1, n - 1):
                m.append(m[-1] - h[i])
            m.append((m[-1] - h[n - 1]) / 2)
    else:
        m = [big_n - h[0]]
        for i in range(1, n):
            m.append(m[-1] - h[i])
    out = []
    for x in m:
        xi = int(round(x))
        if abs(x - xi) > 1e-9 or xi < 0:
            return None
        out.append(xi)
    return tuple(out)


@dataclass
class _EigenTarget:
    value: complex          # eigenvalue at the reference probe
    degeneracy: int
    vector: np.ndarray      # one eigenvector of the cluster
    pivot: int              # component used for Rayleigh evaluation
    cardinalities: list     # candidate root counts from the weight content


def _eigen_targets(spec: ChainSpec, probe0: complex) -> list:
    from .qsymm import cartan_diagonals

    diags = cartan_diagonals(spec.model.family, spec.model.n, spec.n_sites)
    cl = eig(transfer(spec, probe0), rtol=CLUSTER_RTOL, vectors=True)
    targets = []
    for val, members in zip(cl.values, cl.member_indices):
        block = cl.vectors[:, members]
        mass = np.sum(np.abs(block) ** 2, axis=1)
        mass /= mass.sum()
        weight_mass = {}
        for idx in np.nonzero(mass > 1e-10)[0]:
            w = tuple(int(d[idx]) for d in diags)
            weight_mass[w] = weight_mass.get(w, 0.0) + mass[idx]
        cards = []
        for w, wm in sorted(weight_mass.items(), key=lambda kv: -kv[1]):
            m = _weight_to_cardinality(spec, w)
            if m is not None and m not in cards:
                cards.append(m)
        j = int(np.argmax(np.abs(block[:, 0])))
        targets.append(_EigenTarget(complex(val), len(members), block[:, 0].copy(),
                                    j, cards))
    return targets


def _rayleigh_values(spec: ChainSpec, target: _EigenTarget, probes) -> list:
    out = []
    for p in probes:
        tv = transfer(spec, p) @ target.vector
        out.append(complex(tv[target.pivot] / target.vector[target.pivot]))
    return out


def _fit_probes(total_roots: int) -> list:
    return [0.37 + 0.19j + k * (0.211 - 0.093j) for k in range(total_roots)]


def _fit_roots_to_target(spec: ChainSpec, m, target: _EigenTarget,
                         cfg: SolveConfig, attempts: int = 256):
    """Newton-fit the eigenvalue formula to exact eigenvalue data, then polish."""
    total = sum(m)
    probes = _fit_probes(total)
    goals = np.asarray(_rayleigh_values(spec, target, probes))
    scale = 1.0 + np.abs(goals)

    def evaluate(z):
        f = (_lambda_batch(spec, m, z, probes) - goals[None, :]) / scale[None, :]
        jac = np.empty((z.shape[0], total, total), dtype=complex)
        h = 1e-6
        for i in range(total):
            dz = np.zeros((1, total), dtype=complex)
            dz[0, i] = h
            fp = _lambda_batch(spec, m, z + dz, probes)
            fm = _lambda_batch(spec, m, z - dz, probes)
            jac[:, :, i] = (fp - fm) / (2 * h * scale[None, :])
        return f, jac

    rng = np.random.default_rng([cfg.rng_seed, 977, total] + list(m))
    periods = level_periods(spec, m)
    z0 = np.zeros((attempts, total), dtype=complex)
    for s in range(attempts):
        pos = 0
        for l, ml in enumerate(m):
            for _ in range(ml):
                re = 0.0 if rng.random() < 0.4 else rng.uniform(0.0, 2.0)
                z0[s, pos] = complex(re, rng.uniform(0.0, periods[l]))
                pos += 1

    polish = _log_system(spec, list(m))

    def verify(vec):
        refined = _newton_batch(polish, np.asarray(vec)[None, :], cfg)
        if not refined:
            return None
        candidate = canonicalize(spec, BetheRootSet.from_flat(refined[0], m))
        if not _admissible(spec, candidate, cfg.dedup_tol):
            return None
        lam0 = lambda_eval(spec, candidate, probes[0])
        if abs(lam0 - goals[0]) > 1e-8 * scale[0]:
            return None
        return candidate

    fit_cfg = SolveConfig(starts=attempts, newton_tol=1e-9, max_iter=80,
                          dedup_tol=cfg.dedup_tol, rng_seed=cfg.rng_seed)
    for vec in _newton_batch(evaluate, z0, fit_cfg):
        candidate = verify(vec)
        if candidate is not None:
            return candidate

    # damped Newton missed: fall back on a trust-region solve per start
    from scipy.optimize import root as scipy_root

    def objective(x):
        z = (x[:total] + 1j * x[total:])[None, :]
        with np.errstate(all="ignore"):
            f = (_lambda_batch(spec, m, z, probes)[0] - goals) / scale
        f[~np.isfinite(f)] = 1e6
        return np.concatenate([f.real, f.imag])

    for s in range(min(attempts, 160)):
        x0 = np.concatenate([z0[s].real, z0[s].imag])
        sol = scipy_root(objective, x0, method="hybr")
        if not np.all(np.abs(objective(sol.x)) < 1e-8):
            continue
        candidate = verify(sol.x[:total] + 1j * sol.x[total:])
        if candidate is not None:
            return candidate
    return None


def _probe_points(spec: ChainSpec):
    base = [0.43 + 0.21j, 0.91 - 0.33j, 0.27 + 0.55j]
    return [complex(b) for b in base]


def _lambda_at_probes(spec: ChainSpec, roots: BetheRootSet, probes) -> list:
    return [lambda_eval(spec, roots, p) for p in probes]


def _choose_probes(spec: ChainSpec, solutions) -> list:
    """Fixed probe points, nudged deterministically off any solution's poles."""
    probes = []
    for p in _probe_points(spec):
        shift = 0.0
        for _ in range(8):
            try:
                for sol in solutions:
                    lambda_eval(spec, sol, p + shift)
                break
            except PoleError:
                shift += 0.0137
        else:
            raise PoleError("no pole-free probe point found")
        probes.append(p + shift)
    return probes


REAL_PART_CAP = 8.0  # larger real parts are asymptotic artifacts of the equations
COINCIDENCE_TOL = 1e-4  # same-level roots closer than this (mod symmetry) are one root


def _pole_positions(spec: ChainSpec, roots: BetheRootSet) -> list:
    """Nominal pole positions of the eigenvalue formula, one set per root."""
    eta = spec.model.eta
    out = []
    for l, lvl in enumerate(roots.levels, start=1):
        shift = 2 * l * eta if spec.model.family == FAMILY_A else l * eta
        out.extend(z + shift for z in lvl)
    return out


def _poles_cancelled(spec: ChainSpec, roots: BetheRootSet, growth_cap: float = 30.0) -> bool:
    """Probe rings around each nominal pole; reject 1/r growth of the formula."""
    for p in _pole_positions(spec, roots):
        for attempt in range(2):
            offset = 0.29 + 0.61 * attempt
            try:
                near = max(abs(lambda_eval(spec, roots, p + 1e-4 * np.exp(1j * (offset + k * np.pi / 2))))
                           for k in range(4))
                far = max(abs(lambda_eval(spec, roots, p + 1e-2 * np.exp(1j * (offset + k * np.pi / 2))))
                          for k in range(4))
                break
            except PoleError:
                continue
        else:
            return False
        if near > growth_cap * max(far, 1e-8):
            return False
    return True


def _admissible(spec: ChainSpec, roots: BetheRootSet, dedup_tol: float) -> bool:
    periods = level_periods(spec, roots.cardinalities)
    for lvl, period in zip(roots.levels, periods):
        for i in range(len(lvl)):
            if abs(np.sinh(lvl[i])) < 1e-6:  # u = 0 or i pi: null state
                return False
            if abs(lvl[i].real) > REAL_PART_CAP:
                return False
            for j in range(i + 1, len(lvl)):
                if root_distance(lvl[i], lvl[j], period) < max(dedup_tol, COINCIDENCE_TOL):
                    return False
    try:
        vals = _lambda_at_probes(spec, roots, _choose_probes(spec, [roots]))
    except (PoleError, UnsupportedCaseError):
        return False
    if not all(np.isfinite(v) and abs(v) < 1e12 for v in vals):
        return False
    try:
        res = residuals(spec, roots)
    except PoleError:
        return False
    if not np.all(np.abs(res) < 1e-6):
        return False
    return _poles_cancelled(spec, roots)


def solve(spec: ChainSpec, m, cfg: SolveConfig | None = None) -> list:
    """All distinct admissible Bethe root sets with cardinalities m.

    Multi-start damped Newton iteration on the logarithmic residual;
    deterministic for a fixed SolveConfig.rng_seed.  On the special
    manifold the boundary-pinned roots are enumerated explicitly and the
    remaining roots solved for.
    """
    _check_supported(spec)
    cfg = cfg or SolveConfig()
    m = tuple(int(x) for x in m)
    if len(m) != spec.model.n:
        raise ValueError("need one cardinality per level")
    if any(x < 0 for x in m):
        raise ValueError("cardinalities must be nonnegative")
    if sum(m) == 0:
        return [BetheRootSet.empty(spec.model.n)]

    frozen_choices = [tuple([()] * spec.model.n)]
    if is_special_manifold(spec):
        period = level_periods(spec, m)[0]
        specials = special_root_values(spec, period)
        choices = []
        max_pin = min(m[0], len(specials))
        for count in range(max_pin + 1):
            for combo in combinations(specials, count):
                choices.append((tuple(combo),))
        frozen_choices = choices

    found = []
    periods = level_periods(spec, m)
    for frozen in frozen_choices:
        free_m = [ml - len(fr) for ml, fr in zip(m, frozen)]
        if any(x < 0 for x in free_m):
            continue
        if sum(free_m) == 0:
            candidate = canonicalize(spec, BetheRootSet(frozen))
            if _admissible(spec, candidate, cfg.dedup_tol) and not any(
                    solution_distance(spec, candidate, o) < cfg.dedup_tol for o in found):
                found.append(candidate)
            continue
        evaluate = _log_system(spec, free_m, frozen=list(frozen))
        z0 = _seed_starts(spec, tuple(free_m), cfg, cfg.starts)
        raw = _newton_batch(evaluate, z0, cfg)
        for sol in _collect_with_frozen(spec, m, free_m, raw, frozen, cfg):
            if not any(solution_distance(spec, sol, o) < cfg.dedup_tol for o in found):
                found.append(sol)
    found.sort(key=lambda rs: tuple((z.real, z.imag) for lvl in rs.levels for z in lvl))
    return found


def _collect_with_frozen(spec, m, free_m, raw_vectors, frozen, cfg):
    periods = level_periods(spec, m)
    unique = []
    for vec in raw_vectors:
        free = BetheRootSet.from_flat(vec, free_m)
        levels = tuple(tuple(list(free.levels[l]) + list(frozen[l])) for l in range(len(m)))
        candidate = canonicalize(spec, BetheRootSet(levels))
        if not any(solution_distance(spec, candidate, other) < cfg.dedup_tol for other in unique):
            unique.append(candidate)
    return [c for c in unique if _admissible(spec, c, cfg.dedup_tol)]


# ---------------------------------------------------------------------------
# Completeness against exact diagonalization


@dataclass
class MatchedPair:
    eigenvalue: complex
    degeneracy: int
    roots: BetheRootSet
    lambda_error: float
    energy_error: float | None


@dataclass
class MatchReport:
    pairs: list
    unmatched_eigenvalues: list
    unmatched_rootsets: list
    probes: list
    cardinality_caps: tuple

    @property
    def complete(self) -> bool:
        return not self.unmatched_eigenvalues


def enumerate_cardinalities(caps) -> list:
    out = [()]
    for cap in caps:
        out = [prev + (k,) for prev in out for k in range(cap + 1)]
    out.sort(key=lambda m: (sum(m), m))
    return out


def _dominant_cardinality(spec: ChainSpec, m) -> bool:
    """Keep only highest-weight-compatible cardinalities for symmetric cases.

    Bethe states of the quantum-group-invariant chains are assumed to be
    highest weight, so their Dynkin labels are nonnegative; cardinalities
    violating that produce no physical states.  Cases without the symmetry
    (rank-1 A-II, the diagonal and block D-family boundaries) have no such
    criterion and are not filtered.
    """
    from .qsymm import algebra_for_case, label_from_cardinalities

    try:
        algebra_for_case(spec.case, spec.model.n)
    except ValueError:
        return True
    label = label_from_cardinalities(spec.case, spec.model.n, spec.n_sites, m)
    return all(a >= 0 for a in label)


def completeness(spec: ChainSpec, m_cap, cfg: SolveConfig | None = None,
                 match_rtol: float = 1e-6) -> MatchReport:
    """Solve all cardinalities up to m_cap and pair solutions with eigenvalues.

    Random-start solutions are matched one-to-one against the eigenvalue
    clusters of the transfer matrix, evaluated at three probe points
    through fixed cluster eigenvectors.  Clusters left unmatched are then
    attacked directly: the root count is read off the cluster's Cartan
    weights and the eigenvalue formula is Newton-fitted to the exact
    eigenvalue data.  Matched pairs are cross-checked against the
    Hamiltonian spectrum through the closed-form energy where one exists.
    """
    _check_supported(spec)
    cfg = cfg or SolveConfig()
    caps = tuple(int(x) for x in m_cap) if hasattr(m_cap, "__len__") else (int(m_cap),) * spec.model.n

    solutions = []
    for m in enumerate_cardinalities(caps):
        if not _dominant_cardinality(spec, m):
            continue
        solutions.extend(solve(spec, m, cfg))

    probes = _choose_probes(spec, solutions)
    targets = _eigen_targets(spec, probes[0])
    t_mats = [transfer(spec, p) for p in probes[1:]]
    target_vals = []
    for tgt in targets:
        vals = [tgt.value]
        for tp in t_mats:
            tv = tp @ tgt.vector
            vals.append(complex(tv[tgt.pivot] / tgt.vector[tgt.pivot]))
        target_vals.append(vals)

    energy_ok = spec.case.name == "I" or spec.model.family == FAMILY_A
    h_clusters = None
    if energy_ok:
        h_clusters = eig(hamiltonian(spec).matrix, rtol=CLUSTER_RTOL)

    def match_errors(lams, ti):
        return max(abs(lams[k] - target_vals[ti][k]) / max(1.0, abs(target_vals[ti][k]))
                   for k in range(len(probes)))

    def energy_error(sol):
        if h_clusters is None:
            return None
        try:
            e_val = energy(spec, sol)
        except (UnsupportedCaseError, PoleError):
            return None
        return float(min(abs(e_val - v) / max(1.0, abs(v)) for v in h_clusters.values))

    taken = [False] * len(targets)
    pairs, unmatched_roots = [], []
    for sol in solutions:
        try:
            lams = _lambda_at_probes(spec, sol, probes)
        except PoleError:
            unmatched_roots.append(sol)
            continue
        best, best_err = None, np.inf
        for ti in range(len(targets)):
            if taken[ti]:
                continue
            err = match_errors(lams, ti)
            if err < best_err:
                best, best_err = ti, err
        if best is None or best_err > match_rtol:
            unmatched_roots.append(sol)
            continue
        taken[best] = True
        pairs.append(MatchedPair(targets[best].value, targets[best].degeneracy, sol,
                                 float(best_err), energy_error(sol)))

    # eigenvalue-guided recovery of clusters the random stage missed
    for ti, tgt in enumerate(targets):
        if taken[ti]:
            continue
        for m in tgt.cardinalities:
            if any(mi > ci for mi, ci in zip(m, caps)) or not _dominant_cardinality(spec, m):
                continue
            fit = _fit_roots_to_target(spec, m, tgt, cfg)
            if fit is None:
                continue
            try:
                lams = _lambda_at_probes(spec, fit, probes)
            except PoleError:
                continue
            err = match_errors(lams, ti)
            if err > match_rtol:
                continue
            taken[ti] = True
            pairs.append(MatchedPair(tgt.value, tgt.degeneracy, fit,
                                     float(err), energy_error(fit)))
            break

    unmatched_eigs = [
        {"value": targets[ti].value, "deg": targets[ti].degeneracy}
        for ti in range(len(targets)) if not taken[ti]
    ]
    return MatchReport(pairs=pairs, unmatched_eigenvalues=unmatched_eigs,
                       unmatched_rootsets=unmatched_roots, probes=probes,
                       cardinality_caps=caps)
