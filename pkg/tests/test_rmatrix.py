import numpy as np
import pytest

from twistchain import linalg
from twistchain.rmatrix import (FAMILY_A, FAMILY_D, ModelSpec, crossing_data,
                                crossing_m, crossing_v, r_matrix, scalar_functions,
                                verify_r, xi, zeta)

ETA = -0.1j


@pytest.mark.parametrize("family", [FAMILY_A, FAMILY_D])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_identity_suite(family, n):
    rep = verify_r(ModelSpec(family, n, ETA), sample_count=8, rng_seed=3)
    assert rep.all_passed, rep.summary()


@pytest.mark.parametrize("family,n", [(FAMILY_A, 1), (FAMILY_A, 2), (FAMILY_D, 1), (FAMILY_D, 2)])
def test_regularity_value(family, n):
    spec = ModelSpec(family, n, ETA)
    r0 = r_matrix(spec, 0)
    assert linalg.rel_residual(r0, xi(spec, 0) * linalg.permutation(spec.d)) < 1e-12


def test_xi_zero_closed_form_a1():
    # for the A family at rank 1: xi(0) = -2 sinh(2 eta) cosh(2 eta)
    spec = ModelSpec(FAMILY_A, 1, ETA)
    assert np.isclose(xi(spec, 0), -2 * np.sinh(2 * ETA) * np.cosh(2 * ETA))
    assert np.isclose(xi(spec, 0), 0.389418342308651j)


def test_zeta_is_even():
    spec = ModelSpec(FAMILY_D, 2, ETA)
    rng = np.random.default_rng(0)
    for _ in range(5):
        u = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        assert np.isclose(zeta(spec, u), zeta(spec, -u))


def test_rho_closed_form():
    spec = ModelSpec(FAMILY_A, 2, ETA)
    assert np.isclose(spec.rho, -8 * ETA - 1j * np.pi)
    assert np.isclose(spec.rho, (0.8 - np.pi) * 1j)
    _, _, rho = scalar_functions(spec)
    assert np.isclose(rho, spec.rho)


def test_unitarity_random_point():
    for family in (FAMILY_A, FAMILY_D):
        for n in (1, 2, 3):
            spec = ModelSpec(family, n, ETA)
            u = 0.4 + 0.2j
            p = linalg.permutation(spec.d)
            lhs = r_matrix(spec, u) @ p @ r_matrix(spec, -u) @ p
            assert linalg.rel_residual(lhs, zeta(spec, u) * np.eye(spec.d ** 2)) < 1e-12


def test_r21_equals_double_partial_transpose():
    spec = ModelSpec(FAMILY_A, 1, ETA)
    u = 0.3
    r = r_matrix(spec, u)
    p = linalg.permutation(spec.d)
    both = linalg.partial_transpose(linalg.partial_transpose(r, spec.d, 1), spec.d, 2)
    assert linalg.rel_residual(p @ r @ p, both) < 1e-14


def test_crossing_matrix_involution_and_m():
    for family, n in ((FAMILY_A, 2), (FAMILY_D, 1), (FAMILY_D, 3)):
        spec = ModelSpec(family, n, ETA)
        data = crossing_data(spec)
        assert linalg.mat_norm(data.V @ data.V - np.eye(spec.d)) < 1e-12
        assert linalg.rel_residual(data.M, data.epsilon * data.V.T @ data.V) < 1e-12


def test_m_diagonal_d1():
    spec = ModelSpec(FAMILY_D, 1, ETA)
    expected = np.diag([np.exp(2 * ETA), 1.0, 1.0, np.exp(-2 * ETA)])
    assert linalg.rel_residual(crossing_m(spec), expected) < 1e-14


def test_model_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec("A", 0, ETA)
    with pytest.raises(ValueError):
        ModelSpec("A", 1, 0.0)
    with pytest.raises(ValueError):
        ModelSpec("x-twisted", 1, ETA)
    assert ModelSpec("a-twisted", 2, ETA).d == 4
    assert ModelSpec("d-twisted", 2, ETA).d == 6
