import numpy as np
import pytest

from twistchain import linalg
from twistchain.chain import (ChainSpec, boundary_mu, hamiltonian, transfer,
                              transfer_scalar_at_zero, two_site_hamiltonian,
                              verify_chain, verify_fusion, verify_h_t_relation)
from twistchain.kmatrix import BoundaryCase, kappa
from twistchain.rmatrix import FAMILY_A, FAMILY_D, ModelSpec

ETA = -0.1j


def _spec(family, name, n, n_sites, thetas=()):
    return ChainSpec(ModelSpec(family, n, ETA), BoundaryCase(family, name), n_sites, thetas)


QG_CASES = [(FAMILY_A, "I"), (FAMILY_A, "II"), (FAMILY_D, "I"), (FAMILY_D, "II")]


@pytest.mark.parametrize("family,name", QG_CASES)
@pytest.mark.parametrize("n,n_sites", [(1, 2), (2, 2)])
def test_chain_identity_suite(family, name, n, n_sites):
    rep = verify_chain(_spec(family, name, n, n_sites), sample_count=2, rng_seed=9)
    assert rep.all_passed, rep.summary()


def test_commutativity_other_boundaries():
    for name in ("diag", "block-1", "block-2", "block-pair"):
        spec = _spec(FAMILY_D, name, 1, 2)
        u, v = 0.37 + 0.2j, -0.51 + 0.08j
        tu, tv = transfer(spec, u), transfer(spec, v)
        assert linalg.rel_residual(tu @ tv, tv @ tu) < 1e-9


def test_transfer_at_zero_is_scalar():
    spec = _spec(FAMILY_D, "II", 1, 2)
    t0 = transfer(spec, 0)
    scalar = transfer_scalar_at_zero(spec)
    assert abs(scalar) < 1e-12  # tr K+(0) = 0 for this boundary
    assert linalg.mat_norm(t0) < 1e-9


def test_inhomogeneous_transfer_commutes():
    thetas = (0.31, -0.12 + 0.2j)
    spec = _spec(FAMILY_D, "I", 1, 2, thetas)
    u, v = 0.4 + 0.1j, -0.3 + 0.25j
    tu, tv = transfer(spec, u), transfer(spec, v)
    assert linalg.rel_residual(tu @ tv, tv @ tu) < 1e-10


@pytest.mark.parametrize("family,name,n,tol", [
    (FAMILY_A, "I", 1, 1e-6), (FAMILY_A, "II", 2, 1e-6),
    (FAMILY_D, "I", 2, 1e-6), (FAMILY_D, "II", 1, 1e-5),
])
def test_hamiltonian_transfer_relation(family, name, n, tol):
    assert verify_h_t_relation(_spec(family, name, n, 2)) < tol


def test_two_site_hamiltonian_shape_and_embedding():
    spec = _spec(FAMILY_D, "I", 1, 3)
    bundle = hamiltonian(spec)
    d = spec.model.d
    assert bundle.two_site.shape == (d * d, d * d)
    rebuilt = (linalg.embed(bundle.two_site, 1, 3, d) + linalg.embed(bundle.two_site, 2, 3, d))
    diff = bundle.matrix - rebuilt
    coeff = boundary_mu(spec.model, spec.case) / (2 * kappa(spec.model, spec.case))
    expected_boundary = coeff * linalg.embed_site(
        np.pad(np.ones((2, 2)), ((1, 1), (1, 1))), 3, 3, d)
    assert linalg.rel_residual(diff, expected_boundary) < 1e-12
    assert np.isclose(bundle.boundary_u_coeff, coeff)


def test_single_site_chain():
    spec = _spec(FAMILY_A, "I", 1, 1)
    bundle = hamiltonian(spec)
    assert linalg.mat_norm(bundle.matrix) == 0.0
    t0 = transfer(spec, 0)
    assert linalg.rel_residual(t0, transfer_scalar_at_zero(spec) * np.eye(2)) < 1e-12


def test_unsupported_hamiltonian_case():
    with pytest.raises(ValueError):
        two_site_hamiltonian(_spec(FAMILY_D, "diag", 1, 2))


@pytest.mark.parametrize("n", [1, 2])
def test_fusion_functional_relation(n):
    thetas = (0.31, -0.12 + 0.2j)
    spec = _spec(FAMILY_D, "I", n, 2, thetas)
    rep = verify_fusion(spec, site_index=1)
    assert rep.all_passed, rep.summary()
    rep2 = verify_fusion(spec, site_index=2)
    assert rep2.all_passed


def test_fusion_rejects_unsupported():
    with pytest.raises(ValueError):
        verify_fusion(_spec(FAMILY_A, "I", 1, 2, (0.1, 0.2)))
    with pytest.raises(ValueError):
        verify_fusion(_spec(FAMILY_D, "I", 1, 2, (0.1, 0.1)))  # coinciding inhomogeneities


def test_memory_cap():
    with pytest.raises(ValueError):
        ChainSpec(ModelSpec(FAMILY_D, 3, ETA), BoundaryCase(FAMILY_D, "I"), 5)
