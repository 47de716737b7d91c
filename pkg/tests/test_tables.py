from itertools import permutations, product

import pytest

from twistchain import tables
from twistchain.bethe import SolveConfig
from twistchain.chain import ChainSpec, hamiltonian, transfer
from twistchain.kmatrix import BoundaryCase
from twistchain.linalg import rel_residual
from twistchain.qsymm import (algebra_for_case, decompose_spectrum,
                              label_from_cardinalities, weyl_dim)
from twistchain.rmatrix import FAMILY_A, ModelSpec


def test_fixture_integrity():
    fixtures = tables.load_tables()
    assert len(fixtures) == 22
    for name, tbl in fixtures.items():
        d = 2 * tbl["n"] if tbl["family"] == "A" else 2 * tbl["n"] + 2
        total = sum(s["deg"] for row in tbl["rows"] for s in row["solutions"])
        assert total == d ** tbl["N"], name
        for row in tbl["rows"]:
            for s in row["solutions"]:
                assert [len(lvl) for lvl in s["roots"]] == list(row["m"])


def test_fixture_labels_match_cardinality_formula():
    fixtures = tables.load_tables()
    for name, tbl in fixtures.items():
        if not tbl["labeled"]:
            continue
        spec = tables.chain_for_table(tbl)
        for row in tbl["rows"]:
            predicted = label_from_cardinalities(spec.case, tbl["n"], tbl["N"], row["m"])
            assert list(predicted) == list(row["label"]), (name, row["m"])


def test_fixture_unstarred_degs_are_weyl_dimensions():
    fixtures = tables.load_tables()
    kind_for_case = {("A", "I"): "C", ("A", "II"): "D", ("D", "I"): "B"}
    for name, tbl in fixtures.items():
        kind = kind_for_case.get((tbl["family"], tbl["case"]))
        if kind is None or not tbl["labeled"]:
            continue
        if kind == "D" and tbl["n"] < 2:
            continue
        for row in tbl["rows"]:
            dim = weyl_dim(kind, tbl["n"], row["label"])
            for s in row["solutions"]:
                if s.get("starred"):
                    assert s["deg"] != dim
                else:
                    assert s["deg"] == dim, (name, row["m"])


def test_reproduce_small_table_end_to_end():
    rep = tables.reproduce("table3", SolveConfig(starts=500, rng_seed=13))
    assert rep.passed, rep.problems
    assert all(r["lambda_error"] <= 1e-6 for r in rep.row_results)


def test_reproduce_rejects_unknown_table():
    with pytest.raises(KeyError):
        tables.reproduce("table99")


# ---------------------------------------------------------------------------
# spectrum-level invariants tied to the tables


def _signed_perm_orbit_closed(weights, kind):
    """The weight multiset of a cluster is Weyl-invariant (checked exactly)."""
    from collections import Counter

    count = Counter(tuple(w) for w in weights)
    n = len(weights[0])
    for w, c in count.items():
        for perm in permutations(range(n)):
            base = tuple(w[p] for p in perm)
            for signs in product((1, -1), repeat=n):
                if kind == "D" and signs.count(-1) % 2 == 1:
                    continue  # only even sign flips for the D series
                img = tuple(s * x for s, x in zip(signs, base))
                if count[img] != c:
                    return False
    return True


def test_cluster_weights_closed_under_weyl_action():
    kind_for_case = {("A", "I"): "C", ("A", "II"): "D", ("D", "I"): "B"}
    for family, case_name, n, n_sites in (
            (FAMILY_A, "I", 1, 2), (FAMILY_A, "I", 2, 2),
            (FAMILY_A, "II", 2, 2), ("D", "I", 1, 2), ("D", "I", 2, 2)):
        spec = ChainSpec(ModelSpec(family, n, -0.1j), BoundaryCase(family, case_name), n_sites)
        dec = decompose_spectrum(spec)
        kind = kind_for_case[(family, case_name)]
        for cluster in dec.clusters:
            # merged conjugate pairs of the D series are jointly closed under
            # the full signed-permutation group as well
            use_kind = kind if not (kind == "D" and cluster["deg"] != cluster["weyl"]) else "B"
            assert _signed_perm_orbit_closed(cluster["weights"], use_kind), cluster


def test_hamiltonian_and_transfer_commute():
    spec = ChainSpec(ModelSpec(FAMILY_A, 2, -0.1j), BoundaryCase(FAMILY_A, "I"), 2)
    h = hamiltonian(spec).matrix
    t = transfer(spec, 0.41 + 0.23j)
    assert rel_residual(h @ t, t @ h) < 1e-12
