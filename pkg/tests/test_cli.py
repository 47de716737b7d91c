import json

import numpy as np
import pytest

from twistchain import jsonio
from twistchain.bethe import BetheRootSet, SolveConfig, completeness
from twistchain.chain import ChainSpec
from twistchain.cli import main
from twistchain.kmatrix import BoundaryCase
from twistchain.rmatrix import ModelSpec


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_verify_r_passes(capsys):
    code, out = _run(capsys, ["verify", "r", "--family", "a-twisted", "--n", "2",
                              "--eta", "0,-0.1", "--samples", "5", "--seed", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["all_passed"] is True
    assert doc["schema_version"] == 1


def test_verify_k_all_tags(capsys):
    code, out = _run(capsys, ["verify", "k", "--family", "d-twisted", "--case", "block-pair",
                              "--n", "1", "--samples", "4", "--seed", "3"])
    assert code == 0


def test_usage_error_exit_code(capsys):
    assert main(["verify", "r", "--family", "nonsense"]) == 2


def test_manifest_rejects_unknown_keys(tmp_path, capsys):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"family": "a-twisted", "n": 1, "frobnicate": 1}))
    assert main(["verify", "r", "--manifest", str(bad)]) == 2


def test_manifest_drives_run(tmp_path, capsys):
    man = tmp_path / "m.json"
    man.write_text(json.dumps({"family": "d-twisted", "n": 1, "eta": [0.0, -0.1],
                               "samples": 4, "seed": 1}))
    code, out = _run(capsys, ["verify", "r", "--manifest", str(man)])
    assert code == 0
    assert json.loads(out)["payload"]["all_passed"]


def test_bethe_solve_output(capsys):
    code, out = _run(capsys, ["bethe", "solve", "--family", "a-twisted", "--case", "I",
                              "--n", "1", "--sites", "2", "--m", "1",
                              "--starts", "200", "--seed", "5"])
    assert code == 0
    doc = json.loads(out)
    levels = doc["payload"]["solutions"][0]["levels"]
    assert levels[0][0] == pytest.approx([0.205557, 0.0], abs=1e-5)


def test_bethe_check_and_complete(capsys):
    roots = json.dumps({"levels": [[[0.205557, 0.0]]]})
    code, _ = _run(capsys, ["bethe", "check", "--family", "a-twisted", "--case", "I",
                            "--n", "1", "--sites", "2", "--roots", roots, "--tol", "1e-4"])
    assert code == 0
    code, out = _run(capsys, ["bethe", "complete", "--family", "d-twisted", "--case", "I",
                              "--n", "1", "--sites", "2", "--mcap", "2",
                              "--starts", "300", "--seed", "5"])
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["unmatched_eigenvalues"] == []


def test_decompose_command(capsys):
    code, out = _run(capsys, ["decompose", "--family", "a-twisted", "--case", "I",
                              "--n", "2", "--sites", "2"])
    assert code == 0
    blocks = json.loads(out)["payload"]["blocks"]
    assert sorted(b["deg"] for b in blocks) == [1, 5, 10]


def test_reproduce_command(capsys):
    code, out = _run(capsys, ["reproduce", "table1", "--starts", "300", "--seed", "3"])
    assert code == 0
    assert json.loads(out)["payload"]["passed"] is True


def test_determinism_byte_identical_modulo_walltime(capsys):
    argv = ["bethe", "complete", "--family", "a-twisted", "--case", "II", "--n", "1",
            "--sites", "2", "--mcap", "1", "--starts", "200", "--seed", "11"]
    _, out1 = _run(capsys, argv)
    _, out2 = _run(capsys, argv)
    doc1, doc2 = json.loads(out1), json.loads(out2)
    doc1.pop("wall_time_seconds")
    doc2.pop("wall_time_seconds")
    assert jsonio.encode(doc1) == jsonio.encode(doc2)


# ---------------------------------------------------------------------------
# encoding round trips


def test_complex_encoding_convention():
    assert jsonio.cnum(-0.1j) == [0.0, -0.1]


def test_rootset_encoding_table13_pair():
    rs = BetheRootSet(((0.100167, 0.100167 + 3.14159j),))
    payload = jsonio.rootset_payload(rs)
    assert payload == {"levels": [[[0.100167, 0.0], [0.100167, 3.14159]]]}
    assert jsonio.rootset_from_payload(payload) == rs


def test_match_report_round_trip():
    spec = ChainSpec(ModelSpec("A", 1, -0.1j), BoundaryCase("A", "I"), 2)
    report = completeness(spec, (1,), SolveConfig(starts=200, rng_seed=2))
    payload = jsonio.match_report_payload(report)
    back = jsonio.match_report_from_payload(json.loads(jsonio.encode(
        jsonio.result_document({}, payload, 0.0)).decode())["payload"])
    assert len(back.pairs) == len(report.pairs)
    for p1, p2 in zip(back.pairs, report.pairs):
        assert p1.roots == p2.roots
        assert p1.degeneracy == p2.degeneracy
        assert np.isclose(p1.eigenvalue, p2.eigenvalue)
    assert back.cardinality_caps == report.cardinality_caps


def test_decode_error_reports_position():
    with pytest.raises(ValueError, match="line"):
        jsonio.decode(b'{"a": [1, 2,]}')
