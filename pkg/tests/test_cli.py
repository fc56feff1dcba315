import json

import pytest

from degkit import (
    AdmissibleGraph,
    NUMERIC_GROUP,
    NodeRing,
    Piece,
    SplitMap,
    TruncatedAlgebra,
)
from degkit.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def contact_input(tmp_path, tails=False):
    alg = TruncatedAlgebra(("s",), order=4)
    ring = NodeRing(alg, order=4)
    phi1 = ring.z1()
    phi2 = ring.z2()
    data = {
        "algebra": alg.to_json(),
        "series_order": 4,
        "psi_t": alg.s.to_json(),
        "phi_w1": phi1.to_json(),
        "phi_w2": phi2.to_json(),
        "order": 1,
    }
    path = tmp_path / "contact.json"
    path.write_text(json.dumps(data))
    return path


def test_verify_atlas_passes(capsys):
    code, out = run_cli(capsys, "verify-atlas", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert all(v == "pass" for v in report.values())


def test_verify_atlas_deterministic(capsys):
    _, first = run_cli(capsys, "verify-atlas", "--n", "1")
    _, second = run_cli(capsys, "verify-atlas", "--n", "1")
    assert first == second


def test_resolution_and_splice(capsys):
    code, _ = run_cli(capsys, "resolution-check")
    assert code == 0
    code, out = run_cli(capsys, "splice-check", "--n", "2")
    assert code == 0
    assert set(json.loads(out)) == {"l=1", "l=2", "l=3"}


def test_contact_check_pure(tmp_path, capsys):
    path = contact_input(tmp_path)
    code, out = run_cli(capsys, "contact", "check", "--input", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["pure"] is True
    assert payload["beta"] == "(1)"
    assert payload["epsilon"] == "1"


def test_contact_check_failure_exit(tmp_path, capsys):
    path = contact_input(tmp_path)
    code, out = run_cli(
        capsys, "contact", "check", "--input", str(path), "--order", "2"
    )
    assert code == 1
    assert json.loads(out)["pure"] is False


def test_contact_ideal(tmp_path, capsys):
    path = contact_input(tmp_path)
    code, out = run_cli(capsys, "contact", "ideal", "--input", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["zero"] is True and payload["generators"] == []


def test_contact_universality(tmp_path, capsys):
    alg = TruncatedAlgebra(("s",), order=4)
    ring = NodeRing(alg, order=4)
    data = {
        "algebra": alg.to_json(),
        "series_order": 4,
        "psi_t": alg.s.to_json(),
        "phi_w1": ring.z1().to_json(),
        "phi_w2": ring.z2().to_json(),
        "order": 1,
        "homs": [
            {
                "target": alg.to_json(),
                "images": [alg.s.to_json()],
            }
        ],
    }
    path = tmp_path / "uni.json"
    path.write_text(json.dumps(data))
    code, out = run_cli(capsys, "contact", "universality", "--input", str(path))
    assert code == 0
    assert json.loads(out)["holds"] is True


def triple_input(tmp_path):
    g = AdmissibleGraph(
        NUMERIC_GROUP, (0,), ((1, 2),), (), ((0, 1), (0, 1))
    )
    data = {"first": g.to_json(), "second": g.to_json(), "first_legs": []}
    path = tmp_path / "triple.json"
    path.write_text(json.dumps(data))
    return path


def test_graphs_eq_group(tmp_path, capsys):
    path = triple_input(tmp_path)
    code, out = run_cli(capsys, "graphs", "eq-group", "--input", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload == {"order": 2, "elements": ["(1 2)", "id"]}


def test_graphs_glue_and_dot(tmp_path, capsys):
    path = triple_input(tmp_path)
    code, out = run_cli(capsys, "graphs", "glue", "--input", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["genus"] == 1 and payload["degree"] == 2
    code, out = run_cli(
        capsys, "graphs", "glue", "--input", str(path), "--format", "dot"
    )
    assert code == 0
    assert out.startswith("graph glued")


def test_graphs_validate(tmp_path, capsys):
    g = AdmissibleGraph(NUMERIC_GROUP, (0,), ((1, 1),), (), ((0, 1),))
    path = tmp_path / "graph.json"
    path.write_text(json.dumps(g.to_json()))
    code, out = run_cli(capsys, "graphs", "validate", "--input", str(path))
    assert code == 0
    assert json.loads(out)["contact_ok"] is True


def test_graphs_enumerate(capsys):
    code, out = run_cli(capsys, "graphs", "enumerate", "--max-r", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] > 0


def map_input(tmp_path):
    m = SplitMap(
        [[Piece(0, 2, 1)], [Piece(0, 1, 0)], [Piece(1, 1, 1)]],
        [((1, 0, 0),), ((1, 0, 0),)],
    )
    path = tmp_path / "map.json"
    path.write_text(json.dumps(m.to_json()))
    return path


def test_maps_subcommands(tmp_path, capsys):
    path = map_input(tmp_path)
    code, out = run_cli(capsys, "maps", "stability", "--input", str(path))
    assert code == 0 and json.loads(out)["stable"] is True
    code, out = run_cli(capsys, "maps", "norm", "--input", str(path))
    assert code == 0 and json.loads(out)["identity_holds"] is True
    code, out = run_cli(
        capsys, "maps", "decompose", "--input", str(path), "--l", "1"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["roundtrip"] is True
    assert payload["interface_weights"] == [1]


def test_malformed_input_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code = main(["maps", "norm", "--input", str(path)])
    assert code == 2
    code = main(["maps", "norm", "--input", str(tmp_path / "missing.json")])
    assert code == 2


def test_out_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main(["verify-atlas", "--n", "1", "--out", str(out_path)])
    assert code == 0
    assert json.loads(out_path.read_text())


def test_truncation_overrides(tmp_path, capsys):
    path = contact_input(tmp_path)
    code, out = run_cli(
        capsys, "contact", "check", "--input", str(path), "--trunc-series", "6"
    )
    assert code == 0
    assert json.loads(out)["pure"] is True
    # a base override that changes the coefficient dimension is rejected
    code = main(
        ["contact", "check", "--input", str(path), "--trunc-base", "5"]
    )
    assert code == 2


def test_failure_report_carries_witness(capsys):
    from degkit import gamma_atlas, verify_atlas

    at = gamma_atlas(2)
    bad = at.with_transition(1, at.transition(2))
    payload = verify_atlas(bad).to_json()
    assert any(
        isinstance(v, dict) and "fail" in v for v in payload.values()
    )


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DEGKIT_THREADS", "3")
    code, out = run_cli(capsys, "verify-atlas", "--n", "2")
    assert code == 0
    monkeypatch.setenv("DEGKIT_THREADS", "1")
    _, single = run_cli(capsys, "verify-atlas", "--n", "2")
    assert out == single
