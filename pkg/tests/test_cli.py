import json
import subprocess
import sys

import pytest

from strongprod import io as sio
from strongprod.coloring import FractionalColoring
from strongprod.graph import complete
from strongprod.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main, run_experiment


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_oracle(tmp_path, capsys):
    g = tmp_path / "c5.json"
    assert main(["gen", "cycle", "--n", "5", "--out", str(g)]) == EXIT_OK
    code, out, _ = run(["oracle", "chromatic", str(g)], capsys)
    data = json.loads(out)
    assert code == EXIT_OK and data["value"] == 3 and "budget" in data
    code, out, _ = run(["oracle", "fractional", str(g)], capsys)
    assert json.loads(out)["lower"] == "5/2"
    code, out, _ = run(["oracle", "clustered", str(g), "--k", "1", "--c", "5"], capsys)
    assert json.loads(out)["status"] == "feasible"


def test_product_command(tmp_path, capsys):
    a, b, p = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "p.json"
    main(["gen", "path", "--n", "3", "--out", str(a)])
    main(["gen", "complete", "--n", "2", "--out", str(b)])
    assert main(["product", str(a), str(b), "--out", str(p)]) == EXIT_OK
    g = sio.read_document(p).graph
    assert g.n == 6 and g.num_edges == 2 * 2 + 3 * 1 + 2 * 2 * 1  # |E(G)||V(H)| + |V(G)||E(H)| + 2|E(G)||E(H)|


def test_color_verify_and_corruption(tmp_path, capsys):
    h = tmp_path / "h.json"
    assert main(["color", "hexgrid", "--n", "6", "--d", "3", "--out", str(h)]) == EXIT_OK
    code, out, _ = run(["verify", str(h)], capsys)
    report = json.loads(out)
    assert code == EXIT_OK and report["clustering"] <= 6 and report["bound"] == 6
    data = json.loads(h.read_text())
    for v in range(6):
        data["coloring"]["sets"][v] = [0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, err = run(["verify", str(bad)], capsys)
    assert code == EXIT_VIOLATION and "colour 0" in err
    assert json.loads(out)["witness"]["colour"] == 0


def test_verify_consistency_failure(tmp_path, capsys):
    doc = {
        "format": "strongprod",
        "version": 1,
        "graph": {"n": 2, "edges": [[0, 1]]},
        "coloring": {"p": 3, "q": 2, "sets": [[0, 1], [1, 2]], "order": [[0, 1], [1, 2]]},
    }
    f = tmp_path / "c.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(f)], capsys)
    assert code == EXIT_VIOLATION and json.loads(out)["consistency_witness"] == [0, 1, 1, 0]


def test_hexcheck(capsys):
    code, out, _ = run(["hexcheck", "--n", "3"], capsys)
    assert code == EXIT_OK and json.loads(out)["result"] == "holds"


def test_budget_exit(capsys):
    code, _, err = run(["hexcheck", "--n", "7"], capsys)
    assert code == EXIT_BUDGET and "budget" in err


def test_bad_input_exit(tmp_path, capsys):
    f = tmp_path / "x.json"
    f.write_text('{"format": "strongprod", "version": 1, "coloring": {"p": 1, "q": 2, "sets": []}}')
    code, _, err = run(["verify", str(f)], capsys)
    assert code == EXIT_INPUT and "coloring" in err


def test_percolate_and_export(tmp_path, capsys):
    g = tmp_path / "g.json"
    main(["gen", "grid", "--n", "6", "--d", "2", "--out", str(g)])
    csv_path = tmp_path / "p.csv"
    code, out, _ = run(["percolate", str(g), "--densities", "0.1,0.5", "--trials", "10", "--threshold", "5", "--csv", str(csv_path)], capsys)
    assert code == EXIT_OK and json.loads(out)["estimate"]["label"] == "ESTIMATE"
    assert csv_path.read_text().splitlines()[0] == "density,trial,max_cluster"
    code, out, _ = run(["export", str(g)], capsys)
    assert out.startswith("graph G {") and out.count(" -- ") == 110


def test_run_presets(tmp_path):
    status, doc = run_experiment({"pipeline": "hexgrid", "n": 6, "d": 3}, str(tmp_path / "a"))
    assert status == EXIT_OK
    assert doc["stages"][1]["report"]["clustering"] <= 6
    status, doc = run_experiment({"pipeline": "hexlemma", "n": 4})
    assert status == EXIT_OK and doc["stages"][0]["result"] == "holds"


def test_run_pipeline_is_byte_reproducible(tmp_path):
    cfg = {
        "seed": 11,
        "stages": [
            {"stage": "generate", "kind": "grid", "n": 10, "d": 2},
            {"stage": "percolate", "densities": [0.1, 0.3], "trials": 30, "threshold": 8},
            {"stage": "construct", "construction": "tree-product", "sizes": [5, 6, 4], "max_degree": 3},
            {"stage": "verify"},
            {"stage": "generate", "kind": "hex", "n": 3, "d": 2},
            {"stage": "oracle", "oracle": "clustered", "k": 2, "c": 2, "expect": "infeasible"},
        ],
    }
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    outs = []
    for name in ("r1", "r2"):
        assert main(["run", str(tmp_path / "cfg.json"), "--out", str(tmp_path / name)]) == EXIT_OK
        outs.append(((tmp_path / name / "results.json").read_bytes(), (tmp_path / name / "percolation_1.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_run_violation_from_loaded_document(tmp_path):
    doc = sio.Document(graph=complete(3), coloring=FractionalColoring.from_colors([0, 0, 1]), meta={"bound": 1})
    sio.write_document(tmp_path / "d.json", doc)
    status, out = run_experiment({"stages": [{"stage": "load", "path": str(tmp_path / "d.json")}, {"stage": "verify"}]})
    assert status == EXIT_VIOLATION
    assert out["stages"][1]["report"]["witness"] == {"colour": 0, "vertices": [0, 1]}


def test_run_unknown_stage(tmp_path, capsys):
    (tmp_path / "c.json").write_text(json.dumps({"stages": [{"stage": "dance"}]}))
    code, _, err = run(["run", str(tmp_path / "c.json")], capsys)
    assert code == EXIT_INPUT and "dance" in err
    (tmp_path / "d.json").write_text(json.dumps({"pipeline": "nope"}))
    assert main(["run", str(tmp_path / "d.json")]) == EXIT_INPUT


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "strongprod", "hexcheck", "--n", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and '"holds"' in res.stdout
