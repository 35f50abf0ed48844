import csv
import json

import numpy as np
import pytest

from projclust import io
from projclust.cli import build_params, main
from projclust.evaluation import accuracy
from projclust.model import Family, MixtureParams, block_centers, sample_mixture

pytestmark = pytest.mark.filterwarnings("ignore::projclust.model.SigmaFloorWarning")


def read(path):
    return path.read_bytes()


def generate(tmp_path, *extra, name="a.txt"):
    out = tmp_path / name
    code = main(["generate", "--out", str(out), *extra])
    assert code == 0
    return out


def test_matrix_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    for A in ((rng.random((4, 5)) < 0.5).astype(float), rng.standard_normal((3, 6)) * 1e-3):
        io.write_matrix(tmp_path / "m.txt", A)
        assert np.array_equal(io.read_matrix(tmp_path / "m.txt"), A)


def test_matrix_header_checked(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n1 0 1\n")
    with pytest.raises(ValueError):
        io.read_matrix(path)


def test_params_round_trip(tmp_path):
    p = MixtureParams(0.4 * np.random.default_rng(1).random((3, 5)), [0.2, 0.3, 0.5], 0.4,
                      Family.GAUSSIAN)
    io.write_params(tmp_path / "p.txt", p)
    q = io.read_params(tmp_path / "p.txt")
    assert np.array_equal(p.centers, q.centers) and np.array_equal(p.weights, q.weights)
    assert q.sigma_sq == p.sigma_sq and q.family is Family.GAUSSIAN


def test_labels_round_trip(tmp_path):
    io.write_labels(tmp_path / "l.txt", [0, 2, 1])
    assert io.read_labels(tmp_path / "l.txt").tolist() == [0, 2, 1]


def test_generate_zero_center(tmp_path):
    out = generate(tmp_path, "--n", "5", "--m", "4", "--k", "1", "--level", "0")
    assert out.read_text() == "5 4\n" + "0 0 0 0\n" * 5
    assert io.read_labels(str(out) + ".labels").tolist() == [0] * 4


def test_generate_round_trip_and_determinism(tmp_path):
    args = ["--n", "30", "--m", "20", "--k", "2", "--seed", "5"]
    a = generate(tmp_path, *args, name="a.txt")
    b = generate(tmp_path, *args, name="b.txt")
    assert read(a) == read(b)
    params = build_params(30, 2, 0.5)
    data = sample_mixture(params, 20, 5)
    assert np.array_equal(io.read_matrix(a), data.values)
    assert np.array_equal(io.read_labels(str(a) + ".labels"), data.labels)


def test_generate_from_params_file(tmp_path):
    p = MixtureParams(block_centers(2, 8, 0.3), [0.5, 0.5], 0.3, Family.GAUSSIAN)
    io.write_params(tmp_path / "p.txt", p)
    out = generate(tmp_path, "--in", str(tmp_path / "p.txt"), "--m", "6", "--seed", "2")
    assert np.array_equal(io.read_matrix(out), sample_mixture(p, 6, 2).values)


def test_cluster_noiseless(tmp_path):
    out = generate(tmp_path, "--n", "30", "--m", "24", "--k", "3", "--level", "1",
                   "--sigma-sq", "1")
    pred = tmp_path / "pred.txt"
    code = main(["cluster", "--in", str(out), "--k", "3", "--out", str(pred),
                 "--labels", str(out) + ".labels", "--params", str(out) + ".params"])
    assert code == 0
    truth = io.read_labels(str(out) + ".labels")
    assert accuracy(io.read_labels(pred), truth, 3).accuracy == 1.0
    report = json.loads((tmp_path / "pred.txt.json").read_text())
    assert report["accuracy"] == 1.0
    assert set(report) >= {"config", "reports", "accuracy", "timings_ms", "separation"}
    assert report["config"]["seed"] == 0
    assert report["timings_ms"] == {}


def test_cluster_single(tmp_path):
    out = generate(tmp_path, "--n", "10", "--m", "6", "--k", "1")
    pred = tmp_path / "pred.txt"
    assert main(["cluster", "--in", str(out), "--k", "1", "--out", str(pred)]) == 0
    assert io.read_labels(pred).tolist() == [0] * 6


def test_cluster_separated_accuracy(tmp_path):
    out = generate(tmp_path, "--n", "300", "--m", "300", "--k", "3", "--seed", "1")
    pred = tmp_path / "pred.txt"
    main(["cluster", "--in", str(out), "--out", str(pred), "--labels", str(out) + ".labels",
          "--params", str(out) + ".params", "--seed", "1", "--timings"])
    report = json.loads((tmp_path / "pred.txt.json").read_text())
    assert report["accuracy"] == 1.0
    assert set(report["timings_ms"]) == {"svd", "kmeans", "project"}


def test_verify_noiseless(tmp_path):
    out = generate(tmp_path, "--n", "12", "--m", "12", "--k", "2", "--level", "1",
                   "--sigma-sq", "1")
    rep_path = tmp_path / "v.json"
    assert main(["verify", "--in", str(out), "--labels", str(out) + ".labels",
                 "--params", str(out) + ".params", "--out", str(rep_path)]) == 0
    rep = json.loads(rep_path.read_text())
    for r in rep["runs"][0]["reports"]:
        assert r["measured"] == pytest.approx(0.0, abs=1e-20)
        assert r["satisfied"]
    assert rep["passed"]


def test_verify_sweep_frequencies(tmp_path):
    rep_path = tmp_path / "v.json"
    assert main(["verify", "--n", "60", "--m", "60", "--k", "2", "--seeds", "4",
                 "--out", str(rep_path)]) == 0
    rep = json.loads(rep_path.read_text())
    assert [r["seed"] for r in rep["runs"]] == [0, 1, 2, 3]
    assert rep["summary"]["frobenius_rank_k"]["frequency"] == 1.0
    assert set(rep["summary"]) == {"spectral_norm", "frobenius_rank_k", "deviation",
                                   "center_error", "cross_term"}


def test_verify_requires_truth(tmp_path):
    out = generate(tmp_path, "--n", "10", "--m", "6", "--k", "2")
    assert main(["verify", "--in", str(out)]) == 1


def test_bench_empty_grid(tmp_path, capsys):
    grid = tmp_path / "g.json"
    grid.write_text("[]")
    assert main(["bench", "--grid", str(grid)]) == 0
    out = capsys.readouterr().out
    assert out.strip().split(",")[0] == "n" and len(out.strip().splitlines()) == 1


def test_bench_cardinality(tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps([
        {"n": 40, "m": 40, "k": 2},
        {"n": 30, "m": 40, "k": 2, "family": "gaussian", "sigma_sq": 0.2},
    ]))
    out = tmp_path / "b.csv"
    assert main(["bench", "--grid", str(grid), "--seeds", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert all(row["svd_ms"] == "" for row in rows)
    assert main(["bench", "--grid", str(grid), "--out", str(out), "--format", "json"]) == 0
    assert len(json.loads(out.read_text())["rows"]) == 2


def test_exit_codes(tmp_path):
    assert main(["generate", "--out", str(tmp_path / "x"), "--m", "3"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1
    assert main(["cluster", "--in", str(tmp_path / "missing.txt"), "--k", "2",
                 "--out", str(tmp_path / "p")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage\n")
    assert main(["cluster", "--in", str(bad), "--k", "2", "--out", str(tmp_path / "p")]) == 2
    # three components cannot all be populated from two samples
    assert main(["generate", "--out", str(tmp_path / "y"), "--n", "6", "--m", "2",
                 "--k", "3"]) == 1
