import subprocess
import sys

import numpy as np
import pytest

from schoenberg import datasets as ds
from schoenberg.cli import main


def run(argv, capsys):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def circles(tmp_path, capsys):
    path = tmp_path / "circles.csv"
    assert run(["generate", "--kind", "circles", "--seed", 0, "--out", path], capsys)[0] == 0
    return path


def write_matrix(path, M):
    np.savetxt(path, M, delimiter=",", fmt="%.17g")
    return path


def test_generate_stdout_matches_file(tmp_path, capsys):
    code, out, _ = run(["generate", "--kind", "rod", "--n", 20, "--seed", 3], capsys)
    assert code == 0
    path = tmp_path / "rod.csv"
    run(["--seed", 3, "generate", "--kind", "rod", "--n", 20, "--out", path], capsys)
    assert path.read_text() == out
    c = ds.load_csv(path)
    np.testing.assert_array_equal(c.coordinates, ds.generate_rod(20, 3).coordinates)


def test_generate_byte_identical(tmp_path, capsys):
    for kind in ("grid", "rod", "circles"):
        a, b = tmp_path / f"{kind}_a.csv", tmp_path / f"{kind}_b.csv"
        for p in (a, b):
            assert run(["generate", "--kind", kind, "--seed", 7, "--n", 50, "--out", p], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()


def test_embed_outputs(tmp_path, capsys, circles):
    out = tmp_path / "emb.csv"
    code, text, _ = run(["embed", circles, "--transform", "gaussian:a=0.65", "--dims", 3, "--out", out], capsys)
    assert code == 0
    assert "transform: gaussian:a=0.65" in text
    lines = out.read_text().splitlines()
    assert lines[0] == "dim1,dim2,dim3" and len(lines) == 151
    scree = (tmp_path / "emb_scree.csv").read_text().splitlines()
    assert scree[0] == "dim,eigenvalue,proportion,cumulative"
    assert float(scree[-1].split(",")[-1]) == pytest.approx(1.0)


def test_embed_origin_and_weights(tmp_path, capsys, circles):
    w = tmp_path / "w.txt"
    w.write_text("\n".join(["1"] * 150))
    code, text, _ = run(["embed", circles, "--origin", "point-mass:1", "--weights", w], capsys)
    assert code == 0 and "dimensions: 2" in text
    code, _, err = run(["embed", circles, "--origin", "point-mass:151"], capsys)
    assert code == 2 and err.startswith("error[usage]")


def test_embed_not_euclidean_exit_3(tmp_path, capsys):
    x = np.arange(5.0)
    path = write_matrix(tmp_path / "d4.csv", (x[:, None] - x[None, :]) ** 4)
    code, _, err = run(["embed", "--matrix", path], capsys)
    assert code == 3
    assert err.startswith("error[not-euclidean]") and err.count("\n") == 1
    code, _, err = run(["check", "--matrix", path], capsys)
    assert code == 0


def test_validate_flag_rejects_on_ingestion(tmp_path, capsys):
    x = np.arange(5.0)
    path = write_matrix(tmp_path / "d4.csv", (x[:, None] - x[None, :]) ** 4)
    (tmp_path / "lab.txt").write_text("1\n1\n2\n2\n2\n")
    code, _, err = run(["discriminate", "--matrix", "--validate", path, "--labels", tmp_path / "lab.txt"], capsys)
    assert code == 3 and "not-euclidean" in err
    code, out, _ = run(["discriminate", "--matrix", path, "--labels", tmp_path / "lab.txt"], capsys)
    assert code == 0 and "accuracy:" in out


def test_discriminate(tmp_path, capsys, circles):
    out = tmp_path / "assign.csv"
    code, text, _ = run(["discriminate", circles, "--transform", "gaussian:a=0.65", "--out", out], capsys)
    assert code == 0
    assert "accuracy: 1.000000 (150/150)" in text
    lines = out.read_text().splitlines()
    assert lines[0] == "index,label,assigned" and lines[1] == "1,1,1"


def test_discriminate_without_labels(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    run(["generate", "--kind", "grid", "--out", path], capsys)
    code, _, err = run(["discriminate", path], capsys)
    assert code == 2 and err.startswith("error[usage]") and "labels" in err


def test_sweep(tmp_path, capsys, circles):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(["sweep", circles, "--family", "power", "--grid", "0.5:2:0.5", "--out", out], capsys)
    assert code == 0
    rows = [r.split(",") for r in out.read_text().splitlines()]
    assert rows[0] == ["parameter", "accuracy", "invalid_transform"]
    assert [r[0] for r in rows[1:]] == ["0.5", "1.0", "1.5", "2.0"]
    assert [r[2] for r in rows[1:]] == ["false", "false", "true", "true"]
    code, text, _ = run(["sweep", circles, "--family", "gaussian", "--grid", "0.65,1"], capsys)
    assert text.startswith("parameter,accuracy,invalid_transform\n0.65,1.0,false\n")


def test_sweep_bad_grid(capsys, circles):
    code, _, err = run(["sweep", circles, "--family", "power", "--grid", "2:1:0.5"], capsys)
    assert code == 2 and err.startswith("error[usage]")
    code, _, err = run(["sweep", circles, "--family", "power", "--grid", "0,1"], capsys)
    assert code == 2 and err.startswith("error[invalid-input]")


def test_check(tmp_path, capsys):
    X = np.random.default_rng(0).standard_normal((8, 2))
    D = ds.squared_distances(X)
    d_path = write_matrix(tmp_path / "d.csv", D)
    code, out, _ = run(["check", "--matrix", d_path, "--divisible"], capsys)
    assert code == 0
    assert "kind: distance" in out and "c.n.d.: yes" in out
    assert "infinitely divisible (sampled): yes" in out
    code, out, _ = run(["check", "--matrix", write_matrix(tmp_path / "d2.csv", D**2)], capsys)
    assert "c.n.d.: no" in out
    K = np.exp(-D)
    code, out, _ = run(["check", "--matrix", write_matrix(tmp_path / "k.csv", K), "--divisible"], capsys)
    assert "kind: kernel" in out and "p.d.: yes" in out and "(sampled): yes" in out


def test_parse_errors_exit_2(tmp_path, capsys, circles):
    code, _, err = run(["embed", circles, "--transform", "gaussan:a=1"], capsys)
    assert code == 2 and err.startswith("error[usage]") and "gaussan" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("x1,x2\n1,2\n3\n")
    code, _, err = run(["embed", bad], capsys)
    assert code == 2 and err.startswith("error[parse]: line 3:")
    code, _, err = run(["embed", tmp_path / "missing.csv"], capsys)
    assert code == 2 and "no such file" in err
    code, _, err = run(["frobnicate"], capsys)
    assert code == 2 and err.count("\n") == 1


def test_unwritable_output_exit_2(tmp_path, capsys):
    code, _, err = run(["generate", "--kind", "grid", "--out", tmp_path / "nope" / "x.csv"], capsys)
    assert code == 2 and err.startswith("error[usage]: cannot write")


def test_mahalanobis_on_matrix_is_usage_error(tmp_path, capsys):
    path = write_matrix(tmp_path / "d.csv", np.zeros((2, 2)))
    code, _, err = run(["embed", "--matrix", "--mahalanobis", path], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "schoenberg", "generate", "--kind", "grid", "--side", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "x1,x2\n0.0,0.0\n0.0,1.0\n1.0,0.0\n1.0,1.0\n"
