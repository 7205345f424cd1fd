import json

import numpy as np
import pytest

from spectral_lap import io
from spectral_lap.cli import main

MOONS = ["--dataset", "two_moons", "--noise", "0.05", "--n", "200"]


def run(tmp_path, *argv):
    return main([str(a) for a in argv])


def test_gen_writes_csv_labels_plot(tmp_path):
    out = tmp_path / "m.csv"
    rc = run(tmp_path, "gen", *MOONS, "--out", out, "--labels-out", tmp_path / "l.csv",
             "--plot", tmp_path / "m.svg")
    assert rc == 0
    X = io.read_data_matrix(out)
    assert X.shape == (2, 200)
    assert (tmp_path / "m.svg").read_text().lstrip().startswith("<?xml")
    manifest = json.loads((tmp_path / "m.csv.manifest.json").read_text())
    assert manifest["seeds"] == {"data_seed": 0}
    assert manifest["library_version"]
    assert set(manifest["outputs"]) == {str(out), str(tmp_path / "l.csv"), str(tmp_path / "m.svg")}


def test_embed_le_header_and_shape(tmp_path):
    out = tmp_path / "e.csv"
    rc = run(tmp_path, "embed", *MOONS, "--method", "le", "--approach", "2", "--knn", "10",
             "--dims", "2", "--out", out)
    assert rc == 0
    header, rows = io.read_csv(out)
    assert header == ["y1", "y2"] and rows.shape == (200, 2)


def test_cluster_blobs_accuracy(tmp_path, capsys):
    out = tmp_path / "c.csv"
    rc = run(tmp_path, "cluster", "--dataset", "blobs", "--n", "100", "--noise", "1", "--full",
             "--sigma2", "25", "--c", "2", "--out", out)
    assert rc == 0
    assert "accuracy 1.0" in capsys.readouterr().out
    assert io.read_labels(out).shape == (100,)


def test_malformed_csv_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n3,x\n")
    assert run(tmp_path, "embed", "--input", bad, "--out", tmp_path / "z.csv") == 1
    assert "line 3" in capsys.readouterr().err


def test_usage_error_exit_1(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["embed", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_numerical_error_exit_2(tmp_path, capsys):
    rc = run(tmp_path, "embed", "--dataset", "blobs", "--knn", "3", "--out", tmp_path / "z.csv")
    assert rc == 2
    assert "DisconnectedGraph" in capsys.readouterr().err


def test_bad_thread_env_exit_1(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECTRAL_LAP_THREADS", "zero")
    assert run(tmp_path, "gen", "--dataset", "blobs", "--out", tmp_path / "q.csv") == 1
    monkeypatch.setenv("SPECTRAL_LAP_THREADS", "1")
    assert run(tmp_path, "gen", "--dataset", "blobs", "--out", tmp_path / "q.csv") == 0


def test_oos_with_saved_models(tmp_path):
    data = tmp_path / "m.csv"
    run(tmp_path, "gen", *MOONS, "--out", data)
    assert run(tmp_path, "embed", "--input", data, "--out", tmp_path / "e.csv",
               "--save-model", tmp_path / "le.json") == 0
    assert run(tmp_path, "oos", "--input", data, "--model", tmp_path / "le.json",
               "--out", tmp_path / "o.csv") == 0
    assert io.read_csv(tmp_path / "o.csv")[1].shape == (200, 2)
    assert run(tmp_path, "embed", "--input", data, "--method", "lpp", "--out", tmp_path / "l.csv",
               "--save-model", tmp_path / "lpp.json") == 0
    assert run(tmp_path, "oos", "--input", data, "--model", tmp_path / "lpp.json",
               "--out", tmp_path / "lo.csv") == 0
    assert (tmp_path / "l.csv").read_bytes() == (tmp_path / "lo.csv").read_bytes()
    assert run(tmp_path, "embed", "--input", data, "--method", "kernel_lpp",
               "--out", tmp_path / "k.csv", "--save-model", tmp_path / "k.json") == 0
    assert run(tmp_path, "oos", "--input", data, "--model", tmp_path / "k.json",
               "--out", tmp_path / "ko.csv") == 1


@pytest.mark.parametrize("method", ["laplacian_eigenmap_1", "laplacian_eigenmap_2", "lpp",
                                    "kernel_lpp", "pca", "kernel_pca", "fda", "kernel_fda",
                                    "mds_isomap"])
def test_ge_methods(tmp_path, method):
    dims = "1" if "fda" in method else "2"
    rc = run(tmp_path, "ge", *MOONS, "--method", method, "--dims", dims, "--out", tmp_path / "g.csv")
    assert rc == 0
    header, rows = io.read_csv(tmp_path / "g.csv")
    assert rows.shape == (200, int(dims))


def test_ge_le_matches_embed(tmp_path):
    run(tmp_path, "embed", *MOONS, "--out", tmp_path / "e.csv")
    run(tmp_path, "ge", *MOONS, "--method", "laplacian_eigenmap_2", "--out", tmp_path / "g.csv")
    assert (tmp_path / "e.csv").read_bytes() == (tmp_path / "g.csv").read_bytes()


def test_ge_lle_and_distances_inputs(tmp_path):
    n = 12
    R = np.roll(np.eye(n), 1, axis=1) * 0.5 + np.roll(np.eye(n), -1, axis=1) * 0.5
    io.write_csv(tmp_path / "r.csv", [f"w{i + 1}" for i in range(n)], R)
    x = np.vstack([np.cos(np.arange(n)), np.sin(np.arange(n))])
    io.write_data_matrix(tmp_path / "x.csv", x)
    assert run(tmp_path, "ge", "--input", tmp_path / "x.csv", "--method", "lle",
               "--recon-weights", tmp_path / "r.csv", "--out", tmp_path / "lle.csv") == 0
    assert run(tmp_path, "ge", "--input", tmp_path / "x.csv", "--method", "lle",
               "--out", tmp_path / "lle.csv") == 1
    D = np.sqrt(np.sum((x[:, :, None] - x[:, None, :]) ** 2, axis=0))
    io.write_csv(tmp_path / "d.csv", [f"d{i + 1}" for i in range(n)], D)
    assert run(tmp_path, "ge", "--input", tmp_path / "x.csv", "--method", "mds_isomap",
               "--distances", tmp_path / "d.csv", "--out", tmp_path / "mds.csv") == 0
    assert run(tmp_path, "ge", "--input", tmp_path / "x.csv", "--method", "fda",
               "--out", tmp_path / "f.csv") == 1


def test_diffuse_outputs(tmp_path):
    rc = run(tmp_path, "diffuse", *MOONS, "--alpha", "0.5", "--time", "3", "--dims", "3",
             "--distances", tmp_path / "dd.csv", "--out", tmp_path / "d.csv",
             "--plot", tmp_path / "d.svg")
    assert rc == 0
    header, Y = io.read_csv(tmp_path / "d.csv")
    assert header == ["y1", "y2", "y3"] and Y.shape == (200, 3)
    _, D = io.read_csv(tmp_path / "dd.csv")
    assert D.shape == (200, 200) and np.all(np.diag(D) == 0)


def test_replay_bit_exact(tmp_path, capsys):
    run(tmp_path, "gen", *MOONS, "--out", tmp_path / "m.csv")
    assert run(tmp_path, "diffuse", "--input", tmp_path / "m.csv", "--time", "2",
               "--out", tmp_path / "d.csv", "--plot", tmp_path / "d.svg",
               "--distances", tmp_path / "dd.csv") == 0
    rc = main(["replay", str(tmp_path / "d.csv.manifest.json"),
               "--output-dir", str(tmp_path / "again")])
    assert rc == 0
    assert "bit-exactly" in capsys.readouterr().out
    for name in ("d.csv", "d.svg", "dd.csv"):
        assert (tmp_path / name).read_bytes() == (tmp_path / "again" / name).read_bytes()


def test_replay_detects_changed_input(tmp_path):
    run(tmp_path, "gen", *MOONS, "--out", tmp_path / "m.csv")
    run(tmp_path, "embed", "--input", tmp_path / "m.csv", "--out", tmp_path / "e.csv")
    with (tmp_path / "m.csv").open("a") as fh:
        fh.write("0.0,0.0\n")
    assert main(["replay", str(tmp_path / "e.csv.manifest.json"),
                 "--output-dir", str(tmp_path / "r")]) == 1


def test_thread_env_is_capped_at_core_count(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECTRAL_LAP_THREADS", "4096")
    assert run(tmp_path, "embed", *MOONS, "--out", tmp_path / "e.csv") == 0
