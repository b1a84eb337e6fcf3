import numpy as np
import pytest

from kdr import CsvFormatError, GenSpec, generate, projection_distance
from kdr.cli import main, read_csv, write_matrix_csv


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _benchmark_csv(tmp_path, sigma=0.1, seed=0, n=80, binary=False):
    data = generate(GenSpec(regression="A", noise_or_a=sigma, seed=seed, n=n))
    y = data.Y[:, 0]
    if binary:
        y = (y > np.median(y)).astype(float)
    rows = np.column_stack([data.X, y])
    path = tmp_path / "data.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x1,x2,x3,x4,resp\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    return str(path), data.true_B


# ---------------------------------------------------------------------------
# read_csv


def test_read_headerless_with_index_response(tmp_path):
    path = _write(tmp_path / "t.csv", "1,2\n3,4\n")
    data = read_csv(path, "1")
    np.testing.assert_array_equal(data.X, [[1.0], [3.0]])
    np.testing.assert_array_equal(data.Y, [[2.0], [4.0]])


def test_read_header_with_named_response(tmp_path):
    path = _write(tmp_path / "t.csv", "a,b\n1,2\n")
    data = read_csv(path, "b")
    np.testing.assert_array_equal(data.X, [[1.0]])
    np.testing.assert_array_equal(data.Y, [[2.0]])
    assert data.column_names == ["a"]
    assert data.response_name == "b"


def test_read_ragged_row_names_line(tmp_path):
    path = _write(tmp_path / "t.csv", "1,2\n3\n")
    with pytest.raises(CsvFormatError, match="line 2"):
        read_csv(path, "0")


def test_read_non_numeric_cell_names_line_and_column(tmp_path):
    path = _write(tmp_path / "t.csv", "a,b\n1,2\n1,oops\n")
    with pytest.raises(CsvFormatError, match="line 3.*b"):
        read_csv(path, "b")


def test_read_missing_response_column(tmp_path):
    path = _write(tmp_path / "t.csv", "a,b\n1,2\n")
    with pytest.raises(CsvFormatError, match="not found"):
        read_csv(path, "zzz")
    with pytest.raises(CsvFormatError, match="out of range"):
        read_csv(path, "7")


def test_roundtrip_preserves_full_precision(tmp_path):
    rng = np.random.default_rng(0)
    M = rng.standard_normal((20, 3)) * np.pi
    path = tmp_path / "round.csv"
    write_matrix_csv(path, ["u", "v", "w"], M)
    back = read_csv(str(path), "w")
    np.testing.assert_array_equal(back.X, M[:, :2])
    np.testing.assert_array_equal(back.Y, M[:, 2:3])


# ---------------------------------------------------------------------------
# fit command


def test_fit_writes_outputs_and_recovers_subspace(tmp_path):
    path, true_B = _benchmark_csv(tmp_path, n=100)
    out = tmp_path / "out"
    code = main(["fit", "--data", path, "--response", "resp", "--dim", "2",
                 "--seed", "0", "--out", str(out)])
    assert code == 0
    for name in ("basis.csv", "projected.csv", "manifest.txt", "projection.png"):
        assert (out / name).exists()
    B = read_csv(str(out / "basis.csv"), "0")  # reuse parser: column split is irrelevant
    basis = np.column_stack([B.Y, B.X])
    assert projection_distance(true_B, basis) <= 0.35
    manifest = (out / "manifest.txt").read_text()
    assert "objective_trace=" in manifest and "seed=0" in manifest


def test_fit_exit_code_for_bad_dim(tmp_path):
    path, _ = _benchmark_csv(tmp_path)
    assert main(["fit", "--data", path, "--response", "resp", "--dim", "0",
                 "--out", str(tmp_path / "o1"), "--no-figures"]) == 4
    assert main(["fit", "--data", path, "--response", "resp", "--dim", "4",
                 "--out", str(tmp_path / "o2"), "--no-figures"]) == 4


def test_fit_exit_code_for_constant_column(tmp_path):
    path = _write(tmp_path / "t.csv", "a,b,c\n1,2,1\n1,3,2\n1,4,3\n")
    assert main(["fit", "--data", path, "--response", "c", "--dim", "1",
                 "--out", str(tmp_path / "o"), "--no-figures"]) == 3


def test_fit_exit_code_for_malformed_csv(tmp_path):
    path = _write(tmp_path / "t.csv", "a,b\n1\n")
    assert main(["fit", "--data", path, "--response", "b", "--dim", "1",
                 "--out", str(tmp_path / "o"), "--no-figures"]) == 2


def test_fit_accepts_binary_response(tmp_path):
    path, _ = _benchmark_csv(tmp_path, binary=True)
    out = tmp_path / "out"
    code = main(["fit", "--data", path, "--response", "resp", "--dim", "2",
                 "--iters", "30", "--out", str(out), "--no-figures"])
    assert code == 0
    assert (out / "basis.csv").exists()


# ---------------------------------------------------------------------------
# bench command


def test_bench_row_count_and_layout(tmp_path):
    out = tmp_path / "bench"
    code = main(["bench", "--regression", "A", "--methods", "sir,phd", "--reps", "2",
                 "--iters", "5", "--out", str(out), "--no-figures"])
    assert code == 0
    lines = (out / "results.csv").read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    rows = [l for l in lines if not l.startswith("#")]
    assert rows[0] == "method,regression,parameter,reps,mean,sd,failures,wall_time_s"
    assert len(rows) == 1 + 2 * 3  # header + 2 methods x 3 noise levels
    assert any("GCR" in c for c in comments)


def test_bench_unknown_method_exits_2(tmp_path):
    assert main(["bench", "--regression", "A", "--methods", "kdr,mave",
                 "--reps", "2", "--out", str(tmp_path / "b"), "--no-figures"]) == 2


def test_bench_single_rep_emits_empty_sd(tmp_path):
    out = tmp_path / "bench1"
    code = main(["bench", "--regression", "A", "--methods", "sir", "--reps", "1",
                 "--params", "0.1", "--out", str(out), "--no-figures"])
    assert code == 0
    rows = [l for l in (out / "results.csv").read_text().splitlines() if not l.startswith("#")]
    fields = rows[1].split(",")
    assert fields[5] == ""  # sd column empty with one replication


def test_bench_same_seed_is_byte_identical(tmp_path):
    args = ["bench", "--regression", "A", "--methods", "kdr,sir", "--reps", "2",
            "--params", "0.1", "--iters", "10", "--seed", "7", "--no-figures"]
    out1, out2 = tmp_path / "b1", tmp_path / "b2"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    assert (out1 / "manifest.txt").read_bytes() == (out2 / "manifest.txt").read_bytes()


def test_bench_renders_figure(tmp_path):
    out = tmp_path / "benchfig"
    code = main(["bench", "--regression", "A", "--methods", "sir", "--reps", "2",
                 "--params", "0.1,0.4", "--out", str(out)])
    assert code == 0
    assert (out / "bench.png").stat().st_size > 0


# ---------------------------------------------------------------------------
# probe command


def test_probe_outputs(tmp_path):
    out = tmp_path / "probe"
    code = main(["probe", "--trials", "5", "--seed", "3", "--out", str(out)])
    assert code == 0
    lines = (out / "probe.csv").read_text().splitlines()
    assert lines[0] == "trial,contrast_containing,contrast_random,ordered"
    assert len(lines) == 6
    assert (out / "probe.png").exists()
