import json

import numpy as np
import pytest

from fif.cli import main


def run(args):
    return main(args)


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: np.array([float(r[i]) for r in rows]) for i, name in enumerate(header)}
    return header, cols


def test_build_writes_curve_and_meta(tmp_path):
    code = run(
        [
            "build", "--function", "sin", "--interval", "0", "3.14159265",
            "--N", "4", "--n", "32", "--alpha", "0.3", "--kernel", "ramp",
            "--grid-exp", "8", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    header, cols = read_csv(tmp_path / "fif.csv")
    assert header == ["x", "f", "base", "fif"]
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert set(meta) == {"config", "results", "diagnostics"}
    assert meta["results"]["residual"] <= meta["config"]["tol"]
    assert meta["results"]["iterations"] >= 1
    # knots are grid points, the curve must pass through the data there
    knots = np.linspace(0.0, 3.14159265, 5)
    idx = np.searchsorted(cols["x"], knots)
    assert np.max(np.abs(cols["fif"][idx] - cols["f"][idx])) <= 1e-9


def test_build_zero_scaling_copies_the_function(tmp_path):
    code = run(
        [
            "build", "--function", "exp", "--interval", "0", "1", "--N", "4",
            "--n", "16", "--alpha", "0", "--grid-exp", "7", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    _, cols = read_csv(tmp_path / "fif.csv")
    assert np.max(np.abs(cols["fif"] - cols["f"])) <= 1e-12


def test_build_rejects_expansive_scaling(tmp_path, capsys):
    code = run(
        [
            "build", "--function", "sin", "--alpha", "1.0",
            "--out", str(tmp_path),
        ]
    )
    assert code == 2
    assert "< 1" in capsys.readouterr().err


def test_invalid_flags_exit_2(tmp_path):
    base = ["build", "--out", str(tmp_path)]
    assert run(base + ["--interval", "1", "0"]) == 2
    assert run(base + ["--grid-exp", "2"]) == 2
    assert run(base + ["--N", "1"]) == 2
    assert run(base + ["--alpha", "what"]) == 2
    assert run(base + ["--function", "nope"]) == 2
    assert run(base + ["--kernel", "gaussian"]) == 2


def test_nonconvergence_exit_3(tmp_path):
    code = run(
        [
            "build", "--function", "sin", "--alpha", "0.9", "--N", "4",
            "--n", "16", "--grid-exp", "6", "--tol", "1e-15",
            "--max-iters", "1", "--out", str(tmp_path),
        ]
    )
    assert code == 3


def test_converge_ladder(tmp_path):
    code = run(
        [
            "converge", "--function", "sin", "--interval", "0", "3.14159265",
            "--N", "4", "--alpha", "0.5", "--n-ladder", "8,16,32,64",
            "--grid-exp", "8", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    _, cols = read_csv(tmp_path / "converge.csv")
    errs = cols["sup_error"]
    assert np.all(np.diff(errs) < 0)
    assert np.all(errs <= cols["bound"] + 1e-12)


def test_converge_unsorted_ladder_fails_cross_check(tmp_path):
    code = run(
        [
            "converge", "--function", "sin", "--N", "4", "--alpha", "0.5",
            "--n-ladder", "64,8", "--grid-exp", "8", "--out", str(tmp_path),
        ]
    )
    assert code == 4


def test_converge_discrete_pairs(tmp_path):
    code = run(
        [
            "converge", "--function", "exp", "--N", "8", "--alpha", "0.3",
            "--discrete", "--n-ladder", "8,16,32", "--grid-exp", "8",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    header, cols = read_csv(tmp_path / "converge.csv")
    assert header[:2] == ["n", "N"]
    assert np.array_equal(cols["n"], cols["N"])
    assert np.all(cols["sup_error"] <= cols["bound"] + 1e-12)


def test_dimension_smooth_case(tmp_path):
    code = run(
        [
            "dimension", "--function", "sin", "--interval", "0", "3.14159265",
            "--N", "4", "--n", "32", "--alpha", "0.2", "--grid-exp", "15",
            "--scales", "4..11", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    report = json.loads((tmp_path / "dimension.json").read_text())
    assert report["results"]["theoretical_dimension"] == 1.0
    assert abs(report["results"]["estimated_dimension"] - 1.0) <= 0.15


def test_dimension_collinear_data(tmp_path):
    code = run(
        [
            "dimension", "--function", "poly:0,1", "--N", "4", "--n", "16",
            "--alpha", "0.2", "--grid-exp", "15", "--scales", "4..11",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    report = json.loads((tmp_path / "dimension.json").read_text())
    assert report["results"]["collinear_data"] is True
    assert report["results"]["theoretical_dimension"] is None
    assert any("not applicable" in note for note in report["results"]["notes"])


def test_dimension_chaos_orbit(tmp_path):
    code = run(
        [
            "dimension", "--function", "sin", "--interval", "0", "3.14159265",
            "--N", "4", "--n", "32", "--alpha", "0.2", "--chaos",
            "--points", "120000", "--seed", "7", "--scales", "4..11",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    report = json.loads((tmp_path / "dimension.json").read_text())
    assert abs(report["results"]["estimated_dimension"] - 1.0) <= 0.15


def test_smooth_run(tmp_path):
    code = run(
        [
            "smooth", "--function", "sin", "--N", "4", "--n", "64",
            "--alpha", "0.2", "--kernel", "smoothstep:1", "--r", "1",
            "--grid-exp", "8", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    header, cols = read_csv(tmp_path / "smooth.csv")
    assert header == ["x", "fif", "fif_d1", "fd_check_d1"]
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["results"]["matching_residuals"]["1"] <= 1e-8
    # derivative column should track the difference quotient of the first
    inner = slice(10, -10)
    assert np.max(np.abs(cols["fif_d1"][inner] - cols["fd_check_d1"][inner])) <= 0.2


def test_smooth_rejects_scaling_at_the_power_bound(tmp_path):
    code = run(
        [
            "smooth", "--function", "sin", "--N", "4", "--n", "64",
            "--alpha", "0.25", "--kernel", "smoothstep:1", "--r", "1",
            "--out", str(tmp_path),
        ]
    )
    assert code == 2


def test_smooth_rejects_rough_kernel(tmp_path, capsys):
    code = run(
        [
            "smooth", "--function", "sin", "--N", "4", "--n", "64",
            "--alpha", "0.2", "--kernel", "ramp", "--r", "2",
            "--out", str(tmp_path),
        ]
    )
    assert code == 2
    assert "insufficient kernel smoothness" in capsys.readouterr().err


def test_holder_ladder(tmp_path):
    code = run(
        [
            "holder", "--function", "abspow:0,0.5", "--N", "4", "--n", "16",
            "--alpha", "0.4", "--mu", "0.5", "--n-ladder", "16,32",
            "--grid-exp", "8", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    header, _ = read_csv(tmp_path / "holder.csv")
    assert header == ["n", "sup_error", "holder_seminorm_error", "combined_0mu_error"]


def test_holder_gate_quotes_failing_piece(tmp_path, capsys):
    code = run(
        [
            "holder", "--function", "abspow:0,0.5", "--N", "4",
            "--alpha", "0.6", "--mu", "0.5", "--n-ladder", "16,32",
            "--out", str(tmp_path),
        ]
    )
    assert code == 2
    assert "subinterval" in capsys.readouterr().err


def test_bounds_prints_table(tmp_path, capsys):
    code = run(
        [
            "bounds", "--function", "sin", "--interval", "0", "3.14159265",
            "--alpha", "0.5", "--n-ladder", "8,16", "--out", str(tmp_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "bound_modulus" in out
    assert len(out.strip().splitlines()) == 3


def test_table_input_round_trip(tmp_path):
    knots = np.linspace(0.0, 1.0, 9)
    table = tmp_path / "data.csv"
    np.savetxt(table, np.column_stack([knots, np.exp(knots)]), delimiter=",")
    code = run(
        [
            "build", "--function", f"table:{table}", "--interval", "0", "1",
            "--N", "8", "--n", "4", "--alpha", "0.2", "--grid-exp", "6",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["diagnostics"]["variant"] == "discrete"
    assert "bound_discrete" in meta["results"]


def test_table_with_header_row_accepted(tmp_path):
    # our own CSV outputs carry a header, so table input must tolerate one
    knots = np.linspace(0.0, 1.0, 9)
    table = tmp_path / "data.csv"
    np.savetxt(table, np.column_stack([knots, np.exp(knots)]),
               delimiter=",", header="x,y", comments="")
    code = run(
        [
            "build", "--function", f"table:{table}", "--interval", "0", "1",
            "--N", "8", "--n", "4", "--alpha", "0.2", "--grid-exp", "6",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0


def test_table_with_text_rows_rejected(tmp_path):
    table = tmp_path / "data.csv"
    table.write_text("x,y\njunk,more\nstill,bad\n")
    code = run(
        [
            "build", "--function", f"table:{table}", "--interval", "0", "1",
            "--N", "2", "--n", "2", "--alpha", "0.2", "--out", str(tmp_path),
        ]
    )
    assert code == 2


def test_table_with_wrong_grid_rejected(tmp_path):
    xs = np.linspace(0.0, 1.0, 9) + 0.01
    table = tmp_path / "data.csv"
    np.savetxt(table, np.column_stack([xs, np.exp(xs)]), delimiter=",")
    code = run(
        [
            "build", "--function", f"table:{table}", "--interval", "0", "1",
            "--N", "8", "--n", "4", "--alpha", "0.2", "--out", str(tmp_path),
        ]
    )
    assert code == 2


def test_config_file_round_trip(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    flags = [
        "build", "--function", "sin", "--interval", "0", "3.14159265",
        "--N", "4", "--n", "32", "--alpha", "0.3", "--grid-exp", "7",
    ]
    assert run(flags + ["--out", str(first)]) == 0
    assert run(["build", "--config", str(first / "meta.json"), "--out", str(second)]) == 0
    assert (first / "fif.csv").read_bytes() == (second / "fif.csv").read_bytes()
    assert (first / "meta.json").read_bytes() == (second / "meta.json").read_bytes()


def test_config_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"function": "sin", "frobnicate": 3}))
    assert run(["build", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_repeat_runs_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    args = [
        "converge", "--function", "sin", "--N", "4", "--alpha", "0.5",
        "--n-ladder", "8,16,32", "--grid-exp", "7",
    ]
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    assert (out1 / "converge.csv").read_bytes() == (out2 / "converge.csv").read_bytes()
    assert (out1 / "meta.json").read_bytes() == (out2 / "meta.json").read_bytes()


def test_csv_cells_carry_full_precision(tmp_path):
    assert run(
        [
            "build", "--function", "sin", "--N", "4", "--n", "16",
            "--alpha", "0.337", "--grid-exp", "6", "--out", str(tmp_path),
        ]
    ) == 0
    with open(tmp_path / "fif.csv") as fh:
        fh.readline()
        row = fh.readline().strip().split(",")
    # 17 significant digits survive a float round trip exactly
    assert float(row[0]) == 0.0
    third = (tmp_path / "fif.csv").read_text().splitlines()[3].split(",")
    for cell in third:
        assert f"{float(cell):.17g}" == cell


def test_missing_command_is_a_usage_error():
    with pytest.raises(SystemExit):
        main([])
