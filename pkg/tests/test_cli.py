"""End-to-end tests of the command line."""

import json

import pytest

from drivengates import cli
from drivengates.fidelity import operator_norm_error, per_subspace_norm


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture
def norm_cfg(tmp_path):
    return _write(
        tmp_path,
        "norm.toml",
        'experiment = "norm-error"\n[drive]\nratios = [4, 8]\n',
    )


@pytest.fixture
def sweep_cfg(tmp_path):
    return _write(
        tmp_path,
        "sweep.toml",
        'experiment = "sweep-drive"\n[drive]\nratios = [6, 8]\n',
    )


def test_norm_error_end_to_end(tmp_path, norm_cfg, capsys):
    out = tmp_path / "norm.csv"
    assert cli.main(["norm-error", "--config", norm_cfg, "--out", str(out)]) == 0
    assert "norm-error: 2 rows" in capsys.readouterr().out
    lines = out.read_text().splitlines()
    assert lines[0] == "j_over_omega,norm_error,norm_q1,norm_q2,norm_q3,norm_q4"
    assert len(lines) == 3
    cells = lines[2].split(",")
    assert float(cells[0]) == 8.0
    assert float(cells[1]) == pytest.approx(operator_norm_error(8.0), rel=1e-11)
    assert float(cells[4]) == pytest.approx(per_subspace_norm(24.0), rel=1e-11)


def test_sweep_drive_end_to_end(tmp_path, sweep_cfg):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep-drive", "--config", sweep_cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "j_over_omega,gate_time_ns,fidelity_unitary"
    row8 = lines[2].split(",")
    assert float(row8[1]) == pytest.approx(50.0)
    assert float(row8[2]) == pytest.approx(0.995224967121, abs=1e-9)


def test_json_mirror(tmp_path, norm_cfg):
    csv_out = tmp_path / "norm.csv"
    json_out = tmp_path / "norm.json"
    assert cli.main(["norm-error", "--config", norm_cfg, "--out", str(csv_out)]) == 0
    assert (
        cli.main(
            ["norm-error", "--config", norm_cfg, "--out", str(json_out), "--format", "json"]
        )
        == 0
    )
    payload = json.loads(json_out.read_text())
    lines = csv_out.read_text().splitlines()
    assert payload["experiment"] == "norm-error"
    assert payload["columns"] == lines[0].split(",")
    for json_row, csv_line in zip(payload["rows"], lines[1:]):
        assert [float(c) for c in csv_line.split(",")] == pytest.approx(json_row)


def test_byte_determinism_and_threads(tmp_path, sweep_cfg):
    outs = []
    for name, threads in (("a.csv", None), ("b.csv", None), ("c.csv", 2)):
        argv = ["sweep-drive", "--config", sweep_cfg, "--out", str(tmp_path / name)]
        if threads is not None:
            argv += ["--threads", str(threads)]
        assert cli.main(argv) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    assert outs[0] == outs[2]


def test_default_output_name(tmp_path, norm_cfg, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["norm-error", "--config", norm_cfg]) == 0
    assert (tmp_path / "norm_error.csv").exists()
    assert cli.main(["norm-error", "--config", norm_cfg, "--format", "json"]) == 0
    assert (tmp_path / "norm_error.json").exists()


def test_missing_config_exits_2(tmp_path, capsys):
    code = cli.main(["norm-error", "--config", str(tmp_path / "absent.toml")])
    assert code == 2
    assert "sim: config error:" in capsys.readouterr().err


def test_typo_key_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "typo.toml", 'experiment = "qec3"\n[drive]\nratioz = 8\n')
    assert cli.main(["qec3", "--config", cfg]) == 2
    err = capsys.readouterr().err
    assert "sim: config error:" in err
    assert "ratioz" in err


def test_experiment_mismatch_exits_2(norm_cfg, capsys):
    assert cli.main(["qec3", "--config", norm_cfg]) == 2
    assert "config describes" in capsys.readouterr().err


def test_infeasible_synth_writes_empty_table(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "synth.toml",
        "\n".join(
            [
                'experiment = "synth"',
                "[synth]",
                "seeds = 2",
                'jz_min = "25 MHz"',
                'jz_max = "25.01 MHz"',
                "ratio_min = 79.99",
                "ratio_max = 80.0",
                "alpha_tol = 1e-8",
            ]
        ),
    )
    out = tmp_path / "synth.csv"
    assert cli.main(["synth", "--config", cfg, "--out", str(out)]) == 2
    assert "no feasible netlist" in capsys.readouterr().err
    lines = out.read_text().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("row,")


def test_seed_override(tmp_path):
    base = 'experiment = "synth"\n[synth]\nseeds = 4\n'
    cfg0 = _write(tmp_path, "s0.toml", base)
    cfg3 = _write(tmp_path, "s3.toml", "seed = 3\n" + base)
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    cli.main(["synth", "--config", cfg0, "--seed", "3", "--out", str(out_a)])
    cli.main(["synth", "--config", cfg3, "--out", str(out_b)])
    assert out_a.read_bytes() == out_b.read_bytes()


def test_unwritable_output_exits_1(norm_cfg, capsys):
    code = cli.main(
        ["norm-error", "--config", norm_cfg, "--out", "/nonexistent_dir/x.csv"]
    )
    assert code == 1
    assert "cannot write" in capsys.readouterr().err
