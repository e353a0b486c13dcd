"""Command line interface: subcommands, exit codes, determinism.

Exit code contract: 0 success, 1 usage/configuration error, 2
infeasible boundary data, 3 verification failure.  Every command must
be a pure function of its arguments and seeds: running it twice yields
byte-identical stdout and output files.
"""

import subprocess
import sys

import numpy as np
import pytest

from randomsurfaces import cli
from randomsurfaces.cli import main, parse_config
from randomsurfaces.heights import parse_grid

RING_FILE = "2\n0 0 0\n0 1 1\n0 2 0\n1 0 1\n1 2 1\n2 0 0\n2 1 1\n2 2 0\n"
GAP_FILE = "2\n0 1 1\n2 1 5\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseConfig:
    def test_key_value_lines(self):
        cfg = parse_config("a = 1\n# note\nb= x,y \n\na = 2\n")
        assert cfg == {"a": "2", "b": "x,y"}

    def test_rejects_bare_line(self):
        with pytest.raises(cli.UsageError):
            parse_config("just words\n")

    def test_rejects_empty_key(self):
        with pytest.raises(cli.UsageError):
            parse_config("= 3\n")


class TestEnumerate:
    def test_box_parity_count(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "--box", "3", "--boundary", "parity"
        )
        assert code == 0
        assert "extensions: 2" in out

    def test_list_members(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "--box", "3", "--boundary", "parity",
            "--list",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "extensions: 2"
        assert lines[1].startswith("vertices:")
        assert len(lines) == 4  # header + vertex row + 2 members

    def test_boundary_file(self, tmp_path, capsys):
        f = tmp_path / "ring.heights"
        f.write_text(RING_FILE)
        code, out, _ = run(
            capsys, "enumerate", "--box", "3", "--boundary-file", str(f)
        )
        assert code == 0
        assert "extensions: 2" in out

    def test_infeasible_boundary_exits_2(self, tmp_path, capsys):
        f = tmp_path / "gap.heights"
        f.write_text(GAP_FILE)
        code, out, _ = run(
            capsys, "enumerate", "--box", "3", "--boundary-file", str(f)
        )
        assert code == 2
        assert "exceeds graph distance 2" in out

    def test_region_file(self, tmp_path, capsys):
        ring = tmp_path / "ring.region"
        ring.write_text(
            "2\n0 0\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n2 2\n"
        )
        gap = tmp_path / "gap.heights"
        gap.write_text(GAP_FILE)
        code, out, _ = run(
            capsys, "enumerate", "--region-file", str(ring),
            "--boundary-file", str(gap),
        )
        assert code == 0
        assert "extensions: 1" in out

    def test_malformed_region_exits_1(self, tmp_path, capsys):
        f = tmp_path / "bad.region"
        f.write_text("0 0\n0 1\n")
        code, _, err = run(
            capsys, "enumerate", "--region-file", str(f),
            "--boundary", "parity",
        )
        assert code == 1
        assert "error:" in err

    def test_missing_region_args_exits_1(self, capsys):
        code, _, err = run(capsys, "enumerate", "--boundary", "parity")
        assert code == 1
        assert "error:" in err

    def test_missing_file_exits_1(self, capsys):
        code, _, err = run(
            capsys, "enumerate", "--region-file", "/nonexistent.region",
            "--boundary", "parity",
        )
        assert code == 1


class TestSurface:
    def test_zero_steps_writes_minimal_extension(self, tmp_path, capsys):
        out_file = tmp_path / "surface.grid"
        code, out, _ = run(
            capsys, "surface", "--n", "3", "--boundary", "parity",
            "--steps", "0", "--out", str(out_file),
        )
        assert code == 0
        grid = parse_grid(out_file.read_text())
        assert grid.shape == (3, 3)
        # minimal extension of the parity ring: center at 0
        assert grid[1, 1] == 0

    def test_default_boundary_is_extremal(self, tmp_path, capsys):
        out_file = tmp_path / "surface.grid"
        code, _, _ = run(
            capsys, "surface", "--n", "4", "--steps", "0",
            "--out", str(out_file),
        )
        assert code == 0
        grid = parse_grid(out_file.read_text())
        # ring values |i - j| pinned; row 0 reads 0, 1, 2, 3
        assert grid[0].tolist() == [0, 1, 2, 3]

    def test_sweep_mode_valid_surface(self, tmp_path, capsys):
        out_file = tmp_path / "surface.grid"
        code, _, _ = run(
            capsys, "surface", "--n", "5", "--boundary", "extremal",
            "--model", "twopoint:a=1", "--sweeps", "30",
            "--out", str(out_file),
        )
        assert code == 0
        grid = parse_grid(out_file.read_text())
        assert grid.shape == (5, 5)
        diffs = np.abs(np.diff(grid, axis=0))
        assert set(np.unique(diffs)) == {1}

    def test_infeasible_boundary_exits_2(self, tmp_path, capsys):
        f = tmp_path / "gap.heights"
        f.write_text(GAP_FILE)
        code, out, _ = run(
            capsys, "surface", "--n", "3", "--boundary-file", str(f),
            "--out", str(tmp_path / "x.grid"),
        )
        assert code == 2
        assert "infeasible boundary" in out

    def test_small_n_rejected(self, capsys):
        code, _, err = run(
            capsys, "surface", "--n", "1", "--out", "/tmp/x.grid"
        )
        assert code == 1

    def test_bad_model_rejected(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "surface", "--n", "3", "--model", "gauss:s=1",
            "--out", str(tmp_path / "x.grid"),
        )
        assert code == 1


class TestConcentration:
    CONFIG = (
        "ns = 3\n"
        "c_values = 0.5, 1.0, 2.0\n"
        "model = twopoint:a=0.5\n"
        "mode = exact\n"
    )

    def test_exact_small_run(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(self.CONFIG)
        out_file = tmp_path / "report.csv"
        code, out, _ = run(
            capsys, "concentration", "--config", str(cfg),
            "--out", str(out_file),
        )
        assert code == 0
        assert "all bounded rows pass" in out
        assert "n=3:" in out
        lines = out_file.read_text().strip().splitlines()
        assert lines[0] == "n,c,samples,tail_freq,bound,mean_stderr_max"
        assert len(lines) == 4

    def test_pass_lines_only_for_bounded_rows(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(self.CONFIG)
        code, out, _ = run(
            capsys, "concentration", "--config", str(cfg),
            "--out", str(tmp_path / "r.csv"),
        )
        # bounds 18 e^{-3c^2/2} exceed 1 at c = 0.5 and c = 1.0, so only
        # c = 2.0 (bound 0.0446) gets a PASS/FAIL line
        assert code == 0
        pass_lines = [l for l in out.splitlines() if l.startswith("PASS")]
        assert len(pass_lines) == 1
        assert pass_lines[0].startswith("PASS n=3 c=2:")

    def test_unknown_config_key_exits_1(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("nonsense = 3\n")
        code, _, err = run(
            capsys, "concentration", "--config", str(cfg),
            "--out", str(tmp_path / "r.csv"),
        )
        assert code == 1
        assert "unknown config keys" in err

    def test_flag_overrides(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(self.CONFIG)
        out_file = tmp_path / "r.csv"
        code, out, _ = run(
            capsys, "concentration", "--config", str(cfg),
            "--c", "1.5", "--out", str(out_file),
        )
        assert code == 0
        lines = out_file.read_text().strip().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("3,1.5,")


class TestVerify:
    def test_identities_suite(self, capsys):
        code, out, _ = run(
            capsys, "verify", "identities", "--samples", "6", "--seed", "3"
        )
        assert code == 0
        assert "identities: 6 instances" in out
        assert "identities: ok" in out

    def test_dominance_suite(self, capsys):
        code, out, _ = run(
            capsys, "verify", "dominance", "--samples", "10"
        )
        assert code == 0
        assert "reversed pair refuted" in out
        assert "dominance: ok" in out

    def test_martingale_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "martingale")
        assert code == 0
        assert "martingale 3x3: 8 walks" in out
        assert "martingale 4x4: 48 walks" in out
        assert "martingale: ok" in out

    def test_unknown_suite_exits_1(self, capsys):
        code, _, err = run(capsys, "verify", "everything")
        assert code == 1


class TestDeterminism:
    def test_surface_byte_identical(self, tmp_path, capsys):
        outputs = []
        for name in ("a.grid", "b.grid"):
            out_file = tmp_path / name
            code, out, _ = run(
                capsys, "surface", "--n", "4", "--boundary", "extremal",
                "--model", "uniform:b=1", "--seed", "5", "--sweeps", "10",
                "--out", str(out_file),
            )
            assert code == 0
            outputs.append(out_file.read_bytes())
        assert outputs[0] == outputs[1]

    def test_enumerate_stdout_identical(self, capsys):
        runs = []
        for _ in range(2):
            code, out, _ = run(
                capsys, "enumerate", "--box", "4", "--boundary", "extremal",
                "--list",
            )
            assert code == 0
            runs.append(out)
        assert runs[0] == runs[1]

    def test_concentration_csv_identical(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "ns = 3\nc_values = 1.0\nmodel = twopoint:a=1\nmode = mc\n"
            "tail_samples = 20\nmean_draws = 5\nmean_samples_per_draw = 3\n"
            "burn_factor = 0.5\nthin_factor = 0.1\n"
        )
        blobs = []
        for name in ("r1.csv", "r2.csv"):
            out_file = tmp_path / name
            code, _, _ = run(
                capsys, "concentration", "--config", str(cfg),
                "--out", str(out_file),
            )
            assert code == 0
            blobs.append(out_file.read_bytes())
        assert blobs[0] == blobs[1]


class TestConsoleScript:
    def test_module_entry_point(self, capsys):
        # the installed entry point calls the same main()
        proc = subprocess.run(
            [sys.executable, "-m", "randomsurfaces.cli"],
            input="", capture_output=True, text=True,
        )
        assert proc.returncode == 1  # missing subcommand is a usage error
