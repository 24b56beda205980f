import filecmp

import pytest
from click.testing import CliRunner

from nfbm.cli import main

TINY_SETS = [
    "--set", "tx_num_elements=8",
    "--set", "rx_num_elements=8",
    "--set", "distance=0.3",
    "--set", "snr_points=0,10",
    "--set", "distance_points=0.3,3",
    "--set", "frequency_points=30e9",
    "--set", "mc_samples=0",
]


@pytest.fixture
def runner():
    return CliRunner()


class TestCapacityCommand:
    def test_prints_report(self, runner):
        result = runner.invoke(main, ["capacity", *TINY_SETS])
        assert result.exit_code == 0, result.output
        for field in ("dof", "candidates K", "C_BM_asymptotic", "C_BBS", "gap",
                      "top activation probabilities"):
            assert field in result.output

    def test_far_degenerate_link(self, runner):
        result = runner.invoke(main, [
            "capacity",
            "--set", "tx_num_elements=2", "--set", "rx_num_elements=2",
            "--set", "n_rf=1", "--set", "distance=1e6",
            "--set", "reflection_coefficient=0",
            "--set", "mc_samples=0",
        ])
        assert result.exit_code == 0, result.output
        assert "candidates K        : 1" in result.output
        assert "gap                 : 0.000000" in result.output

    def test_unknown_set_key_exits_2(self, runner):
        result = runner.invoke(main, ["capacity", "--set", "warp_factor=9"])
        assert result.exit_code == 2
        assert "warp_factor" in result.stderr

    def test_malformed_set_exits_2(self, runner):
        result = runner.invoke(main, ["capacity", "--set", "distance"])
        assert result.exit_code == 2

    def test_bad_value_exits_2(self, runner):
        result = runner.invoke(main, ["capacity", "--set", "distance=-5"])
        assert result.exit_code == 2
        assert "distance" in result.stderr

    def test_output_writes_single_row(self, runner, tmp_path):
        path = tmp_path / "point.csv"
        result = runner.invoke(main, ["capacity", *TINY_SETS, "--output", str(path)])
        assert result.exit_code == 0, result.output
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("distance_m,snr_db,dof,k,")


class TestDofCommand:
    def test_prints_summary(self, runner):
        result = runner.invoke(main, ["dof", *TINY_SETS])
        assert result.exit_code == 0, result.output
        assert "fraunhofer_distance" in result.output
        assert "dof" in result.output


class TestSweepCommands:
    def test_snr_sweep_cardinality(self, runner, tmp_path):
        path = tmp_path / "snr.csv"
        result = runner.invoke(main, ["sweep-snr", *TINY_SETS, "--output", str(path)])
        assert result.exit_code == 0, result.output
        assert f"wrote 4 rows to {path}" in result.output
        assert len(path.read_text().splitlines()) == 5

    def test_dof_sweep_cardinality(self, runner, tmp_path):
        path = tmp_path / "dof.csv"
        result = runner.invoke(main, [
            "sweep-dof",
            "--set", "tx_num_elements=8", "--set", "rx_num_elements=8",
            "--set", "frequency_points=5e9,30e9,100e9",
            "--set", "distance_points=0.3,1,3",
            "--output", str(path),
        ])
        assert result.exit_code == 0, result.output
        assert "wrote 9 rows" in result.output

    def test_same_invocation_twice_identical_files(self, runner, tmp_path):
        args = ["sweep-snr", *TINY_SETS[:-2], "--set", "mc_samples=2000",
                "--samples", "2000", "--seed", "5"]
        path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(main, [*args, "--output", str(path_a)]).exit_code == 0
        assert runner.invoke(main, [*args, "--output", str(path_b)]).exit_code == 0
        assert filecmp.cmp(path_a, path_b, shallow=False)

    def test_config_file_and_set_precedence(self, runner, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "tx_num_elements = 8\nrx_num_elements = 8\ndistance = 0.3\n"
            "snr_points = 0\ndistance_points = 0.3\nmc_samples = 0\nseed = 4\n"
        )
        path = tmp_path / "out.csv"
        result = runner.invoke(main, [
            "sweep-snr", "--config", str(cfg),
            "--set", "snr_points=0,10",  # overrides the file's single point
            "--output", str(path),
        ])
        assert result.exit_code == 0, result.output
        assert "wrote 2 rows" in result.output

    def test_samples_and_seed_flags_override(self, runner, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("mc_samples = 100000\n")
        path = tmp_path / "out.csv"
        result = runner.invoke(main, [
            "sweep-snr", *TINY_SETS[:-2], "--config", str(cfg),
            "--samples", "2000", "--seed", "123",
            "--set", "snr_points=10", "--set", "distance_points=0.3",
            "--output", str(path),
        ])
        assert result.exit_code == 0, result.output
        text = path.read_text()
        assert text.count("\n") == 2  # header + one row
        assert text.splitlines()[1].split(",")[-1] != ""  # MC ran

    def test_missing_config_file_exits_2(self, runner):
        result = runner.invoke(main, ["sweep-snr", "--config", "/no/such/file.cfg"])
        assert result.exit_code == 2
