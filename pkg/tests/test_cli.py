import os

import pytest

from crsnoma.cli import main, parse_config_text, serialize_config


def run(tmp_path, *argv):
    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        return main(list(argv))
    finally:
        os.chdir(cwd)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, map(float, ln.split(","))))
            for ln in lines[1:] if not ln.startswith("#")]
    return header, rows


class TestConfig:
    def test_round_trip(self):
        text = "setup=1\nseed=42\na1=0.95\n# comment\nsnr_step=5\n"
        cfg = parse_config_text(text)
        assert parse_config_text(serialize_config(cfg)) == cfg

    def test_bad_line_rejected(self):
        with pytest.raises(ValueError, match="key=value"):
            parse_config_text("this is not a config\n")

    def test_flags_override_config(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("seed=1\nsetup=1\nn=400\nsnr_start=10\nsnr_stop=10\nsnr_step=5\n")
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert run(tmp_path, "sweep", "--config", str(conf), "--no-plot",
                   "--out", str(out1)) == 0
        assert run(tmp_path, "sweep", "--config", str(conf), "--seed", "2",
                   "--no-plot", "--out", str(out2)) == 0
        assert out1.read_bytes() != out2.read_bytes()

    def test_env_seed_default(self, tmp_path, monkeypatch):
        out1 = tmp_path / "e1.csv"
        out2 = tmp_path / "e2.csv"
        monkeypatch.setenv("CRSNOMA_SEED", "77")
        assert run(tmp_path, "sweep", "--setup", "1", "--n", "400",
                   "--snr-start", "10", "--snr-stop", "10", "--no-plot",
                   "--out", str(out1)) == 0
        monkeypatch.delenv("CRSNOMA_SEED")
        assert run(tmp_path, "sweep", "--setup", "1", "--n", "400", "--seed", "77",
                   "--snr-start", "10", "--snr-stop", "10", "--no-plot",
                   "--out", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestValidateCdf:
    def test_default_run_passes(self, tmp_path):
        out = tmp_path / "cdf.csv"
        code = run(tmp_path, "validate-cdf", "--setup", "1", "--seed", "8",
                   "--samples", "50000", "--out", str(out), "--no-plot")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "y,analytic_cdf,empirical_cdf,abs_diff"
        assert lines[-1].startswith("# ks_statistic,")
        assert float(lines[-1].split(",")[1]) <= 0.01

    def test_single_sample_fails(self, tmp_path):
        out = tmp_path / "one.csv"
        code = run(tmp_path, "validate-cdf", "--samples", "1", "--seed", "8",
                   "--out", str(out), "--no-plot")
        assert code != 0

    def test_rerun_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        for out in (out1, out2):
            assert run(tmp_path, "validate-cdf", "--setup", "1", "--seed", "8",
                       "--samples", "20000", "--out", str(out), "--no-plot") == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_plot_written_by_default(self, tmp_path):
        out = tmp_path / "withfig.csv"
        assert run(tmp_path, "validate-cdf", "--setup", "1", "--seed", "8",
                   "--samples", "5000", "--ks-threshold", "0.1",
                   "--out", str(out)) == 0
        assert (tmp_path / "withfig.png").exists()


class TestSweep:
    def test_header_and_match_claims(self, tmp_path):
        out = tmp_path / "sw.csv"
        code = run(tmp_path, "sweep", "--setup", "1", "--n", "50000", "--seed", "3",
                   "--snr-start", "40", "--snr-stop", "40", "--out", str(out),
                   "--no-plot")
        assert code == 0
        header, rows = read_rows(out)
        assert header == ["rho_db", "mc_sum_rate", "mc_stderr", "closed_form",
                          "highsnr_approx", "baseline_mc"]
        assert len(rows) == 1
        assert abs(rows[0]["mc_sum_rate"] - rows[0]["closed_form"]) <= 0.1

    def test_full_precision_fields(self, tmp_path):
        out = tmp_path / "prec.csv"
        assert run(tmp_path, "sweep", "--setup", "1", "--n", "1000", "--seed", "3",
                   "--snr-start", "10", "--snr-stop", "20", "--snr-step", "10",
                   "--out", str(out), "--no-plot") == 0
        body = out.read_text()
        assert body.endswith("\n")
        data_line = body.splitlines()[1]
        mc_field = data_line.split(",")[1]
        digits = sum(ch.isdigit() for ch in mc_field.split("e")[0])
        assert digits >= 15

    def test_worker_count_invariance(self, tmp_path):
        outs = []
        for w, name in ((1, "w1.csv"), (3, "w3.csv")):
            out = tmp_path / name
            assert run(tmp_path, "sweep", "--setup", "2", "--n", "120000",
                       "--seed", "6", "--workers", str(w), "--snr-start", "0",
                       "--snr-stop", "20", "--snr-step", "10",
                       "--out", str(out), "--no-plot") == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_validation_error_exit_code(self, tmp_path):
        code = run(tmp_path, "sweep", "--alpha-sd", "5", "--alpha-sr", "2",
                   "--alpha-rd", "1", "--no-plot", "--out", "x.csv")
        assert code == 1


@pytest.fixture(scope="module")
def opt_runs(tmp_path_factory):
    # one coarse optimize run per setup, reused by the claims below
    base = tmp_path_factory.mktemp("opt")
    results = {}
    for setup in ("1", "2"):
        out = base / f"opt{setup}.csv"
        code = main(["optimize", "--setup", setup, "--n", "20000", "--seed", "19",
                     "--snr-start", "10", "--snr-stop", "40", "--snr-step", "30",
                     "--grid-step", "0.05", "--out", str(out), "--no-plot"])
        assert code == 0
        results[setup] = read_rows(out)
    return results


class TestOptimize:
    def test_columns(self, opt_runs):
        header, rows = opt_runs["1"]
        assert header == ["rho_db", "a1_opt", "a3_opt", "sr_opt", "a1_subopt",
                          "a3_subopt", "sr_subopt", "baseline_opt_sr"]
        assert len(rows) == 2

    def test_subopt_close_at_40db(self, opt_runs):
        for setup in ("1", "2"):
            row = opt_runs[setup][1][-1]
            assert row["rho_db"] == 40.0
            assert row["sr_opt"] - row["sr_subopt"] <= 0.35  # coarse 0.05 lattice

    def test_advantage_ordering_at_10db(self, opt_runs):
        adv = {s: opt_runs[s][1][0]["sr_opt"] - opt_runs[s][1][0]["baseline_opt_sr"]
               for s in ("1", "2")}
        assert adv["1"] >= adv["2"]

    def test_opt_dominates_fixed_alloc(self, opt_runs, setup1, setup2):
        from crsnoma import SnrPoint
        from crsnoma.allocation import mc_sum_rate_at
        for setup, v in (("1", setup1), ("2", setup2)):
            for row in opt_runs[setup][1]:
                fixed = mc_sum_rate_at(v, SnrPoint.from_db(row["rho_db"]),
                                       0.95, 0.05, n_realizations=20000, seed=19)
                assert row["sr_opt"] >= fixed


def test_solve_alloc_prints_pair(capsys, tmp_path):
    assert run(tmp_path, "solve-alloc", "--setup", "1") == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("a1=") and " a3=" in line


def test_unknown_setup_rejected(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("setup=9\n")
    assert run(tmp_path, "sweep", "--config", str(conf), "--no-plot",
               "--out", "y.csv") == 1
