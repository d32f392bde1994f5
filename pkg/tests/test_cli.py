import numpy as np
import pytest

from attbasin.cli import build_parser, dispatch


def run(argv, capsys):
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEigs:
    def test_s2_inverted_table(self, capsys):
        code, out, _ = run(["eigs", "--model", "s2",
                            "--equilibrium", "inverted"], capsys)
        assert code == 0
        assert "saddle (2 stable / 2 unstable)" in out
        assert "-1.6180" in out
        assert "0.6180" in out

    def test_s2_hanging_table(self, capsys):
        code, out, _ = run(["eigs", "--model", "s2",
                            "--equilibrium", "hanging"], capsys)
        assert code == 0
        assert "stable-focus" in out
        assert "-0.5000+0.8660i" in out

    def test_so3_e3_table(self, capsys):
        code, out, _ = run(["eigs", "--model", "so3",
                            "--equilibrium", "e3"], capsys)
        assert code == 0
        assert "saddle (5 stable / 1 unstable)" in out
        assert "-1.5954" in out
        assert "0.5954" in out

    def test_so3_identity_table(self, capsys):
        code, out, _ = run(["eigs", "--model", "so3",
                            "--equilibrium", "identity"], capsys)
        assert code == 0
        assert "stable-focus (6 stable / 0 unstable)" in out

    def test_config_overrides_gains(self, tmp_path, capsys):
        cfg = tmp_path / "params.cfg"
        # kq = 2: inverted saddle eigenvalues become roots of x^2 + x - 2
        cfg.write_text("model = s2\nkq = 2.0\n")
        code, out, _ = run(["eigs", "--model", "s2", "--equilibrium",
                            "inverted", "--config", str(cfg)], capsys)
        assert code == 0
        assert "-2.0000" in out
        assert "1.0000" in out


class TestSimulate:
    def test_writes_trajectory(self, tmp_path, capsys):
        out_path = tmp_path / "traj.jsonl"
        code, out, _ = run(["simulate", "--model", "s2",
                            "--state", "1,0,0;0,0,0", "--T", "0.1",
                            "--stride", "10", "--out", str(out_path)], capsys)
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert len(lines) == 6  # t=0 plus 50 steps stored every 10th
        assert "wrote 6 states" in out

    def test_negative_duration_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            dispatch(["simulate", "--model", "so3",
                      "--state", "0,0,0;0,0,0", "--T", "-1",
                      "--out", "x.jsonl"])
        assert exc.value.code == 2
        assert "--T" in capsys.readouterr().err

    def test_deterministic_output(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        argv = ["simulate", "--model", "so3", "--state",
                "0.3,0,0.1;0.1,0.2,0", "--T", "0.05", "--stride", "5"]
        assert dispatch(argv + ["--out", str(a)]) == 0
        assert dispatch(argv + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


class TestManifold:
    def test_end_to_end_s2(self, tmp_path, capsys):
        out_path = tmp_path / "w.jsonl"
        code, out, _ = run(["manifold", "--model", "s2", "--equilibrium",
                            "inverted", "--delta", "1e-6", "--points", "8",
                            "--T", "0.1", "--stride", "10",
                            "--out", str(out_path)], capsys)
        assert code == 0
        assert "wrote 8 trajectories (0 failed)" in out
        lines = out_path.read_text().splitlines()
        assert len(lines) == 8 * 6

    def test_end_to_end_so3(self, tmp_path, capsys):
        out_path = tmp_path / "w.jsonl"
        code, out, _ = run(["manifold", "--model", "so3", "--equilibrium",
                            "e1", "--delta", "1e-6", "--points", "8",
                            "--T", "0.05", "--stride", "5",
                            "--out", str(out_path)], capsys)
        assert code == 0
        assert "wrote 8 trajectories" in out

    def test_wrong_equilibrium_exits_1(self, tmp_path, capsys):
        code, _, err = run(["manifold", "--model", "s2", "--equilibrium",
                            "e1", "--T", "1", "--out",
                            str(tmp_path / "w.jsonl")], capsys)
        assert code == 1
        assert "saddle" in err


class TestValidateAndExport:
    @pytest.fixture()
    def bundle_path(self, tmp_path):
        path = tmp_path / "w.jsonl"
        assert dispatch(["manifold", "--model", "s2", "--equilibrium",
                         "inverted", "--delta", "1e-6", "--points", "8",
                         "--T", "1", "--stride", "100",
                         "--out", str(path)]) == 0
        return path

    def test_validate(self, bundle_path, capsys):
        capsys.readouterr()
        code, out, _ = run(["validate", "--model", "s2", "--bundle",
                            str(bundle_path), "--equilibrium", "inverted",
                            "--seed", "0", "--t", "1.0"], capsys)
        assert code == 0
        d = float(out.strip().rsplit("= ", 1)[1])
        assert 0.5e-6 <= d <= 1.5e-6

    def test_validate_missing_bundle_exits_1(self, capsys):
        code, _, err = run(["validate", "--model", "s2", "--bundle",
                            "/nonexistent.jsonl", "--equilibrium", "inverted",
                            "--seed", "0", "--t", "1.0"], capsys)
        assert code == 1
        assert err

    def test_export_to_csv(self, bundle_path, tmp_path, capsys):
        capsys.readouterr()
        out_path = tmp_path / "w.csv"
        code, _, _ = run(["export", "--bundle", str(bundle_path),
                          "--format", "csv", "--out", str(out_path)], capsys)
        assert code == 0
        header = out_path.read_text().splitlines()[0]
        assert header.startswith("seed,t,q1")


class TestParser:
    def test_missing_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            dispatch([])
        assert exc.value.code == 2

    @pytest.mark.parametrize("sub", ["eigs", "simulate", "manifold",
                                     "validate", "export"])
    def test_help_documents_flags(self, sub, capsys):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([sub, "--help"])
        assert exc.value.code == 0
        assert "--" in capsys.readouterr().out
