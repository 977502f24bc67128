"""Command-line front end: subcommands, overrides, exit codes."""

import json

import numpy as np
import pytest

from rischan.cli import PARAMS_ENV, main
from rischan.simio import read_metadata, read_tensor


def write_cfg(tmp_path, name="run.json", **over):
    cfg = {
        "environment": "InH_IndoorOffice",
        "frequency_ghz": 28.0,
        "tx": [0.0, 25.0, 2.0],
        "rx": [38.0, 48.0, 1.0],
        "ris": [40.0, 50.0, 2.0],
        "n": 4,
        "ris_facing": -1,
        "realizations": 2,
        "seed": 5,
        "out_dir": str(tmp_path / "out"),
    }
    cfg.update(over)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


class TestSubcommands:
    def test_validate(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["validate", "-c", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "configuration ok" in out
        assert "band=mmwave seed=5 realizations=2" in out
        assert "N=4" in out

    def test_validate_multi(self, tmp_path, capsys):
        cfg = write_cfg(
            tmp_path,
            ris=[[40.0, 50.0, 2.0], [60.0, 40.0, 2.5]],
            rx=[55.0, 35.0, 1.0],
            ris_facing=[-1, -1],
        )
        assert main(["validate", "-c", str(cfg)]) == 0
        assert "+1 surface(s)" in capsys.readouterr().out

    def test_gen_writes_tensors_only(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["gen", "-c", str(cfg)]) == 0
        out_dir = tmp_path / "out"
        for name in ("H", "G", "D"):
            assert (out_dir / f"{name}.risch").exists()
        assert not (out_dir / "rates.csv").exists()
        assert (out_dir / "metadata.json").exists()
        assert "wrote" in capsys.readouterr().out

    def test_rate_writes_rates(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["rate", "-c", str(cfg)]) == 0
        lines = (tmp_path / "out" / "rates.csv").read_text().splitlines()
        assert lines[0] == "index,rate_bits_hz"
        assert len(lines) == 3
        assert "mean rate:" in capsys.readouterr().out

    def test_coverage(self, tmp_path, capsys):
        cfg = write_cfg(
            tmp_path,
            coverage={"x": [36.0, 38.0], "y": [46.0, 48.0], "step": 2.0, "z": 1.0},
            control={"strategy": "cophase"},
        )
        assert main(["coverage", "-c", str(cfg)]) == 0
        assert (tmp_path / "out" / "coverage.csv").exists()
        assert "grid 2x2" in capsys.readouterr().out

    def test_coverage_without_section(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["coverage", "-c", str(cfg)]) == 2
        assert "coverage" in capsys.readouterr().err

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestExitCodes:
    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["gen", "-c", str(tmp_path / "nope.json")]) == 2
        assert "config error" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{oops")
        assert main(["validate", "-c", str(path)]) == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_unknown_key(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, typo=1)
        assert main(["validate", "-c", str(cfg)]) == 2
        assert "unknown keys" in capsys.readouterr().err

    def test_runtime_failure(self, tmp_path, capsys):
        cfg = write_cfg(
            tmp_path,
            bounds=[[0.0, 0.5], [0.0, 0.5], [0.0, 0.5]],
            tx=[0.1, 0.1, 0.1],
            ris=[0.4, 0.45, 0.4],
            rx=[0.3, 0.2, 0.2],
        )
        assert main(["gen", "-c", str(cfg)]) == 3
        assert "error" in capsys.readouterr().err


class TestOverrides:
    def test_seed_and_out_dir(self, tmp_path):
        cfg = write_cfg(tmp_path)
        other = tmp_path / "elsewhere"
        assert main(["gen", "-c", str(cfg), "--seed", "11", "--out-dir", str(other)]) == 0
        assert read_metadata(other / "metadata.json")["seed"] == 11

    def test_realizations(self, tmp_path):
        cfg = write_cfg(tmp_path)
        assert main(["gen", "-c", str(cfg), "--realizations", "4"]) == 0
        assert read_tensor(tmp_path / "out" / "H.risch").shape[0] == 4

    def test_strategy_and_quant(self, tmp_path):
        cfg = write_cfg(tmp_path)
        rc = main(["rate", "-c", str(cfg), "--strategy", "random", "--quant-bits", "2"])
        assert rc == 0
        meta = read_metadata(tmp_path / "out" / "metadata.json")
        assert meta["strategy"] == "random" and meta["quant_bits"] == 2

    def test_csv_flag(self, tmp_path):
        cfg = write_cfg(tmp_path)
        assert main(["gen", "-c", str(cfg), "--csv"]) == 0
        assert (tmp_path / "out" / "H.csv").exists()

    def test_band_and_frequency(self, tmp_path):
        cfg = write_cfg(tmp_path)
        rc = main(["rate", "-c", str(cfg), "--band", "sub6", "--frequency-ghz", "3.5"])
        assert rc == 0
        assert read_metadata(tmp_path / "out" / "metadata.json")["band"] == "sub6"

    def test_workers_override_same_bytes(self, tmp_path):
        cfg = write_cfg(tmp_path)
        assert main(["gen", "-c", str(cfg)]) == 0
        h1 = (tmp_path / "out" / "H.risch").read_bytes()
        assert main(["gen", "-c", str(cfg), "--workers", "3"]) == 0
        assert (tmp_path / "out" / "H.risch").read_bytes() == h1


class TestParamsEnv:
    LOS_ON = {"tx_ris": "on", "ris_rx": "on", "tx_rx": "on"}

    def test_env_table_applies(self, tmp_path, monkeypatch, capsys):
        cfg = write_cfg(tmp_path, los=self.LOS_ON, control={"strategy": "cophase"})
        assert main(["rate", "-c", str(cfg)]) == 0
        base = (tmp_path / "out" / "rates.csv").read_text()

        params = tmp_path / "params.json"
        params.write_text(json.dumps({"InH_IndoorOffice": {"exponent_los": 9.9}}))
        monkeypatch.setenv(PARAMS_ENV, str(params))
        assert main(["rate", "-c", str(cfg)]) == 0
        lossy = (tmp_path / "out" / "rates.csv").read_text()

        assert base != lossy
        mean = lambda text: np.mean([float(l.split(",")[1]) for l in text.splitlines()[1:]])
        assert mean(lossy) < mean(base)

    def test_config_params_beat_env(self, tmp_path, monkeypatch):
        params = tmp_path / "params.json"
        params.write_text(json.dumps({"InH_IndoorOffice": {"exponent_los": 9.9}}))
        monkeypatch.setenv(PARAMS_ENV, str(params))
        cfg = write_cfg(
            tmp_path,
            los=self.LOS_ON,
            params={"InH_IndoorOffice": {"exponent_los": 1.73}},
        )
        assert main(["rate", "-c", str(cfg)]) == 0
        meta = read_metadata(tmp_path / "out" / "metadata.json")
        assert meta["mean_rate_bits_hz"] > 1.0  # default exponent, healthy link

    def test_env_file_missing(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(PARAMS_ENV, str(tmp_path / "ghost.json"))
        cfg = write_cfg(tmp_path)
        assert main(["validate", "-c", str(cfg)]) == 2
        assert "params file" in capsys.readouterr().err
