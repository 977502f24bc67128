"""Configuration loading, run execution, and coverage sweeps."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from rischan.arrays import ElementPattern
from rischan.engine import CoverageArea, coverage_run, load_config, run
from rischan.errors import ConfigError, GenerationError
from rischan.multiris import MultiRisScene
from rischan.scene import Scene
from rischan.simio import file_digest, read_metadata, read_tensor


def base_cfg(**over):
    cfg = {
        "environment": "InH_IndoorOffice",
        "frequency_ghz": 28.0,
        "tx": [0.0, 25.0, 2.0],
        "rx": [38.0, 48.0, 1.0],
        "ris": [40.0, 50.0, 2.0],
        "n": 16,
        "ris_facing": -1,
    }
    cfg.update(over)
    return cfg


def run_cfg(tmp_path, **over):
    over.setdefault("realizations", 3)
    over.setdefault("seed", 7)
    over.setdefault("out_dir", str(tmp_path / "out"))
    return load_config(base_cfg(**over))


class TestLoadConfigDefaults:
    def test_defaults(self):
        cfg = load_config(base_cfg())
        assert cfg.band == "mmwave"
        assert cfg.seed == 1
        assert cfg.realizations == 1000
        assert cfg.strategy == "pinv_surrogate"
        assert cfg.quant_bits is None
        assert cfg.tx_power_dbm == 30.0 and cfg.noise_dbm == -100.0
        assert cfg.workers == 1
        assert cfg.out_dir == Path("out")
        assert cfg.write_channels and cfg.write_rates and not cfg.csv
        assert cfg.clustered is True
        assert cfg.coverage is None

    def test_scene_built(self):
        scene = load_config(base_cfg()).scene
        assert isinstance(scene, Scene)
        assert scene.n == 16 and scene.nt == 1 and scene.nr == 1
        assert scene.frequency_hz == 28e9
        assert scene.ris_geometry.orientation.facing == -1
        assert isinstance(scene.element_pattern, ElementPattern)

    def test_from_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(base_cfg(seed=9)))
        assert load_config(path).seed == 9
        assert load_config(str(path)).seed == 9

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="config file"):
            load_config(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(path)

    def test_top_level_must_be_object(self):
        with pytest.raises(ConfigError, match="JSON object"):
            load_config([1, 2])

    def test_sha256_canonical(self):
        a = load_config(base_cfg())
        b = load_config(base_cfg())
        c = load_config(base_cfg(seed=2))
        assert a.config_sha256 == b.config_sha256
        assert a.config_sha256 != c.config_sha256


class TestLoadConfigValidation:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown keys.*typo"):
            load_config(base_cfg(typo=1))

    @pytest.mark.parametrize("key", ["environment", "frequency_ghz", "tx", "rx", "ris"])
    def test_required(self, key):
        cfg = base_cfg()
        del cfg[key]
        with pytest.raises(ConfigError, match=key):
            load_config(cfg)

    def test_bad_environment(self):
        with pytest.raises(ConfigError, match="environment"):
            load_config(base_cfg(environment="Mars_Crater"))

    def test_bad_band(self):
        with pytest.raises(ConfigError, match="band"):
            load_config(base_cfg(band="thz"))

    def test_bad_point(self):
        with pytest.raises(ConfigError, match="tx"):
            load_config(base_cfg(tx=[1.0, 2.0]))
        with pytest.raises(ConfigError, match=r"tx\[2\]"):
            load_config(base_cfg(tx=[1.0, 2.0, "high"]))

    def test_n_not_square(self):
        with pytest.raises(ConfigError, match="perfect square"):
            load_config(base_cfg(n=12))

    def test_explicit_shape(self):
        scene = load_config(base_cfg(n=12, ris_shape=[6, 2])).scene
        assert (scene.ris_geometry.n_h, scene.ris_geometry.n_v) == (6, 2)

    def test_shape_conflicts_n(self):
        with pytest.raises(ConfigError, match="ris_shape"):
            load_config(base_cfg(n=16, ris_shape=[5, 2]))

    def test_nt_and_tx_array_conflict(self):
        with pytest.raises(ConfigError, match="not both"):
            load_config(base_cfg(nt=2, tx_array={"n": 4}))

    def test_nt_shorthand(self):
        cfg = load_config(base_cfg(nt=3, nr=2))
        assert cfg.scene.nt == 3 and cfg.scene.nr == 2

    def test_terminal_array_mapping(self):
        cfg = load_config(base_cfg(rx_array={"shape": [2, 2], "wall": "xz", "facing": -1}))
        geom = cfg.scene.rx_geometry
        assert geom.size == 4 and geom.orientation.facing == -1

    def test_terminal_array_unknown_field(self):
        with pytest.raises(ConfigError, match="tx_array"):
            load_config(base_cfg(tx_array={"rows": 2}))

    def test_los_validation(self):
        with pytest.raises(ConfigError, match="los"):
            load_config(base_cfg(los={"tx_moon": "on"}))
        with pytest.raises(ConfigError, match="los.tx_ris"):
            load_config(base_cfg(los={"tx_ris": "sometimes"}))
        scene = load_config(base_cfg(los={"tx_rx": "off"})).scene
        assert scene.los_tx_rx == "off"

    def test_shadowing_validation(self):
        with pytest.raises(ConfigError, match="shadowing"):
            load_config(base_cfg(shadowing={"heavy": True}))
        scene = load_config(base_cfg(shadowing={"clustered": False, "los": True})).scene
        assert scene.shadow_clustered is False and scene.shadow_los is True

    def test_control_validation(self):
        with pytest.raises(ConfigError, match="control.strategy"):
            load_config(base_cfg(control={"strategy": "telepathy"}))
        with pytest.raises(ConfigError, match="quant_bits"):
            load_config(base_cfg(control={"quant_bits": 0}))
        cfg = load_config(base_cfg(control={"strategy": "random", "quant_bits": 3}))
        assert cfg.strategy == "random" and cfg.quant_bits == 3

    def test_scattering_passthrough(self):
        cfg = load_config(base_cfg(scattering={"max_subrays": 5, "min_leg_m": 2.0}))
        assert cfg.scene.scattering.max_subrays == 5
        with pytest.raises(ConfigError, match="scattering"):
            load_config(base_cfg(scattering={"max_subrays": 0}))
        with pytest.raises(ConfigError, match="scattering"):
            load_config(base_cfg(scattering={"blobs": 1}))

    def test_bounds_override(self):
        cfg = load_config(base_cfg(bounds=[[0, 10], [0, 12], [0, 3]]))
        assert cfg.scene.environment.bounds == ((0.0, 10.0), (0.0, 12.0), (0.0, 3.0))
        with pytest.raises(ConfigError, match="bounds"):
            load_config(base_cfg(bounds=[[0, 10], [0, 12]]))

    def test_cluster_density_override(self):
        cfg = load_config(base_cfg(cluster_density=0.5))
        assert cfg.scene.environment.cluster_density == 0.5

    def test_pattern_q(self):
        assert load_config(base_cfg(pattern_q=None)).scene.element_pattern is None
        assert load_config(base_cfg(pattern_q=2.0)).scene.element_pattern.q == 2.0

    def test_spacing_validation(self):
        with pytest.raises(ConfigError, match="spacing"):
            load_config(base_cfg(spacing_wavelengths=0.0))

    def test_seed_and_realizations(self):
        with pytest.raises(ConfigError, match="seed"):
            load_config(base_cfg(seed=-1))
        with pytest.raises(ConfigError, match="realizations"):
            load_config(base_cfg(realizations=0))
        with pytest.raises(ConfigError, match="seed"):
            load_config(base_cfg(seed=1.5))

    def test_cophase_needs_siso(self):
        with pytest.raises(ConfigError, match="cophase"):
            load_config(base_cfg(nt=2, control={"strategy": "cophase"}))

    def test_sub6_needs_siso(self):
        with pytest.raises(ConfigError, match="sub6"):
            load_config(base_cfg(band="sub6", frequency_ghz=3.5, nr=2))

    def test_sub6_section(self):
        cfg = load_config(
            base_cfg(band="sub6", frequency_ghz=3.5, sub6={"n_clusters": 5, "g_mode": "far"})
        )
        assert cfg.sub6_params.n_clusters == 5 and cfg.sub6_g_mode == "far"
        with pytest.raises(ConfigError, match="sub6"):
            load_config(base_cfg(sub6={"delay_scaling": 0.5}))
        with pytest.raises(ConfigError, match="sub6"):
            load_config(base_cfg(sub6={"rays": 3}))


class TestLoadConfigMulti:
    def multi_cfg(self, **over):
        cfg = base_cfg(
            ris=[[40.0, 50.0, 2.0], [60.0, 40.0, 2.5]],
            rx=[55.0, 35.0, 1.0],
            ris_facing=[-1, -1],
        )
        cfg.update(over)
        return cfg

    def test_two_panels(self):
        scene = load_config(self.multi_cfg()).scene
        assert isinstance(scene, MultiRisScene)
        assert scene.n_panels == 2
        assert all(p.geometry.size == 16 for p in scene.panels)

    def test_per_panel_n(self):
        scene = load_config(self.multi_cfg(n=[16, 64])).scene
        assert [p.geometry.size for p in scene.panels] == [16, 64]
        with pytest.raises(ConfigError, match="n:"):
            load_config(self.multi_cfg(n=[16, 64, 4]))

    def test_per_panel_wall_facing_lengths(self):
        with pytest.raises(ConfigError, match="ris_wall"):
            load_config(self.multi_cfg(ris_wall=["xz"]))
        with pytest.raises(ConfigError, match="ris_facing"):
            load_config(self.multi_cfg(ris_facing=[-1]))

    def test_multi_rejects_sub6(self):
        with pytest.raises(ConfigError, match="mmwave"):
            load_config(self.multi_cfg(band="sub6", frequency_ghz=3.5))

    def test_multi_rejects_share(self):
        with pytest.raises(ConfigError, match="share_direct_clusters"):
            load_config(self.multi_cfg(share_direct_clusters=True))


class TestParamsTable:
    TABLE = {"InH_IndoorOffice": {"exponent_los": 2.5}}

    def test_inline_params(self):
        cfg = load_config(base_cfg(params=self.TABLE))
        assert cfg.scene.environment.path_loss.exponent_los == 2.5

    def test_default_path_applies(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text(json.dumps(self.TABLE))
        cfg = load_config(base_cfg(), default_params_path=str(path))
        assert cfg.scene.environment.path_loss.exponent_los == 2.5

    def test_inline_beats_default_path(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text(json.dumps({"InH_IndoorOffice": {"exponent_los": 9.9}}))
        cfg = load_config(base_cfg(params=self.TABLE), default_params_path=str(path))
        assert cfg.scene.environment.path_loss.exponent_los == 2.5

    def test_other_environment_ignored(self):
        cfg = load_config(base_cfg(params={"UMi_StreetCanyon": {"exponent_los": 2.5}}))
        assert cfg.scene.environment.path_loss.exponent_los == 1.73

    def test_unknown_environment(self):
        with pytest.raises(ConfigError, match="params"):
            load_config(base_cfg(params={"Mars_Crater": {}}))


class TestCoverageConfig:
    def cov_cfg(self, **cov):
        section = {"x": [36.0, 40.0], "y": [46.0, 48.0], "step": 2.0, "z": 1.0}
        section.update(cov)
        return base_cfg(coverage=section)

    def test_parsed(self):
        area = load_config(self.cov_cfg()).coverage
        assert area.x_range == (36.0, 40.0)
        np.testing.assert_allclose(area.xs, [36.0, 38.0, 40.0])
        np.testing.assert_allclose(area.ys, [46.0, 48.0])

    def test_validation(self):
        with pytest.raises(ConfigError, match="coverage.step"):
            load_config(self.cov_cfg(step=0.0))
        with pytest.raises(ConfigError, match="coverage.x"):
            load_config(self.cov_cfg(x=[1.0]))
        with pytest.raises(ConfigError, match="min <= max"):
            load_config(self.cov_cfg(x=[40.0, 36.0]))
        with pytest.raises(ConfigError, match="coverage"):
            load_config(self.cov_cfg(radius=3))
        cfg = self.cov_cfg()
        del cfg["coverage"]["step"]
        with pytest.raises(ConfigError, match="step"):
            load_config(cfg)

    def test_axis_endpoint_inclusive(self):
        area = CoverageArea((0.0, 1.0), (0.0, 0.0), 0.1, 1.5)
        assert area.xs.size == 11
        assert area.xs[-1] == pytest.approx(1.0)
        assert area.ys.size == 1


class TestRun:
    def test_outputs(self, tmp_path):
        cfg = run_cfg(tmp_path)
        result = run(cfg)
        out = cfg.out_dir
        for name, dims in (("H", (3, 16, 1)), ("G", (3, 1, 16)), ("D", (3, 1, 1))):
            path = out / f"{name}.risch"
            assert result.files[name] == path
            assert read_tensor(path).shape == dims
            assert result.digests[name] == file_digest(path)
        assert (out / "rates.csv").exists()
        meta = read_metadata(out / "metadata.json")
        assert meta["format"] == "RISCH1"
        assert meta["seed"] == 7 and meta["realizations"] == 3
        assert meta["files"]["H"]["dims"] == [3, 16, 1]
        assert meta["files"]["H"]["sha256"] == result.digests["H"]
        assert meta["mean_rate_bits_hz"] == pytest.approx(result.rates.mean())
        assert np.all(result.rates > 0.0) and result.rates.shape == (3,)

    def test_rates_csv_content(self, tmp_path):
        cfg = run_cfg(tmp_path)
        result = run(cfg)
        lines = (cfg.out_dir / "rates.csv").read_text().splitlines()
        assert lines[0] == "index,rate_bits_hz"
        assert len(lines) == 4
        for i, line in enumerate(lines[1:]):
            idx, rate = line.split(",")
            assert int(idx) == i
            assert float(rate) == pytest.approx(result.rates[i], rel=1e-10)

    def test_rerun_byte_identical(self, tmp_path):
        r1 = run(run_cfg(tmp_path))
        r2 = run(run_cfg(tmp_path))
        assert r1.digests == r2.digests
        assert r1.metadata == r2.metadata

    def test_worker_count_invisible(self, tmp_path):
        r1 = run(run_cfg(tmp_path, realizations=6, workers=1))
        r2 = run(run_cfg(tmp_path, realizations=6, workers=4))
        assert r1.digests == r2.digests

    def test_csv_mirrors(self, tmp_path):
        result = run(run_cfg(tmp_path, csv=True))
        assert "H_csv" in result.files and result.files["H_csv"].exists()

    def test_write_flags(self, tmp_path):
        cfg = run_cfg(tmp_path, write_channels=False)
        result = run(cfg)
        assert "H" not in result.files
        assert not (cfg.out_dir / "H.risch").exists()
        assert (cfg.out_dir / "rates.csv").exists()
        cfg2 = run_cfg(tmp_path, write_rates=False, out_dir=str(tmp_path / "out2"))
        run(cfg2)
        assert not (cfg2.out_dir / "rates.csv").exists()

    @pytest.mark.parametrize("strategy", ["cophase", "pinv_surrogate", "random", "off"])
    def test_strategies_run(self, tmp_path, strategy):
        result = run(run_cfg(tmp_path, control={"strategy": strategy}, write_channels=False))
        assert np.all(np.isfinite(result.rates))

    def test_cophase_beats_off(self, tmp_path):
        on = run(run_cfg(tmp_path, control={"strategy": "cophase"}, write_channels=False))
        off = run(run_cfg(tmp_path, control={"strategy": "off"}, write_channels=False))
        assert on.rates.mean() > off.rates.mean()

    def test_quantizer_changes_rates(self, tmp_path):
        fine = run(run_cfg(tmp_path, control={"strategy": "cophase"}, write_channels=False))
        coarse = run(
            run_cfg(
                tmp_path, control={"strategy": "cophase", "quant_bits": 1}, write_channels=False
            )
        )
        assert not np.array_equal(fine.rates, coarse.rates)
        assert coarse.rates.mean() < fine.rates.mean()

    def test_sub6_band(self, tmp_path):
        result = run(run_cfg(tmp_path, band="sub6", frequency_ghz=3.5))
        assert np.all(result.rates > 0.0)
        assert read_tensor(run_cfg(tmp_path).out_dir / "H.risch").shape == (3, 16, 1)

    def test_multi_outputs(self, tmp_path):
        cfg = run_cfg(
            tmp_path,
            ris=[[40.0, 50.0, 2.0], [60.0, 40.0, 2.5]],
            rx=[55.0, 35.0, 1.0],
            ris_facing=[-1, -1],
        )
        result = run(cfg)
        for name in ("H0", "G0", "H1", "G1", "D"):
            assert result.files[name].exists()
        assert read_tensor(cfg.out_dir / "H1.risch").shape == (3, 16, 1)

    def test_generation_failure_propagates(self, tmp_path):
        cfg = run_cfg(
            tmp_path,
            bounds=[[0.0, 0.5], [0.0, 0.5], [0.0, 0.5]],
            tx=[0.1, 0.1, 0.1],
            ris=[0.4, 0.45, 0.4],
            rx=[0.3, 0.2, 0.2],
        )
        with pytest.raises(GenerationError, match="inadmissible"):
            run(cfg)


class TestCoverageRun:
    def cov_cfg(self, tmp_path, **over):
        over.setdefault(
            "coverage", {"x": [36.0, 40.0], "y": [46.0, 48.0], "step": 2.0, "z": 1.0}
        )
        over.setdefault("n", 4)
        over.setdefault("realizations", 2)
        over.setdefault("control", {"strategy": "cophase"})
        return run_cfg(tmp_path, **over)

    def test_grid_and_files(self, tmp_path):
        cfg = self.cov_cfg(tmp_path)
        grid, result = coverage_run(cfg)
        assert grid.mean_rate.shape == (3, 2)
        assert np.all(np.isfinite(grid.mean_rate))
        assert np.all(grid.mean_rate > 0.0)
        lines = (cfg.out_dir / "coverage.csv").read_text().splitlines()
        assert lines[0] == "x,y,mean_rate_bits_hz"
        assert len(lines) == 1 + 6
        x, y, rate = lines[1].split(",")
        assert (float(x), float(y)) == (36.0, 46.0)
        assert float(rate) == pytest.approx(grid.mean_rate[0, 0], rel=1e-10)
        meta = read_metadata(cfg.out_dir / "metadata.json")
        assert meta["grid"] == {"nx": 3, "ny": 2, "z": 1.0, "step": 2.0}
        assert meta["files"]["coverage"]["sha256"] == result.digests["coverage"]

    def test_worker_invariance(self, tmp_path):
        _, r1 = coverage_run(self.cov_cfg(tmp_path, workers=1))
        _, r2 = coverage_run(self.cov_cfg(tmp_path, workers=3))
        assert r1.digests == r2.digests

    def test_rerun_identical(self, tmp_path):
        _, r1 = coverage_run(self.cov_cfg(tmp_path))
        _, r2 = coverage_run(self.cov_cfg(tmp_path))
        assert r1.digests == r2.digests

    def test_terminal_cell_is_nan(self, tmp_path):
        cfg = self.cov_cfg(
            tmp_path, coverage={"x": [0.0, 0.0], "y": [25.0, 25.0], "step": 1.0, "z": 2.0}
        )
        grid, _ = coverage_run(cfg)
        assert grid.mean_rate.shape == (1, 1)
        assert math.isnan(grid.mean_rate[0, 0])
        assert "nan" in (cfg.out_dir / "coverage.csv").read_text()

    def test_requires_section(self, tmp_path):
        with pytest.raises(ConfigError, match="coverage"):
            coverage_run(run_cfg(tmp_path))
