import numpy as np
import pytest

from hardedge import ConfigError
from hardedge.config import (build_grid, config_hash, load_config_file,
                             make_family, make_potential, resolve_config)


def test_defaults():
    cfg = resolve_config()
    assert cfg.n == 256
    assert cfg.seed == 1
    assert cfg.threads == 1
    assert cfg.out == "runs"
    assert cfg.potential == {"name": "ginibre"}
    assert cfg.grid == {"lo": -6.0, "hi": 4.0, "step": 0.05}
    assert cfg.quadrature.abs_tol == 1e-11
    assert cfg.options == {}


def test_load_config_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "nope.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("n = [unclosed")
    with pytest.raises(ConfigError):
        load_config_file(bad)


def test_layering(tmp_path):
    f = tmp_path / "run.toml"
    f.write_text('n = 64\nseed = 7\n[grid]\nlo = -2.0\n')
    file_values = load_config_file(f)
    cfg = resolve_config(file_values, {"n": 128, "seed": None, "out": None})
    assert cfg.n == 128          # CLI beats file
    assert cfg.seed == 7         # None overrides are skipped
    assert cfg.grid["lo"] == -2.0
    assert cfg.grid["hi"] == 4.0  # partial sections keep other defaults
    assert cfg.out == "runs"


def test_extra_sections_become_options(tmp_path):
    f = tmp_path / "run.toml"
    f.write_text('[sample]\nsweeps = 500\n[converge]\nwindow = [-2.0, -0.5]\n')
    cfg = resolve_config(load_config_file(f))
    assert cfg.options["sample"]["sweeps"] == 500
    assert cfg.options["converge"]["window"] == [-2.0, -0.5]
    assert "sample" not in cfg.as_dict()["grid"]


def test_validation():
    with pytest.raises(ConfigError):
        resolve_config({"threads": 0})
    with pytest.raises(ConfigError):
        resolve_config({"seed": -3})
    with pytest.raises(ConfigError):
        resolve_config({"seed": 2**64})
    with pytest.raises(ConfigError):
        resolve_config({"quadrature": {"max_panels": "many"}})


def test_config_hash_stable_and_sensitive():
    a = resolve_config()
    b = resolve_config()
    c = resolve_config({"n": 257})
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)
    assert len(config_hash(a)) == 12
    assert all(ch in "0123456789abcdef" for ch in config_hash(a))


def test_make_potential_names():
    assert make_potential({"name": "ginibre"}).name == "ginibre"
    p3 = make_potential({"name": "power3"})
    assert p3.name == "power3"
    assert p3.q(0.5) == pytest.approx(0.5 ** 6, rel=1e-14)
    p2 = make_potential({"name": "power", "p": 2})
    assert p2.q(0.5) == pytest.approx(0.5 ** 4, rel=1e-14)
    cust = make_potential({"name": "custom", "coeffs": [0.5, 0.25], "r_max": 3.0})
    assert cust.q(1.0) == pytest.approx(0.5 + 0.25)


def test_make_potential_errors():
    with pytest.raises(ConfigError):
        make_potential({})
    with pytest.raises(ConfigError):
        make_potential({"name": "power"})
    with pytest.raises(ConfigError):
        make_potential({"name": "power0"})
    with pytest.raises(ConfigError):
        make_potential({"name": "custom"})
    with pytest.raises(ConfigError):
        make_potential({"name": "custom", "coeffs": []})
    with pytest.raises(ConfigError):
        make_potential({"name": "oscillator"})


def test_make_family_rejects_annular_support():
    cfg = resolve_config({"potential": {"name": "custom",
                                        "coeffs": [1.0, -0.6, 0.08],
                                        "r_max": 4.0}})
    with pytest.raises(ConfigError):
        make_family(cfg)


def test_make_family_ginibre():
    fam = make_family(resolve_config())
    assert fam.unit_radius == pytest.approx(1.0)


def test_build_grid():
    g = build_grid({"lo": -6.0, "hi": 4.0, "step": 0.05})
    assert g[0] == -6.0
    assert g[-1] == pytest.approx(4.0, abs=1e-12)
    assert len(g) == 201
    np.testing.assert_allclose(np.diff(g), 0.05, rtol=1e-9)
    with pytest.raises(ConfigError):
        build_grid({"lo": -1.0, "hi": -2.0, "step": 0.05})
    with pytest.raises(ConfigError):
        build_grid({"lo": -1.0, "hi": 1.0, "step": -0.1})
    with pytest.raises(ConfigError):
        build_grid({"lo": -1.0, "hi": 1.0})
