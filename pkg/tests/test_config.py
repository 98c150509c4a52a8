import math

import pytest

from anisub.config import DEFAULT_CONFIG_TEXT, parse_config_text
from anisub.errors import ConfigError
from anisub.models import CommonFactor, IndependentStable, SpectralStable


def test_default_config_parses():
    cfg = parse_config_text(DEFAULT_CONFIG_TEXT)
    assert isinstance(cfg.model, SpectralStable)
    assert cfg.seed == 42
    assert cfg.params("verify")["budget"] == 100_000
    assert cfg.params("ctrw-sweep")["c_values"] == [10.0, 100.0, 1000.0, 10000.0]
    # semicolon-separated matrix rows must survive inline-comment handling
    assert cfg.params("ctmc")["a"].shape == (2, 2)


def test_matrix_parsing_from_text():
    cfg = parse_config_text("[ctmc]\na = 0.2 0.8 ; 0.6 0.4\n")
    a = cfg.params("ctmc")["a"]
    assert a.shape == (2, 2)
    assert a[1, 0] == 0.6


def test_empty_config_gets_all_defaults():
    cfg = parse_config_text("")
    assert isinstance(cfg.model, SpectralStable)
    assert cfg.params("invert")["n_reps"] == 1000
    assert cfg.params("verify")["suite"] is None


def test_angle_tokens():
    cfg = parse_config_text("[model]\natoms = pi/6:1.0, 0.25:2.0\n")
    angles = [a for a, _ in cfg.model.m.atoms]
    assert angles[0] == pytest.approx(math.pi / 6)
    assert angles[1] == 0.25


def test_density_only_model_has_no_default_atom():
    cfg = parse_config_text(
        "[model]\n"
        "density_nodes = 0.5 1.0\n"
        "density_weights = 0.4 0.4\n"
        "density_values = 1.0 1.0\n")
    assert cfg.model.m.atoms == ()
    assert cfg.model.m.total_mass == pytest.approx(0.8)


def test_independent_variant():
    cfg = parse_config_text(
        "[model]\nvariant = independent-stable\nalpha = 0.7\nscale2 = 2.5\n")
    assert isinstance(cfg.model, IndependentStable)
    assert cfg.model.scale2 == 2.5


def test_common_factor_variant():
    cfg = parse_config_text(
        "[model]\nvariant = common-factor\nalpha = 0.5\nc1 = 0.5\nc2 = 2.0\n")
    assert isinstance(cfg.model, CommonFactor)
    assert cfg.model.c1 == 0.5


def test_explicit_intensity():
    cfg = parse_config_text("[model]\nc = 1.0\n")
    assert cfg.model.c == 1.0


def test_suite_list_parsing():
    cfg = parse_config_text("[verify]\nsuite = covariance, tail-transform\n")
    assert cfg.params("verify")["suite"] == ["covariance", "tail-transform"]


@pytest.mark.parametrize("text,field", [
    ("[model]\nalpha = 2.0\n", "model.alpha"),
    ("[model]\nvariant = what\n", "model.variant"),
    ("[model]\natoms = pi/5:1.0\n", "model.atoms"),
    ("[run]\nseed = -1\n", "run.seed"),
    ("[run]\nthreads = 0\n", "run.threads"),
    ("[run]\nformat = yaml\n", "run.format"),
    ("[invert]\ndx = 0\n", "invert.dx"),
    ("[invert]\ntruncation_tolerance = 2\n", "invert.truncation_tolerance"),
    ("[subdiffuse]\nt_grid = 2 1\n", "subdiffuse.t_grid"),
    ("[verify]\nbudget = -5\n", "verify.budget"),
])
def test_validation_names_the_field(text, field):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert err.value.field == field
