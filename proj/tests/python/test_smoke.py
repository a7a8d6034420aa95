import math

import numpy as np
import pytest

import phnls


@pytest.fixture(scope="module")
def params():
    return phnls.ModelParams(2, 1, "3")


@pytest.fixture(scope="module")
def grid():
    return phnls.Grid(32, [256], [20.0])


@pytest.fixture(scope="module")
def ground_state(params, grid):
    return phnls.petviashvili(params, grid)


def test_gaussian_closed_forms(params):
    g = phnls.gaussian(params, phnls.Grid(64, [128], [20.0]))
    rep = phnls.evaluate(g)
    assert rep["M"] == pytest.approx(1.0, rel=1e-12)
    assert rep["L2s2s2"] == pytest.approx(1.0 / (4 * math.pi**3), rel=1e-8)
    assert rep["S"] == pytest.approx(1.25 - 1.0 / (32 * math.pi**3), rel=1e-8)


def test_field_arrays_round_trip(params, grid):
    f = phnls.random_field(params, grid, 7)
    assert f.values().shape == (32, 256)
    back = phnls.Field.from_values(params, grid, f.values())
    assert (back - f).l2_norm() < 1e-12 * f.l2_norm()


def test_ground_state(ground_state):
    assert ground_state["converged"]
    assert ground_state["beta"] > 0
    rep = ground_state["report"]
    assert abs(rep["I"]) < 1e-8 * rep["B1sq"]


def test_classify(ground_state):
    beta = ground_state["beta"]
    Q = ground_state["Q"]
    assert phnls.classify(0.5 * Q, beta)["membership"] == "K+"
    assert phnls.classify(1.3 * Q, beta)["membership"] == "K-"


def test_evolve_and_detect(params):
    grid = phnls.Grid(32, [256], [40.0])
    u0 = phnls.gaussian(params, grid, amplitude=0.5)
    tr = phnls.evolve(u0, 1.0, dt=1e-2, sample_stride=10)
    assert tr["reason"] == "completed"
    assert len(tr["t"]) == 11
    assert np.ptp(tr["M"]) < 1e-10
    verdict = phnls.detect(tr)
    assert "outcome" in verdict
    with pytest.raises(ValueError):
        phnls.detect(tr, {"no_such_option": 1.0})


def test_exponents():
    e = phnls.exponents(2, 1, "3")
    assert e["r"] == "8/1"
    assert e["p"] == "48/5"


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError, match="grid"):
        phnls.parse_config({"model": {"d": 2, "n": 1, "sigma": "3", "lambda": -1}})
    with pytest.raises(ValueError):
        phnls.ModelParams(2, 1, "-1")
