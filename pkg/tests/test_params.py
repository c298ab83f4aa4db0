import math

import pytest

from polyadnet.distributions import DegreeDistribution
from polyadnet.params import (
    ModelParams,
    expected_edges_per_step,
    expected_vertices_per_step,
    validate_params,
)

POINT = DegreeDistribution.from_probs({0: 1.0})
TWO = DegreeDistribution.from_probs({2: 1.0})

# per-vertex free-edge table used throughout the heavier tests
RN_TABLE = {1: 0.39091, 2: 0.04, 3: 0.08, 4: 0.12, 5: 0.16, 6: 0.2, 7: 0.00909}
R1_TABLE = {1: 0.049737, 2: 0.950263}


def make(gamma=0.0, n=2, mu=0, r1=TWO, rn=POINT):
    return ModelParams(gamma=gamma, n=n, mu=mu, r1=r1, rn=rn)


def test_pure_monad_configuration_is_valid():
    p = validate_params(make())
    assert p.gamma == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gamma": -0.1},
        {"gamma": 1.5},
        {"n": 1},
        {"n": 2.5},
        {"mu": -1},
        {"mu": 1},  # rn={0:1} cannot supply one bundle end per vertex
    ],
)
def test_validate_rejects(kwargs):
    with pytest.raises(ValueError):
        validate_params(make(**kwargs))


def test_mu_within_rn_support_is_fine():
    rn = DegreeDistribution.from_probs({2: 0.5, 3: 0.5})
    validate_params(make(gamma=0.5, n=3, mu=2, rn=rn))


def test_vertices_per_step():
    assert expected_vertices_per_step(make()) == 1.0
    p = make(gamma=0.25, n=3, mu=1, rn=DegreeDistribution.from_probs({1: 0.5, 2: 0.5}))
    assert expected_vertices_per_step(p) == pytest.approx(1.5)
    assert expected_vertices_per_step(make(gamma=1.0, n=5, rn=POINT)) == 5.0


def test_edges_per_step_dyad_clique_only():
    p = make(gamma=1.0, n=2, mu=0, rn=POINT)
    assert expected_edges_per_step(p) == pytest.approx(1.0)


def test_edges_per_step_pure_monad():
    assert expected_edges_per_step(make()) == pytest.approx(2.0)


def test_edges_per_step_mixed():
    rn = DegreeDistribution.from_probs({1: 0.5, 2: 0.5})
    p = make(gamma=0.25, n=3, mu=1, rn=rn)
    # 0.25*(3*1.5 + 3) + 0.75*2 by hand
    assert expected_edges_per_step(p) == pytest.approx(3.375)


def test_pentad_run_constants():
    rn = DegreeDistribution.from_probs(RN_TABLE)
    r1 = DegreeDistribution.from_probs(R1_TABLE)

    # independent recomputation of the table means
    mn = math.fsum(k * v for k, v in RN_TABLE.items())
    assert mn == pytest.approx(3.25454, abs=1e-12)
    assert rn.mean_degree == pytest.approx(mn, abs=1e-15)
    assert r1.mean_degree == pytest.approx(1.950263, abs=1e-12)

    p = make(gamma=0.01, n=5, mu=1, r1=r1, rn=rn)
    expected = 0.01 * (5 * mn + 10) + 0.99 * 1.950263
    assert expected == pytest.approx(2.19348737, abs=1e-9)
    assert expected_edges_per_step(p) == pytest.approx(expected, abs=1e-15)
    assert expected_vertices_per_step(p) == pytest.approx(1.04)


def test_params_are_frozen():
    p = make()
    with pytest.raises(Exception):
        p.gamma = 0.5
