import math

import numpy as np
import pytest

import cqaoa


def small_pp():
    return cqaoa.prosumer(horizon=4, loads=[[2, 1], [1, 2]], rates=[1.0, 2.5, 1.5, 3.0], capacity=2)


def test_problem_roundtrip():
    p = small_pp()
    assert p.n_vars == 6
    assert p.groups == [[0, 1, 2], [3, 4, 5]]
    q = cqaoa.problem_from_json(p.to_json())
    assert q.n_vars == p.n_vars
    assert q.n_inequalities == p.n_inequalities


def test_exhaustive_optimum_is_feasible():
    p = small_pp()
    opt, x = cqaoa.solve_exhaustive(p)
    assert p.is_feasible(x)
    assert p.objective(x) == pytest.approx(opt)


def test_reduced_state_is_normalized():
    m = cqaoa.Model(small_pp(), method="ifxy")
    assert m.shape == [3, 3]
    assert m.search_space == 9
    psi = m.evolve([0.3, 0.7], [0.5, 0.2])
    assert psi.shape == (3, 3)
    assert np.sum(np.abs(psi) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_uniform_state_raar_is_zero_on_if_layout():
    m = cqaoa.Model(small_pp(), method="if")
    r = m.evaluate([], [])
    assert abs(r["raar"]) < 1e-12


def test_ladder_improves_on_random():
    m = cqaoa.Model(small_pp(), method="ifxy")
    reports = m.run_ladder(p_max=3)
    assert [r["p"] for r in reports] == [1, 2, 3]
    assert reports[-1]["raar"] > 0.5
    assert reports[-1]["tts"] == cqaoa.tts(reports[-1]["p_star"], reports[-1]["layers"])


def test_metric_helpers():
    assert cqaoa.tts(0.99, 10) == 10
    assert math.isinf(cqaoa.tts(0.0, 10))
    g, b = cqaoa.tae_schedule(2)
    assert g[0] == pytest.approx(0.375) and b[0] == pytest.approx(0.375) and b[1] == pytest.approx(0.0)
    assert cqaoa.slack_weights(5) == [1, 2, 2]
    assert cqaoa.register_size(-3, 5) == 4


def test_memory_cap_raises():
    with pytest.raises(cqaoa.MemoryCapExceeded):
        cqaoa.Model(small_pp(), method="qubo", memory_cap=16)
