import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdsurrogate.accelerated import complexity_constants
from fdsurrogate.base_solver import BUDGET_EXHAUSTED, NEAR_STATIONARY, solve_base
from fdsurrogate.benchmark.problems import convex_quadratics, default_suite, quadratic
from fdsurrogate.core import Oracle, SolverConfig

from reference_impl import reference_base


def _run(problem, budget, cfg=SolverConfig()):
    o = Oracle(problem.objective, problem.n, budget=budget)
    x, trace = solve_base(o, problem.x0, cfg)
    return o, x, trace


def test_sphere_golden():
    o = Oracle(lambda x: float(x @ x), 2, budget=10 ** 5)
    x_best, trace = solve_base(o, np.array([10.0, 10.0]), SolverConfig())
    assert trace.status == NEAR_STATIONARY
    # frozen reference run
    assert trace.iterations == 1
    assert o.eval_count == 127
    assert [r.i_k for r in trace.records] == [1, None]
    assert trace.final.x.tolist() == [-7.050880572734286e-07, -7.050880572734286e-07]
    assert trace.final.f_x == 9.942983370192356e-13
    assert np.linalg.norm(2 * trace.final.x) <= 1e-5
    assert o.best_f <= trace.final.f_x and np.array_equal(x_best, o.best_x)


@pytest.mark.parametrize("idx", range(8))
def test_matches_reference_loop(idx):
    p = default_suite()[idx]
    budget = 40 * (p.n + 1)
    o, _, trace = _run(p, budget)
    iterates, status, evals = reference_base(lambda z: p.objective(np.array(z)), p.x0, budget)
    assert trace.status == status
    assert o.eval_count == evals
    assert len(trace.records) == len(iterates)
    for rec, (x, fx, sigma, cum) in zip(trace.records, iterates):
        assert rec.x.tolist() == x
        assert rec.f_x == fx and rec.sigma == sigma and rec.cum_fe == cum


def test_linear_objective_exhausts_budget():
    o = Oracle(lambda x: float(x[0]), 1, budget=50)
    _, trace = solve_base(o, np.array([0.0]), SolverConfig())
    assert trace.status == BUDGET_EXHAUSTED
    f = [r.f_x for r in trace.records]
    assert all(b < a for a, b in zip(f, f[1:]))
    assert o.eval_count == 50


@pytest.mark.parametrize("idx", range(0, 26, 3))
def test_fe_accounting_identity(idx):
    p = default_suite()[idx]
    o, _, trace = _run(p, 30 * (p.n + 1))
    assert trace.total_evals == o.eval_count
    for r in trace.completed:
        # (i_k + 1) n differences; one center at start; one trial per level that passed the norm test
        assert r.fd_evals == (r.i_k + 1) * p.n
        assert 1 <= r.trial_evals <= r.i_k + 1
        assert r.surrogate_evals == 0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 1000), n=st.integers(1, 6), cond=st.floats(1.0, 200.0),
       sigma0=st.sampled_from([0.5, 1.0, 10.0]))
def test_sigma_bound_and_decrease_on_quadratics(seed, n, cond, sigma0):
    p = quadratic("q", np.geomspace(1.0, cond, n), rotate_seed=seed)
    cfg = SolverConfig(sigma0=sigma0)
    o, _, trace = _run(p, 200 * (n + 1), cfg)
    L = p.lipschitz
    sigma_max, C_f, _ = complexity_constants(L, cfg)
    for a, b in zip(trace.records, trace.records[1:]):
        gnorm = np.linalg.norm(p.gradient(a.x))
        assert a.sigma >= cfg.sigma_min
        assert b.f_x < a.f_x
        if gnorm > cfg.epsilon:
            assert a.sigma <= sigma_max
            assert a.f_x - b.f_x >= gnorm ** 2 / (2 * C_f)


def test_complexity_constants():
    cfg = SolverConfig()
    sigma_max, C_f, C_max = complexity_constants(4.0, cfg)
    assert sigma_max == 16.0
    assert C_f == pytest.approx(81 / 8 * max(16.0, 16.0 / 1e-2))
    assert C_max == max(C_f, 12.5 * 16.0)


def test_already_stationary_start():
    p = convex_quadratics()[1]
    o = Oracle(p.objective, p.n, budget=10 ** 4)
    _, trace = solve_base(o, np.zeros(p.n), SolverConfig())
    assert trace.status == NEAR_STATIONARY and trace.iterations == 0
    rec = trace.records[0]
    assert rec.fd_evals == 60 * p.n
    assert o.eval_count == 1 + rec.fd_evals + rec.trial_evals
