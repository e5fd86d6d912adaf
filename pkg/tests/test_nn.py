import numpy as np
import pytest

from fdsurrogate.core import GradDataset, Oracle, ValueDataset
from fdsurrogate.families import NnFamily
from fdsurrogate.nn import (ACTIVATIONS, LbfgsConfig, NnSurrogate, get_activation, init_nn,
                            lbfgs, loss_gradient_theta, nn_loss, train_nn)
from fdsurrogate.surrogate import TrainingProblem, loss

from conftest import central_diff, rel_err

ACTS = sorted(ACTIVATIONS)


def _random_net(r, act, n=3, q=4, scale=1.0):
    return NnSurrogate(scale * r.normal(size=(q, n)), r.normal(size=q), r.normal(size=q),
                       r.normal(), get_activation(act))


def _random_problem(r, n=3, N=7, M=3, lam=0.0, sobolev=True):
    F, G = ValueDataset(cap=100), GradDataset(cap=10)
    for y in r.normal(size=(N, n)):
        F.insert(y, float(r.normal()))
    for z in r.normal(size=(M, n)):
        G.insert(z, r.normal(size=n), 1e-3)
    return TrainingProblem(F, G, lam=lam, sobolev=sobolev)


def test_zero_weights_constant():
    m = NnSurrogate(np.zeros((4, 2)), np.zeros(4), np.zeros(4), 1.25, get_activation("silu"))
    for x in np.random.default_rng(0).normal(size=(5, 2)):
        assert m.value(x) == 1.25
        assert np.all(m.spatial_gradient(x) == 0)


def test_softplus_unit_net():
    m = NnSurrogate([[1.0]], [0.0], [1.0], 0.0, get_activation("softplus"))
    assert m.value([0.0]) == pytest.approx(np.log(2.0), rel=1e-15)
    assert m.spatial_gradient([0.0])[0] == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("act", ACTS)
def test_activation_derivatives(act):
    a = get_activation(act)
    u = np.linspace(-30, 30, 41)
    d1 = np.array([central_diff(lambda z: float(a.f(z[0])), [v])[0] for v in u])
    d2 = np.array([central_diff(lambda z: float(a.d1(z[0])), [v])[0] for v in u])
    np.testing.assert_allclose(a.d1(u), d1, atol=1e-7)
    np.testing.assert_allclose(a.d2(u), d2, atol=1e-7)
    assert np.all(np.isfinite(a.f(np.array([-800.0, 800.0]))))


@pytest.mark.parametrize("act", ACTS)
def test_spatial_gradient_matches_central_differences(act):
    r = np.random.default_rng(11)
    for _ in range(20):
        m = _random_net(r, act)
        x = r.normal(size=3)
        assert rel_err(m.spatial_gradient(x), central_diff(m.value, x)) <= 1e-6


@pytest.mark.parametrize("act", ACTS)
@pytest.mark.parametrize("sobolev", [True, False])
def test_theta_gradient_matches_central_differences(act, sobolev):
    r = np.random.default_rng(21 + sobolev)
    for _ in range(10):
        m = _random_net(r, act)
        prob = _random_problem(r, lam=1e-3, sobolev=sobolev)
        theta = m.parameters()

        def L(t):
            return nn_loss(NnSurrogate.from_parameters(t, m.n, m.q, m.activation), prob)

        assert rel_err(loss_gradient_theta(m, prob), central_diff(L, theta)) <= 1e-5


@pytest.mark.parametrize("act", ACTS)
def test_closed_form_loss_matches_generic_loss(act):
    r = np.random.default_rng(5)
    m = _random_net(r, act)
    prob = _random_problem(r, lam=0.1)
    assert nn_loss(m, prob) == pytest.approx(loss(m, prob), rel=1e-12)


def _fitted_problem(m, r, lam):
    # data generated by m itself, so every residual vanishes
    F, G = ValueDataset(cap=100), GradDataset(cap=10)
    for y in r.normal(size=(6, m.n)):
        F.insert(y, m.value(y))
    for z in r.normal(size=(3, m.n)):
        G.insert(z, m.spatial_gradient(z), 1e-3)
    return TrainingProblem(F, G, lam=lam)


def test_perfect_fit_gradient_zero_and_lambda_only():
    r = np.random.default_rng(8)
    m = _random_net(r, "softplus")
    assert np.max(np.abs(loss_gradient_theta(m, _fitted_problem(m, r, 0.0)))) <= 1e-12
    g = loss_gradient_theta(m, _fitted_problem(m, r, 0.3))
    np.testing.assert_allclose(g, 0.6 * m.parameters(), atol=1e-12)


@pytest.mark.parametrize("act", ACTS)
def test_constant_data_trains_to_tiny_loss(act):
    F, G = ValueDataset(cap=50), GradDataset(cap=10)
    r = np.random.default_rng(0)
    for y in r.normal(size=(12, 2)):
        F.insert(y, 3.0)
    for z in r.normal(size=(3, 2)):
        G.insert(z, np.zeros(2), 1e-3)
    prob = TrainingProblem(F, G, lam=0.0)
    init = init_nn(2, act, seed=0)
    # the relative stopping rule leaves the loss near 1e-7 on this data
    model = train_nn(init, prob)
    info = model.fit_info
    assert info.status == "converged"
    assert info.grad_norm <= 1e-6 * max(1.0, info.initial_grad_norm)
    assert nn_loss(model, prob) <= 1e-6
    tight = train_nn(init, prob, LbfgsConfig(grad_tol_rel=1e-8))
    assert nn_loss(tight, prob) <= 1e-8


def test_optimal_init_returns_immediately():
    r = np.random.default_rng(9)
    m = _random_net(r, "sigmoid")
    out = train_nn(m, _fitted_problem(m, r, 0.0))
    assert out.fit_info.iterations == 0
    assert out.fit_info.status == "converged"
    np.testing.assert_array_equal(out.parameters(), m.parameters())


@pytest.mark.parametrize("act", ACTS)
def test_loss_history_non_increasing(act):
    r = np.random.default_rng(2)
    init = init_nn(3, act, seed=1)
    prob = _random_problem(r, lam=1e-4)
    out = train_nn(init, prob, LbfgsConfig(max_iters=200))
    h = np.array(out.fit_info.history)
    assert np.all(np.diff(h) <= 0)
    assert h[-1] < h[0]
    assert out.fit_info.iterations == len(h) - 1


def test_lbfgs_rosenbrock():
    def fun(x):
        a, b = x
        f = (1 - a) ** 2 + 100 * (b - a * a) ** 2
        return f, np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)])

    res = lbfgs(fun, np.array([-1.2, 1.0]), LbfgsConfig(max_iters=1000))
    assert res.status == "converged"
    np.testing.assert_allclose(res.x, [1.0, 1.0], atol=1e-5)


def test_init_shapes_and_determinism():
    a, b = init_nn(2, "softplus", seed=42), init_nn(2, "softplus", seed=42)
    assert a.W1.shape == (10, 2)
    assert np.array_equal(a.parameters(), b.parameters())
    assert np.all(a.b1 == 0) and a.b2 == 0


def test_he_std():
    draws = np.concatenate([init_nn(4, "softplus", seed=s).W1.ravel() for s in range(125)])
    assert draws.size == 10_000
    assert abs(draws.std() / np.sqrt(2 / 4) - 1) <= 0.1


def test_glorot_bound():
    m = init_nn(3, "sigmoid", seed=0)
    assert np.max(np.abs(m.W1)) <= np.sqrt(6 / (3 + 15))


def test_warm_start_and_no_oracle_calls():
    r = np.random.default_rng(1)
    oracle = Oracle(lambda x: float(np.sum(x ** 2)), 2)
    fam = NnFamily("silu", sobolev=True, seed=3, lbfgs=LbfgsConfig(max_iters=50))
    F, G = ValueDataset(cap=30), GradDataset(cap=10)
    for y in r.normal(size=(5, 2)):
        F.insert(y, oracle(y))
    G.insert(np.zeros(2), np.zeros(2), 1e-3)
    before = oracle.eval_count
    first = fam.train(F, G)
    np.testing.assert_array_equal(fam.last_input, init_nn(2, "silu", seed=3).parameters())
    F.insert([0.5, 0.5], oracle([0.5, 0.5]))
    before = oracle.eval_count
    fam.train(F, G)
    assert oracle.eval_count == before
    np.testing.assert_array_equal(fam.last_input, first.parameters())
    assert fam.calls == 2
