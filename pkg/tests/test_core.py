import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdsurrogate.core import (BudgetExhausted, DimensionMismatch, GradDataset, NonPositiveInput,
                              Oracle, SolverConfig, ValueDataset, insert_grad, insert_value,
                              read_trace_csv)
from fdsurrogate import solve_base

from conftest import sphere


def test_oracle_counts_and_values():
    o = Oracle(sphere, 2)
    assert o.evaluate([0.0, 0.0]) == 0.0
    assert o.eval_count == 1
    assert o([1.0, 2.0]) == 5.0
    assert o.eval_count == 2
    assert o.history == [0.0, 5.0]
    assert o.best_f == 0.0


def test_oracle_budget():
    o = Oracle(sphere, 2, budget=1)
    o.evaluate([1.0, 1.0])
    with pytest.raises(BudgetExhausted):
        o.evaluate([1.0, 1.0])
    assert o.eval_count == 1


def test_oracle_dimension_mismatch():
    o = Oracle(sphere, 2)
    with pytest.raises(DimensionMismatch):
        o.evaluate([1.0, 2.0, 3.0])
    assert o.eval_count == 0


def test_value_dataset_fifo():
    ds = ValueDataset(cap=2)
    for i, p in enumerate(([0.0], [1.0], [2.0])):
        insert_value(ds, p, float(i))
    assert [p.tolist() for p in ds.points()] == [[1.0], [2.0]]
    assert ds.values().tolist() == [1.0, 2.0]


def test_value_dataset_duplicate_refreshes():
    ds = ValueDataset(cap=3)
    ds.insert([0.0, 1.0], 1.0).insert([5.0, 5.0], 2.0).insert([0.0, 1.0], 7.0)
    assert len(ds) == 2
    assert ds.points()[-1].tolist() == [0.0, 1.0]
    assert ds.values().tolist() == [2.0, 7.0]


def test_value_dataset_single_insert():
    ds = ValueDataset(cap=5)
    ds.insert([3.0], 1.0)
    assert len(ds) == 1


def test_grad_dataset_cap_ten():
    ds = GradDataset(cap=10)
    for i in range(11):
        insert_grad(ds, [float(i), 0.0], [1.0, 2.0], 0.1)
    assert len(ds) == 10
    assert [0.0, 0.0] not in ds
    assert ds.points()[0].tolist() == [1.0, 0.0]


def test_grad_dataset_dimension_mismatch():
    ds = GradDataset(cap=10)
    assert len(ds.insert([0.0, 0.0], [1.0, 1.0], 0.1)) == 1
    with pytest.raises(DimensionMismatch):
        ds.insert([1.0, 0.0], [1.0, 1.0, 1.0], 0.1)


@settings(max_examples=60, deadline=None)
@given(cap=st.integers(1, 6),
       keys=st.lists(st.integers(0, 8), min_size=0, max_size=40))
def test_dataset_matches_reference_model(cap, keys):
    ds = ValueDataset(cap=cap)
    ref = []  # list of (key, value), oldest first
    for i, k in enumerate(keys):
        ds.insert([float(k)], float(i))
        ref = [e for e in ref if e[0] != k] + [(k, float(i))]
        ref = ref[-cap:]
        assert len(ds) <= cap
    assert [p[0] for p in ds.points()] == [float(k) for k, _ in ref]
    assert ds.values().tolist() == [v for _, v in ref]


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert (cfg.sigma0, cfg.sigma_min, cfg.rho, cfg.gamma, cfg.epsilon) == (1.0, 1e-2, 1e-4,
                                                                           12.5, 1e-5)
    assert cfg.value_cap(4) == 50
    assert cfg.cap_G == 10
    with pytest.raises(ValueError):
        SolverConfig(sigma0=1e-3, sigma_min=1e-2)
    with pytest.raises(NonPositiveInput):
        SolverConfig(epsilon=0.0)


def test_trace_csv_roundtrip(tmp_path):
    o = Oracle(sphere, 2, budget=60)
    _, trace = solve_base(o, np.array([3.0, -1.0]), SolverConfig())
    path = tmp_path / "t.csv"
    trace.to_csv(path)
    rows = read_trace_csv(path)
    assert path.read_text().splitlines()[0] == "k,i_k,sigma_k,t_k,f_xk,cum_fe"
    assert len(rows) == len(trace.records)
    for row, rec in zip(rows, trace.records):
        assert row["f_xk"] == rec.f_x
        assert row["cum_fe"] == rec.cum_fe
        assert row["i_k"] == rec.i_k


def test_nan_value_becomes_inf():
    o = Oracle(lambda x: float(np.exp(800.0 * x[0]) - np.exp(800.0 * x[0])), 1)
    assert o([1.0]) == np.inf
    assert o.history == [np.inf] and o.eval_count == 1
