import math

import pytest

import fracdrift as fd


def test_fbm_covariance():
    assert fd.fbm_covariance(1.0, 1.0, 0.75) == pytest.approx(1.0)
    assert fd.fbm_covariance(1.0, 2.0, 0.75) == pytest.approx(math.sqrt(2.0))
    with pytest.raises(Exception):
        fd.fbm_covariance(1.0, 1.0, 0.5)


def test_sampling_and_euler():
    grid = fd.TimeGrid(1.0, 64)
    paths = fd.sample_fbm(grid, 0.75, 42, 2)
    assert len(paths) == 2
    assert paths[0].values[0] == 0.0
    assert paths[0].values == fd.sample_fbm(grid, 0.75, 42, 2)[0].values

    drift = fd.make_drift("linear", [-1.0])
    config = fd.SdeConfig(drift, 1.0, 0.5, grid, 0.75)
    path = fd.euler_solve(config, paths[0])
    assert len(path.values) == 65
    assert path.values[0] == 1.0


def test_coupled_and_surrogate():
    grid = fd.TimeGrid(1.0, 64)
    noise = fd.sample_fbm(grid, 0.75, 7, 1)[0]
    config = fd.SdeConfig(fd.make_drift("linear", [-1.0]), 1.0, 0.5, grid, 0.75)
    coupled = fd.coupled_solve(config, 1e-3, noise)
    diffs = [h - l for h, l in zip(coupled.X_high.values, coupled.X_low.values)]
    assert all(d > 0 for d in diffs)

    cache = fd.KernelCache(grid, 0.75)
    s = fd.skorokhod_surrogate(coupled, lambda x: 1.0, lambda x: 0.0, 0.5, cache)
    assert s == pytest.approx(coupled.X_low.values[-1] - coupled.X_low.values[0])


def test_basis_and_rules():
    spec = fd.BasisSpec.trig(-2.0, 2.0, 5)
    phi = fd.eval_basis(spec, 0.3)
    assert len(phi) == 5
    assert phi[0] == pytest.approx(0.5)
    assert fd.eval_basis(spec, 5.0) == [0.0] * 5

    assert fd.epsilon_rule(100, 1.0) == pytest.approx(0.0046052, rel=1e-4)
    assert fd.m_opt(fd.BasisKind.trigonometric, 1000, 1.0, 0.75, 1.0, 1.0) == 3


def test_run_trial():
    config = fd.TrialConfig()
    config.N_train = 20
    config.n = 32
    config.basis = fd.BasisSpec.trig(-2.0, 2.0, 1)
    a = fd.run_trial(config, 0)
    b = fd.run_trial(config, 0)
    assert a.weighted_risk_holdout == b.weighted_risk_holdout
    assert a.m_used == 1


def test_ou_variance_reduction():
    assert fd.ou_variance(0.0, 1.0, 0.75, 0.5) == pytest.approx(0.25, rel=1e-8)
