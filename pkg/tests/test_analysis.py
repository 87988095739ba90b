import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grandmorrey import analysis as A
from grandmorrey.norms import GrandParams, MorreyParams, epsilon_grid
from grandmorrey.operators import cz_adjoint, cz_apply, hilbert_kernel, maximal
from grandmorrey.space import build_space, gen_cantor, gen_interval, gen_random, snowflake
from grandmorrey.errors import EmptyFamily, GridTooCoarse, InadmissibleParams, ZeroFunction

import oracles


def unit_space(kind, seed):
    if kind == 0:
        return gen_interval(4 + seed % 13)
    if kind == 1:
        return gen_cantor(1 + seed % 4)
    if kind == 2:
        return gen_random(3 + seed % 12, seed)
    return snowflake(gen_random(3 + seed % 10, seed), 0.5)


# exact sub-inequalities -----------------------------------------------------

def test_embeddings_constant_function():
    sp = gen_interval(8)
    res = A.check_embeddings(sp, np.ones(8), 2, 1, 2, K=512)
    assert all(c.passed and c.kappa == 1 for c in res)
    lp = next(c for c in res if c.name == "embedding_lp")
    assert lp.lhs == pytest.approx(0.999, abs=1e-3) and lp.rhs == pytest.approx(1.0)


def test_embeddings_signs_and_zero():
    sp = gen_interval(32)
    f = np.random.default_rng(0).choice([-1.0, 1.0], 32)
    assert all(c.passed for c in A.check_embeddings(sp, f, 1.5, 0.5, 1.5))
    res = A.check_embeddings(sp, np.zeros(32), 2, 1, 2)
    assert all(c.passed and c.lhs == 0 and c.rhs == 0 for c in res)


def test_embeddings_need_unit_measure():
    sp = gen_interval(4)
    double = build_space(sp.dist, np.asarray(sp.weights) * 2)
    with pytest.raises(InadmissibleParams):
        A.check_embeddings(double, np.ones(4), 2, 1, 2)


def test_sigma_split_constant():
    sp = gen_interval(8)
    c = A.check_sigma_split(sp, np.ones(8), 2, 1, 0, 0.5, K=512)
    assert c.passed
    assert c.lhs == pytest.approx(0.999 ** (1 / 1.001), rel=1e-9)
    assert c.rhs == pytest.approx(1.0, rel=1e-12)


def test_sigma_split_maximal_and_errors():
    sp = gen_interval(16)
    g = maximal(sp, np.random.default_rng(1).standard_normal(16))
    assert A.check_sigma_split(sp, g, 2.5, 1.0, 0.3, 0.4).passed
    grid = epsilon_grid(2, 8)
    with pytest.raises(GridTooCoarse):
        A.check_sigma_split(sp, g, 2, 1, 0, (grid[-1] + 1) / 2, eps_grid=grid)
    with pytest.raises(GridTooCoarse):
        A.check_sigma_split(sp, g, 2, 1, 0, grid[0] / 2, eps_grid=grid)


@settings(max_examples=80, deadline=None)
@given(kind=st.integers(0, 3), seed=st.integers(0, 10_000), p=st.floats(1.1, 4),
       theta=st.floats(0.1, 3), lam=st.floats(0, 0.9), frac=st.floats(0.05, 0.9))
def test_sigma_split_property(kind, seed, p, theta, lam, frac):
    sp = unit_space(kind, seed)
    g = np.abs(np.random.default_rng(seed).standard_normal(sp.n)) ** 3
    grid = epsilon_grid(p, 16)
    sigma = float(np.clip(frac * (p - 1), grid[0], grid[-2]))
    assert A.check_sigma_split(sp, g, p, theta, lam, sigma, eps_grid=grid).passed


@settings(max_examples=80, deadline=None)
@given(kind=st.integers(0, 3), seed=st.integers(0, 10_000), p=st.floats(1.1, 4),
       t1=st.floats(0.1, 2), dt=st.floats(0.01, 2))
def test_embeddings_property(kind, seed, p, t1, dt):
    sp = unit_space(kind, seed)
    f = np.random.default_rng(seed).standard_normal(sp.n) * 10 ** (seed % 5 - 2)
    assert all(c.passed for c in A.check_embeddings(sp, f, p, t1, t1 + dt, K=16))


def test_hedberg_examples():
    sp = gen_interval(16)
    sob = A.SobolevParams(2, 0.25, 0, 1.0)
    c = A.check_hedberg(sp, np.ones(16), sob)
    assert c.rhs == pytest.approx(16) and c.kappa == 4 and c.passed
    assert c.witness["kappa_needed"] == pytest.approx(c.lhs / 16)
    e = np.zeros(16)
    e[5] = 1
    assert A.check_hedberg(sp, e, sob).passed
    assert A.check_hedberg(sp, e, A.SobolevParams(2, 0.25, 0)).passed
    with pytest.raises(ZeroFunction):
        A.check_hedberg(sp, np.zeros(16), sob)


def test_sobolev_params():
    s = A.SobolevParams(2, 0.25, 0, 1.0, theta1=1)
    assert s.q == pytest.approx(4) and s.theta2 == pytest.approx(2) and s.mode == "I"
    t = A.SobolevParams(2, 0.1, 0.3)
    assert t.mode == "T" and t.C_alpha == pytest.approx(40)
    with pytest.raises(InadmissibleParams):
        A.SobolevParams(2, 0.6, 0, 1.0)
    with pytest.raises(InadmissibleParams):
        A.SobolevParams(2, 0.25, 0, 1.0, q=5)


# operator norm estimation ----------------------------------------------------

def test_identity_and_maximal_ratios():
    sp = gen_interval(16)
    gp = GrandParams(2, 0.3, 1)
    fam = A.gen_test_family(sp, "gaussian", 10, 0)
    assert A.estimate_operator_norm(sp, lambda f: f, gp, gp, fam).sup_ratio == pytest.approx(1)
    pos = [np.abs(f) for f in fam]
    assert A.estimate_operator_norm(sp, lambda f: maximal(sp, f), gp, gp, pos).sup_ratio >= 1
    with pytest.raises(EmptyFamily):
        A.estimate_operator_norm(sp, lambda f: f, gp, gp, [])


def test_scale_invariance():
    sp = gen_interval(16)
    gp = GrandParams(2.5, 0.2, 1.5)
    fam = A.gen_test_family(sp, "mixed", 12, 3)
    a = A.estimate_operator_norm(sp, lambda f: maximal(sp, f), gp, gp, fam)
    b = A.estimate_operator_norm(sp, lambda f: maximal(sp, f), gp, gp, [3 * f for f in fam])
    assert b.sup_ratio == pytest.approx(a.sup_ratio, rel=1e-12)


def test_l2_estimate_matches_svd():
    sp = gen_interval(64)
    k = hilbert_kernel(sp)
    l2 = MorreyParams(2.0)
    fam = A.gen_test_family(sp, "gaussian", 200, 0)
    est = A.estimate_operator_norm(sp, lambda f: cz_apply(sp, f, k).values, l2, l2, fam,
                                   refine_steps=50, adjoint=lambda g: cz_adjoint(sp, g, k))
    svd = oracles.l2_operator_norm(lambda f: cz_apply(sp, f, k).values, sp.weights)
    assert abs(est.sup_ratio / svd - 1) <= 0.05
    assert est.sup_ratio <= svd * (1 + 1e-9)


def test_test_families():
    sp = gen_interval(32)
    ind = A.gen_test_family(sp, "indicators", 20, 1)
    assert all(set(np.unique(f)) <= {0.0, 1.0} for f in ind)
    a = A.gen_test_family(sp, "mixed", 9, 5)
    b = A.gen_test_family(sp, "mixed", 9, 5)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    # power members are r**(-beta) with r = 1/32 at (and next to) the center
    for f in A.gen_test_family(sp, "powers", 20, 2, p=2, gamma=1, lam=0):
        beta = np.log(f.max()) / np.log(32)
        assert 0 < beta < 0.5
    with pytest.raises(ValueError):
        A.gen_test_family(sp, "chirps", 3, 0)


def test_phi_flatness():
    assert A.phi_flatness(2, 0.25, 0, 1.0) <= 0.05


def test_calibration_is_fixed():
    assert A.calibrate_c0() == A.calibrate_c0()
    assert 0.5 < A.calibrate_c0() < 3


# theorem runs ------------------------------------------------------------------

def test_verify_maximal_passes():
    sp = gen_interval(32)
    fam = A.gen_test_family(sp, "mixed", 50, 1)
    rep = A.verify_theorem(sp, "2.1", {"p": 2, "theta": 1, "lam": 0.3}, fam)
    assert rep.passed
    assert "sup_ratio" in rep.scalars and "inf_S" in rep.scalars
    assert rep.check("maximal_constant").lhs == pytest.approx(rep.scalars["sup_ratio"])


def test_verify_potential_I_exponents():
    sp = gen_interval(32)
    fam = A.gen_test_family(sp, "mixed", 20, 1)
    rep = A.verify_theorem(sp, 4.1, {"p": 2, "alpha": 0.25, "lam": 0, "gamma": 1,
                                     "theta1": 1}, fam)
    assert rep.scalars["theta2"] == pytest.approx(2.0)
    assert rep.check("phi_asymptotic").passed
    assert "sup_ratio_half_theta2" in rep.scalars
    assert rep.scalars["eta_pairs_valid"] + rep.scalars["eta_pairs_skipped"] == 64


def test_verify_potential_T_reports_C_alpha():
    sp = gen_interval(32)
    fam = A.gen_test_family(sp, "mixed", 20, 1)
    rep = A.verify_theorem(sp, "5.1", {"p": 2, "alpha": 0.2, "lam": 0.3, "theta": 1}, fam)
    assert rep.scalars["C_alpha"] == pytest.approx(20)
    assert rep.check("hedberg_T").passed


def test_verify_errors():
    sp = gen_interval(16)
    fam = A.gen_test_family(sp, "mixed", 8, 1)
    with pytest.raises(InadmissibleParams):
        A.verify_theorem(sp, "3.1", {"p": 2, "theta": 1, "lam": 0}, fam)
    with pytest.raises(InadmissibleParams):
        A.verify_theorem(sp, "4.1", {"p": 2, "alpha": 0.25, "lam": 0}, fam)  # no gamma
    with pytest.raises(InadmissibleParams):
        A.verify_theorem(sp, "9.9", {"p": 2}, fam)
    with pytest.raises(InadmissibleParams):
        A.verify_theorem(sp, "2.1", {"p": 1.0}, fam)
