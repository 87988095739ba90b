import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grandmorrey import operators as O
from grandmorrey.space import build_space, estimate_ahlfors, gen_cantor, gen_interval, gen_random
from grandmorrey.errors import EmptyGate

import oracles


def two_point():
    return build_space([[0, 1], [1, 0]], [0.5, 0.5])


def rng_pair(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n), rng.standard_normal(n)


def test_maximal_examples():
    sp = gen_interval(4)
    np.testing.assert_allclose(O.maximal(sp, [1, 0, 0, 0]), [1, 1 / 3, 1 / 4, 1 / 4])
    np.testing.assert_allclose(O.maximal(sp, np.full(4, -2.5)), 2.5)


@pytest.mark.parametrize("sp", [gen_interval(9), gen_cantor(3), gen_random(11, 2)])
def test_maximal_matches_brute(sp):
    f = np.random.default_rng(0).standard_normal(sp.n)
    want = oracles.maximal_brute(np.asarray(sp.dist).tolist(), list(sp.weights), f)
    np.testing.assert_allclose(O.maximal(sp, f), want, rtol=1e-12)


def test_fractional_maximal_examples():
    sp = gen_interval(4)
    assert O.fractional_maximal(sp, np.zeros(4), 1.0).max() == 0
    assert O.fractional_maximal(sp, np.ones(4), 1.0)[0] == pytest.approx(2.0)


def test_fractional_maximal_dominated():
    sp = gen_interval(32)
    b_upper, _ = estimate_ahlfors(sp, 1.0)
    f = np.random.default_rng(3).standard_normal(32)
    assert np.all(O.fractional_maximal(sp, f, 1.0) <= b_upper * O.maximal(sp, f) * (1 + 1e-12))


def test_dense_radii_change_nothing():
    sp = gen_random(10, seed=6)
    f = np.random.default_rng(6).standard_normal(10)
    d, w = np.asarray(sp.dist), np.asarray(sp.weights)
    radii = np.linspace(0, sp.diam, 10 * 10 * 10)
    radii = np.union1d(radii, d.ravel())
    M = np.zeros(10)
    Mf = np.zeros(10)
    for x in range(10):
        for t in radii:
            B = d[x] <= t
            mu = w[B].sum()
            avg = np.sum(np.abs(f[B]) * w[B])
            M[x] = max(M[x], avg / mu)
            Mf[x] = max(Mf[x], avg / max(t, sp.r_min) ** 0.8)
    np.testing.assert_allclose(O.maximal(sp, f), M, rtol=1e-12)
    np.testing.assert_allclose(O.fractional_maximal(sp, f, 0.8), Mf, rtol=1e-12)


def test_potentials_two_point():
    sp = two_point()
    np.testing.assert_allclose(O.potential_I(sp, [1, 0], 0.5, 1.0), [2 ** -0.5, 0.5])
    np.testing.assert_allclose(O.potential_T(sp, [1, 0], 0.5), [2 ** -0.5, 2 ** -0.5])


def test_cz_two_cell_example():
    sp = gen_interval(2)
    k = O.hilbert_kernel(sp)
    np.testing.assert_allclose(O.cz_apply(sp, [0, 1], k, 0.1).values, [-1, 0])


def test_cz_antisymmetry():
    sp = gen_interval(20)
    k = O.hilbert_kernel(sp)
    f, g = rng_pair(20, 1)
    w = sp.weights
    lhs = np.sum(w * O.cz_apply(sp, f, k).values * g)
    rhs = -np.sum(w * f * O.cz_apply(sp, g, k).values)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)
    adj = O.cz_adjoint(sp, g, k)
    assert np.sum(w * O.cz_apply(sp, f, k).values * g) == pytest.approx(np.sum(w * f * adj), rel=1e-12)


def test_cz_meta_and_truncation():
    sp = gen_interval(16)
    k = O.hilbert_kernel(sp)
    f = np.ones(16)
    full = O.cz_apply(sp, f, k)
    trunc = O.cz_apply(sp, f, k, delta=0.2)
    assert not np.allclose(full.values, trunc.values)
    assert trunc.meta["delta"] == 0.2


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 16), seed=st.integers(0, 10_000), a=st.floats(-3, 3),
       alpha=st.floats(0.05, 0.45))
def test_linearity_and_homogeneity(n, seed, a, alpha):
    sp = gen_random(n, seed)
    f, g = rng_pair(n, seed)
    d = np.asarray(sp.dist)
    table = np.divide(np.sign(np.subtract.outer(range(n), range(n))), d,
                      out=np.zeros((n, n)), where=d > 0)
    k = O.KernelSpec(table, O.PowerModulus(1.0))
    for op in (lambda h: O.potential_I(sp, h, alpha, 1.0),
               lambda h: O.potential_T(sp, h, alpha),
               lambda h: O.cz_apply(sp, h, k).values):
        np.testing.assert_allclose(op(a * f + g), a * op(f) + op(g), rtol=1e-10, atol=1e-10)
    for op in (lambda h: O.maximal(sp, h), lambda h: O.fractional_maximal(sp, h, 0.7)):
        np.testing.assert_allclose(op(-2 * f), 2 * op(f), rtol=1e-12)
        assert np.all(op(f + g) <= (op(f) + op(g)) * (1 + 1e-12))
    Mf = O.maximal(sp, f)
    assert np.all(Mf >= np.abs(f) * (1 - 1e-12)) and np.all(Mf <= np.abs(f).max() * (1 + 1e-12))
    pos = np.abs(f)
    assert np.all(O.potential_I(sp, pos, alpha, 1.0) >= 0)
    assert np.all(O.potential_T(sp, pos, alpha) > 0)


def test_moduli():
    assert O.dini_integral(O.PowerModulus(1.0)) == pytest.approx(1.0, abs=1e-6)
    assert O.dini_integral(O.PowerModulus(0.5)) == pytest.approx(2.0, abs=1e-6)
    assert O.delta2_constant(O.PowerModulus(0.7)) == pytest.approx(2 ** 0.7)
    t = np.linspace(0.01, 1, 50)
    tab = O.TableModulus(t, t)
    assert O.dini_integral(tab) == pytest.approx(1.0, abs=1e-2)


def test_hilbert_kernel_check():
    sp = gen_interval(32)
    rep = O.kernel_check(sp, O.hilbert_kernel(sp))
    assert rep.c_size <= 3 and np.isfinite(rep.c_smooth)
    assert rep.dini_value == pytest.approx(1.0, abs=1e-6)
    assert rep.delta2 == pytest.approx(2.0)
    assert rep.gate_count > 0 and rep.exhaustive


def test_kernel_check_empty_gate():
    sp = two_point()
    k = O.KernelSpec(np.array([[0, 1.0], [-1.0, 0]]), O.PowerModulus(1.0), c_triple=100.0)
    with pytest.raises(EmptyGate):
        O.kernel_check(sp, k)


def test_model_kernel_bounded_by_svd():
    sp = gen_interval(24)
    for delta in (0.0, 0.1):
        k = O.hilbert_kernel(sp)
        bound = oracles.l2_operator_norm(lambda f: O.cz_apply(sp, f, k, delta).values,
                                         sp.weights)
        k = O.hilbert_kernel(sp, assumed_p0_bound=bound)
        rng = np.random.default_rng(2)
        for _ in range(30):
            f = rng.standard_normal(24)
            Tf = O.cz_apply(sp, f, k, delta).values
            ratio = np.sqrt(np.sum(sp.weights * Tf ** 2) / np.sum(sp.weights * f ** 2))
            assert ratio <= k.assumed_p0_bound * (1 + 1e-12)
