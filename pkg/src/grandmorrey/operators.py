"""Maximal operators, potentials and truncated singular integrals.

Every operator is an exact finite computation on a
:class:`~grandmorrey.space.Space`.  Points are cells, so kernels that blow up
on the diagonal get a cell-scale self term:

* ``potential_I`` uses the cell radius ``w_x**(1/gamma)`` as the self distance;
* ``potential_T`` uses the cell measure ``w_x`` as the self ball.

Off the diagonal, ``potential_T`` and :func:`kernel_check` measure the ball
``B(x, dist(x, y))`` as the closed ball minus the weight of ``y`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import EmptyGate
from .norms import _denominators, as_function, ball_contents

# kernel_check visits every triple up to this many points, then samples
EXHAUSTIVE_TRIPLES = 128
SAMPLED_TRIPLES = 2_000_000


def maximal(space, f):
    """Hardy-Littlewood maximal function over closed balls (``t = 0`` included)."""
    f = as_function(space, f)
    avg = ball_contents(space, np.abs(f) * space.weights) / _denominators(space, "measure", None)
    return avg.max(axis=1)


def fractional_maximal(space, f, gamma):
    """``sup_{t >= r_min} t**(-gamma) * sum_{dist(x,y) <= t} |f(y)| w_y``.

    Radii below ``r_min`` are clamped to ``r_min``; since ball contents are
    non-decreasing this gives the exact sup over ``t >= r_min``.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    f = as_function(space, f)
    vals = ball_contents(space, np.abs(f) * space.weights)
    return (vals / _denominators(space, "radius", gamma)).max(axis=1)


def kernel_ball_measures(space):
    """``mu B(x, dist(x, y))`` as closed ball minus ``w_y``; the diagonal holds ``w_x``."""
    closed_sorted = np.take_along_axis(space._cum_w, space._group_end, axis=1)
    closed = np.empty_like(closed_sorted)
    np.put_along_axis(closed, space._order, closed_sorted, axis=1)
    mu = closed - space.weights[None, :]
    np.fill_diagonal(mu, space.weights)
    return mu


def potential_I_kernel(space, alpha, gamma):
    if not 0 < alpha < gamma:
        raise ValueError(f"need 0 < alpha < gamma, got alpha={alpha}, gamma={gamma}")
    r = space.dist.copy()
    np.fill_diagonal(r, space.weights ** (1.0 / gamma))
    return r ** (alpha - gamma)


def potential_I(space, f, alpha, gamma):
    """Riesz-type potential ``sum_y f(y) w_y dist(x, y)**(alpha - gamma)``."""
    f = as_function(space, f)
    return potential_I_kernel(space, alpha, gamma) @ (f * space.weights)


def potential_T_kernel(space, alpha):
    if not 0 < alpha < 1:
        raise ValueError(f"need 0 < alpha < 1, got {alpha}")
    return kernel_ball_measures(space) ** (alpha - 1.0)


def potential_T(space, f, alpha):
    """Measure potential ``sum_y f(y) w_y mu B(x, dist(x, y))**(alpha - 1)``."""
    f = as_function(space, f)
    return potential_T_kernel(space, alpha) @ (f * space.weights)


# --------------------------------------------------------------------------
# moduli of continuity

class PowerModulus:
    """``omega(t) = t**s``."""

    def __init__(self, s):
        if s <= 0:
            raise ValueError("power modulus needs s > 0")
        self.s = float(s)
        self.name = f"t^{self.s:g}"

    def __call__(self, t):
        return np.asarray(t, dtype=float) ** self.s


class TableModulus:
    """Piecewise-linear modulus through tabulated points on ``(0, 1]``.

    Below the first node the modulus is continued linearly to 0.
    """

    def __init__(self, t, values):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != values.shape or t.size < 2:
            raise ValueError("table modulus needs matching 1-d arrays")
        if np.any(np.diff(t) <= 0) or t[0] <= 0 or t[-1] > 1:
            raise ValueError("nodes must increase inside (0, 1]")
        if np.any(values <= 0) or np.any(np.diff(values) < 0):
            raise ValueError("modulus must be positive and non-decreasing")
        self.t, self.values = t, values
        self.name = f"table({t.size})"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        head = self.values[0] * t / self.t[0]
        return np.where(t < self.t[0], head, np.interp(t, self.t, self.values))


def dini_integral(omega):
    """``int_0^1 omega(t) / t dt``, integrated in ``u = log t``."""
    val, _ = integrate.quad(lambda u: float(omega(np.exp(u))), -np.inf, 0.0,
                            epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def delta2_constant(omega, tmax=0.5, num=400):
    t = np.geomspace(1e-8, tmax, num)
    return float(np.max(omega(2 * t) / omega(t)))


# --------------------------------------------------------------------------
# Calderon-Zygmund kernels

@dataclass(frozen=True, eq=False)
class KernelSpec:
    """Pairwise kernel with its smoothness modulus and declared constants.

    ``assumed_p0_bound`` is the declared ``L^2`` bound of the operator
    (``None`` when not declared); ``c_triple`` is the constant of the
    smoothness gate ``dist(x2, y) > c_triple * dist(x1, x2)``.
    """

    k: np.ndarray
    omega: Callable = field(default_factory=lambda: PowerModulus(1.0))
    assumed_p0_bound: Optional[float] = None
    c_triple: float = 2.0
    name: str = "kernel"

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValueError("kernel table must be square")
        np.fill_diagonal(k, 0.0)
        if not np.all(np.isfinite(k)):
            raise ValueError("kernel values must be finite off the diagonal")
        if self.c_triple < 1:
            raise ValueError("c_triple must be >= 1")
        k.flags.writeable = False
        object.__setattr__(self, "k", k)

    def describe(self):
        return {"name": self.name, "omega": getattr(self.omega, "name", "custom"),
                "c_triple": self.c_triple, "assumed_p0_bound": self.assumed_p0_bound}


def hilbert_kernel(space, c_triple=None, assumed_p0_bound=None):
    """Discrete Hilbert kernel ``1/(x - y)`` on a space with 1-d coordinates."""
    if space.coords is None or space.coords.ndim != 1:
        raise ValueError("the Hilbert kernel needs one coordinate per point")
    x = space.coords
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    k = 1.0 / diff
    return KernelSpec(k, PowerModulus(1.0), assumed_p0_bound,
                      2.0 * space.a1 if c_triple is None else c_triple,
                      name="hilbert")


@dataclass(frozen=True)
class OperatorResult:
    values: np.ndarray
    meta: dict


def _truncated(space, kernel, delta):
    if delta < 0:
        raise ValueError("truncation delta must be >= 0")
    if kernel.k.shape != space.dist.shape:
        raise ValueError("kernel and space sizes differ")
    return np.where(space.dist > delta, kernel.k, 0.0)


def cz_apply(space, f, kernel, delta=0.0):
    """Truncated singular integral ``sum_{dist(x,y) > delta} k(x, y) f(y) w_y``."""
    f = as_function(space, f)
    values = _truncated(space, kernel, delta) @ (f * space.weights)
    return OperatorResult(values, {"delta": float(delta), "kernel": kernel.name})


def cz_adjoint(space, g, kernel, delta=0.0):
    """Adjoint of :func:`cz_apply` for the ``w``-weighted inner product."""
    g = as_function(space, g)
    return _truncated(space, kernel, delta).T @ (g * space.weights)


def weighted_kernel_matrix(space, kernel, delta=0.0):
    """``W^(1/2) K_delta W^(1/2)``: its spectral norm is the ``L^2(w)`` norm of the operator."""
    s = np.sqrt(space.weights)
    return s[:, None] * _truncated(space, kernel, delta) * s[None, :]


@dataclass(frozen=True)
class KernelCheck:
    c_size: float
    c_smooth: float
    dini_value: float
    delta2: float
    gate_count: int
    exhaustive: bool


def kernel_check(space, kernel, seed=0):
    """Measure the size, smoothness and Dini constants of ``kernel``.

    Smoothness is checked on every triple ``(x1, x2, y)`` of distinct points
    with ``dist(x2, y) > c_triple * dist(x1, x2)`` when the space is small,
    and on a fixed-seed sample of triples otherwise.
    """
    k = kernel.k
    n = space.n
    mu = kernel_ball_measures(space)
    off = ~np.eye(n, dtype=bool)
    c_size = float(np.max(np.abs(k[off]) * mu[off]))

    d = space.dist
    c_smooth, count = 0.0, 0
    exhaustive = n <= EXHAUSTIVE_TRIPLES
    if exhaustive:
        for x2 in range(n):
            # rows: x1, cols: y
            gate = d[x2][None, :] > kernel.c_triple * d[:, x2][:, None]
            gate &= off & off[x2][None, :] & off[:, x2][:, None]
            if not gate.any():
                continue
            x1, y = np.nonzero(gate)
            c_smooth = max(c_smooth, _smooth_ratio(kernel, d, mu, x1, np.full_like(x1, x2), y))
            count += x1.size
    else:
        rng = np.random.default_rng(seed)
        x1, x2, y = rng.integers(0, n, (3, SAMPLED_TRIPLES))
        keep = (x1 != x2) & (x2 != y) & (x1 != y)
        keep &= d[x2, y] > kernel.c_triple * d[x1, x2]
        x1, x2, y = x1[keep], x2[keep], y[keep]
        count = int(x1.size)
        if count:
            c_smooth = _smooth_ratio(kernel, d, mu, x1, x2, y)
    if count == 0:
        raise EmptyGate("no triple passes the smoothness gate")
    return KernelCheck(c_size, c_smooth, dini_integral(kernel.omega),
                       delta2_constant(kernel.omega), count, exhaustive)


def _smooth_ratio(kernel, d, mu, x1, x2, y):
    k = kernel.k
    lhs = np.abs(k[x1, y] - k[x2, y]) + np.abs(k[y, x1] - k[y, x2])
    scale = kernel.omega(d[x2, x1] / d[x2, y]) / mu[x2, y]
    return float(np.max(lhs / scale))
