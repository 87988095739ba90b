"""Lebesgue, Morrey and grand Morrey norms on a :class:`~grandmorrey.space.Space`.

All sups over balls are exact: ball contents only change at the distances
stored in the space, so the maximum over ``(x, t)`` is a maximum over a
finite table.  Two denominators are supported:

``"measure"``
    ``mu B(x, t) ** lam`` (the ``L^{p,lam}`` scale);
``"radius"``
    ``max(t, r_min) ** (gamma * lam)`` (the radius-normalized scale used
    with Ahlfors-regular measures).

The sup over the exponent shift ``eps`` in ``(0, p - 1)`` is taken over a
finite log-spaced grid, so grand norms are certified lower bounds of the
continuum sup; the attaining ``eps`` is always available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_K = 64
MODES = ("measure", "radius")
_CHUNK_ELEMENTS = 1 << 21


def as_function(space, f):
    """Return ``f`` as a float array bound to ``space`` (length and finiteness checked)."""
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise ValueError(f"function has shape {f.shape}, space has {space.n} points")
    if not np.all(np.isfinite(f)):
        raise ValueError("function values must be finite")
    return f


def epsilon_grid(p, K=DEFAULT_K):
    """``K`` log-spaced points from ``1e-3 (p-1)`` to ``(1 - 1e-3)(p-1)``."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    if K < 2:
        raise ValueError("need at least two grid points")
    return np.geomspace(1e-3 * (p - 1), (1 - 1e-3) * (p - 1), int(K))


def _check_mode(mode, lam, gamma):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "radius":
        if gamma is None or gamma <= 0:
            raise ValueError("radius mode needs gamma > 0")
        if not 0 <= lam < 1 / gamma:
            raise ValueError(f"radius mode needs 0 <= lam < 1/gamma, got {lam}")
    elif not 0 <= lam < 1:
        raise ValueError(f"measure mode needs 0 <= lam < 1, got {lam}")


def _denominators(space, mode, gamma):
    """``mu B(x, t)`` or ``max(t, r_min)**gamma`` at every sorted position."""
    if mode == "measure":
        return np.take_along_axis(space._cum_w, space._group_end, axis=1)
    return np.maximum(space._sorted, space.r_min) ** gamma


def ball_contents(space, v):
    """``sum_{dist(x, y) <= t} v[y]`` for every center ``x`` and every sorted
    position of ``t`` in the row of ``x``; shape ``(n, n)``."""
    cum = np.cumsum(v[space._order], axis=1)
    return np.take_along_axis(cum, space._group_end, axis=1)


def lebesgue_norm(space, f, p):
    f = as_function(space, f)
    return float(np.sum(np.abs(f) ** p * space.weights) ** (1.0 / p))


def lp_ball_norm(space, f, p, x, t, lam=0.0, mode="measure", gamma=None):
    """``[D(x, t)**(-lam) * sum_{dist(x,y) <= t} |f(y)|**p w_y] ** (1/p)``.

    ``D`` is the ball measure (measure mode) or ``max(t, r_min)**gamma``
    (radius mode).
    """
    _check_mode(mode, lam, gamma)
    f = as_function(space, f)
    mask = space.dist[x] <= t
    content = np.sum(np.abs(f[mask]) ** p * space.weights[mask])
    if mode == "measure":
        denom = space.ball_measure(x, t)
    else:
        denom = max(t, space.r_min) ** gamma
    return float((content / denom**lam) ** (1.0 / p))


def morrey_norm(space, f, p, lam=0.0, mode="measure", gamma=None,
                full_output=False):
    """Morrey norm: the max of :func:`lp_ball_norm` over all centers and radii.

    With ``full_output=True`` returns ``(value, x, t)`` for an extremal ball.
    """
    _check_mode(mode, lam, gamma)
    f = as_function(space, f)
    vals = ball_contents(space, np.abs(f) ** p * space.weights)
    if lam:
        vals = vals / _denominators(space, mode, gamma) ** lam
    k = int(np.argmax(vals))
    x, j = divmod(k, space.n)
    value = float(vals[x, j] ** (1.0 / p))
    if full_output:
        return value, x, float(space._sorted[x, j])
    return value


@dataclass(frozen=True, eq=False)
class MorreyParams:
    """Plain (non-grand) Morrey or Lebesgue norm; ``lam=0`` is ``L^p``."""

    p: float
    lam: float = 0.0
    mode: str = "measure"
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        _check_mode(self.mode, self.lam, self.gamma)

    def norm(self, space, f):
        return morrey_norm(space, f, self.p, self.lam, self.mode, self.gamma)

    def describe(self):
        return {"kind": "morrey", "p": self.p, "lam": self.lam,
                "mode": self.mode, "gamma": self.gamma}


@dataclass(frozen=True, eq=False)
class GrandParams:
    """Parameters of a grand Morrey norm.

    The gauge is ``eps**theta`` unless ``phi`` (a vectorized positive
    function on ``(0, p-1)``) is given.  ``eps_grid`` defaults to
    ``epsilon_grid(p, 64)``.
    """

    p: float
    lam: float = 0.0
    theta: Optional[float] = 1.0
    phi: Optional[Callable] = None
    eps_grid: Optional[np.ndarray] = None
    mode: str = "measure"
    gamma: Optional[float] = None
    gauge_name: str = field(default="", compare=False)

    def __post_init__(self):
        if not 1 < self.p < np.inf:
            raise ValueError(f"need 1 < p < inf, got {self.p}")
        _check_mode(self.mode, self.lam, self.gamma)
        if self.phi is None and (self.theta is None or self.theta <= 0):
            raise ValueError("theta must be positive when no phi is given")
        grid = self.eps_grid
        grid = epsilon_grid(self.p) if grid is None else np.asarray(grid, float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("eps_grid must be a non-empty 1-d array")
        if np.any(grid <= 0) or np.any(grid >= self.p - 1):
            raise ValueError(f"eps_grid must lie inside (0, {self.p - 1})")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("eps_grid must be strictly increasing")
        grid = grid.copy()
        grid.flags.writeable = False
        object.__setattr__(self, "eps_grid", grid)
        if np.any(~(self.gauge(grid) > 0)):
            raise ValueError("gauge must be positive on the eps grid")

    def gauge(self, eps):
        eps = np.asarray(eps, dtype=float)
        if self.phi is not None:
            return np.asarray(self.phi(eps), dtype=float)
        return eps**self.theta

    def weights(self):
        """``gauge(eps)**(1/(p - eps))`` on the grid."""
        e = self.eps_grid
        return self.gauge(e) ** (1.0 / (self.p - e))

    def norm(self, space, f):
        return grand_morrey_norm(space, f, self)

    def replace(self, **changes):
        kw = dict(p=self.p, lam=self.lam, theta=self.theta, phi=self.phi,
                  eps_grid=self.eps_grid, mode=self.mode, gamma=self.gamma,
                  gauge_name=self.gauge_name)
        kw.update(changes)
        return GrandParams(**kw)

    def describe(self):
        return {"kind": "grand", "p": self.p, "lam": self.lam,
                "theta": self.theta if self.phi is None else None,
                "gauge": self.gauge_name or ("power" if self.phi is None else "custom"),
                "mode": self.mode, "gamma": self.gamma,
                "K": int(self.eps_grid.size)}


@dataclass(frozen=True)
class GrandNorm:
    value: float
    eps: float
    x: int
    t: float


def grand_terms(space, f, params):
    """``gauge(eps)**(1/(p-eps)) * morrey_norm(f, p - eps)`` for every grid ``eps``."""
    f = as_function(space, f)
    absf = np.abs(f)
    n = space.n
    exps = params.p - params.eps_grid
    denom = None
    if params.lam:
        denom = _denominators(space, params.mode, params.gamma) ** params.lam
    out = np.empty(exps.size)
    where = np.empty(exps.size, dtype=np.int64)
    # chunk over eps to bound the (chunk, n, n) work array
    step = max(1, _CHUNK_ELEMENTS // (n * n))
    order, ends = space._order, space._group_end
    for lo in range(0, exps.size, step):
        q = exps[lo:lo + step]
        v = absf[None, :] ** q[:, None] * space.weights[None, :]
        cum = np.cumsum(v[:, order], axis=2)
        vals = np.take_along_axis(cum, np.broadcast_to(ends, cum.shape), axis=2)
        if denom is not None:
            vals = vals / denom
        vals = vals.reshape(q.size, n * n)
        k = np.argmax(vals, axis=1)
        out[lo:lo + step] = vals[np.arange(q.size), k] ** (1.0 / q)
        where[lo:lo + step] = k
    return out * params.weights(), where


def grand_morrey_norm(space, f, params, full_output=False):
    """Grand Morrey norm of ``f``: max over the eps grid of the weighted
    Morrey norms at exponent ``p - eps``.

    With ``full_output=True`` returns a :class:`GrandNorm` carrying the
    attaining ``eps`` and an extremal ball ``(x, t)``.
    """
    terms, where = grand_terms(space, f, params)
    i = int(np.argmax(terms))
    if not full_output:
        return float(terms[i])
    x, j = divmod(where[i], space.n)
    return GrandNorm(float(terms[i]), float(params.eps_grid[i]), int(x),
                     float(space._sorted[x, j]))


def grand_lebesgue_norm(space, f, p, theta=1.0, eps_grid=None):
    """Grand Lebesgue norm (the ``lam = 0`` grand Morrey norm)."""
    return grand_morrey_norm(space, f, GrandParams(p, 0.0, theta, eps_grid=eps_grid))
