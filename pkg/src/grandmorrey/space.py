"""Finite quasi-metric measure spaces.

A :class:`Space` is a finite set of points ``0..n-1`` with a table of
pairwise quasi-distances and a positive weight per point.  Each point stands
for a cell of an underlying continuum and its weight is the measure of that
cell.  Balls are closed: ``B(x, t) = {y : dist[x, y] <= t}``.

Every point keeps its row of distances sorted together with prefix sums of
the weights, so a ball measure costs one binary search and every functional
that depends on ``t`` only through the ball ``B(x, t)`` is piecewise constant
with breakpoints in :func:`radius_set`.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateScale,
    InvalidSpace,
    InvalidSpec,
    IoError,
    NegativeDistance,
    NonPositiveWeight,
    NonZeroDiagonal,
    ZeroDistanceDistinctPair,
)

# relative slack used when a radius is produced by scaling another radius
# (2t, t/3, ...): k/n * 3 and 3k/n need not agree to the last bit
RTOL = 1e-12

# above this many points, regularity constants are estimated on a fixed
# sample of centers instead of all of them
EXHAUSTIVE_LIMIT = 512
SAMPLE_SEED = 20240101


class Space:
    """Immutable finite quasi-metric measure space.

    Parameters
    ----------
    dist : (n, n) array_like
        ``dist[i, j]`` is the quasi-distance from ``i`` to ``j``.
    weights : (n,) array_like
        Positive cell measures.
    coords : array_like, optional
        Coordinates attached by generators (used by kernels that need a
        signed difference, e.g. the discrete Hilbert kernel).
    name : str, optional
        Human readable description, echoed in reports.
    """

    def __init__(self, dist, weights, coords=None, name=None):
        dist = np.array(dist, dtype=float)
        weights = np.array(weights, dtype=float)
        _validate(dist, weights)

        self.n = dist.shape[0]
        self.dist = dist
        self.weights = weights
        self.coords = None if coords is None else np.array(coords, dtype=float)
        self.name = name or f"space(n={self.n})"

        order = np.argsort(dist, axis=1, kind="stable")
        sorted_dist = np.take_along_axis(dist, order, axis=1)
        self._order = order
        self._sorted = sorted_dist
        self._cum_w = np.cumsum(weights[order], axis=1)
        self._group_end = np.stack(
            [np.searchsorted(row, row, side="right") - 1 for row in sorted_dist]
        )
        self._is_last = self._group_end == np.arange(self.n)[None, :]

        off = dist + np.diag(np.full(self.n, np.inf))
        self.r_min = float(off.min())
        self.diam = float(dist.max())
        self.total_measure = float(weights.sum())
        self.a0, self.a1 = verify_quasimetric(self)

        for arr in (self.dist, self.weights, self._order, self._sorted,
                    self._cum_w, self._group_end, self._is_last):
            arr.flags.writeable = False
        if self.coords is not None:
            self.coords.flags.writeable = False

    def __repr__(self):
        return (f"Space({self.name!r}, n={self.n}, diam={self.diam:.6g}, "
                f"r_min={self.r_min:.6g}, a0={self.a0:.6g}, a1={self.a1:.6g})")

    def __len__(self):
        return self.n

    @property
    def a_bar(self):
        """Dilation factor a1 (a1 (a0 + 1) + 1) relating nested balls."""
        return self.a1 * (self.a1 * (self.a0 + 1.0) + 1.0)

    def ball_measure(self, x, t):
        return ball_measure(self, x, t)

    def radius_set(self, x):
        return radius_set(self, x)


def _validate(dist, weights):
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise InvalidSpace(f"distance table must be square, got shape {dist.shape}")
    n = dist.shape[0]
    if n < 2:
        raise InvalidSpace("a space needs at least two points")
    if weights.shape != (n,):
        raise InvalidSpace(f"expected {n} weights, got shape {weights.shape}")
    if not (np.all(np.isfinite(dist)) and np.all(np.isfinite(weights))):
        raise InvalidSpace("distances and weights must be finite")
    if np.any(np.diag(dist) != 0):
        raise NonZeroDiagonal("dist(i, i) must be 0 for every i")
    if np.any(dist < 0):
        i, j = np.argwhere(dist < 0)[0]
        raise NegativeDistance(f"dist({i}, {j}) = {dist[i, j]} < 0")
    off = dist + np.eye(n)
    if np.any(off == 0):
        i, j = np.argwhere(off == 0)[0]
        raise ZeroDistanceDistinctPair(f"dist({i}, {j}) = 0 for distinct points")
    if np.any(weights <= 0):
        i = int(np.argmax(weights <= 0))
        raise NonPositiveWeight(f"weight {i} is {weights[i]}, must be > 0")


def build_space(dist, weights, coords=None, name=None):
    """Validate a distance table and weights and return a :class:`Space`."""
    return Space(dist, weights, coords=coords, name=name)


def verify_quasimetric(space):
    """Smallest constants ``(a0, a1)`` satisfied by the distance table.

    ``a0`` is the largest ratio ``dist(i, j) / dist(j, i)``.  ``a1`` is the
    largest ratio ``dist(i, j) / (dist(i, k) + dist(k, j))`` over ``i != j``
    and every ``k``; the degenerate choices ``k = i`` and ``k = j`` always
    give 1, so ``a1 >= 1``.
    """
    d = space.dist
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    a0 = float(np.max(d[off] / d.T[off]))
    a1 = 1.0
    for k in range(n):
        denom = d[:, k][:, None] + d[k, :][None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(off, d / denom, 0.0)
        a1 = max(a1, float(np.max(ratio)))
    return a0, a1


def ball_measure(space, x, t):
    """Measure of the closed ball ``{y : dist(x, y) <= t}``."""
    if t < 0:
        raise ValueError("radius must be non-negative")
    row = space._sorted[x]
    idx = np.searchsorted(row, t * (1.0 + RTOL), side="right") - 1
    return float(space._cum_w[x, idx])


def _ball_measures(space, x, radii):
    radii = np.asarray(radii, dtype=float)
    idx = np.searchsorted(space._sorted[x], radii * (1.0 + RTOL), side="right") - 1
    return space._cum_w[x, idx]


def radius_set(space, x):
    """Sorted distinct distances from ``x`` (always containing 0 and diam)."""
    r = np.unique(space._sorted[x])
    if r[-1] < space.diam:
        r = np.append(r, space.diam)
    return r


def breakpoints(space):
    """Per-center breakpoints and closed-ball measures, as flat arrays.

    Returns ``(center, radius, measure)`` with one entry per distinct
    distance from each center (``radius`` excludes the extra ``diam``).
    """
    mask = space._is_last
    rows, cols = np.nonzero(mask)
    return rows, space._sorted[rows, cols], space._cum_w[rows, cols]


def _centers(space):
    if space.n <= EXHAUSTIVE_LIMIT:
        return np.arange(space.n)
    rng = np.random.default_rng(SAMPLE_SEED)
    return np.sort(rng.choice(space.n, EXHAUSTIVE_LIMIT, replace=False))


def estimate_doubling(space, factor=2.0):
    """Largest ratio ``mu B(x, factor t) / mu B(x, t)`` over all ``t > 0``.

    The ratio is piecewise constant in ``t`` with jumps where ``t`` or
    ``factor * t`` crosses a distance from ``x``, so evaluating at
    ``radius_set(x)`` and ``radius_set(x) / factor`` gives the exact sup.
    ``factor = space.a_bar`` yields the dilation constant used to compare
    ``B(x, r)`` with ``B(x, a_bar r)``.
    """
    if factor < 1:
        raise ValueError("dilation factor must be >= 1")
    best = 1.0
    for x in _centers(space):
        r = radius_set(space, x)
        t = np.concatenate([r, r / factor])
        t = t[t > 0]
        best = max(best, float(np.max(_ball_measures(space, x, factor * t)
                                      / _ball_measures(space, x, t))))
    return best


def estimate_ahlfors(space, gamma):
    """Envelope constants ``(b_upper, c_lower)`` for ``mu B(x, t) ~ t**gamma``.

    ``b_upper`` is the sup of ``mu B(x, t) / t**gamma`` over
    ``r_min <= t <= diam`` (attained at ``r_min`` or at a breakpoint);
    ``c_lower`` is the min of the same ratio over breakpoints in that range.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    upper, lower = 0.0, np.inf
    for x in _centers(space):
        r = radius_set(space, x)
        mu = _ball_measures(space, x, r)
        up = mu / np.maximum(r, space.r_min) ** gamma
        upper = max(upper, float(up.max()))
        keep = r >= space.r_min
        lower = min(lower, float(np.min(mu[keep] / r[keep] ** gamma)))
    return upper, lower


def estimate_reverse_doubling(space, alpha_bar):
    """Largest ``mu B(x, alpha_bar t) / mu B(x, t)`` over breakpoints ``t``
    with ``alpha_bar t >= r_min``."""
    if not 0 < alpha_bar < 1:
        raise ValueError("alpha_bar must lie in (0, 1)")
    beta = -np.inf
    for x in _centers(space):
        r = radius_set(space, x)
        r = r[alpha_bar * r * (1.0 + RTOL) >= space.r_min]
        if r.size == 0:
            continue
        beta = max(beta, float(np.max(_ball_measures(space, x, alpha_bar * r)
                                      / _ball_measures(space, x, r))))
    if not np.isfinite(beta):
        raise DegenerateScale(f"no radius t with {alpha_bar} t >= r_min")
    return beta


def check_annuli(space, samples=200, seed=0):
    """Sample ``(x, r, R)`` with ``0 < r < R < diam`` and report whether the
    closed-ball annulus ``B(x, R) minus B(x, r)`` has positive measure.

    Finite spaces fail this at fine scales; the result is informational.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(samples):
        x = int(rng.integers(space.n))
        r, R = np.sort(rng.uniform(0, space.diam, 2))
        out.append(ball_measure(space, x, R) > ball_measure(space, x, r))
    return np.array(out)


@dataclass(frozen=True)
class RegularityReport:
    b_doubling: float
    gamma: float
    b_upper: float
    c_lower: float
    lower_exponent: float
    alpha_bar: float
    beta: float
    a_bar: float
    b_dilation: float
    annuli_fraction: float


def regularity(space, gamma, alpha_bar=0.5, lower_exponent=None):
    """Collect every regularity constant of ``space`` in one report."""
    lower_exponent = gamma if lower_exponent is None else lower_exponent
    b_upper, _ = estimate_ahlfors(space, gamma)
    _, c_lower = estimate_ahlfors(space, lower_exponent)
    return RegularityReport(
        b_doubling=estimate_doubling(space),
        gamma=float(gamma),
        b_upper=b_upper,
        c_lower=c_lower,
        lower_exponent=float(lower_exponent),
        alpha_bar=float(alpha_bar),
        beta=estimate_reverse_doubling(space, alpha_bar),
        a_bar=space.a_bar,
        b_dilation=estimate_doubling(space, space.a_bar),
        annuli_fraction=float(np.mean(check_annuli(space))),
    )


# --------------------------------------------------------------------------
# generators; all normalized to total measure 1

def gen_interval(n):
    """Cell centers ``(i + 1/2) / n`` of ``[0, 1]`` with weights ``1/n``."""
    if int(n) != n or n < 2:
        raise InvalidSpec("gen_interval needs an integer n >= 2")
    n = int(n)
    i = np.arange(n)
    # |i - j| / n keeps equal gaps bitwise equal
    dist = np.abs(i[:, None] - i[None, :]) / n
    return Space(dist, np.full(n, 1.0 / n), coords=(i + 0.5) / n,
                 name=f"interval({n})")


def gen_cube(n, dim):
    """Cell centers of ``[0, 1]**dim`` on an ``n**dim`` grid, sup distance."""
    if int(n) != n or n < 2 or int(dim) != dim or dim < 1:
        raise InvalidSpec("gen_cube needs integers n >= 2 and dim >= 1")
    n, dim = int(n), int(dim)
    idx = np.stack(np.meshgrid(*[np.arange(n)] * dim, indexing="ij"), -1)
    idx = idx.reshape(-1, dim)
    gap = np.abs(idx[:, None, :] - idx[None, :, :]).max(axis=-1)
    m = idx.shape[0]
    return Space(gap / n, np.full(m, 1.0 / m), coords=(idx + 0.5) / n,
                 name=f"cube({n},{dim})")


def gen_cantor(k):
    """Left endpoints of the ``2**k`` level-``k`` Cantor intervals."""
    if int(k) != k or k < 1:
        raise InvalidSpec("gen_cantor needs an integer k >= 1")
    k = int(k)
    ints = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        ints = np.concatenate([3 * ints, 3 * ints + 2])
    ints = np.sort(ints)
    scale = 3.0**k
    dist = np.abs(ints[:, None] - ints[None, :]) / scale
    m = ints.size
    return Space(dist, np.full(m, 1.0 / m), coords=ints / scale,
                 name=f"cantor({k})")


def gen_random(n, seed):
    """``n`` uniform points of ``[0, 1]`` weighted by their Voronoi cells."""
    if int(n) != n or n < 2:
        raise InvalidSpec("gen_random needs an integer n >= 2")
    if seed is None:
        raise InvalidSpec("gen_random needs a seed")
    rng = np.random.default_rng(seed)
    pts = np.sort(rng.uniform(0.0, 1.0, int(n)))
    edges = np.concatenate([[0.0], (pts[1:] + pts[:-1]) / 2, [1.0]])
    weights = np.diff(edges)
    dist = np.abs(pts[:, None] - pts[None, :])
    return Space(dist, weights, coords=pts, name=f"random({int(n)},seed={seed})")


def snowflake(space, s):
    """Replace every distance by ``dist**s`` for ``0 < s <= 1``."""
    if not 0 < s <= 1:
        raise InvalidSpec("snowflake exponent must lie in (0, 1]")
    return Space(space.dist**s, space.weights, coords=space.coords,
                 name=f"snowflake({space.name},{s})")


_GENERATORS = {
    "interval": (gen_interval, ("n",)),
    "cube": (gen_cube, ("n", "dim")),
    "cantor": (gen_cantor, ("k",)),
    "random": (gen_random, ("n", "seed")),
}


def generate(name, snowflake_exponent=None, **params):
    """Build a space from a generator name and keyword parameters.

    >>> generate("interval", n=4).diam
    0.75
    """
    try:
        func, required = _GENERATORS[name]
    except KeyError:
        raise InvalidSpec(f"unknown generator {name!r}; "
                          f"choose from {sorted(_GENERATORS)}") from None
    missing = [key for key in required if key not in params]
    extra = sorted(set(params) - set(required))
    if missing or extra:
        raise InvalidSpec(f"{name}: missing {missing}, unexpected {extra}")
    space = func(**{key: params[key] for key in required})
    if snowflake_exponent is not None:
        space = snowflake(space, snowflake_exponent)
    return space


# --------------------------------------------------------------------------
# plain-text tables

def _fmt(v):
    return repr(float(v))


def dumps_space(space):
    lines = [str(space.n)]
    lines += [_fmt(w) for w in space.weights]
    lines += [" ".join(_fmt(v) for v in row) for row in space.dist]
    return "\n".join(lines) + "\n"


def loads_space(text, name=None):
    try:
        tokens = text.split()
        n = int(tokens[0])
        values = np.array(tokens[1:], dtype=float)
    except (IndexError, ValueError) as exc:
        raise InvalidSpace(f"malformed space table: {exc}") from None
    if values.size != n + n * n:
        raise InvalidSpace(f"expected {n + n * n} numbers after the header, "
                           f"got {values.size}")
    return Space(values[n:].reshape(n, n), values[:n], name=name)


def save_space(space, path):
    try:
        Path(path).write_text(dumps_space(space))
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_space(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return loads_space(text, name=str(path))


def load_table(path):
    """Read an ``n x n`` table (header ``n`` then ``n`` rows), e.g. a kernel."""
    try:
        tokens = Path(path).read_text().split()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    try:
        n = int(tokens[0])
        values = np.array(tokens[1:], dtype=float)
    except (IndexError, ValueError) as exc:
        raise InvalidSpace(f"malformed table: {exc}") from None
    if values.size != n * n:
        raise InvalidSpace(f"expected {n * n} numbers after the header")
    return values.reshape(n, n)
