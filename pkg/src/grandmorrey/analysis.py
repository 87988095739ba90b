"""Inequality checks, empirical operator norms and theorem verification.

Every check returns a :class:`~grandmorrey.report.CheckResult` recording
``lhs``, ``rhs`` and the slack ``kappa``; it passes when
``lhs <= kappa * rhs`` up to a 1e-12 relative tolerance.  Nothing here
proves anything: each routine is a falsification attempt on a finite space.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from ._parallel import pmap
from .constants import (
    cz_grand,
    default_C_alpha,
    eta_from_eps,
    hedberg_I,
    hedberg_T,
    lemma41,
    lemma51,
    phi_u,
    s_sigma,
    sobolev_exponent,
    theta2_I,
    theta2_T,
)
from .errors import (
    DomainError,
    EmptyFamily,
    GridTooCoarse,
    InadmissibleParams,
    ZeroFunction,
)
from .norms import (
    GrandParams,
    MorreyParams,
    as_function,
    epsilon_grid,
    grand_morrey_norm,
    grand_terms,
    lebesgue_norm,
    morrey_norm,
)
from .operators import (
    cz_adjoint,
    cz_apply,
    fractional_maximal,
    hilbert_kernel,
    maximal,
    potential_I,
    potential_T,
)
from .report import CheckResult, Report
from .space import estimate_doubling, gen_interval, radius_set

STABILITY_MAX = 1.25
HEDBERG_KAPPA = 4.0
PHI_FLATNESS = 0.05
CALIBRATION_SEED = 0
THEOREMS = ("2.1", "3.1", "4.1", "5.1")


def _unit_measure(space):
    if abs(space.total_measure - 1.0) > 1e-12:
        raise InadmissibleParams(f"check needs mu(X) = 1, got {space.total_measure}")


# --------------------------------------------------------------------------
# exact sub-inequalities

def check_embeddings(space, f, p, theta1, theta2, K=64, eps_grid=None):
    """Three Hoelder-type embeddings between grand Lebesgue norms.

    (a) ``||f||_{theta2} <= max(1, (p-1)**(theta2-theta1)) ||f||_{theta1}``;
    (b) ``||f||_{theta1} <= max(1, (p-1)**theta1) ||f||_{L^p}``;
    (c) ``||f||_{L^{p-e}} <= e**(-theta1/(p-e)) ||f||_{theta1}`` for every grid ``e``
        (reported at the worst ``e``).
    """
    if not 0 < theta1 < theta2:
        raise InadmissibleParams("need 0 < theta1 < theta2")
    _unit_measure(space)
    grid = epsilon_grid(p, K) if eps_grid is None else np.asarray(eps_grid, float)
    g1 = GrandParams(p, 0.0, theta1, eps_grid=grid)
    g2 = g1.replace(theta=theta2)
    n1 = grand_morrey_norm(space, f, g1)
    n2 = grand_morrey_norm(space, f, g2)
    lp = lebesgue_norm(space, f, p)

    out = [
        CheckResult("embedding_theta", n2, max(1.0, (p - 1) ** (theta2 - theta1)) * n1),
        CheckResult("embedding_lp", n1, max(1.0, (p - 1) ** theta1) * lp),
    ]
    lhs = np.array([lebesgue_norm(space, f, p - e) for e in grid])
    rhs = grid ** (-theta1 / (p - grid)) * n1
    i = int(np.argmax(lhs - rhs))
    ok = bool(np.all(lhs <= rhs + 1e-12 * np.maximum(1.0, rhs)))
    out.append(CheckResult("embedding_lower", lhs[i], rhs[i], 1.0, ok,
                           {"eps0": float(grid[i])}))
    return out


def check_sigma_split(space, g, p, theta, lam, sigma, K=64, eps_grid=None):
    """Large shifts are controlled by small ones.

    ``sup_{e > sigma} T(e) <= (p-1)**theta sigma**(-theta/(p-sigma)) sup_{e <= sigma} T(e)``
    with ``T(e) = e**(theta/(p-e)) ||g||_{L^{p-e,lam}}``.  The right-hand sup
    runs over grid points ``<= sigma`` together with ``sigma`` itself.
    """
    _unit_measure(space)
    if not 0 < sigma < p - 1:
        raise InadmissibleParams(f"need 0 < sigma < p - 1, got {sigma}")
    grid = epsilon_grid(p, K) if eps_grid is None else np.asarray(eps_grid, float)
    hi = grid[grid > sigma]
    lo = grid[grid <= sigma]
    if hi.size == 0 or lo.size == 0:
        raise GridTooCoarse(f"sigma={sigma} leaves one side of the eps grid empty")
    lo = np.union1d(lo, [sigma])
    t_hi, _ = grand_terms(space, g, GrandParams(p, lam, theta, eps_grid=hi))
    t_lo, _ = grand_terms(space, g, GrandParams(p, lam, theta, eps_grid=lo))
    i, j = int(np.argmax(t_hi)), int(np.argmax(t_lo))
    factor = (p - 1) ** theta * sigma ** (-theta / (p - sigma))
    return CheckResult("sigma_split", t_hi[i], factor * t_lo[j], 1.0,
                       witness={"sigma": float(sigma), "eps_hi": float(hi[i]),
                                "eps_lo": float(lo[j])})


@dataclass(frozen=True)
class SobolevParams:
    """Exponents for the potential operators.

    ``gamma`` set selects the Riesz-type potential (``D = (1-lam) gamma``);
    ``gamma=None`` selects the measure potential (``D = 1 - lam``).  ``q``
    and ``theta2`` are derived; a supplied ``q`` must satisfy
    ``1/p - 1/q = alpha/D`` to 1e-12.
    """

    p: float
    alpha: float
    lam: float = 0.0
    gamma: Optional[float] = None
    theta1: float = 1.0
    q: Optional[float] = None
    sigma: Optional[float] = None
    c0: Optional[float] = None
    C_alpha: Optional[float] = None
    theta2: float = field(init=False)

    def __post_init__(self):
        try:
            q = sobolev_exponent(self.p, self.alpha, self.lam, self.gamma)
        except DomainError as exc:
            raise InadmissibleParams(str(exc)) from None
        if self.q is not None and abs(1 / self.p - 1 / self.q - self.alpha / self.D) > 1e-12:
            raise InadmissibleParams(f"q={self.q} violates 1/p - 1/q = alpha/D")
        if self.theta1 <= 0:
            raise InadmissibleParams("theta1 must be positive")
        if self.sigma is not None and not 0 < self.sigma < self.p - 1:
            raise InadmissibleParams("need 0 < sigma < p - 1")
        object.__setattr__(self, "q", q if self.q is None else float(self.q))
        object.__setattr__(self, "theta2", self._theta2())
        if self.C_alpha is None:
            object.__setattr__(self, "C_alpha", default_C_alpha(self.alpha))

    @property
    def mode(self):
        return "T" if self.gamma is None else "I"

    @property
    def D(self):
        return (1 - self.lam) * (1.0 if self.gamma is None else self.gamma)

    def _theta2(self):
        if self.gamma is None:
            return theta2_T(self.theta1, self.alpha, self.q, self.lam)
        return theta2_I(self.theta1, self.alpha, self.q, self.lam, self.gamma)


def check_hedberg(space, f, sobolev, mode=None, kappa=HEDBERG_KAPPA):
    """Pointwise potential bound by a power of a maximal function.

    ``R(x) = |op f(x)| / [(maxop f(x))**(1 - p alpha/D) ||f||**(p alpha/D)]``
    with ``(op, maxop, norm) = (I_alpha, fractional maximal, radius-Morrey)``
    in ``I`` mode and ``(T_alpha, M, measure-Morrey)`` in ``T`` mode.  Passes
    when ``max R <= kappa * constant``.
    """
    s = sobolev
    mode = s.mode if mode is None else mode
    f = as_function(space, f)
    if not np.any(f):
        raise ZeroFunction("Hedberg ratio is undefined for f = 0")
    if mode == "I":
        if s.gamma is None:
            raise InadmissibleParams("I mode needs gamma")
        op = potential_I(space, f, s.alpha, s.gamma)
        mx = fractional_maximal(space, f, s.gamma)
        norm = morrey_norm(space, f, s.p, s.lam, "radius", s.gamma)
        const = hedberg_I(s.p, s.alpha, s.lam, s.gamma)
        D = (1 - s.lam) * s.gamma
    elif mode == "T":
        op = potential_T(space, f, s.alpha)
        mx = maximal(space, f)
        norm = morrey_norm(space, f, s.p, s.lam)
        const = hedberg_T(s.p, s.alpha, s.lam, s.C_alpha)
        D = 1 - s.lam
    else:
        raise ValueError(f"mode must be 'I' or 'T', got {mode!r}")
    e = s.p * s.alpha / D
    keep = mx > 0
    ratio = np.abs(op[keep]) / (mx[keep] ** (1 - e) * norm**e)
    i = int(np.argmax(ratio))
    x = int(np.flatnonzero(keep)[i])
    res = CheckResult(f"hedberg_{mode}", ratio[i], const, kappa,
                      witness={"x": x})
    res.witness["kappa_needed"] = res.kappa_needed
    return res


# --------------------------------------------------------------------------
# empirical operator norms

@dataclass(frozen=True)
class OperatorNormEstimate:
    sup_ratio: float
    argmax: int
    stability: float
    ratios: np.ndarray
    refined_ratio: Optional[float] = None


def estimate_operator_norm(space, op, in_norm, out_norm, family,
                           refine_steps=0, adjoint=None):
    """Largest ``out_norm(op f) / in_norm(f)`` over a family of functions.

    ``stability`` is the sup over the whole family divided by the sup over
    its first half; values near 1 mean the family has saturated.  With
    ``refine_steps > 0`` and an ``adjoint``, the best member is further
    improved by power iteration on ``adjoint(op(.))`` (weighted ``L^2``), and
    ``sup_ratio`` includes the refined vector.  ``in_norm`` and ``out_norm``
    are objects with a ``norm(space, f)`` method.
    """
    family = [as_function(space, f) for f in family]
    if not family:
        raise EmptyFamily("need at least one function")

    def ratio(f):
        den = in_norm.norm(space, f)
        if den <= 0:
            raise ValueError("family member with zero input norm")
        return out_norm.norm(space, op(f)) / den

    ratios = np.array(pmap(ratio, family))
    k = int(np.argmax(ratios))
    half = max(1, len(family) // 2)
    stability = float(ratios.max() / ratios[:half].max())
    sup = float(ratios[k])
    refined = None
    if refine_steps:
        if adjoint is None:
            raise ValueError("refinement needs the adjoint operator")
        v = family[k]
        for _ in range(refine_steps):
            v = adjoint(op(v))
            v = v / lebesgue_norm(space, v, 2)
        refined = float(ratio(v))
        sup = max(sup, refined)
    return OperatorNormEstimate(sup, k, stability, ratios, refined)


def gen_test_family(space, kind, m, seed, p=2.0, gamma=1.0, lam=0.0):
    """Deterministic test functions.

    ``indicators``  indicators of random closed balls;
    ``powers``      ``dist(y, x0)**(-beta)`` with ``beta p < gamma (1 - lam)``
                    (self value from the cell radius ``w**(1/gamma)``);
    ``rademacher``  independent signs;
    ``gaussian``    independent standard normals;
    ``mixed``       cycles through the four kinds.
    """
    if m < 1:
        raise ValueError("family size must be >= 1")
    kinds = ("rademacher", "indicators", "powers", "gaussian")
    if kind not in kinds + ("mixed",):
        raise ValueError(f"unknown family kind {kind!r}")
    rng = np.random.default_rng(seed)
    n = space.n
    beta_max = gamma * (1 - lam) / p
    out = []
    for i in range(m):
        k = kinds[i % len(kinds)] if kind == "mixed" else kind
        if k == "rademacher":
            f = rng.choice([-1.0, 1.0], n)
        elif k == "gaussian":
            f = rng.standard_normal(n)
        elif k == "indicators":
            x = int(rng.integers(n))
            r = radius_set(space, x)
            t = r[int(rng.integers(r.size))]
            f = (space.dist[x] <= t).astype(float)
        else:
            x0 = int(rng.integers(n))
            beta = rng.uniform(0.05, 0.95) * beta_max
            r = space.dist[:, x0].copy()
            r[x0] = space.weights[x0] ** (1.0 / gamma)
            f = r ** (-beta)
        out.append(f)
    return out


@functools.lru_cache(maxsize=None)
def calibrate_c0(m=100, seed=CALIBRATION_SEED):
    """Maximal-operator constant fitted once on ``gen_interval(64)`` at ``p = 2``.

    ``c0 = 1.2 * max ||Mf||_2 / (sqrt(2) ||f||_2)`` over a fixed mixed family.
    """
    space = gen_interval(64)
    family = gen_test_family(space, "mixed", m, seed)
    ratios = [lebesgue_norm(space, maximal(space, f), 2) / lebesgue_norm(space, f, 2)
              for f in family]
    return 1.2 * max(ratios) / np.sqrt(2.0)


# --------------------------------------------------------------------------
# theorem runs

def phi_flatness(p, alpha, lam=0.0, gamma=1.0, t_min=1e-4, t_max=1e-2, num=41):
    """Relative spread of ``phi(t) / t**(1 + alpha q / D)`` over ``[t_min, t_max]``."""
    q = sobolev_exponent(p, alpha, lam, gamma)
    D = (1 - lam) * gamma
    t = np.geomspace(t_min, t_max, num)
    r = phi_u(t, p, alpha, lam, gamma, q) / t ** (1 + alpha * q / D)
    return float(r.max() / r.min() - 1.0)


def _theorem_id(theorem_id):
    key = str(theorem_id).strip()
    try:
        key = f"{float(key):.1f}"
    except ValueError:
        pass
    if key not in THEOREMS:
        raise InadmissibleParams(f"unknown theorem {theorem_id!r}; choose from {THEOREMS}")
    return key


def verify_theorem(space, theorem_id, params, family, kappa=1.0):
    """Run the bounded-ratio experiment for one theorem and return a :class:`Report`.

    ``params`` holds ``p``, ``theta`` (``theta1`` for the potentials),
    ``lam``, and as needed ``alpha``, ``gamma``, ``K``, ``c0``, ``C_alpha``,
    ``kernel``, ``delta``, ``hedberg_kappa``.  The ratio sup must be stable
    (``stability <= 1.25``); where a fully explicit constant exists it must
    also satisfy ``sup_ratio <= kappa * constant``.
    """
    start = time.perf_counter()
    key = _theorem_id(theorem_id)
    prm = dict(params)
    family = list(family)
    if not family:
        raise EmptyFamily("need at least one function")
    config = {"theorem_id": key, "space": space.name,
              "params": {k: v for k, v in sorted(prm.items()) if k != "kernel"},
              "family_size": len(family), "kappa": float(kappa)}
    report = Report(config, __version__)
    runner = {"2.1": _verify_maximal, "3.1": _verify_cz,
              "4.1": _verify_potential_I, "5.1": _verify_potential_T}[key]
    runner(space, prm, family, float(kappa), report)
    report.wall_time = time.perf_counter() - start
    return report


def _grand(prm, p=None, theta=None, mode="measure", gamma=None):
    p = prm["p"] if p is None else p
    lam = float(prm.get("lam", 0.0))
    theta = float(prm.get("theta", 1.0)) if theta is None else theta
    K = int(prm.get("K", 64))
    return GrandParams(p, lam, theta, eps_grid=epsilon_grid(p, K), mode=mode, gamma=gamma)


def _basic(prm):
    p = float(prm.get("p", 0))
    lam = float(prm.get("lam", 0.0))
    theta = float(prm.get("theta", prm.get("theta1", 1.0)))
    if not 1 < p < np.inf:
        raise InadmissibleParams(f"need 1 < p < inf, got {p}")
    if not 0 <= lam < 1:
        raise InadmissibleParams(f"need 0 <= lam < 1, got {lam}")
    if theta <= 0:
        raise InadmissibleParams("theta must be positive")
    prm["p"], prm["lam"], prm["theta"] = p, lam, theta
    return p, lam, theta


def _stability_check(est, report):
    report.scalars["sup_ratio"] = est.sup_ratio
    report.scalars["argmax"] = est.argmax
    report.scalars["stability"] = est.stability
    report.checks.append(CheckResult("stability", est.stability, STABILITY_MAX))


def _split_sigma(grid, i):
    return float(grid[i]) if i < grid.size - 1 else float(grid[grid.size // 2])


def _verify_maximal(space, prm, family, kappa, report):
    p, lam, theta = _basic(prm)
    gp = _grand(prm)
    est = estimate_operator_norm(space, lambda f: maximal(space, f), gp, gp, family)
    _stability_check(est, report)

    c0 = float(prm.get("c0") or calibrate_c0())
    b = estimate_doubling(space, space.a_bar)
    S = np.array([s_sigma(p, theta, lam, s, c0, b) for s in gp.eps_grid])
    i = int(np.argmin(S))
    report.scalars.update({"c0": c0, "b_dilation": b, "a_bar": space.a_bar,
                           "inf_S": float(S[i]), "sigma_star": float(gp.eps_grid[i])})
    report.checks.append(CheckResult("maximal_constant", est.sup_ratio, S[i], kappa,
                                     witness={"sigma": float(gp.eps_grid[i])}))
    g = maximal(space, family[est.argmax])
    report.checks.append(check_sigma_split(space, g, p, theta, lam,
                                           _split_sigma(gp.eps_grid, i),
                                           eps_grid=gp.eps_grid))


def _verify_cz(space, prm, family, kappa, report):
    p, lam, theta = _basic(prm)
    if p == 2:
        raise InadmissibleParams("the singular-integral constants are undefined at p = 2")
    kernel = prm.get("kernel") or hilbert_kernel(space)
    delta = float(prm.get("delta", 0.0))
    gp = _grand(prm)

    def op(f):
        return cz_apply(space, f, kernel, delta).values

    est = estimate_operator_norm(space, op, gp, gp, family)
    _stability_check(est, report)
    sigma = _split_sigma(gp.eps_grid, gp.eps_grid.size // 4)
    if p < 2 or p - sigma > 2:
        report.scalars["cz_grand_constant"] = cz_grand(p, theta, lam, sigma)
    report.scalars.update({"sigma": sigma, "delta": delta, "universal_prefactor": 1.0})
    g = op(family[est.argmax])
    report.checks.append(check_sigma_split(space, g, p, theta, lam, sigma,
                                           eps_grid=gp.eps_grid))


def _potential_run(space, prm, family, kappa, report, sob, op, mode, gamma):
    gin = _grand(prm, theta=sob.theta1, mode=mode, gamma=gamma)
    gout = _grand(prm, p=sob.q, theta=sob.theta2, mode=mode, gamma=gamma)
    est = estimate_operator_norm(space, op, gin, gout, family)
    _stability_check(est, report)
    wrong = estimate_operator_norm(space, op, gin, gout.replace(theta=sob.theta2 / 2), family)
    # informational: halving theta2 enlarges the gauge only for eps < 1, so on
    # grids reaching past eps = 1 the ratio with theta2 / 2 can come out smaller
    report.scalars.update({"q": sob.q, "theta1": sob.theta1, "theta2": sob.theta2,
                           "sup_ratio_half_theta2": wrong.sup_ratio,
                           "theta2_law_holds": bool(wrong.sup_ratio >= est.sup_ratio)})

    # per-shift pairing of target shift eps with source shift eta
    f = family[est.argmax]
    g = op(f)
    D = sob.D
    valid, skipped, worst = 0, 0, 0.0
    for e in gout.eps_grid:
        eta = eta_from_eps(e, sob.p, sob.q, sob.alpha, sob.lam, sob.gamma)
        if not 0 < eta < sob.p - 1:
            skipped += 1
            continue
        valid += 1
        lhs = e ** (sob.theta2 / (sob.q - e)) * morrey_norm(space, g, sob.q - e, sob.lam, mode, gamma)
        rhs = eta ** (sob.theta1 / (sob.p - eta)) * morrey_norm(space, f, sob.p - eta, sob.lam, mode, gamma)
        worst = max(worst, lhs / rhs)
    report.scalars.update({"eta_pairs_valid": valid, "eta_pairs_skipped": skipped,
                           "per_shift_ratio_max": worst, "D": D})
    hk = float(prm.get("hedberg_kappa", HEDBERG_KAPPA))
    report.checks.append(check_hedberg(space, f, sob, kappa=hk))
    return est


def _sobolev(prm, gamma):
    p, lam, theta = _basic(prm)
    if "alpha" not in prm:
        raise InadmissibleParams("potential theorems need alpha")
    return SobolevParams(p, float(prm["alpha"]), lam, gamma, theta,
                         C_alpha=prm.get("C_alpha"))


def _verify_potential_I(space, prm, family, kappa, report):
    gamma = prm.get("gamma")
    if gamma is None or gamma <= 0:
        raise InadmissibleParams("theorem 4.1 needs gamma > 0")
    gamma = float(gamma)
    sob = _sobolev(prm, gamma)
    if not sob.lam < 1 / gamma:
        raise InadmissibleParams("need lam < 1/gamma")

    def op(f):
        return potential_I(space, f, sob.alpha, gamma)

    _potential_run(space, prm, family, kappa, report, sob, op, "radius", gamma)
    flat = phi_flatness(sob.p, sob.alpha, sob.lam, gamma)
    report.scalars["lemma41_constant"] = lemma41(sob.p, sob.alpha, sob.lam, gamma)
    report.checks.append(CheckResult("phi_asymptotic", flat, PHI_FLATNESS))


def _verify_potential_T(space, prm, family, kappa, report):
    sob = _sobolev(prm, None)

    def op(f):
        return potential_T(space, f, sob.alpha)

    _potential_run(space, prm, family, kappa, report, sob, op, "measure", None)
    report.scalars["C_alpha"] = sob.C_alpha
    report.scalars["lemma51_constant"] = lemma51(sob.p, sob.alpha, sob.lam, sob.C_alpha)
