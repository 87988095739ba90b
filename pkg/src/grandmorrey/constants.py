"""Closed-form constants and exponent laws.

:func:`paper_constant` evaluates a named formula.  Universal prefactors that
are never pinned down (written ``c``) default to 1; :data:`FORMULAS` records
which formulas carry one, so reports can flag the value as defined only up to
that prefactor.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, UnknownConstant


def conjugate(p):
    return p / (p - 1.0)


def _need(cond, msg):
    if not cond:
        raise DomainError(msg)


def sobolev_exponent(p, alpha, lam=0.0, gamma=None):
    """Target exponent ``q`` with ``1/p - 1/q = alpha / D``.

    ``D = (1 - lam) gamma`` for the Riesz-type potential and ``D = 1 - lam``
    (``gamma=None``) for the measure potential.
    """
    D = _dimension(lam, gamma)
    _need(p > 1, f"need p > 1, got {p}")
    _need(0 < alpha < D / p, f"need 0 < alpha < {D / p:.6g} (alpha p < D), got {alpha}")
    return 1.0 / (1.0 / p - alpha / D)


def _dimension(lam, gamma):
    if gamma is None:
        _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
        return 1.0 - lam
    _need(gamma > 0, "gamma must be positive")
    _need(0 <= lam < min(1.0, 1.0 / gamma), f"need 0 <= lam < min(1, 1/gamma), got {lam}")
    return (1.0 - lam) * gamma


def eta_from_eps(eps, p, q, alpha, lam=0.0, gamma=None):
    """Source shift ``eta`` with ``1/(p - eta) - 1/(q - eps) = alpha / D``."""
    D = _dimension(lam, gamma)
    return p - 1.0 / (alpha / D + 1.0 / (q - eps))


def _cp(p):
    _need(p > 1, f"need p > 1, got {p}")
    _need(p != 2, "the L^p bound splits at p = 2 and is undefined there")
    if p < 2:
        return p / (p - 1) + p / (2 - p)
    return p + p / (p - 2)


def _check_sigma(p, sigma):
    _need(p > 1, f"need p > 1, got {p}")
    _need(0 < sigma < p - 1, f"need 0 < sigma < p - 1, got sigma={sigma}")


def s_sigma(p, theta, lam, sigma, c0=1.0, b=1.0):
    """Maximal-operator constant at split point ``sigma``.

    The sup over ``0 < eps <= sigma`` of ``b**(lam/(p-eps)) * (((p-eps)')**(1/(p-eps)) + 1)``
    is attained at ``eps = sigma`` (both factors increase with ``eps`` when
    ``b >= 1``), so it is evaluated there.
    """
    _check_sigma(p, sigma)
    _need(b >= 1, "dilation constant b must be >= 1")
    r = p - sigma
    return (c0 * p * sigma ** (-theta / r)
            * b ** (lam / r) * (conjugate(r) ** (1.0 / r) + 1.0))


def s_sigma_bound(p, theta, lam, sigma, c0=1.0, b=1.0):
    _check_sigma(p, sigma)
    _need(b >= 1, "dilation constant b must be >= 1")
    r = p - sigma
    return c0 * p * sigma ** (-theta / r) * b ** (lam / r) * (conjugate(r) + 1.0)


def maximal_lp(p, c0=1.0):
    _need(p > 1, f"need p > 1, got {p}")
    return c0 * conjugate(p) ** (1.0 / p)


def maximal_morrey(p, lam, c0=1.0, b=1.0):
    _need(p > 1, f"need p > 1, got {p}")
    _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
    return b ** (lam / p) * c0 * conjugate(p) ** (1.0 / p) + 1.0


def cz_lp(p, c=1.0):
    return c * _cp(p)


def cz_morrey(p, lam, c=1.0):
    _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
    return c * (_cp(p) + (p - lam + 1) / (1 - lam))


def cz_grand_cple(p, lam, eps):
    """Per-shift constant of the singular-integral chain at exponent ``p - eps``."""
    _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
    r = p - eps
    head = (r - lam + 1) / (1 - lam)
    if p < 2:
        _need(1 < r < 2, f"need 1 < p - eps < 2, got {r}")
        return head + r / (r - 1) + r / (2 - r)
    _need(p > 2 and r > 2, f"need p - eps > 2, got {r}")
    return head + r + r / (r - 2)


def cz_grand(p, theta, lam, sigma, num=2001):
    """``[(p-1)**theta sigma**(-theta/(p-sigma)) + 1] * sup_{0<eps<=sigma} C(p, lam, eps)``.

    The sup is taken on a log grid reaching down to ``1e-12 sigma``.
    """
    _check_sigma(p, sigma)
    eps = np.geomspace(1e-12 * sigma, sigma, num)
    sup_c = max(cz_grand_cple(p, lam, e) for e in eps)
    return ((p - 1) ** theta * sigma ** (-theta / (p - sigma)) + 1.0) * sup_c


def lemma41(p, alpha, lam=0.0, gamma=1.0, c=1.0):
    D = _dimension(lam, gamma)
    q = sobolev_exponent(p, alpha, lam, gamma)
    return c * D / (alpha * (D - alpha * p)) * (conjugate(p) ** (1.0 / q) + 1.0)


def hedberg_I(p, alpha, lam=0.0, gamma=1.0):
    D = _dimension(lam, gamma)
    _need(0 < alpha < D / p, f"need 0 < alpha p < {D:.6g}")
    return 2.0 * D / (alpha * (D - alpha * p))


def default_C_alpha(alpha):
    return 4.0 / alpha


def hedberg_T(p, alpha, lam=0.0, C_alpha=None):
    _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
    _need(0 < alpha < (1 - lam) / p, f"need 0 < alpha p < {1 - lam:.6g}")
    C_alpha = default_C_alpha(alpha) if C_alpha is None else C_alpha
    return C_alpha + p / (1 - lam - alpha * p)


def lemma51(p, alpha, lam=0.0, C_alpha=None, c=1.0):
    q = sobolev_exponent(p, alpha, lam, None)
    return c * hedberg_T(p, alpha, lam, C_alpha) * (conjugate(p) ** (1.0 / q) + 1.0)


def theta2_I(theta1, alpha, q, lam=0.0, gamma=1.0):
    D = _dimension(lam, gamma)
    return (1.0 + alpha * q / D) * theta1


def theta2_T(theta1, alpha, q, lam=0.0):
    _need(0 <= lam < 1, f"need 0 <= lam < 1, got {lam}")
    return theta1 * (1.0 + alpha * q / (1.0 - lam))


def phi_u(u, p, alpha, lam=0.0, gamma=1.0, q=None):
    """Gauge comparison function of the potential theorem; ``phi_u(q) == p``."""
    D = _dimension(lam, gamma)
    q = sobolev_exponent(p, alpha, lam, gamma) if q is None else q
    v = np.asarray(u, dtype=float) - q
    base = p + (1 - lam) * v * gamma / (D - alpha * v)
    out = base ** ((D - v * alpha) / D)
    return float(out) if out.ndim == 0 else out


# name -> (function, has an unspecified universal prefactor)
FORMULAS = {
    "S_sigma": (s_sigma, False),
    "S_sigma_bound": (s_sigma_bound, False),
    "maximal_lp": (maximal_lp, False),
    "maximal_morrey": (maximal_morrey, False),
    "cz_lp": (cz_lp, True),
    "cz_morrey": (cz_morrey, True),
    "cz_grand_Cple": (cz_grand_cple, True),
    "cz_grand": (cz_grand, True),
    "lemma41": (lemma41, True),
    "hedberg_I": (hedberg_I, False),
    "hedberg_T": (hedberg_T, False),
    "lemma51": (lemma51, True),
    "theta2_I": (theta2_I, False),
    "theta2_T": (theta2_T, False),
    "phi_u": (phi_u, False),
}


def paper_constant(name, **params):
    """Evaluate the named formula.

    >>> paper_constant("theta2_I", theta1=1, alpha=0.25, q=4, lam=0, gamma=1)
    2.0
    >>> paper_constant("cz_lp", p=1.5)
    6.0
    """
    try:
        func, _ = FORMULAS[name]
    except KeyError:
        raise UnknownConstant(f"unknown constant {name!r}; "
                              f"known: {', '.join(sorted(FORMULAS))}") from None
    try:
        return func(**params)
    except TypeError as exc:
        raise DomainError(f"{name}: {exc}") from None


def has_universal_prefactor(name):
    if name not in FORMULAS:
        raise UnknownConstant(name)
    return FORMULAS[name][1]
