"""Slow, independent recomputation of Bayes factors for auditing the closed form.

Two routes, neither of which touches :mod:`bfrank.special`:

* ``exact_bf`` evaluates the Beta-function ratio with big-integer factorials
  (integer priors, small counts only) and reduces it as a rational number.
* ``quadrature_bf`` integrates the binomial likelihood against the prior for
  the H1 evidence and both H2 evidences separately, then takes their ratio in
  log space. The prior normaliser is integrated too, so no Beta-function
  identity is assumed anywhere.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, UnsupportedMethodError
from .model import FLAT_PRIOR

EXACT_MAX_TOTAL = 4000
EXACT_ROUNDING = 1e-14
QUADRATURE_MAX_N = 10**6


@dataclass(frozen=True)
class OracleResult:
    log10_bf: float
    method: str  # "exact_integer" or "quadrature"
    error_estimate: float


@lru_cache(maxsize=None)
def _fact(k):
    return math.factorial(k)


def _beta_fraction(a, b):
    """B(a, b) = (a-1)!(b-1)!/(a+b-1)! as an exact rational."""
    return Fraction(_fact(a - 1) * _fact(b - 1), _fact(a + b - 1))


def _log10_fraction(x):
    return math.log10(x.numerator) - math.log10(x.denominator)


def exact_bf_fraction(c1, c2, prior=FLAT_PRIOR):
    u1, u2 = prior.u1, prior.u2
    if not (float(u1).is_integer() and float(u2).is_integer()):
        raise UnsupportedMethodError("exact_bf needs integer prior hyperparameters")
    u1, u2 = int(u1), int(u2)
    n1, N1, n2, N2 = int(c1.n), int(c1.N), int(c2.n), int(c2.N)
    if N1 + N2 + u1 + u2 > EXACT_MAX_TOTAL:
        raise UnsupportedMethodError(f"totals above {EXACT_MAX_TOTAL} are out of range for exact_bf")
    evidence_h2 = (_beta_fraction(u1 + n1, u2 + N1 - n1) / _beta_fraction(u1, u2)) * (
        _beta_fraction(u1 + n2, u2 + N2 - n2) / _beta_fraction(u1, u2)
    )
    evidence_h1 = _beta_fraction(u1 + n1 + n2, u2 + N1 + N2 - n1 - n2) / _beta_fraction(u1, u2)
    return evidence_h2 / evidence_h1


def exact_bf(c1, c2, prior=FLAT_PRIOR):
    """Bayes factor from exact rational arithmetic; log10 taken last."""
    bf = exact_bf_fraction(c1, c2, prior)
    return OracleResult(_log10_fraction(bf), "exact_integer", EXACT_ROUNDING)


# -- quadrature ---------------------------------------------------------------
#
# The substitution theta = sin(phi)^2 turns
#     int_0^1 theta^(a-1) (1-theta)^(b-1) dtheta
# into
#     int_0^(pi/2) 2 sin(phi)^(2a-1) cos(phi)^(2b-1) dphi,
# which is bounded for a, b >= 1/2, so Beta(1/2, 1/2)-type endpoint
# singularities disappear.


def _log_kernel(phi, a, b):
    out = math.log(2.0)
    # a zero exponent must not meet log(0) at the endpoints
    if a != 0.5:
        out = out + (2 * a - 1) * np.log(np.sin(phi))
    if b != 0.5:
        out = out + (2 * b - 1) * np.log(np.cos(phi))
    return out


def _mode_and_width(a, b):
    ea, eb = 2 * a - 1, 2 * b - 1
    if ea <= 0:
        mode = 0.0
    elif eb <= 0:
        mode = math.pi / 2
    else:
        mode = math.atan(math.sqrt(ea / eb))
    s, c = math.sin(mode), math.cos(mode)
    curv = (ea / s**2 if s > 0 else 0.0) + (eb / c**2 if c > 0 else 0.0)
    width = 1.0 / math.sqrt(curv) if curv > 0 else 0.5
    return mode, width


def _log_integral(a, b, epsrel, limit):
    """ln int_0^1 theta^(a-1) (1-theta)^(b-1) dtheta by adaptive quadrature.

    Returns (value, relative error estimate).
    """
    mode, width = _mode_and_width(a, b)
    peak = float(_log_kernel(mode, a, b))

    def f(phi):
        with np.errstate(divide="ignore"):
            return math.exp(_log_kernel(phi, a, b) - peak)

    breaks = sorted(
        {
            min(max(mode + k * width, 0.0), math.pi / 2)
            for k in (-40, -20, -10, -5, -2, -1, 0, 1, 2, 5, 10, 20, 40)
        }
        | {0.0, math.pi / 2}
    )
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            if hi <= lo:
                continue
            try:
                val, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=epsrel, limit=limit)
            except integrate.IntegrationWarning as exc:
                raise ConvergenceError(f"quadrature failed for Beta({a}, {b}) kernel: {exc}") from exc
            total += val
            err += e
    if not total > 0:
        raise ConvergenceError(f"quadrature lost the integrand for Beta({a}, {b}) kernel")
    return peak + math.log(total), err / total


def _log_binom(N, n):
    return math.lgamma(N + 1) - math.lgamma(n + 1) - math.lgamma(N - n + 1)


def quadrature_bf(c1, c2, prior=FLAT_PRIOR, tol=1e-8, limit=200):
    """Bayes factor from numerically integrated evidences.

    ``tol`` bounds the reported absolute error in log10 space; a
    ``ConvergenceError`` is raised when the error estimate exceeds it.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    n1, N1, n2, N2 = int(c1.n), int(c1.N), int(c2.n), int(c2.N)
    if max(N1, N2) > QUADRATURE_MAX_N:
        raise UnsupportedMethodError(f"quadrature is only trusted for N <= {QUADRATURE_MAX_N}")
    u1, u2 = float(prior.u1), float(prior.u2)
    if min(u1, u2) < 0.5:
        raise UnsupportedMethodError("quadrature needs u1, u2 >= 1/2 (bounded integrand)")
    # four integrals contribute; split the budget (in natural-log units)
    epsrel = max(tol * math.log(10) / 8.0, 1e-13)

    log_z, ez = _log_integral(u1, u2, epsrel, limit)
    l1, e1 = _log_integral(u1 + n1, u2 + N1 - n1, epsrel, limit)
    l2, e2 = _log_integral(u1 + n2, u2 + N2 - n2, epsrel, limit)
    l12, e12 = _log_integral(u1 + n1 + n2, u2 + N1 + N2 - n1 - n2, epsrel, limit)

    binom1, binom2 = _log_binom(N1, n1), _log_binom(N2, n2)
    log_ev_h2 = (binom1 + l1 - log_z) + (binom2 + l2 - log_z)
    log_ev_h1 = binom1 + binom2 + l12 - log_z
    log10_bf = (log_ev_h2 - log_ev_h1) / math.log(10)

    # relative error r in an integral is ~r absolute in its log; log_z enters net once
    error = (e1 + e2 + e12 + ez) / math.log(10)
    if error > tol:
        raise ConvergenceError(f"quadrature error estimate {error:.3g} exceeds tol {tol:.3g}")
    return OracleResult(log10_bf, "quadrature", error)


def grid_bf(c1, c2, prior=FLAT_PRIOR, points=200_001):
    """Brute-force composite Simpson rule on a uniform phi grid.

    Only meant as a cross-check of ``quadrature_bf`` for small counts.
    """
    if points % 2 == 0:
        points += 1
    phi = np.linspace(0.0, math.pi / 2, points)
    h = phi[1] - phi[0]
    w = np.ones(points)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    w *= h / 3.0

    def log_int(a, b):
        with np.errstate(divide="ignore"):
            g = _log_kernel(phi, a, b) + np.zeros_like(phi)
        m = g.max()
        return m + math.log(np.sum(w * np.exp(g - m)))

    u1, u2 = float(prior.u1), float(prior.u2)
    n1, N1, n2, N2 = int(c1.n), int(c1.N), int(c2.n), int(c2.N)
    ln_bf = (
        log_int(u1 + n1, u2 + N1 - n1)
        + log_int(u1 + n2, u2 + N2 - n2)
        - log_int(u1, u2)
        - log_int(u1 + n1 + n2, u2 + N1 + N2 - n1 - n2)
    )
    return ln_bf / math.log(10)
