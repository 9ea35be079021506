"""Weighted linear fits of mode temperature vs bath temperature, and
Feldman-Cousins upper limits for a Gaussian estimate of a non-negative
quantity.

The confidence belt is built analytically: for each candidate true value
mu >= 0 (in units of sigma) the acceptance interval in the measured value
x is the likelihood-ratio-ordered region R(x) >= c, with
R(x) = L(x | mu) / L(x | mu_best), mu_best = max(0, x).  For x >= 0 the
region is symmetric about mu; for x < 0 it follows R = exp(x mu - mu^2/2).
The threshold c is tuned (bisection, vectorized over the mu grid) until
the interval holds exactly the requested probability.  The upper limit is
the largest mu whose interval still contains the observed x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri  # Gaussian CDF and inverse


class InsufficientDataError(ValueError):
    """Too few usable points above the low-temperature cut."""


class BeltRangeError(RuntimeError):
    """Candidate-value grid exhausted before the belt closed (grid bug)."""


@dataclass(frozen=True)
class TemperatureSeries:
    """Bath/mode temperature pairs with 1-sigma uncertainties (kelvin).

    Points at or below ``cut_low`` sit in the saturation region and are
    excluded from every fit.
    """

    points: tuple[tuple[float, float, float], ...]
    cut_low: float = 0.025

    def __post_init__(self) -> None:
        cleaned = []
        for i, (T, Tm, sigma) in enumerate(self.points):
            if not all(math.isfinite(v) for v in (T, Tm, sigma)):
                raise ValueError(f"non-finite values in point {i}: {(T, Tm, sigma)}")
            if sigma <= 0:
                raise ValueError(f"sigma must be positive in point {i}, got {sigma}")
            cleaned.append((float(T), float(Tm), float(sigma)))
        object.__setattr__(self, "points", tuple(cleaned))

    def used_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        data = np.array([p for p in self.points if p[0] > self.cut_low])
        if data.size == 0:
            return np.empty(0), np.empty(0), np.empty(0)
        return data[:, 0], data[:, 1], data[:, 2]


@dataclass(frozen=True)
class LinearFitResult:
    """Weighted least-squares result for T_m = alpha * T + T0."""

    alpha: float
    T0: float
    sigma_T0: float
    sigma_alpha: float | None   # None when the slope was held fixed
    chi2_reduced: float
    n_used: int
    dof: int


@dataclass(frozen=True)
class FcLimit:
    measured: float       # K
    sigma: float          # K
    confidence: float
    upper_limit: float    # K


def linear_fit(series: TemperatureSeries, fix_slope: float | None = None) -> LinearFitResult:
    """Weighted linear fit above the saturation cut.

    With ``fix_slope`` given, only the intercept is free:
    T0 = sum(w (Tm - a T)) / sum(w), sigma_T0 = sum(w)^-1/2.  Otherwise a
    standard two-parameter weighted fit with full covariance.
    """
    T, Tm, sigma = series.used_arrays()
    n = len(T)
    if n < 3:
        raise InsufficientDataError(
            f"need at least 3 points above {series.cut_low} K, have {n}"
        )
    w = 1.0 / sigma ** 2

    if fix_slope is not None:
        sw = float(np.sum(w))
        T0 = float(np.sum(w * (Tm - fix_slope * T)) / sw)
        alpha = float(fix_slope)
        sigma_T0 = sw ** -0.5
        sigma_alpha = None
        dof = n - 1
    else:
        sw = float(np.sum(w))
        swT = float(np.sum(w * T))
        swTT = float(np.sum(w * T * T))
        swY = float(np.sum(w * Tm))
        swTY = float(np.sum(w * T * Tm))
        det = sw * swTT - swT ** 2
        if det <= 0:
            raise InsufficientDataError("degenerate design (identical temperatures?)")
        T0 = (swTT * swY - swT * swTY) / det
        alpha = (sw * swTY - swT * swY) / det
        sigma_T0 = math.sqrt(swTT / det)
        sigma_alpha = math.sqrt(sw / det)
        dof = n - 2

    residual = Tm - alpha * T - T0
    chi2 = float(np.sum(w * residual ** 2))
    return LinearFitResult(
        alpha=alpha,
        T0=T0,
        sigma_T0=sigma_T0,
        sigma_alpha=sigma_alpha,
        chi2_reduced=chi2 / dof,
        n_used=n,
        dof=dof,
    )


def chi2_reduced(series: TemperatureSeries, fit: LinearFitResult) -> float:
    """Reduced chi-square of ``fit`` against the series (above the cut)."""
    T, Tm, sigma = series.used_arrays()
    if len(T) <= (1 if fit.sigma_alpha is None else 2):
        raise InsufficientDataError("not enough points for a reduced chi-square")
    residual = Tm - fit.alpha * T - fit.T0
    dof = len(T) - (1 if fit.sigma_alpha is None else 2)
    return float(np.sum((residual / sigma) ** 2)) / dof


# ---------------------------------------------------------------------------
# Feldman-Cousins belt for x ~ N(mu, 1), physical region mu >= 0
# ---------------------------------------------------------------------------


def acceptance_interval(
    mu: np.ndarray | float, confidence: float
) -> tuple[np.ndarray, np.ndarray]:
    """Acceptance interval [x1, x2] (sigma units) for true values ``mu``.

    Vectorized over ``mu``.  For mu above the symmetric threshold the
    interval is the central Gaussian one; below it the left edge leaks into
    x < 0 following the likelihood-ratio ordering, and the interval width
    is tuned by bisection to hold exactly ``confidence``.  mu = 0 has an
    unbounded left edge (every x < 0 is maximally preferred there).
    """
    if not 0.5 < confidence < 0.9999:
        raise ValueError("confidence must be in (0.5, 0.9999)")
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if np.any(mu < 0):
        raise ValueError("true values must be non-negative")
    z_central = float(ndtri(0.5 * (1.0 + confidence)))
    z_onesided = float(ndtri(confidence))

    x1 = np.empty_like(mu)
    x2 = np.empty_like(mu)

    symmetric = mu >= z_central
    x1[symmetric] = mu[symmetric] - z_central
    x2[symmetric] = mu[symmetric] + z_central

    zero = mu == 0.0
    x1[zero] = -np.inf
    x2[zero] = z_onesided

    boundary = ~symmetric & ~zero
    if np.any(boundary):
        m = mu[boundary]
        # coverage(a) = Phi(a) - Phi(-(m^2+a^2)/(2m)) is increasing in a and
        # brackets the target between the one-sided and central z values.
        lo = np.full_like(m, z_onesided)
        hi = np.full_like(m, z_central)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            cov = ndtr(mid) - ndtr(-(m ** 2 + mid ** 2) / (2.0 * m))
            take_hi = cov < confidence
            lo = np.where(take_hi, mid, lo)
            hi = np.where(take_hi, hi, mid)
        a = 0.5 * (lo + hi)
        x1[boundary] = (m ** 2 - a ** 2) / (2.0 * m)
        x2[boundary] = m + a
    return x1, x2


def feldman_cousins_upper_limit(
    measured: float, sigma: float, confidence: float = 0.95
) -> FcLimit:
    """Upper limit on a non-negative quantity from a Gaussian estimate.

    Scans candidate true values on a dense grid (step 0.001 sigma, range
    [0, measured/sigma + 10]) and returns the largest one whose acceptance
    interval still contains the measurement, refined by bisection between
    the last accepted and first rejected grid points.  Always positive.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = measured / sigma
    grid = np.arange(0.0, max(x, 0.0) + 10.0, 1e-3)
    x1, _ = acceptance_interval(grid, confidence)
    accepted = x1 <= x
    if accepted.all():
        raise BeltRangeError("acceptance region still open at the top of the grid")
    last = int(np.argmin(accepted)) - 1  # grid is monotone in x1
    if last < 0:
        raise BeltRangeError("measurement rejected at mu = 0 (construction bug)")

    lo, hi = grid[last], grid[last + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        m_x1, _ = acceptance_interval(mid, confidence)
        if m_x1[0] <= x:
            lo = mid
        else:
            hi = mid
    upper = 0.5 * (lo + hi)
    return FcLimit(
        measured=measured,
        sigma=sigma,
        confidence=confidence,
        upper_limit=upper * sigma,
    )
