"""Synthesis and fitting of averaged displacement spectra.

Measured spectra are n-fold averages of periodogram bins, so each bin is
Gamma-distributed with shape n_averages and mean equal to the true PSD
(mode Lorentzian plus detector white floor).  The fit is weighted
Levenberg-Marquardt with the Gamma variance model var = mean^2 / n,
weights refreshed from the model between solves (iteratively reweighted,
which makes the converged estimate solve the Gamma likelihood equations
and keeps the peak area unbiased at small n_averages).

Model parameterization:
    psd(f) = area * (width / 2 pi) / ((f - f0)^2 + width^2 / 4) + floor
where ``width`` is the full width at half maximum in Hz and ``area`` is the
integrated Lorentzian, i.e. the displacement variance <q^2>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import K_B
from .heating import OscillatorParams, one_sided_psd_hz


class FitConvergenceError(RuntimeError):
    """Levenberg-Marquardt failed to converge within the iteration budget."""


class DegenerateFitError(RuntimeError):
    """Fitted line is unresolved (narrower than two frequency bins)."""


@dataclass(frozen=True)
class SpectrumRecord:
    """Frequency-binned averaged PSD: uniform grid, m^2/Hz."""

    freqs: np.ndarray
    psd: np.ndarray
    n_averages: int

    def __post_init__(self) -> None:
        freqs = np.asarray(self.freqs, dtype=float)
        psd = np.asarray(self.psd, dtype=float)
        if freqs.ndim != 1 or freqs.shape != psd.shape:
            raise ValueError("freqs and psd must be matching 1D arrays")
        if len(freqs) < 8:
            raise ValueError("spectrum too short")
        df = np.diff(freqs)
        if not (np.all(df > 0) and np.allclose(df, df[0], rtol=1e-6)):
            raise ValueError("frequency grid must be uniform and increasing")
        if np.any(psd < 0):
            raise ValueError("psd must be non-negative")
        if self.n_averages < 1:
            raise ValueError("n_averages must be >= 1")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "psd", psd)

    @property
    def df(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


@dataclass(frozen=True)
class LorentzianFit:
    """Converged fit parameters; ``area`` is the displacement variance."""

    f0_fit: float          # Hz
    gamma_fit: float       # full width at half maximum, Hz
    area: float            # m^2
    white_floor: float     # m^2/Hz
    covariance: np.ndarray  # 4x4, parameter order (f0, gamma, area, floor)
    T_m: float = float("nan")  # K, filled in by mode_temperature


def _lorentz_model(freqs: np.ndarray, theta: np.ndarray) -> np.ndarray:
    f0, width, area, floor = theta
    denom = (freqs - f0) ** 2 + 0.25 * width ** 2
    return area * (width / (2.0 * math.pi)) / denom + floor


def _lorentz_jacobian(freqs: np.ndarray, theta: np.ndarray) -> np.ndarray:
    f0, width, area, floor = theta
    delta = freqs - f0
    denom = delta ** 2 + 0.25 * width ** 2
    peak_part = (width / (2.0 * math.pi)) / denom
    jac = np.empty((len(freqs), 4))
    jac[:, 0] = area * peak_part * 2.0 * delta / denom
    jac[:, 1] = area / (2.0 * math.pi) * (delta ** 2 - 0.25 * width ** 2) / denom ** 2
    jac[:, 2] = peak_part
    jac[:, 3] = 1.0
    return jac


def synthesize_spectrum(
    osc: OscillatorParams,
    eta: float,
    floor: float,
    df: float = 0.02,
    n_averages: int = 20,
    seed: int = 0,
    span_hz: float | None = None,
) -> SpectrumRecord:
    """Draw an averaged spectrum around the resonance.

    Per-bin mean is the one-sided theoretical PSD plus the white floor;
    bins are independent Gamma draws with shape ``n_averages`` and that
    mean.  Deterministic for a fixed seed.
    """
    if df <= 0 or floor < 0:
        raise ValueError("df must be positive and floor non-negative")
    if span_hz is None:
        span_hz = 60.0 * osc.gamma_m / (2.0 * math.pi)
    half = 0.5 * span_hz
    n_bins = max(int(round(span_hz / df)), 16)
    freqs = osc.f0 - half + df * (0.5 + np.arange(n_bins))
    mean = one_sided_psd_hz(osc, eta, freqs) + floor
    rng = np.random.default_rng(seed)
    psd = rng.gamma(shape=n_averages, scale=mean / n_averages)
    return SpectrumRecord(freqs=freqs, psd=psd, n_averages=n_averages)


def _auto_guess(spec: SpectrumRecord) -> np.ndarray:
    psd, freqs = spec.psd, spec.freqs
    n = len(freqs)
    tails = np.concatenate([psd[: n // 8], psd[-n // 8:]])
    floor = float(np.median(tails))
    i_peak = int(np.argmax(psd))
    # Keep the fallback relative to the spectrum's own scale; PSDs here are
    # ~1e-19 m^2/Hz, so any absolute floor would swamp the real peak.
    scale = psd[i_peak] if psd[i_peak] > 0 else 1.0
    peak = max(psd[i_peak] - floor, 1e-9 * scale)
    above = psd - floor > 0.5 * peak
    width = max(spec.df * int(np.count_nonzero(above)), 2.5 * spec.df)
    area = peak * math.pi * width / 2.0
    return np.array([freqs[i_peak], width, area, floor])


def fit_lorentzian(
    spec: SpectrumRecord,
    init_guess: np.ndarray | None = None,
    max_iter: int = 500,
    step_tol: float = 1e-8,
) -> LorentzianFit:
    """Weighted Levenberg-Marquardt fit of Lorentzian-plus-floor.

    Weights follow the averaged-periodogram statistics var = mean^2 / n
    with the mean taken from the current model (refreshed between LM
    solves).  Converges when the relative parameter step falls below
    ``step_tol``; raises FitConvergenceError after ``max_iter`` iterations
    and DegenerateFitError when the fitted width is below two bins.
    """
    y = spec.psd
    freqs = spec.freqs
    theta = np.array(init_guess, dtype=float) if init_guess is not None else _auto_guess(spec)
    if len(theta) != 4:
        raise ValueError("init_guess must be (f0, width, area, floor)")

    for outer in range(12):
        mu_w = np.maximum(_lorentz_model(freqs, theta), 1e-300)
        weights = spec.n_averages / mu_w ** 2
        theta, iterations = _lm_solve(freqs, y, weights, theta, max_iter, step_tol)
        mu_new = np.maximum(_lorentz_model(freqs, theta), 1e-300)
        if np.max(np.abs(mu_new - mu_w) / mu_w) < 1e-6:
            break

    f0, width, area, floor = theta
    if not (freqs[0] <= f0 <= freqs[-1]) or width <= 0 or area <= 0:
        raise DegenerateFitError(
            f"fit collapsed to f0={f0:g} Hz, width={width:g} Hz, area={area:g}"
        )
    if width < 2.0 * spec.df:
        raise DegenerateFitError(
            f"fitted width {width:g} Hz is unresolved at bin size {spec.df:g} Hz"
        )

    jac = _lorentz_jacobian(freqs, theta)
    jtj = (jac * weights[:, None]).T @ jac
    covariance = np.linalg.inv(jtj)
    return LorentzianFit(
        f0_fit=float(f0),
        gamma_fit=float(width),
        area=float(area),
        white_floor=float(floor),
        covariance=covariance,
    )


def _lm_solve(freqs, y, weights, theta, max_iter, step_tol):
    """Damped normal-equation Levenberg-Marquardt with fixed weights."""
    lam = 1e-3

    def cost(t):
        r = y - _lorentz_model(freqs, t)
        return float(np.sum(weights * r * r))

    current = cost(theta)
    stalled = 0
    for iteration in range(1, max_iter + 1):
        jac = _lorentz_jacobian(freqs, theta)
        residual = y - _lorentz_model(freqs, theta)
        jtw = jac.T * weights
        gradient = jtw @ residual
        hessian = jtw @ jac
        for _ in range(60):
            damped = hessian + lam * np.diag(np.maximum(np.diag(hessian), 1e-300))
            try:
                step = np.linalg.solve(damped, gradient)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = theta + step
            rel_step = float(np.max(np.abs(step) / np.maximum(np.abs(trial), 1e-300)))
            # Width and area must stay positive; treat excursions as a
            # rejected step rather than clipping.
            if trial[1] <= 0 or trial[2] <= 0 or cost(trial) > current:
                if rel_step < step_tol:
                    return theta, iteration  # damping shrank steps below tol
                lam *= 10.0
                continue
            new_cost = cost(trial)
            stalled = stalled + 1 if current - new_cost <= 1e-14 * max(current, 1e-300) else 0
            theta, current = trial, new_cost
            lam = max(lam / 3.0, 1e-12)
            break
        else:
            raise FitConvergenceError("no acceptable step found (damping saturated)")
        if rel_step < step_tol or stalled >= 3:
            return theta, iteration
    raise FitConvergenceError(f"no convergence after {max_iter} iterations")


def mode_temperature(fit: LorentzianFit, osc: OscillatorParams) -> float:
    """Mode temperature from the fitted peak area: T_m = m omega0^2 area / k_B."""
    return osc.m * osc.omega0 ** 2 * fit.area / K_B


def with_mode_temperature(fit: LorentzianFit, osc: OscillatorParams) -> LorentzianFit:
    """Copy of ``fit`` with the T_m field filled in."""
    return LorentzianFit(
        f0_fit=fit.f0_fit,
        gamma_fit=fit.gamma_fit,
        area=fit.area,
        white_floor=fit.white_floor,
        covariance=fit.covariance,
        T_m=mode_temperature(fit, osc),
    )
