"""Observable consequences of a collapse strength on a mechanical mode.

A white collapse-force noise of strength eta adds a temperature-independent
excess hbar^2 Q eta / (2 k_B m omega0) to the mode temperature; the mode's
displacement spectrum is a Lorentzian whose area measures the variance and
hence the mode temperature.

Spectrum conventions: ``theoretical_psd`` is the resonant-lobe density in
angular frequency, normalized so that (1/pi) * integral over the lobe
equals <q^2>.  The one-sided density in Hz (what lab spectrum analyzers
produce and the CSV format uses) is 4*pi times the per-(rad/s) density,
i.e. ``one_sided_psd_hz = 2 * theoretical_psd(omega = 2 pi f)``, so that
integral over f of the one-sided density recovers <q^2>.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, K_B


@dataclass(frozen=True)
class OscillatorParams:
    """Mechanical mode parameters (SI)."""

    m: float         # total motional mass, kg
    omega0: float    # angular resonance frequency, rad/s
    Q: float         # quality factor
    T_bath: float    # bath temperature, K

    def __post_init__(self) -> None:
        for name in ("m", "omega0", "Q", "T_bath"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def gamma_m(self) -> float:
        """Mechanical damping rate omega0 / Q, 1/s."""
        return self.omega0 / self.Q

    @property
    def f0(self) -> float:
        return self.omega0 / (2.0 * math.pi)

    def variance_at(self, temperature: float) -> float:
        """Equipartition displacement variance k_B T / (m omega0^2)."""
        return K_B * temperature / (self.m * self.omega0 ** 2)


def delta_T_csl(osc: OscillatorParams, eta: float) -> float:
    """Excess mode temperature hbar^2 Q eta / (2 k_B m omega0), kelvin."""
    if eta < 0.0:
        raise ValueError("collapse strength must be non-negative here")
    return HBAR ** 2 * osc.Q * eta / (2.0 * K_B * osc.m * osc.omega0)


def mean_energy(osc: OscillatorParams, eta: float) -> float:
    """Equilibrium mean energy k_B (T_bath + excess), joules.

    Valid in the high-temperature regime k_B T >> hbar omega0; warns
    otherwise rather than switching to the quantum expression.
    """
    if K_B * osc.T_bath < 10.0 * HBAR * osc.omega0:
        warnings.warn(
            "bath temperature is not deep in the high-temperature regime; "
            "the classical energy expression is inaccurate",
            stacklevel=2,
        )
    return K_B * (osc.T_bath + delta_T_csl(osc, eta))


def theoretical_psd(
    osc: OscillatorParams, eta: float, omega_grid: np.ndarray
) -> np.ndarray:
    """Resonant Lorentzian displacement spectrum on an angular-frequency grid.

    Full width gamma_m; peak value proportional to Q^2 at fixed temperature.
    (1/pi) * integral d omega equals k_B (T + excess) / (m omega0^2).
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    numerator = (
        2.0 * osc.gamma_m * K_B * osc.T_bath / (HBAR * osc.omega0)
        + eta * HBAR / (osc.m * osc.omega0)
    )
    lorentz = (omega_grid - osc.omega0) ** 2 + 0.25 * osc.gamma_m ** 2
    return HBAR / (4.0 * osc.m * osc.omega0) * numerator / lorentz


def momentum_psd(
    osc: OscillatorParams, eta: float, omega_grid: np.ndarray
) -> np.ndarray:
    """Momentum spectrum m^2 omega^2 S_q(omega)."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    return osc.m ** 2 * omega_grid ** 2 * theoretical_psd(osc, eta, omega_grid)


def one_sided_psd_hz(
    osc: OscillatorParams, eta: float, freq_hz: np.ndarray
) -> np.ndarray:
    """One-sided displacement PSD in m^2/Hz on a frequency grid in Hz.

    Integrating this density over f recovers the displacement variance
    k_B (T_bath + excess) / (m omega0^2).
    """
    freq_hz = np.asarray(freq_hz, dtype=float)
    return 2.0 * theoretical_psd(osc, eta, 2.0 * math.pi * freq_hz)


def lorentzian_area_check(osc: OscillatorParams, eta: float) -> float:
    """Analytic <q^2> implied by the spectrum: k_B (T + excess) / (m omega0^2)."""
    return osc.variance_at(osc.T_bath + delta_T_csl(osc, eta))
