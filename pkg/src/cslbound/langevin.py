"""Stochastic verification of the collapse-heating prediction.

Integrates the classical high-temperature Langevin dynamics of the mode,

    dq = p/m dt
    dp = (-m omega0^2 q - gamma_m p) dt
         + sqrt(2 m gamma_m k_B T) dW1 + hbar sqrt(eta) dW2,

with a symplectic-Euler step (momentum damping handled implicitly), and
accumulates stationary energy statistics plus an averaged Welch spectrum
of the displacement.  The analytic prediction to verify: mean energy
k_B (T + excess) and Lorentzian spectrum area k_B (T + excess)/(m omega0^2).

Trajectories use independent counter-split random streams spawned from the
master seed, so results do not depend on execution order or batching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import welch

from .constants import HBAR, K_B
from .heating import OscillatorParams, delta_T_csl


@dataclass(frozen=True)
class SimulationSpec:
    """Ensemble integration plan.

    Stability/resolution invariants (checked at construction):
    dt resolves the oscillation (dt <= 1/(50 f0)), the post-burn-in window
    resolves the linewidth (>= 20 Q / omega0), and burn-in reaches
    stationarity (>= 5 Q / omega0).
    """

    osc: OscillatorParams
    eta: float
    dt: float
    n_steps: int
    n_trajectories: int
    seed: int
    burn_in: float   # seconds

    def __post_init__(self) -> None:
        if self.eta < 0:
            raise ValueError("eta must be non-negative")
        if self.n_steps < 1 or self.n_trajectories < 1:
            raise ValueError("need at least one step and one trajectory")
        f0 = self.osc.omega0 / (2.0 * math.pi)
        if self.dt > 1.0 / (50.0 * f0):
            raise ValueError(
                f"dt = {self.dt:g} s does not resolve the oscillation; "
                f"need dt <= {1.0 / (50.0 * f0):g} s"
            )
        tau = self.osc.Q / self.osc.omega0
        if self.burn_in < 5.0 * tau:
            raise ValueError(f"burn_in must be >= {5.0 * tau:g} s (5 Q / omega0)")
        if self.n_steps * self.dt < 20.0 * tau:
            raise ValueError(
                f"post-burn-in window {self.n_steps * self.dt:g} s does not "
                f"resolve the linewidth; need >= {20.0 * tau:g} s"
            )

    @classmethod
    def for_test_scale(
        cls,
        osc: OscillatorParams,
        eta: float,
        seed: int = 0,
        n_trajectories: int = 64,
        oscillation_samples: int = 100,
        window_linewidths: float = 25.0,
    ) -> "SimulationSpec":
        """Spec sized from the oscillator's own timescales."""
        f0 = osc.omega0 / (2.0 * math.pi)
        dt = 1.0 / (oscillation_samples * f0)
        tau = osc.Q / osc.omega0
        burn = 6.0 * tau
        n_steps = int(round(window_linewidths * tau / dt))
        return cls(
            osc=osc,
            eta=eta,
            dt=dt,
            n_steps=n_steps,
            n_trajectories=n_trajectories,
            seed=seed,
            burn_in=burn,
        )


@dataclass(frozen=True)
class SimulationStats:
    """Stationary trajectory statistics."""

    mean_energy: float        # J
    mean_energy_se: float     # J, standard error over trajectories
    var_q: float              # m^2
    var_p: float              # kg^2 m^2 / s^2
    psd_freqs: np.ndarray     # Hz
    psd: np.ndarray           # m^2/Hz, one-sided, trajectory-averaged
    psd_n_averages: int
    n_trajectories: int
    duration: float           # post-burn-in seconds per trajectory


def simulate(spec: SimulationSpec) -> SimulationStats:
    """Integrate the ensemble and return stationary statistics."""
    osc, dt = spec.osc, spec.dt
    m, w0, gamma = osc.m, osc.omega0, osc.gamma_m
    n_traj = spec.n_trajectories

    thermal_amp = math.sqrt(2.0 * m * gamma * K_B * osc.T_bath * dt)
    collapse_amp = HBAR * math.sqrt(spec.eta * dt)
    damp = 1.0 / (1.0 + gamma * dt)

    # Start from the thermal equilibrium ensemble to shorten burn-in; the
    # mandatory burn-in then absorbs the collapse-induced excess.
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(n_traj)]
    init = np.random.default_rng(np.random.SeedSequence((spec.seed, 1)).entropy)
    q = init.normal(0.0, math.sqrt(K_B * osc.T_bath / (m * w0 ** 2)), n_traj)
    p = init.normal(0.0, math.sqrt(K_B * osc.T_bath * m), n_traj)

    n_burn = int(round(spec.burn_in / dt))
    n_total = n_burn + spec.n_steps
    q_records = np.empty((spec.n_steps, n_traj))
    p_records = np.empty((spec.n_steps, n_traj))

    chunk = 4096
    noise = np.empty((2, chunk, n_traj))
    step = 0
    while step < n_total:
        span = min(chunk, n_total - step)
        for i, rng in enumerate(streams):
            noise[:, :span, i] = rng.standard_normal((2, span))
        for j in range(span):
            force = -m * w0 ** 2 * q
            kick = thermal_amp * noise[0, j] + collapse_amp * noise[1, j]
            p = (p + force * dt + kick) * damp
            q = q + p * (dt / m)
            idx = step + j - n_burn
            if idx >= 0:
                q_records[idx] = q
                p_records[idx] = p
        step += span

    # Per-trajectory time averages, then ensemble mean +- standard error.
    energy_traj = 0.5 * m * w0 ** 2 * np.mean(q_records ** 2, axis=0) + np.mean(
        p_records ** 2, axis=0
    ) / (2.0 * m)
    mean_energy = float(np.mean(energy_traj))
    se = float(np.std(energy_traj, ddof=1) / math.sqrt(n_traj))

    fs = 1.0 / dt
    freqs, psd_all = welch(
        q_records, fs=fs, axis=0, nperseg=spec.n_steps, window="hann", detrend=False
    )
    psd = psd_all.mean(axis=1)

    return SimulationStats(
        mean_energy=mean_energy,
        mean_energy_se=se,
        var_q=float(np.mean(q_records ** 2)),
        var_p=float(np.mean(p_records ** 2)),
        psd_freqs=freqs,
        psd=psd,
        psd_n_averages=n_traj,
        n_trajectories=n_traj,
        duration=spec.n_steps * dt,
    )


def effective_temperature(stats: SimulationStats) -> tuple[float, float]:
    """Mode temperature estimate <E>/k_B with its standard error, kelvin."""
    if stats.n_trajectories < 2 or stats.duration <= 0:
        raise ValueError("statistics too short for a temperature estimate")
    return stats.mean_energy / K_B, stats.mean_energy_se / K_B


def predicted_energy(osc: OscillatorParams, eta: float) -> float:
    """Analytic stationary energy k_B (T_bath + excess), joules."""
    return K_B * (osc.T_bath + delta_T_csl(osc, eta))


def eta_for_excess(osc: OscillatorParams, delta_T: float) -> float:
    """Collapse strength producing a given temperature excess (test helper)."""
    return 2.0 * K_B * osc.m * osc.omega0 * delta_T / (HBAR ** 2 * osc.Q)
