"""Reference experimental configuration used by the CLI defaults and tests.

Measured inputs for the magnet-tipped silicon nanocantilever: geometry,
densities, resonance, and quality factor.  The rigid-cuboid length R1 is
the effective-mass reduction beta * L of the real cantilever.
"""

from __future__ import annotations

import math

from .beam import CantileverSpec, ModeModel, solve_fundamental_mode
from .collapse import ResonatorGeometry

# Silicon cantilever
CANTILEVER_LENGTH = 100e-6       # m
CANTILEVER_WIDTH = 5e-6          # m
CANTILEVER_THICKNESS = 0.10e-6   # m
CANTILEVER_DENSITY = 2330.0      # kg/m^3

# Ferromagnetic microsphere at the free end
SPHERE_RADIUS = 2.25e-6          # m (4.5 um diameter)
SPHERE_DENSITY = 7430.0          # kg/m^3

# Measured mode
RESONANCE_HZ = 3084.0
QUALITY_FACTOR = 38e3

# Measured upper bound on the excess mode temperature (95% confidence)
DELTA_T_MAX = 2.5e-3             # K


def sphere_mass() -> float:
    return SPHERE_DENSITY * (4.0 / 3.0) * math.pi * SPHERE_RADIUS ** 3


def cantilever_spec() -> CantileverSpec:
    return CantileverSpec(
        L=CANTILEVER_LENGTH,
        w=CANTILEVER_WIDTH,
        d=CANTILEVER_THICKNESS,
        rho_c=CANTILEVER_DENSITY,
        tip_mass=sphere_mass(),
    )


def fundamental_mode() -> ModeModel:
    return solve_fundamental_mode(
        cantilever_spec(), omega0=2.0 * math.pi * RESONANCE_HZ, Q=QUALITY_FACTOR
    )


def resonator_geometry(mode: ModeModel | None = None) -> ResonatorGeometry:
    """Reduced rigid geometry: cuboid beta*L x w x d plus the microsphere."""
    beta = (mode or fundamental_mode()).beta_eff
    return ResonatorGeometry(
        R1=beta * CANTILEVER_LENGTH,
        R2=CANTILEVER_WIDTH,
        R3=CANTILEVER_THICKNESS,
        R=SPHERE_RADIUS,
        rho_c=CANTILEVER_DENSITY,
        rho_s=SPHERE_DENSITY,
    )


def total_motional_mass(mode: ModeModel | None = None) -> float:
    mode = mode or fundamental_mode()
    spec = cantilever_spec()
    return mode.beta_eff * spec.beam_mass + sphere_mass()
