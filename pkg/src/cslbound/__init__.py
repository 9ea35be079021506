"""Thermal-noise bounds on spontaneous-collapse models from a nanocantilever."""

from .constants import (
    CONST,
    HBAR,
    K_B,
    M0,
    CslParameters,
    PhysicalConstants,
    ReferencePoint,
    reference_parameter_points,
)
from .beam import (
    CantileverSpec,
    ModeModel,
    RootNotFoundError,
    rigid_reduction,
    solve_fundamental_mode,
    total_motional_mass,
)
from .collapse import (
    CollapseStrength,
    ResonatorGeometry,
    asymptotic_eta,
    eta_cuboid,
    eta_kspace,
    eta_kspace_mix,
    eta_mix,
    eta_sphere,
    eta_total,
)
from .quadrature import QuadSpec, QuadratureError

__version__ = "0.1.0"
