"""Fundamental flexural mode of a clamped-free cantilever with a tip mass.

The mode shape follows standard Euler-Bernoulli theory for a point mass at
the free end (rotary inertia neglected).  With the mass ratio
``mu = tip_mass / beam_mass`` the dimensionless eigenvalue x = kL of the
fundamental mode solves

    1 + cos(x) cosh(x) + mu * x * (cos(x) sinh(x) - sin(x) cosh(x)) = 0

on (0, 1.8751], reducing to the textbook clamped-free root at mu = 0.  The
shape is normalized to unit displacement at the free end so the modal
coordinate is the tip displacement; the effective-mass fraction is
beta = (1/L) * integral of A(x)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

# Bare clamped-free fundamental root of 1 + cos(x) cosh(x) = 0.
BARE_CLAMPED_FREE_ROOT = 1.8751040687119611

# Effective-mass fraction of the static (heavy-tip) deflection shape
# A = (3u^2 - u^3)/2: integral of A^2 du = 33/140.
STATIC_SHAPE_BETA = 33.0 / 140.0


class RootNotFoundError(RuntimeError):
    """No sign change in the eigenvalue bracket; indicates an invalid mass ratio."""


@dataclass(frozen=True)
class CantileverSpec:
    """Rectangular cantilever geometry plus end load, SI units."""

    L: float          # length, m
    w: float          # width, m
    d: float          # thickness, m
    rho_c: float      # density, kg/m^3
    tip_mass: float = 0.0  # kg; zero for a bare cantilever

    def __post_init__(self) -> None:
        for name in ("L", "w", "d", "rho_c"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.tip_mass < 0.0:
            raise ValueError("tip_mass must be non-negative")

    @property
    def beam_mass(self) -> float:
        return self.rho_c * self.L * self.w * self.d

    @property
    def mass_ratio(self) -> float:
        return self.tip_mass / self.beam_mass


@dataclass(frozen=True)
class ModeModel:
    """Solved fundamental mode referenced to free-end displacement."""

    kL: float
    shape: Callable[[float], float]   # A(x), x in [0, L], A(L) = 1
    beta_eff: float
    m_effective: float                # beta_eff * beam mass + tip mass, kg
    omega0: float | None = None       # rad/s, measured, optional
    Q: float | None = None            # dimensionless, measured, optional


def _characteristic(x: float, mu: float) -> float:
    return 1.0 + math.cos(x) * math.cosh(x) + mu * x * (
        math.cos(x) * math.sinh(x) - math.sin(x) * math.cosh(x)
    )


def _bisect_root(mu: float) -> float:
    lo, hi = 1e-9, BARE_CLAMPED_FREE_ROOT + 1e-7
    f_lo, f_hi = _characteristic(lo, mu), _characteristic(hi, mu)
    if f_lo * f_hi > 0.0:
        raise RootNotFoundError(
            f"no eigenvalue sign change on ({lo:g}, {hi:g}] for mass ratio {mu:g}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _characteristic(mid, mu)
        if f_lo * f_mid <= 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo < 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def _adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, rel_tol: float
) -> float:
    """Recursive Simpson with per-interval Richardson acceptance."""

    def simpson(lo: float, hi: float, f_lo: float, f_mid: float, f_hi: float) -> float:
        return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)

    def recurse(lo, hi, f_lo, f_mid, f_hi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        f_lm, f_rm = f(lm), f(rm)
        left = simpson(lo, mid, f_lo, f_lm, f_mid)
        right = simpson(mid, hi, f_mid, f_rm, f_hi)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1) + recurse(
            mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1
        )

    mid = 0.5 * (a + b)
    f_a, f_mid, f_b = f(a), f(mid), f(b)
    whole = simpson(a, b, f_a, f_mid, f_b)
    # Scale the absolute budget off the coarse estimate; the shape integral
    # is strictly positive so this is a faithful relative tolerance.
    tol = rel_tol * max(abs(whole), 1e-300)
    return recurse(a, b, f_a, f_mid, f_b, whole, tol, 40)


def solve_fundamental_mode(
    spec: CantileverSpec,
    omega0: float | None = None,
    Q: float | None = None,
) -> ModeModel:
    """Solve the eigenvalue, build the normalized shape, integrate beta.

    ``omega0`` and ``Q`` are measured quantities carried through for
    convenience; nothing here predicts them from stiffness.
    """
    mu = spec.mass_ratio
    kL = _bisect_root(mu)
    k = kL / spec.L

    # Moment-free tip: A''(L) = 0 fixes the shape coefficient; the tip mass
    # enters only through the eigenvalue (shear condition).
    alpha = (math.cos(kL) + math.cosh(kL)) / (math.sin(kL) + math.sinh(kL))

    def raw_shape(x: float) -> float:
        kx = k * x
        return math.cosh(kx) - math.cos(kx) - alpha * (math.sinh(kx) - math.sin(kx))

    tip_value = raw_shape(spec.L)

    def shape(x: float) -> float:
        return raw_shape(x) / tip_value

    beta = _adaptive_simpson(lambda x: shape(x) ** 2, 0.0, spec.L, 1e-8) / spec.L
    return ModeModel(
        kL=kL,
        shape=shape,
        beta_eff=beta,
        m_effective=beta * spec.beam_mass + spec.tip_mass,
        omega0=omega0,
        Q=Q,
    )


def rigid_reduction(mode: ModeModel, spec: CantileverSpec) -> tuple[float, float, float]:
    """Equivalent rigid-cuboid dimensions (R1, R2, R3) for the moving beam.

    The flexing beam is replaced by a cuboid of length beta * L translating
    rigidly with the tip; width and thickness are untouched by the elastic
    motion and carry over unchanged.
    """
    return mode.beta_eff * spec.L, spec.w, spec.d


def total_motional_mass(
    mode: ModeModel,
    spec: CantileverSpec,
    sphere_radius: float = 0.0,
    sphere_density: float = 0.0,
) -> float:
    """Moving mass referenced to the free end: beta * m_beam + sphere mass."""
    sphere_mass = sphere_density * (4.0 / 3.0) * math.pi * sphere_radius ** 3
    return mode.beta_eff * spec.beam_mass + sphere_mass
