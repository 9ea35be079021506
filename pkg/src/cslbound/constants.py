"""Physical constants and shared collapse-model parameter types.

Conventions
-----------
SI units everywhere inside the library: meters, kilograms, seconds, kelvin.
Collapse rates are stored in s^-1 and collapse strengths are reported in
m^-2 s^-1.  The command-line layer converts suffixed quantities (um, mK,
kHz, ...) at the boundary; nothing below it ever sees a non-SI number.

All fundamental constants live in this module and are imported by every
other module; no downstream formula carries its own literal.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values used throughout (SI)."""

    hbar: float = 1.054_571_817e-34   # J s, reduced Planck constant
    k_B: float = 1.380_649e-23        # J/K, Boltzmann constant (exact)
    m0: float = 1.660_539_066_60e-27  # kg, 1 atomic mass unit


CONST = PhysicalConstants()

HBAR = CONST.hbar
K_B = CONST.k_B
M0 = CONST.m0


@dataclass(frozen=True)
class CslParameters:
    """Collapse-model parameter point: rate ``lam`` [1/s], length ``r_c`` [m]."""

    lam: float
    r_c: float

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ValueError(f"collapse rate must be positive, got {self.lam}")
        if not self.r_c > 0.0:
            raise ValueError(f"correlation length must be positive, got {self.r_c}")

    def scaled(self, factor: float) -> "CslParameters":
        """Same correlation length, rate multiplied by ``factor``."""
        return CslParameters(lam=self.lam * factor, r_c=self.r_c)


@dataclass(frozen=True)
class ReferencePoint:
    """Named literature point or bar in the (rate, length) plane.

    ``lam_low``/``lam_high`` are set only for bars (vertical ranges at a
    fixed correlation length); plain points leave them at None.
    """

    name: str
    lam: float
    r_c: float
    lam_low: float | None = None
    lam_high: float | None = None

    @property
    def is_bar(self) -> bool:
        return self.lam_low is not None and self.lam_high is not None


# Historical rate at the conventional 1e-7 m length.  Two values circulate:
# the order-of-magnitude 1e-17 1/s and the sharper 2.2e-17 1/s used for
# plotted curves; both are exposed so callers pick explicitly.
GHIRARDI_RATE = 2.2e-17  # 1/s
GRW_NOMINAL_RATE = 1.0e-17  # 1/s
CONVENTIONAL_LENGTH = 1.0e-7  # m

# Enhanced-rate suggestions: factors 1e9 (at 1e-7 m) and 1e11 (at 1e-6 m)
# over the conventional rate, each with a +/- 2 decade spread.
ADLER_FACTOR_100NM = 1.0e9
ADLER_FACTOR_1UM = 1.0e11
ADLER_SPREAD_DECADES = 2.0

MATTER_WAVE_RATE = 5.0e-6  # 1/s, interferometric bound at 1e-7 m


def reference_parameter_points() -> list[ReferencePoint]:
    """Literature anchors used for exclusion-plot overlays.

    Returns the conservative lower-bound point (both the 2.2e-17 plot value
    and the 1e-17 order-of-magnitude variant), the matter-wave upper-bound
    point, and the two enhanced-rate bars with their two-decade spreads.
    """
    spread = 10.0 ** ADLER_SPREAD_DECADES
    adler_100nm = GHIRARDI_RATE * ADLER_FACTOR_100NM
    adler_1um = GHIRARDI_RATE * ADLER_FACTOR_1UM
    return [
        ReferencePoint("ghirardi", GHIRARDI_RATE, CONVENTIONAL_LENGTH),
        ReferencePoint("grw_nominal", GRW_NOMINAL_RATE, CONVENTIONAL_LENGTH),
        ReferencePoint("matter_wave", MATTER_WAVE_RATE, CONVENTIONAL_LENGTH),
        ReferencePoint(
            "adler_100nm",
            adler_100nm,
            CONVENTIONAL_LENGTH,
            lam_low=adler_100nm / spread,
            lam_high=adler_100nm * spread,
        ),
        ReferencePoint(
            "adler_1um",
            adler_1um,
            1.0e-6,
            lam_low=adler_1um / spread,
            lam_high=adler_1um * spread,
        ),
    ]
