"""Collapse strength of a sphere-on-cuboid resonator.

The collapse noise field couples to the mass distribution through a
Gaussian kernel of width r_c; the resulting momentum-diffusion coefficient
("collapse strength", m^-2 s^-1) splits into a sphere term, a cuboid term,
and a mixing term.  Three independent evaluation routes are provided:

* closed forms for the sphere and cuboid terms, with cancellation-safe
  series branches in the asymptotic regimes;
* a five-dimensional real-space Gauss-Legendre quadrature for the mixing
  term (volume of the cuboid x surface of the sphere);
* a k-space route (``eta_kspace``) built directly from the squared Fourier
  transform of the mass density, used as an independent cross-check of
  everything above.

Geometry frame: the cuboid occupies x in [0, R1], y in [-R2/2, R2/2],
z in [-R3/2, R3/2]; the sphere rests on the cuboid's top face near the
free end, center (R1 - R, 0, R + R3/2).  Motion is along z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .constants import M0, CslParameters
from .quadrature import (
    ORACLE_SPEC,
    QuadSpec,
    QuadratureError,
    integrate_1d,
    mapped_rule,
    next_pow2,
)

# Gaussian kernel exp(-u^2 / 4 r_c^2) support cutoff, in units of r_c.
# exp(-(13/2)^2) ~ 4e-19, below double-precision relevance for the
# quadrature tolerances used here.
_SUPPORT_CUT = 13.0

# Rigid-body modeling breaks down once the kernel probes interatomic
# scales; reject correlation lengths below this documented limit.
MIN_CORRELATION_LENGTH = 1e-9

# Stability switch points for the closed forms.
_SPHERE_SERIES_RATIO = 5.0      # use series when r_c / R > 5
_CUBOID_SERIES_ARG = 1e-2       # use series when a / (2 r_c) < 1e-2


@dataclass(frozen=True)
class ResonatorGeometry:
    """Cuboid + sphere union with uniform densities (SI).

    ``sphere_center`` overrides the resting position (used by displacement
    tests); ``offset`` rigidly translates the whole composite (quadrature
    routes only; the closed forms are translation invariant analytically).
    """

    R1: float            # cuboid length along x, m
    R2: float            # cuboid width along y, m
    R3: float            # cuboid thickness along z, m
    R: float             # sphere radius, m
    rho_c: float         # cuboid density, kg/m^3
    rho_s: float         # sphere density, kg/m^3
    sphere_center: tuple[float, float, float] | None = None
    offset: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        for name in ("R1", "R2", "R3", "R"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("rho_c", "rho_s"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    def cuboid_bounds(self) -> tuple[tuple[float, float], ...]:
        ox, oy, oz = self.offset
        return (
            (ox, ox + self.R1),
            (oy - 0.5 * self.R2, oy + 0.5 * self.R2),
            (oz - 0.5 * self.R3, oz + 0.5 * self.R3),
        )

    def sphere_center_abs(self) -> tuple[float, float, float]:
        cx, cy, cz = self.sphere_center if self.sphere_center is not None else (
            self.R1 - self.R,
            0.0,
            self.R + 0.5 * self.R3,
        )
        ox, oy, oz = self.offset
        return (cx + ox, cy + oy, cz + oz)

    @property
    def cuboid_mass(self) -> float:
        return self.rho_c * self.R1 * self.R2 * self.R3

    @property
    def sphere_mass(self) -> float:
        return self.rho_s * (4.0 / 3.0) * math.pi * self.R ** 3


@dataclass(frozen=True)
class CollapseStrength:
    """Collapse strength breakdown at one parameter point, m^-2 s^-1."""

    eta_total: float
    eta_sphere: float
    eta_cuboid: float
    eta_mix: float
    params: CslParameters


def _validate(params: CslParameters) -> None:
    if params.r_c < MIN_CORRELATION_LENGTH:
        raise ValueError(
            f"correlation length {params.r_c:g} m below the rigid-body "
            f"modeling limit {MIN_CORRELATION_LENGTH:g} m"
        )


def _sphere_bracket(u: float) -> float:
    """1 - 2/u + e^-u (1 + 2/u) for u = (R / r_c)^2, cancellation-safe.

    For small u the direct expression loses ~log10(2/u * 6/u^2) digits, so
    below the switch point it is replaced by its alternating series
    sum_{n>=2} (-1)^n (n-1) u^n / (n+1)!.
    """
    if u > 1.0 / _SPHERE_SERIES_RATIO ** 2:
        return 1.0 - 2.0 / u + math.exp(-u) * (1.0 + 2.0 / u)
    total = 0.0
    term_pow = u * u  # u^n starting at n = 2
    for n in range(2, 40):
        coeff = (n - 1) / math.factorial(n + 1)
        term = (term_pow if n % 2 == 0 else -term_pow) * coeff
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
        term_pow *= u
    return total


def _edge_factor(t: float) -> float:
    """e^-t^2 + sqrt(pi) t erf(t) - 1 for t = a / (2 r_c), cancellation-safe.

    Series sum_{n>=1} (-1)^(n-1) t^(2n) / ((2n-1) n!) below the switch point.
    """
    if t >= _CUBOID_SERIES_ARG:
        return math.exp(-t * t) + math.sqrt(math.pi) * t * erf(t) - 1.0
    t2 = t * t
    total = 0.0
    power = t2
    for n in range(1, 30):
        term = power / ((2 * n - 1) * math.factorial(n))
        total += term if n % 2 == 1 else -term
        if power < 1e-18 * abs(total):
            break
        power *= t2
    return total


def eta_sphere(geom: ResonatorGeometry, params: CslParameters) -> float:
    """Sphere contribution, exact closed form."""
    _validate(params)
    u = (geom.R / params.r_c) ** 2
    pref = (4.0 * math.pi) ** 2 * params.r_c ** 2 * geom.R ** 2 * geom.rho_s ** 2 / (
        3.0 * M0 ** 2
    )
    return params.lam * pref * _sphere_bracket(u)


def eta_cuboid(geom: ResonatorGeometry, params: CslParameters) -> float:
    """Cuboid contribution, exact closed form."""
    _validate(params)
    r_c = params.r_c
    thickness_factor = -math.expm1(-geom.R3 ** 2 / (4.0 * r_c ** 2))
    pref = 32.0 * r_c ** 4 * geom.rho_c ** 2 / M0 ** 2
    return (
        params.lam
        * pref
        * thickness_factor
        * _edge_factor(geom.R2 / (2.0 * r_c))
        * _edge_factor(geom.R1 / (2.0 * r_c))
    )


def asymptotic_eta(
    geom: ResonatorGeometry, params: CslParameters, regime: str
) -> tuple[float, float]:
    """Asymptotic (cuboid, sphere) contributions for validation.

    ``regime='small'``: kernel much narrower than every dimension; both
    terms grow as r_c^2.  ``regime='large'``: kernel wider than the body;
    both terms fall as r_c^-2 with squared-total-mass coefficients.
    """
    lam, r_c = params.lam, params.r_c
    if regime == "small":
        eta_c = 8.0 * math.pi * lam * geom.R1 * geom.R2 * geom.rho_c ** 2 / M0 ** 2 * r_c ** 2
        eta_s = (4.0 * math.pi) ** 2 * lam * geom.R ** 2 * geom.rho_s ** 2 / (
            3.0 * M0 ** 2
        ) * r_c ** 2
        return eta_c, eta_s
    if regime == "large":
        eta_c = lam / (2.0 * r_c ** 2) * (geom.cuboid_mass / M0) ** 2
        eta_s = lam / (2.0 * r_c ** 2) * (geom.sphere_mass / M0) ** 2
        return eta_c, eta_s
    raise ValueError(f"regime must be 'small' or 'large', got {regime!r}")


# ---------------------------------------------------------------------------
# Mixing term: 5D real-space quadrature over (x, y, z, theta, phi)
# ---------------------------------------------------------------------------

_MIX_AXES = ("x", "y", "z", "theta", "phi")


def _mix_domains(
    geom: ResonatorGeometry, r_c: float
) -> tuple[dict[str, tuple[float, float]], dict[str, int]] | None:
    """Support-clipped integration domains and initial node counts.

    Returns None when the kernel support does not connect the two bodies
    (integral below double-precision noise).
    """
    (x_lo, x_hi), (y_lo, y_hi), (z_lo, z_hi) = geom.cuboid_bounds()
    cx, cy, cz = geom.sphere_center_abs()
    R = geom.R
    cut = _SUPPORT_CUT * r_c

    # Polar range of sphere-surface points whose height is within reach of
    # the cuboid's z slab.
    cos_hi = (z_hi + cut - cz) / R
    cos_lo = (z_lo - cut - cz) / R
    cos_hi = min(1.0, cos_hi)
    cos_lo = max(-1.0, cos_lo)
    if cos_lo > cos_hi:
        return None
    theta_lo = math.acos(cos_hi)
    theta_hi = math.acos(cos_lo)
    if theta_lo <= 0.5 * math.pi <= theta_hi:
        s_max = 1.0
    else:
        s_max = max(math.sin(theta_lo), math.sin(theta_hi))

    reach = R * s_max + cut
    x_dom = (max(x_lo, cx - reach), min(x_hi, cx + reach))
    y_dom = (max(y_lo, cy - reach), min(y_hi, cy + reach))
    zs_min = cz + R * cos_lo
    zs_max = cz + R * cos_hi
    z_dom = (max(z_lo, zs_min - cut), min(z_hi, zs_max + cut))
    for lo, hi in (x_dom, y_dom, z_dom):
        if lo >= hi:
            return None

    feature = 2.0 * r_c
    theta_feature = math.sqrt(4.0 * r_c / R)
    counts = {
        "x": next_pow2(1.5 * (x_dom[1] - x_dom[0]) / feature, lo=8),
        "y": next_pow2(1.5 * (y_dom[1] - y_dom[0]) / feature, lo=8),
        "z": next_pow2(1.5 * (z_dom[1] - z_dom[0]) / feature, lo=8),
        "theta": next_pow2(2.0 * (theta_hi - theta_lo) / theta_feature, lo=16),
        "phi": next_pow2(2.0 * R * s_max / feature, lo=16),
    }
    domains = {
        "x": x_dom,
        "y": y_dom,
        "z": z_dom,
        "theta": (theta_lo, theta_hi),
        "phi": (0.0, 2.0 * math.pi),
    }
    return domains, counts


def _mix_tensor_sum(
    geom: ResonatorGeometry,
    r_c: float,
    domains: dict[str, tuple[float, float]],
    counts: dict[str, int],
) -> float:
    """One tensor-product evaluation of the 5D mixing integrand.

    The Gaussian kernel factorizes over the Cartesian axes, so the inner
    (x, y, z) sums collapse to products of 1D sums per (theta, phi) node;
    this is exactly the full tensor rule, evaluated without materializing
    the 5D grid.
    """
    cx, cy, cz = geom.sphere_center_abs()
    R = geom.R
    inv4 = 1.0 / (4.0 * r_c * r_c)

    x, wx = mapped_rule(*domains["x"], counts["x"])
    y, wy = mapped_rule(*domains["y"], counts["y"])
    z, wz = mapped_rule(*domains["z"], counts["z"])
    theta, wt = mapped_rule(*domains["theta"], counts["theta"])
    phi, wp = mapped_rule(*domains["phi"], counts["phi"])

    sin_t = np.sin(theta)
    cos_t = np.cos(theta)
    zs = cz + R * cos_t                                   # (nt,)
    dz = zs[:, None] - z[None, :]                         # (nt, nz)
    sz = ((dz / (2.0 * r_c * r_c)) * np.exp(-(dz * dz) * inv4)) @ wz  # (nt,)

    total = 0.0
    # Chunk the theta axis so the (theta, phi, x|y) intermediates stay small.
    block = max(1, int(2 ** 22 / (counts["phi"] * max(counts["x"], counts["y"]))))
    for start in range(0, counts["theta"], block):
        sl = slice(start, start + block)
        st = sin_t[sl][:, None]                           # (bt, 1)
        xs = cx + R * st * np.cos(phi)[None, :]           # (bt, np)
        ys = cy + R * st * np.sin(phi)[None, :]
        dxg = xs[:, :, None] - x[None, None, :]
        sx = np.exp(-(dxg * dxg) * inv4) @ wx             # (bt, np)
        dyg = ys[:, :, None] - y[None, None, :]
        sy = np.exp(-(dyg * dyg) * inv4) @ wy
        inner = (sx * sy) @ wp                            # (bt,)
        total += float(
            np.sum(wt[sl] * sin_t[sl] * cos_t[sl] * sz[sl] * inner)
        )
    return total


def eta_mix(
    geom: ResonatorGeometry,
    params: CslParameters,
    quad: QuadSpec | None = None,
) -> float:
    """Mixing term via adaptive 5D Gauss-Legendre quadrature.

    Node counts double on every axis until the result moves by less than
    ``quad.rel_tol``; exceeding ``quad.max_nodes`` per axis raises
    QuadratureError.  The sign may be either; magnitude is bounded by
    2 sqrt(eta_sphere * eta_cuboid).
    """
    _validate(params)
    quad = quad or QuadSpec()
    if geom.rho_c == 0.0 or geom.rho_s == 0.0:
        return 0.0
    prepared = _mix_domains(geom, params.r_c)
    if prepared is None:
        return 0.0
    domains, counts = prepared
    counts = {k: min(v, quad.max_nodes) for k, v in counts.items()}
    pref = 2.0 * geom.rho_s * geom.rho_c * geom.R ** 2 / M0 ** 2

    result = _mix_tensor_sum(geom, params.r_c, domains, counts)
    while True:
        if all(n >= quad.max_nodes for n in counts.values()):
            raise QuadratureError(
                f"mixing-term ladder exhausted {quad.max_nodes} nodes/axis "
                f"at r_c = {params.r_c:g} m"
            )
        counts = {k: min(2 * n, quad.max_nodes) for k, n in counts.items()}
        refined = _mix_tensor_sum(geom, params.r_c, domains, counts)
        scale = max(abs(refined), abs(result))
        if scale == 0.0 or abs(refined - result) <= quad.rel_tol * scale:
            return params.lam * pref * refined
        result = refined


def eta_total(
    geom: ResonatorGeometry,
    params: CslParameters,
    quad: QuadSpec | None = None,
) -> CollapseStrength:
    """Full breakdown; total is the exact sum of the three components."""
    sphere = eta_sphere(geom, params) if geom.rho_s else 0.0
    cuboid = eta_cuboid(geom, params) if geom.rho_c else 0.0
    mix = eta_mix(geom, params, quad)
    return CollapseStrength(
        eta_total=sphere + cuboid + mix,
        eta_sphere=sphere,
        eta_cuboid=cuboid,
        eta_mix=mix,
        params=params,
    )


# ---------------------------------------------------------------------------
# Independent k-space route
# ---------------------------------------------------------------------------


def _sphere_form_factor(k: np.ndarray, R: float, rho: float) -> np.ndarray:
    """4 pi rho (sin kR - kR cos kR) / k^3, stable near k = 0."""
    x = k * R
    small = np.abs(x) < 0.1
    x2 = x * x
    series = 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = (np.sin(x) - x * np.cos(x)) / np.where(small, 1.0, x ** 3)
    return 4.0 * math.pi * rho * R ** 3 * np.where(small, series, direct)


def _slab_form_factor(k: np.ndarray, length: float) -> np.ndarray:
    """2 sin(k L / 2) / k = L sinc(k L / 2 pi), stable near k = 0."""
    return length * np.sinc(k * length / (2.0 * math.pi))


def _kspace_prefactor(params: CslParameters) -> float:
    return (4.0 * math.pi) ** 1.5 * params.lam * params.r_c ** 3 / (
        M0 ** 2 * (2.0 * math.pi) ** 3
    )


def _kspace_sphere_squared(
    geom: ResonatorGeometry, params: CslParameters, quad: QuadSpec
) -> float:
    """Sphere self-term: radially symmetric, angular part integrates to 4pi/3."""
    r_c = params.r_c
    k_max = quad.k_max_factor / r_c

    def integrand(k: np.ndarray) -> np.ndarray:
        F = _sphere_form_factor(k, geom.R, geom.rho_s)
        return k ** 4 * np.exp(-(k * r_c) ** 2) * F * F

    n0 = int(5.0 * k_max * geom.R / math.pi) + 64
    radial = integrate_1d(
        integrand, 0.0, k_max, rel_tol=quad.rel_tol, n0=n0, max_nodes=quad.max_nodes_1d
    )
    return _kspace_prefactor(params) * (4.0 * math.pi / 3.0) * radial


def _kspace_cuboid_squared(
    geom: ResonatorGeometry, params: CslParameters, quad: QuadSpec
) -> float:
    """Cuboid self-term: the Gaussian and the squared form factor both
    factorize over Cartesian axes, leaving three 1D integrals (the z axis
    carries the k_z^2 weight)."""
    r_c = params.r_c
    k_max = quad.k_max_factor / r_c

    def axis_integral(length: float, with_k2: bool) -> float:
        def integrand(k: np.ndarray) -> np.ndarray:
            F = _slab_form_factor(k, length)
            vals = np.exp(-(k * r_c) ** 2) * F * F
            return vals * k * k if with_k2 else vals

        n0 = int(5.0 * k_max * length / math.pi) + 64
        # Full line = 2 x half line by evenness.
        return 2.0 * integrate_1d(
            integrand,
            0.0,
            k_max,
            rel_tol=quad.rel_tol,
            n0=n0,
            max_nodes=quad.max_nodes_1d,
        )

    return _kspace_prefactor(params) * geom.rho_c ** 2 * (
        axis_integral(geom.R1, False)
        * axis_integral(geom.R2, False)
        * axis_integral(geom.R3, True)
    )


def _stable_gauss_diff(a2: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """exp(-a2) - exp(-b2) without catastrophic cancellation or overflow."""
    lo = np.minimum(a2, b2)
    diff = np.where(a2 <= b2, a2 - b2, b2 - a2)  # <= 0 in the used branch
    mag = np.exp(-lo) * (-np.expm1(diff))
    return np.where(a2 <= b2, mag, -mag)


def _cross_surface_sum(
    geom: ResonatorGeometry, r_c: float, theta_dom: tuple[float, float], nt: int, np_: int
) -> float:
    """One (theta, phi) tensor evaluation of the cross term.

    Derived from the k-space cross integral by the Gaussian Fourier
    identity: the kernel's in-plane integrals over the cuboid are error
    functions and its normal integral telescopes to a difference of
    Gaussians at the two z faces, leaving a smooth 2D integral over the
    sphere surface.
    """
    (x_lo, x_hi), (y_lo, y_hi), (z_lo, z_hi) = geom.cuboid_bounds()
    cx, cy, cz = geom.sphere_center_abs()
    R = geom.R
    inv2 = 1.0 / (2.0 * r_c)

    theta, wt = mapped_rule(*theta_dom, nt)
    phi, wp = mapped_rule(0.0, 2.0 * math.pi, np_)
    sin_t = np.sin(theta)[:, None]
    cos_t = np.cos(theta)[:, None]
    xs = cx + R * sin_t * np.cos(phi)[None, :]
    ys = cy + R * sin_t * np.sin(phi)[None, :]
    zs = cz + R * cos_t

    ix = math.sqrt(math.pi) * r_c * (erf((x_hi - xs) * inv2) - erf((x_lo - xs) * inv2))
    iy = math.sqrt(math.pi) * r_c * (erf((y_hi - ys) * inv2) - erf((y_lo - ys) * inv2))
    a2 = ((zs - z_hi) * inv2) ** 2
    b2 = ((zs - z_lo) * inv2) ** 2
    kz = _stable_gauss_diff(a2, b2)  # exp at top face minus exp at bottom face

    integrand = sin_t * cos_t * kz * ix * iy
    return float(wt @ (integrand @ wp))


def _kspace_cross(
    geom: ResonatorGeometry, params: CslParameters, quad: QuadSpec
) -> float:
    """Sphere-cuboid cross term of the k-space integral."""
    r_c = params.r_c
    (_, _), (_, _), (z_lo, z_hi) = geom.cuboid_bounds()
    cx, cy, cz = geom.sphere_center_abs()
    cut = _SUPPORT_CUT * r_c
    cos_hi = min(1.0, (z_hi + cut - cz) / geom.R)
    cos_lo = max(-1.0, (z_lo - cut - cz) / geom.R)
    if cos_lo > cos_hi:
        return 0.0
    theta_dom = (math.acos(cos_hi), math.acos(cos_lo))

    theta_feature = math.sqrt(4.0 * r_c / geom.R)
    nt = next_pow2(3.0 * (theta_dom[1] - theta_dom[0]) / theta_feature, lo=16, hi=4096)
    np_ = next_pow2(3.0 * geom.R / (2.0 * r_c), lo=32, hi=4096)

    pref = 2.0 * params.lam * geom.rho_s * geom.rho_c * geom.R ** 2 / M0 ** 2
    result = _cross_surface_sum(geom, r_c, theta_dom, nt, np_)
    while True:
        if nt >= 4096 and np_ >= 4096:
            raise QuadratureError("cross-term surface ladder exhausted its budget")
        nt, np_ = min(2 * nt, 4096), min(2 * np_, 4096)
        refined = _cross_surface_sum(geom, r_c, theta_dom, nt, np_)
        scale = max(abs(refined), abs(result))
        if scale == 0.0 or abs(refined - result) <= quad.rel_tol * scale:
            return pref * refined
        result = refined


def eta_kspace(
    geom: ResonatorGeometry,
    params: CslParameters,
    quad: QuadSpec | None = None,
) -> float:
    """Total collapse strength from the k-space integral (cross-check route).

    Each piece of the squared density transform is integrated in the
    coordinates where it is exactly low-dimensional: the sphere self-term
    radially, the cuboid self-term axis-by-axis, and the cross term over
    the sphere surface after analytically reducing the kernel integrals.
    """
    _validate(params)
    quad = quad or ORACLE_SPEC
    total = 0.0
    if geom.rho_s:
        total += _kspace_sphere_squared(geom, params, quad)
    if geom.rho_c:
        total += _kspace_cuboid_squared(geom, params, quad)
    if geom.rho_s and geom.rho_c:
        total += _kspace_cross(geom, params, quad)
    return total


def eta_kspace_mix(
    geom: ResonatorGeometry,
    params: CslParameters,
    quad: QuadSpec | None = None,
) -> float:
    """Cross term alone from the k-space route (for mixing-term checks)."""
    _validate(params)
    quad = quad or ORACLE_SPEC
    if not (geom.rho_s and geom.rho_c):
        return 0.0
    return _kspace_cross(geom, params, quad)


# ---------------------------------------------------------------------------
# Unions of cuboids (forecast geometries)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuboidBody:
    """Axis-aligned cuboid: edge lengths, center position, density (SI)."""

    dims: tuple[float, float, float]
    center: tuple[float, float, float]
    rho: float

    def __post_init__(self) -> None:
        if any(d <= 0 for d in self.dims):
            raise ValueError("cuboid dimensions must be positive")
        if self.rho < 0:
            raise ValueError("density must be non-negative")

    @property
    def mass(self) -> float:
        return self.rho * self.dims[0] * self.dims[1] * self.dims[2]


def eta_cuboid_union(
    bodies: list[CuboidBody] | tuple[CuboidBody, ...],
    params: CslParameters,
    quad: QuadSpec | None = None,
) -> float:
    """Collapse strength of a rigid union of axis-aligned cuboids.

    The squared density transform expands into pairwise products; the
    Gaussian weight, the slab form factors, and the relative-position
    cosine all factorize over Cartesian axes (odd phase terms vanish by
    parity), so every pair term is a product of three 1D integrals.
    Self terms are the single-cuboid result; cross terms carry the full
    interference of the pair.
    """
    _validate(params)
    quad = quad or ORACLE_SPEC
    r_c = params.r_c
    k_max = quad.k_max_factor / r_c

    def axis_integral(da: float, db: float, delta: float, with_k2: bool) -> float:
        def integrand(k: np.ndarray) -> np.ndarray:
            vals = (
                np.exp(-(k * r_c) ** 2)
                * _slab_form_factor(k, da)
                * _slab_form_factor(k, db)
                * np.cos(k * delta)
            )
            return vals * k * k if with_k2 else vals

        scale = da + db + 2.0 * abs(delta)
        n0 = int(3.0 * k_max * scale / math.pi) + 64
        return 2.0 * integrate_1d(
            integrand, 0.0, k_max, rel_tol=quad.rel_tol, n0=n0,
            max_nodes=quad.max_nodes_1d,
        )

    total = 0.0
    for a, body_a in enumerate(bodies):
        for b in range(a, len(bodies)):
            body_b = bodies[b]
            if body_a.rho == 0.0 or body_b.rho == 0.0:
                continue
            product = body_a.rho * body_b.rho
            for axis in range(3):
                product *= axis_integral(
                    body_a.dims[axis],
                    body_b.dims[axis],
                    body_a.center[axis] - body_b.center[axis],
                    with_k2=(axis == 2),
                )
            total += product if a == b else 2.0 * product
    return _kspace_prefactor(params) * total
