"""Gauss-Legendre quadrature helpers shared by the collapse-strength routes.

Two flavors are used:

* single mapped rules (cached nodes) for the low-dimensional tensor
  quadratures, where per-axis counts stay modest;
* composite panel rules (fixed 32-point rule per panel) for the strongly
  oscillatory 1D k-space integrals, where effective node counts reach
  10^5-10^6 and single-rule node generation would dominate the runtime.

Both are driven by doubling ladders: the count doubles until the result's
relative change drops below the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre


class QuadratureError(RuntimeError):
    """Doubling ladder exhausted its node budget without converging."""


@dataclass(frozen=True)
class QuadSpec:
    """Tunable quadrature controls.

    rel_tol        acceptance threshold on the ladder's relative change
    max_nodes      per-axis node ceiling for multidimensional ladders (2**10)
    max_nodes_1d   effective-node ceiling for 1D composite ladders
    k_max_factor   k-space truncation radius in units of 1/r_c; beyond
                   30/r_c the Gaussian damping is below e^-900
    """

    rel_tol: float = 1e-4
    max_nodes: int = 2 ** 10
    max_nodes_1d: int = 2 ** 21
    k_max_factor: float = 30.0


ORACLE_SPEC = QuadSpec(rel_tol=1e-6)

PANEL_ORDER = 32

# Single-rule node generation is O(n^2); beyond this, use composite panels.
_MAX_SINGLE_RULE = 2 ** 12


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n > _MAX_SINGLE_RULE:
        raise ValueError(
            f"single Gauss-Legendre rules capped at {_MAX_SINGLE_RULE} nodes; "
            "use composite_rule for larger counts"
        )
    x, w = roots_legendre(n)
    return x, w


def mapped_rule(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule mapped onto [a, b]."""
    x, w = _gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_rule(a: float, b: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule: ``panels`` equal panels of the 32-point base rule."""
    x, w = _gauss_legendre(PANEL_ORDER)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    centers = edges[:-1] + half
    nodes = (centers[:, None] + half * x[None, :]).ravel()
    weights = np.broadcast_to(half * w, (panels, PANEL_ORDER)).ravel()
    return nodes, weights


def next_pow2(value: float, lo: int = 8, hi: int = 2 ** 20) -> int:
    """Smallest power of two >= value, clipped to [lo, hi]."""
    n = lo
    while n < value and n < hi:
        n *= 2
    return min(n, hi)


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-6,
    n0: int = 64,
    max_nodes: int = 2 ** 21,
) -> float:
    """Adaptive 1D composite Gauss-Legendre on a panel-doubling ladder.

    ``f`` must accept a node vector and return integrand values; ``n0`` and
    ``max_nodes`` are effective node counts (rounded to whole panels).
    Raises QuadratureError if the ladder hits the ceiling while the last
    doubling still moved the result by more than ``rel_tol``.
    """
    max_panels = max(1, max_nodes // PANEL_ORDER)
    panels = min(max(1, -(-n0 // PANEL_ORDER)), max_panels)
    x, w = composite_rule(a, b, panels)
    result = float(w @ f(x))
    while True:
        if panels >= max_panels:
            raise QuadratureError(
                f"1D quadrature not converged at {panels * PANEL_ORDER} nodes "
                f"on [{a:g}, {b:g}]"
            )
        panels = min(2 * panels, max_panels)
        x, w = composite_rule(a, b, panels)
        refined = float(w @ f(x))
        scale = max(abs(refined), abs(result), 1e-300)
        if abs(refined - result) <= rel_tol * scale:
            return refined
        result = refined
