"""
Weak limit of X_t / t for the 4-state Hadamard walk.

The limit measure is an atom of mass ``delta`` at 0 plus the density
``(c0 + c1 x + c2 x^2) f_K(x)`` on (-1/sqrt(2), 1/sqrt(2)), where
``f_K(x) = 1 / (pi (1 - x^2) sqrt(1 - 2 x^2))``.  Integrals against ``f_K`` use the substitution
``x = sin(u) / sqrt(2)``, which turns the inverse square-root endpoint
singularity into the smooth integrand ``sqrt(2) / (pi (1 + cos(u)^2))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import simpson

from memwalk.config import K_GRID, SIMPSON_PANELS
from memwalk.errors import InvalidInputError
from memwalk.spectral import band_weights
from memwalk.walk import InitialState, WalkState, distribution

__all__ = [
    "LimitLaw",
    "SUPPORT_EDGE",
    "f_k",
    "integrate_fk",
    "delta_mass",
    "delta_mass_k_integral",
    "poly_coeffs",
    "limit_law",
    "limit_cdf",
    "limit_cdf_at",
    "h_j",
    "theoretical_moment",
    "x_space_moment",
    "empirical_rescaled_moment",
    "ks_distance",
    "two_state_density",
    "two_state_limit_cdf",
]

SQRT2 = np.sqrt(2.0)
SUPPORT_EDGE = 1.0 / SQRT2


def f_k(x: ArrayLike) -> NDArray[np.float64] | float:
    """Density f_K, zero outside the open interval (-1/sqrt(2), 1/sqrt(2))."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < SUPPORT_EDGE
    xs = np.where(inside, x, 0.0)
    out = np.where(inside, 1.0 / (np.pi * (1.0 - xs**2) * np.sqrt(1.0 - 2.0 * xs**2)), 0.0)
    return float(out) if out.ndim == 0 else out


def integrate_fk(
    g: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    a: float = -np.inf,
    b: float = np.inf,
    panels: int = SIMPSON_PANELS,
) -> float:
    """
    ``int_a^b g(x) f_K(x) dx`` by composite Simpson in the angle variable.

    ``g`` must accept and return numpy arrays.
    """
    if a > b:
        raise InvalidInputError("need a <= b")
    if panels < 2 or panels % 2:
        raise InvalidInputError("panels must be a positive even number")
    lo = np.arcsin(np.clip(a * SQRT2, -1.0, 1.0)) if np.isfinite(a) else -np.pi / 2
    hi = np.arcsin(np.clip(b * SQRT2, -1.0, 1.0)) if np.isfinite(b) else np.pi / 2
    if hi <= lo:
        return 0.0
    u = np.linspace(lo, hi, panels + 1)
    x = np.sin(u) / SQRT2
    weight = SQRT2 / (np.pi * (1.0 + np.cos(u) ** 2))
    return float(simpson(np.asarray(g(x)) * weight, x=u))


@dataclass(frozen=True)
class LimitLaw:
    """Atom ``delta`` at 0 plus density ``(c0 + c1 x + c2 x^2) f_K(x)``."""

    delta: float
    c0: float
    c1: float
    c2: float

    def weight(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        return self.c0 + self.c1 * x + self.c2 * x * x

    def density(self, x: ArrayLike):
        """Absolutely continuous part only; the atom is not included."""
        return self.weight(x) * f_k(x)

    def continuous_mass(self, panels: int = SIMPSON_PANELS) -> float:
        return integrate_fk(self.weight, panels=panels)


def delta_mass(init: InitialState) -> float:
    """Mass of the atom at 0, in closed form."""
    a, b, g, d = init.astuple()
    re = lambda z: float(np.real(z))  # noqa: E731
    braces = (
        (SQRT2 - 2) * (abs(b) ** 2 + abs(d) ** 2)
        + (2 - SQRT2) * re((a - g) * (b.conjugate() - d.conjugate()))
        + SQRT2 * re(a * g.conjugate())
        - (4 - 3 * SQRT2) * re(b * d.conjugate())
    )
    return 1.0 - SQRT2 / 4.0 + 0.5 * braces


def _k_grid(gridsize: int) -> NDArray[np.float64]:
    return -np.pi + 2.0 * np.pi * np.arange(gridsize) / gridsize


def delta_mass_k_integral(init: InitialState, gridsize: int = K_GRID) -> float:
    """Weight of the two flat bands, integrated over k (periodic trapezoid rule)."""
    w = band_weights(init, _k_grid(gridsize))
    return float(np.mean(w[:, 0] + w[:, 1]))


def poly_coeffs(init: InitialState) -> tuple[float, float, float]:
    """Coefficients ``(c0, c1, c2)`` of the quadratic weight on ``f_K``."""
    a, b, g, d = init.astuple()
    bc, gc, dc = b.conjugate(), g.conjugate(), d.conjugate()
    c0 = 0.5 - np.real(a * gc + b * dc)
    c1 = abs(d) ** 2 - abs(b) ** 2 + np.real((a - g) * (bc + dc))
    c2 = abs(b) ** 2 + abs(d) ** 2 - 0.5 + np.real((a - g) * (dc - bc) + a * gc + 3 * b * dc)
    return float(c0), float(c1), float(c2)


def limit_law(init: InitialState) -> LimitLaw:
    return LimitLaw(delta_mass(init), *poly_coeffs(init))


def limit_cdf(law: LimitLaw, a: float, b: float, panels: int = SIMPSON_PANELS) -> float:
    """Limit probability of ``a <= X_t / t <= b``."""
    if a > b:
        raise InvalidInputError("need a <= b")
    atom = law.delta if a <= 0.0 <= b else 0.0
    return atom + integrate_fk(law.weight, a, b, panels)


def limit_cdf_at(law: LimitLaw, y: float, panels: int = SIMPSON_PANELS) -> float:
    """Limit distribution function ``P(Y <= y)``, right-continuous at the atom."""
    atom = law.delta if y >= 0.0 else 0.0
    return atom + integrate_fk(law.weight, -np.inf, y, panels)


def h_j(k: ArrayLike, j: int):
    """
    Group velocity ``i lambda_j'(k) / lambda_j(k)`` of the dispersive bands.

    Differentiating ``lambda_3 = (-cos k + i sqrt(1 + sin^2 k)) / sqrt(2)``
    gives ``h_3(k) = sin k / sqrt(1 + sin^2 k)`` and ``h_4 = -h_3``.
    """
    if j not in (3, 4):
        raise InvalidInputError(f"h_j is defined for the dispersive bands j = 3, 4, got {j}")
    k = np.asarray(k, dtype=float)
    h = np.sin(k) / np.sqrt(1.0 + np.sin(k) ** 2)
    h = h if j == 3 else -h
    return float(h) if h.ndim == 0 else h


def theoretical_moment(init: InitialState, r: int, gridsize: int = K_GRID) -> float:
    """Limit of E[(X_t / t)^r] as a momentum-space integral."""
    if r < 0:
        raise InvalidInputError("r must be non-negative")
    if gridsize < 256:
        raise InvalidInputError("gridsize must be at least 256")
    ks = _k_grid(gridsize)
    w = band_weights(init, ks)
    flat = np.mean(w[:, 0] + w[:, 1]) if r == 0 else 0.0
    moving = np.mean(h_j(ks, 3) ** r * w[:, 2] + h_j(ks, 4) ** r * w[:, 3])
    return float(flat + moving)


def x_space_moment(law: LimitLaw, r: int, panels: int = SIMPSON_PANELS) -> float:
    """``int x^r dmu`` for the limit measure, by quadrature over the density."""
    if r < 0:
        raise InvalidInputError("r must be non-negative")
    atom = law.delta if r == 0 else 0.0
    return atom + integrate_fk(lambda x: x**r * law.weight(x), panels=panels)


def empirical_rescaled_moment(s: WalkState, r: int) -> float:
    """``sum_x (x / t)^r P(X_t = x)``."""
    if s.time < 1:
        raise InvalidInputError("need t >= 1")
    dist = distribution(s)
    y = dist.positions / s.time
    return float(np.sum(y**r * dist.probs))


def default_ks_grid() -> NDArray[np.float64]:
    # step 0.01; a finer grid near 0 resolves the O(1/t) spread of the atom
    return np.linspace(-1.0, 1.0, 201)


def ks_distance(
    s: WalkState,
    law: LimitLaw,
    grid: Sequence[float] | None = None,
    panels: int = 2**12,
) -> float:
    """
    Sup over a fixed grid of |empirical CDF of X_t / t - limit CDF|.

    Grid points with ``|y| <= 1 / (2 t)`` are dropped, since the atom makes
    the limit CDF discontinuous at 0.  The grid is fixed in y rather than
    tied to the lattice; at a fixed y > 0 the localized mass within O(1)
    sites of the origin is eventually counted, which is what weak
    convergence guarantees.
    """
    if s.time < 1:
        raise InvalidInputError("need t >= 1")
    ys = default_ks_grid() if grid is None else np.asarray(grid, dtype=float)
    ys = ys[np.abs(ys) > 1.0 / (2 * s.time)]
    dist = distribution(s)
    cum = np.cumsum(dist.probs)
    # count lattice points x with x <= y t; the offset guards against rounding in y t
    idx = np.searchsorted(dist.positions, ys * s.time + 1e-9, side="right")
    emp = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
    theo = np.array([limit_cdf_at(law, y, panels) for y in ys])
    return float(np.max(np.abs(emp - theo))) if ys.size else 0.0


def _two_state_slope(alpha2: complex, beta2: complex) -> float:
    alpha2, beta2 = complex(alpha2), complex(beta2)
    n = abs(alpha2) ** 2 + abs(beta2) ** 2
    if abs(n - 1.0) > 1e-12:
        raise InvalidInputError(f"2-state initial state has squared norm {n!r}, expected 1")
    return abs(alpha2) ** 2 - abs(beta2) ** 2 + 2.0 * float(np.real(alpha2 * beta2.conjugate()))


def two_state_density(alpha2: complex, beta2: complex, x: ArrayLike):
    """Limit density of the ordinary 2-state Hadamard walk (no atom)."""
    slope = _two_state_slope(alpha2, beta2)
    x = np.asarray(x, dtype=float)
    return (1.0 - slope * x) * f_k(x)


def two_state_limit_cdf(
    alpha2: complex, beta2: complex, a: float, b: float, panels: int = SIMPSON_PANELS
) -> float:
    slope = _two_state_slope(alpha2, beta2)
    return integrate_fk(lambda x: 1.0 - slope * x, a, b, panels)
