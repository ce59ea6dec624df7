"""
Momentum-space analysis of the 4-state walk.

In momentum space one step is multiplication by ``U_hat(k) = R(k) U`` with
``R(k) = diag(e^{ik}, e^{ik}, e^{-ik}, e^{-ik})``.  For the Hadamard coin the
spectrum is known in closed form: two flat bands at +1 and -1 carry the
localized part of the walk, and the stationary limits below are the
closed forms that part produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from memwalk.errors import AliasingError, InvalidInputError
from memwalk.linalg import C4Matrix, C4Vector, as_matrix, as_vector, norm_sq
from memwalk.walk import HADAMARD, CoinParams, InitialState, WalkState, build_coin

__all__ = [
    "EigenSystem",
    "hat_u",
    "hadamard_eigenvalues",
    "hadamard_eigen",
    "null_vector",
    "fourier_evolve",
    "band_weights",
    "flat_band_amplitudes",
    "stationary_amplitude",
    "stationary_p0",
    "m_func",
    "k_func",
    "stationary_px",
    "stationary_total",
    "GEOMETRIC_RATIO",
]

SQRT2 = np.sqrt(2.0)
# Per-site decay of the stationary tails; amplitudes decay by sqrt(2) - 1.
GEOMETRIC_RATIO = 3.0 - 2.0 * SQRT2
DEGENERATE_NORM = 1e-8

Parity = Literal["even", "odd"]


def _phases(k):
    e = np.exp(1j * np.asarray(k, dtype=float))
    return e, np.conj(e)


def hat_u(coin: CoinParams, k: float) -> C4Matrix:
    """``R(k) U`` for the given coin."""
    e, ec = _phases(k)
    r = np.array([e, e, ec, ec])
    return as_matrix(r[:, None] * np.asarray(build_coin(coin)))


def hadamard_eigenvalues(k: float) -> tuple[complex, complex, complex, complex]:
    s = np.sqrt(1.0 + np.sin(k) ** 2)
    c = np.cos(k)
    return (
        1.0 + 0j,
        -1.0 + 0j,
        complex(-c, s) / SQRT2,
        complex(-c, -s) / SQRT2,
    )


def _formula_vector(k: float, lam: complex) -> NDArray[np.complex128]:
    e = np.exp(1j * k)
    return np.array(
        [
            e * (SQRT2 * lam + e) * (lam * e + SQRT2),
            e**2 * (lam * e + SQRT2),
            lam * (SQRT2 * lam + e) * (SQRT2 * lam * e + 1),
            lam * (SQRT2 * lam + e),
        ]
    )


def null_vector(a: NDArray[np.complex128], tol: float = 1e-9) -> NDArray[np.complex128]:
    """
    Unit vector spanning the (assumed one-dimensional) null space of ``a``.

    Row reduction with partial pivoting; the first column without a pivot is
    the free variable, set to 1, and the pivot variables are back-solved.
    """
    m = np.array(a, dtype=np.complex128)
    n_rows, n_cols = m.shape
    scale = max(np.max(np.abs(m)), 1.0)
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        best = row + int(np.argmax(np.abs(m[row:, col])))
        if abs(m[best, col]) <= tol * scale:
            continue
        m[[row, best]] = m[[best, row]]
        m[row] /= m[row, col]
        for r in range(n_rows):
            if r != row:
                m[r] -= m[r, col] * m[row]
        pivots.append(col)
        row += 1
    free = [c for c in range(n_cols) if c not in pivots]
    if not free:
        raise InvalidInputError("matrix has a trivial null space")
    v = np.zeros(n_cols, dtype=np.complex128)
    v[free[0]] = 1.0
    for r, col in enumerate(pivots):
        v[col] = -m[r, free[0]]
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class EigenSystem:
    """Eigen-decomposition of ``U_hat(k)`` for the Hadamard coin."""

    k: float
    eigenvalues: tuple[complex, complex, complex, complex]
    eigenvectors: tuple[C4Vector, C4Vector, C4Vector, C4Vector]
    normalizers: tuple[float, float, float, float]

    def overlaps(self, psi: C4Vector) -> NDArray[np.complex128]:
        """``<v_j|psi>`` for j = 1..4."""
        return np.array([np.vdot(v, psi) for v in self.eigenvectors])


def hadamard_eigen(k: float) -> EigenSystem:
    """
    Closed-form eigenvalues and eigenvectors at momentum ``k``.

    ``normalizers[j]`` is the squared norm N_j(k) of the unnormalized
    closed-form vector.  Where that vector collapses below 1e-8 the
    eigenvector is taken from the null space of ``U_hat(k) - lambda I``
    instead, and N_j is reported as 1.
    """
    k = float(k)
    lams = hadamard_eigenvalues(k)
    uk = None
    vecs = []
    norms = []
    for lam in lams:
        raw = _formula_vector(k, lam)
        n = norm_sq(raw)
        if np.sqrt(n) < DEGENERATE_NORM:
            if uk is None:
                uk = np.asarray(hat_u(HADAMARD, k))
            vecs.append(as_vector(null_vector(uk - lam * np.eye(4))))
            norms.append(1.0)
        else:
            vecs.append(as_vector(raw / np.sqrt(n)))
            norms.append(n)
    return EigenSystem(k, lams, tuple(vecs), tuple(norms))


def fourier_evolve(init: InitialState, coin: CoinParams, t: int, gridsize: int) -> WalkState:
    """
    Evolve in momentum space and transform back.

    ``U_hat(k)^t psi_0`` is a trigonometric polynomial of degree ``t`` in k, so
    sampling it on ``gridsize >= 2 t + 2`` equispaced points in [-pi, pi)
    and applying an inverse DFT recovers psi_t(x) exactly up to rounding.
    """
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    if gridsize % 2 or gridsize < 2 * t + 2:
        raise AliasingError(f"gridsize must be even and >= {2 * t + 2}, got {gridsize}")
    ks = -np.pi + 2.0 * np.pi * np.arange(gridsize) / gridsize
    e = np.exp(1j * ks)
    phase = np.stack([e, e, e.conj(), e.conj()], axis=1)
    ut = np.asarray(build_coin(coin)).T
    psi = np.tile(np.asarray(init.vector), (gridsize, 1))
    for _ in range(t):
        psi = (psi @ ut) * phase
    # e^{i k_m x} = (-1)^x e^{2 pi i m x / N} for k_m = -pi + 2 pi m / N
    coeffs = np.fft.ifft(psi, axis=0)
    xs = np.arange(-t, t + 1, 2)
    sign = np.where(xs % 2 == 0, 1.0, -1.0)[:, None]
    return WalkState(t, sign * coeffs[xs % gridsize])


def band_weights(init: InitialState, ks) -> NDArray[np.float64]:
    """
    ``|<v_j(k)|psi_0>|^2`` for each k in ``ks`` and j = 1..4, shape ``(len(ks), 4)``.

    Vectorized over k; any k where a closed-form vector degenerates is
    recomputed through :func:`hadamard_eigen`.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    psi0 = np.asarray(init.vector)
    s = np.sqrt(1.0 + np.sin(ks) ** 2)
    c = np.cos(ks)
    lams = np.stack(
        [np.ones_like(ks), -np.ones_like(ks), (-c + 1j * s) / SQRT2, (-c - 1j * s) / SQRT2],
        axis=1,
    ).astype(np.complex128)
    out = np.empty((ks.size, 4))
    for j in range(4):
        raw = _formula_vector(ks, lams[:, j])  # (4, n)
        norms = np.sqrt(np.sum(np.abs(raw) ** 2, axis=0))
        ov = np.abs(raw.conj().T @ psi0) ** 2
        good = norms >= DEGENERATE_NORM
        out[good, j] = ov[good] / norms[good] ** 2
        for i in np.flatnonzero(~good):
            v = np.asarray(hadamard_eigen(ks[i]).eigenvectors[j])
            out[i, j] = abs(np.vdot(v, psi0)) ** 2
    return out


def flat_band_amplitudes(
    init: InitialState, xs, gridsize: int = 512
) -> tuple[dict[int, NDArray[np.complex128]], dict[int, NDArray[np.complex128]]]:
    """
    Fourier coefficients of the lambda = +1 and lambda = -1 projections.

    Returns ``(A, B)`` with psi_t(x) -> A[x] + (-1)^t B[x].  Computed by
    periodic trapezoid quadrature over the closed-form eigenvectors; this is
    the numerical counterpart of :func:`stationary_amplitude`.
    """
    xs = [int(x) for x in xs]
    psi0 = np.asarray(init.vector)
    ks = -np.pi + 2.0 * np.pi * np.arange(gridsize) / gridsize
    A = {x: np.zeros(4, dtype=np.complex128) for x in xs}
    B = {x: np.zeros(4, dtype=np.complex128) for x in xs}
    for k in ks:
        es = hadamard_eigen(k)
        waves = {x: np.exp(1j * k * x) / gridsize for x in xs}
        for j, target in ((0, A), (1, B)):
            v = np.asarray(es.eigenvectors[j])
            proj = np.vdot(v, psi0) * v
            for x in xs:
                target[x] += proj * waves[x]
    return A, B


# -- closed forms for the Hadamard walk ---------------------------------------------

_R2 = SQRT2

_CENTER = np.array(
    [
        [4 - _R2, 2 - _R2, _R2, -(2 - _R2)],
        [2 - _R2, _R2, -(2 - _R2), -(4 - 3 * _R2)],
        [_R2, -(2 - _R2), 4 - _R2, 2 - _R2],
        [-(2 - _R2), -(4 - 3 * _R2), 2 - _R2, _R2],
    ]
)
_PLUS_ONE = np.array(
    [
        [2 - _R2, _R2, -(2 - _R2), -(4 - 3 * _R2)],
        [4 - 3 * _R2, -(2 - _R2), -(4 - 3 * _R2), -(10 - 7 * _R2)],
        [-(2 - 3 * _R2), _R2, 2 - _R2, 4 - 3 * _R2],
        [_R2, -(2 - _R2), _R2, -(2 - _R2)],
    ]
)
_MINUS_ONE = np.array(
    [
        [2 - _R2, 4 - 3 * _R2, -(2 - 3 * _R2), _R2],
        [_R2, -(2 - _R2), _R2, -(2 - _R2)],
        [-(2 - _R2), -(4 - 3 * _R2), 2 - _R2, _R2],
        [-(4 - 3 * _R2), -(10 - 7 * _R2), 4 - 3 * _R2, -(2 - _R2)],
    ]
)
_RIGHT_TAIL = np.array([1 - _R2, 3 - 2 * _R2, _R2 - 1, 1])
_LEFT_TAIL = np.array([_R2 - 1, 1, 1 - _R2, 3 - 2 * _R2])


def stationary_amplitude(x: int, init: InitialState) -> tuple[C4Vector, C4Vector]:
    """
    Limits of psi_t(x) along even and along odd t (Hadamard coin).

    Returns ``(even_limit, odd_limit)``.
    """
    psi = np.asarray(init.vector)
    a, b, g, d = psi
    x = int(x)
    if x == 0:
        center = _CENTER @ psi / 4.0
        return as_vector(center), as_vector(np.zeros(4))
    if x in (1, -1):
        m = _PLUS_ONE if x == 1 else _MINUS_ONE
        return as_vector(np.zeros(4)), as_vector(m @ psi / 4.0)
    denom = 4.0 * SQRT2 * (3.0 - 2.0 * SQRT2)
    if x >= 2:
        scalar = (SQRT2 - 1) ** x / denom * ((SQRT2 - 1) * a + b - (SQRT2 - 1) * g + (3 - 2 * SQRT2) * d)
        shape = _RIGHT_TAIL
    else:
        scalar = -((SQRT2 - 1) ** (-x)) / denom * ((SQRT2 - 1) * a - (3 - 2 * SQRT2) * b - (SQRT2 - 1) * g - d)
        shape = _LEFT_TAIL
    sx = -1.0 if x % 2 else 1.0
    # factor (-1)^x + (-1)^t resolved for even and odd t
    even = (sx + 1.0) * scalar * shape
    odd = (sx - 1.0) * scalar * shape
    return as_vector(even), as_vector(odd)


def _re(z: complex) -> float:
    return float(np.real(z))


def stationary_p0(init: InitialState) -> float:
    """Limit of the return probability P(X_{2t} = 0)."""
    a, b, g, d = init.astuple()
    return (
        2 - SQRT2
        - (SQRT2 - 1) * (abs(b) ** 2 + abs(d) ** 2)
        + 2 * (SQRT2 - 1) * _re(a * g.conjugate())
        + (3 - 2 * SQRT2) * _re((a - g) * (b.conjugate() - d.conjugate()))
    )


def m_func(alpha: complex, beta: complex, gamma: complex, delta: complex) -> float:
    """Quadratic form giving the odd-time limit at x = 1."""
    a, b, g, d = (complex(z) for z in (alpha, beta, gamma, delta))
    return (
        (8 - 5 * SQRT2) / 2 * abs(a) ** 2
        + (2 - SQRT2) / 2 * abs(b) ** 2
        + (3 - 2 * SQRT2) * abs(g) ** 2
        + (17 - 12 * SQRT2) * abs(d) ** 2
        + (SQRT2 - 1) * _re(a * b.conjugate())
        - (12 - 9 * SQRT2) / 2 * _re(a * g.conjugate())
        - (30 - 21 * SQRT2) / 2 * _re(a * d.conjugate())
        + (4 - 3 * SQRT2) / 2 * _re(b * g.conjugate())
        + (10 - 7 * SQRT2) / 2 * _re(b * d.conjugate())
        + (14 - 10 * SQRT2) * _re(g * d.conjugate())
    )


def k_func(alpha: complex, beta: complex, gamma: complex, delta: complex) -> float:
    """Quadratic form scaling the geometric tails."""
    a, b, g, d = (complex(z) for z in (alpha, beta, gamma, delta))
    return (
        3 - 2 * SQRT2
        + 2 * (SQRT2 - 1) * abs(b) ** 2
        + 2 * (7 - 5 * SQRT2) * abs(d) ** 2
        + 2
        * (
            (SQRT2 - 1) * _re((a - g) * b.conjugate())
            - (7 - 5 * SQRT2) * _re((a - g) * d.conjugate())
            + (3 - 2 * SQRT2) * _re(b * d.conjugate() - a * g.conjugate())
        )
    )


def stationary_px(x: int, t_parity: Parity, init: InitialState) -> float:
    """Limit of P(X_t = x) along even or odd t (Hadamard coin)."""
    if t_parity not in ("even", "odd"):
        raise InvalidInputError(f"t_parity must be 'even' or 'odd', got {t_parity!r}")
    x = int(x)
    a, b, g, d = init.astuple()
    if (x % 2 == 0) != (t_parity == "even"):
        return 0.0
    if x == 0:
        return stationary_p0(init)
    if x == 1:
        return m_func(a, b, g, d)
    if x == -1:
        return m_func(g, d, a, b)
    weight = k_func(a, b, g, d) if x > 0 else k_func(a, -d, g, -b)
    return GEOMETRIC_RATIO ** (abs(x) - 1) * weight


def stationary_total(init: InitialState) -> float:
    """
    Time-averaged total of the stationary limits.

    ``(sum_x lim P(X_{2t} = x) + sum_x lim P(X_{2t+1} = x)) / 2``, with the
    geometric tails summed in closed form.  This equals the delta mass of
    the rescaled limit law.
    """
    a, b, g, d = init.astuple()
    r = GEOMETRIC_RATIO
    k_right = k_func(a, b, g, d)
    k_left = k_func(a, -d, g, -b)
    # even t: x = 2, 4, ... gives r + r^3 + ...; odd t: x = 3, 5, ... gives r^2 + r^4 + ...
    even_tail = r / (1 - r * r)
    odd_tail = r * r / (1 - r * r)
    even_sum = stationary_p0(init) + (k_right + k_left) * even_tail
    odd_sum = m_func(a, b, g, d) + m_func(g, d, a, b) + (k_right + k_left) * odd_tail
    return 0.5 * (even_sum + odd_sum)
