"""
Direct-space evolution of the 4-state walk and its memory-walk twin.

Chirality states 0 and 1 move left, 2 and 3 move right.  One step is

    psi_{t+1}(x) = P psi_t(x + 1) + Q psi_t(x - 1)

where ``P`` and ``Q`` hold the upper and lower halves of the coin matrix.
Amplitudes live on the parity sublattice x = -t, -t + 2, ..., t only, so a
state at time t is a dense ``(t + 1, 4)`` array.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np
from numpy.typing import NDArray

from memwalk.errors import InvalidInputError, InvalidMemoryKeyError, ResourceLimitError
from memwalk.linalg import C4Matrix, C4Vector, as_matrix, as_vector, norm_sq

__all__ = [
    "CoinParams",
    "InitialState",
    "WalkState",
    "MemoryWalkState",
    "ProbabilityDistribution",
    "HADAMARD",
    "SYMMETRIC_INIT",
    "ANTISYMMETRIC_INIT",
    "MAX_TIME",
    "ORACLE_MAX_TIME",
    "build_coin",
    "coin_matrix",
    "split_coin",
    "initial_walk_state",
    "step",
    "evolve",
    "iter_evolve",
    "distribution",
    "return_probability",
    "map_memory_state",
    "unmap_memory_state",
    "memory_state_from_initial",
    "memory_evolve",
    "memory_position_marginal",
    "path_sum_oracle",
]

COIN_TOL = 1e-12
INIT_TOL = 1e-12

# Dense storage for t steps costs 64 * (t + 1) bytes; this keeps a single
# state well under 100 MB.
MAX_TIME = 1_000_000
ORACLE_MAX_TIME = 20


@dataclass(frozen=True)
class CoinParams:
    """Amplitudes of the 2x2 block ``[[a, c], [b, d]]``, which must be unitary."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        block = self.block
        dev = np.max(np.abs(block.conj().T @ block - np.eye(2)))
        if not np.isfinite(dev) or dev > COIN_TOL:
            raise InvalidInputError(
                f"coin block [[a, c], [b, d]] is not unitary (deviation {dev:.3e})"
            )

    @property
    def block(self) -> NDArray[np.complex128]:
        return np.array([[self.a, self.c], [self.b, self.d]], dtype=np.complex128)

    @classmethod
    def from_block(cls, block: NDArray[np.complex128]) -> "CoinParams":
        block = np.asarray(block)
        return cls(block[0, 0], block[1, 0], block[0, 1], block[1, 1])


@dataclass(frozen=True)
class InitialState:
    """Amplitudes at the origin at time 0; must have unit norm."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        n = norm_sq(self.vector)
        if not np.isfinite(n) or abs(n - 1.0) > INIT_TOL:
            raise InvalidInputError(f"initial state has squared norm {n!r}, expected 1")

    @property
    def vector(self) -> C4Vector:
        return as_vector([self.alpha, self.beta, self.gamma, self.delta])

    def astuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @classmethod
    def from_vector(cls, v, normalize: bool = False) -> "InitialState":
        v = np.asarray(v, dtype=np.complex128)
        if normalize:
            v = v / np.sqrt(norm_sq(v))
        return cls(*v)


HADAMARD = CoinParams(1 / np.sqrt(2), 1 / np.sqrt(2), 1 / np.sqrt(2), -1 / np.sqrt(2))
SYMMETRIC_INIT = InitialState(0.5, 0.5, 0.5, 0.5)
ANTISYMMETRIC_INIT = InitialState(0.5, -0.5, -0.5, 0.5)


@dataclass(frozen=True)
class WalkState:
    """
    Amplitudes at time ``time``.

    ``amplitudes[i]`` is psi_t(x) at x = -time + 2 i; positions of the other
    parity carry zero amplitude and are not stored.
    """

    time: int
    amplitudes: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self) -> None:
        if self.time < 0:
            raise InvalidInputError("time must be non-negative")
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.time + 1, 4):
            raise InvalidInputError(
                f"amplitudes must have shape ({self.time + 1}, 4), got {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.time, self.time + 1, 2)

    def amplitude(self, x: int) -> C4Vector:
        """psi_t(x); zero outside the support or on the wrong parity."""
        offset = x + self.time
        if offset < 0 or offset > 2 * self.time or offset % 2:
            return as_vector(np.zeros(4))
        return as_vector(self.amplitudes[offset // 2])

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class MemoryWalkState:
    """Amplitudes of the 2-state walk with memory, keyed by (n2, n1, p)."""

    time: int
    amplitudes: Mapping[tuple[int, int, int], complex]

    def __post_init__(self) -> None:
        if self.time < 0:
            raise InvalidInputError("time must be non-negative")
        for n2, n1, p in self.amplitudes:
            _check_memory_key(n2, n1, p)
        object.__setattr__(self, "amplitudes", dict(self.amplitudes))

    def total_probability(self) -> float:
        return float(sum(abs(z) ** 2 for z in self.amplitudes.values()))


@dataclass(frozen=True)
class ProbabilityDistribution:
    """P(X_t = x) on the parity sublattice of [-t, t]."""

    time: int
    positions: NDArray[np.int64] = field(repr=False)
    probs: NDArray[np.float64] = field(repr=False)

    def __getitem__(self, x: int) -> float:
        offset = x + self.time
        if offset < 0 or offset > 2 * self.time or offset % 2:
            return 0.0
        return float(self.probs[offset // 2])

    def total(self) -> float:
        return float(np.sum(self.probs))

    def as_dict(self) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.positions, self.probs)}


def build_coin(p: CoinParams) -> C4Matrix:
    """
    Coin matrix U = C2 C1.

    C1 applies the block ``[[a, c], [b, d]]`` to chiralities {0, 1} and
    {2, 3}; C2 exchanges chiralities 0 and 2.
    """
    return coin_matrix(p.a, p.b, p.c, p.d)


def coin_matrix(a: complex, b: complex, c: complex, d: complex) -> C4Matrix:
    """:func:`build_coin` without validating the amplitudes."""
    return as_matrix(
        [
            [0, 0, a, c],
            [b, d, 0, 0],
            [a, c, 0, 0],
            [0, 0, b, d],
        ]
    )


def split_coin(u: C4Matrix) -> tuple[C4Matrix, C4Matrix]:
    """Split ``u`` into the left-moving part P (rows 0, 1) and right-moving Q (rows 2, 3)."""
    u = np.asarray(u)
    P = np.zeros((4, 4), dtype=np.complex128)
    Q = np.zeros((4, 4), dtype=np.complex128)
    P[:2] = u[:2]
    Q[2:] = u[2:]
    return as_matrix(P), as_matrix(Q)


def initial_walk_state(init: InitialState) -> WalkState:
    return WalkState(0, np.asarray(init.vector)[None, :])


def _advance(amps: NDArray[np.complex128], PT, QT) -> NDArray[np.complex128]:
    n = amps.shape[0]
    out = np.zeros((n + 1, 4), dtype=np.complex128)
    out[:-1] += amps @ PT
    out[1:] += amps @ QT
    return out


def step(s: WalkState, P: C4Matrix, Q: C4Matrix) -> WalkState:
    """One application of psi(x) <- P psi(x + 1) + Q psi(x - 1)."""
    PT = np.asarray(P).T
    QT = np.asarray(Q).T
    return WalkState(s.time + 1, _advance(np.asarray(s.amplitudes), PT, QT))


def iter_evolve(init: InitialState, coin: CoinParams, t: int) -> Iterator[WalkState]:
    """Yield the states at times 0, 1, ..., t."""
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    if t > MAX_TIME:
        raise ResourceLimitError(f"t={t} exceeds the memory budget MAX_TIME={MAX_TIME}")
    P, Q = split_coin(build_coin(coin))
    PT, QT = np.asarray(P).T, np.asarray(Q).T
    amps = np.asarray(init.vector)[None, :].copy()
    yield WalkState(0, amps)
    for time in range(1, t + 1):
        amps = _advance(amps, PT, QT)
        yield WalkState(time, amps)


def evolve(init: InitialState, coin: CoinParams, t: int) -> WalkState:
    """State after ``t`` steps from ``init`` concentrated at the origin."""
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    if t > MAX_TIME:
        raise ResourceLimitError(f"t={t} exceeds the memory budget MAX_TIME={MAX_TIME}")
    P, Q = split_coin(build_coin(coin))
    PT, QT = np.asarray(P).T, np.asarray(Q).T
    amps = np.asarray(init.vector)[None, :].copy()
    for _ in range(t):
        amps = _advance(amps, PT, QT)
    return WalkState(t, amps)


def distribution(s: WalkState) -> ProbabilityDistribution:
    a = np.asarray(s.amplitudes)
    probs = np.sum(a.real**2 + a.imag**2, axis=1)
    probs.setflags(write=False)
    return ProbabilityDistribution(s.time, s.positions, probs)


def return_probability(s: WalkState) -> float:
    """P(X_t = 0); identically zero at odd times."""
    return distribution(s)[0]


# -- walk with one-step memory ------------------------------------------------


def _check_memory_key(n2: int, n1: int, p: int) -> None:
    if abs(n1 - n2) != 1 or p not in (0, 1):
        raise InvalidMemoryKeyError(f"invalid memory key (n2={n2}, n1={n1}, p={p})")


def map_memory_state(n2: int, n1: int, p: int) -> tuple[int, int]:
    """Relabel ``|n2, n1, p>`` as ``(position, chirality) = (n1, n1 - n2 + 1 + p)``."""
    _check_memory_key(n2, n1, p)
    return n1, n1 - n2 + 1 + p


def unmap_memory_state(x: int, chirality: int) -> tuple[int, int, int]:
    """Inverse of :func:`map_memory_state`."""
    if chirality not in (0, 1, 2, 3):
        raise InvalidInputError(f"chirality must be in 0..3, got {chirality}")
    p = chirality % 2
    n2 = x + 1 if chirality < 2 else x - 1
    return n2, x, p


def memory_state_from_initial(init: InitialState) -> MemoryWalkState:
    """Place (alpha, beta, gamma, delta) on the four memory keys with n1 = 0."""
    amps = {unmap_memory_state(0, j): z for j, z in enumerate(init.astuple())}
    return MemoryWalkState(0, amps)


def _add(out: dict, key, z: complex) -> None:
    out[key] = out.get(key, 0j) + z


def _apply_c1(amps, coin: CoinParams) -> dict:
    # |n2, n1, 0> -> a|.., 0> + b|.., 1>;  |n2, n1, 1> -> c|.., 0> + d|.., 1>
    out: dict = {}
    for (n2, n1, p), z in amps.items():
        if p == 0:
            _add(out, (n2, n1, 0), coin.a * z)
            _add(out, (n2, n1, 1), coin.b * z)
        else:
            _add(out, (n2, n1, 0), coin.c * z)
            _add(out, (n2, n1, 1), coin.d * z)
    return out


def _apply_c2(amps) -> dict:
    # p = 0 flips the remembered side, p = 1 keeps it.
    out: dict = {}
    for (n2, n1, p), z in amps.items():
        if p == 0:
            _add(out, (2 * n1 - n2, n1, 0), z)
        else:
            _add(out, (n2, n1, 1), z)
    return out


def _apply_shift(amps) -> dict:
    # |n+1, n, p> -> |n, n-1, p>;  |n-1, n, p> -> |n, n+1, p>
    out: dict = {}
    for (n2, n1, p), z in amps.items():
        if n2 == n1 + 1:
            _add(out, (n1, n1 - 1, p), z)
        else:
            _add(out, (n1, n1 + 1, p), z)
    return out


def memory_evolve(init: MemoryWalkState, coin: CoinParams, t: int) -> MemoryWalkState:
    """Apply S C2 C1 to the memory-walk state ``t`` times."""
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    amps = dict(init.amplitudes)
    for _ in range(t):
        amps = _apply_shift(_apply_c2(_apply_c1(amps, coin)))
    return MemoryWalkState(init.time + t, amps)


def memory_position_marginal(s: MemoryWalkState) -> dict[int, float]:
    """Probability of each current position n1."""
    out: dict[int, float] = {}
    for (n2, n1, p), z in s.amplitudes.items():
        out[n1] = out.get(n1, 0.0) + abs(z) ** 2
    return out


# -- brute-force oracle -----------------------------------------------------------


def path_sum_oracle(init: InitialState, coin: CoinParams, t: int, x: int) -> C4Vector:
    """
    psi_t(x) as an explicit sum over step sequences.

    Every word in {P, Q} of length ``t`` with (#Q - #P) == x contributes
    ``W_t ... W_1 psi_0(0)``.  Cost is C(t, (t + x) / 2) products of length t.
    """
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    if t > ORACLE_MAX_TIME:
        raise ResourceLimitError(f"path enumeration limited to t <= {ORACLE_MAX_TIME}")
    if (t + x) % 2 or abs(x) > t:
        return as_vector(np.zeros(4))
    P, Q = split_coin(build_coin(coin))
    P, Q = np.asarray(P), np.asarray(Q)
    psi0 = np.asarray(init.vector)
    n_right = (t + x) // 2
    total = np.zeros(4, dtype=np.complex128)
    for rights in itertools.combinations(range(t), n_right):
        v = psi0
        r = set(rights)
        for i in range(t):
            v = (Q if i in r else P) @ v
        total += v
    return as_vector(total)
