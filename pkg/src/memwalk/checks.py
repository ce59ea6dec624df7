"""
Seeded invariant suite behind ``memwalk verify``.

Each check returns a :class:`CheckResult` holding the measured worst-case
deviation and the threshold it was held to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import unitary_group

from memwalk.config import DEFAULT_TOLERANCES, Tolerances
from memwalk.limit import (
    delta_mass,
    delta_mass_k_integral,
    h_j,
    limit_law,
    theoretical_moment,
    x_space_moment,
)
from memwalk.spectral import (
    hadamard_eigen,
    hat_u,
    fourier_evolve,
    stationary_amplitude,
    stationary_total,
    stationary_p0,
    stationary_px,
)
from memwalk.walk import (
    HADAMARD,
    CoinParams,
    InitialState,
    coin_matrix,
    distribution,
    evolve,
    iter_evolve,
    memory_evolve,
    memory_position_marginal,
    memory_state_from_initial,
    path_sum_oracle,
)

__all__ = ["CheckResult", "random_init", "random_coin", "run_suite", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name:<28} value={self.value:.3e}  threshold={self.threshold:.1e}{extra}"


def random_init(rng: np.random.Generator) -> InitialState:
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    return InitialState.from_vector(z, normalize=True)


def random_coin(rng: np.random.Generator) -> CoinParams:
    block = unitary_group.rvs(2, random_state=rng)
    return CoinParams.from_block(block)


# -- individual checks --------------------------------------------------------------


def check_coin_unitarity(coin: CoinParams, tol: Tolerances, perturb: float = 0.0) -> CheckResult:
    u = np.asarray(coin_matrix(coin.a + perturb, coin.b, coin.c, coin.d))
    dev = float(np.max(np.abs(u @ u.conj().T - np.eye(4))))
    return CheckResult("coin-unitarity", dev, tol.unitarity)


def check_oracle(rng, tol: Tolerances, n_pairs: int = 50, t_max: int = 12) -> CheckResult:
    worst = 0.0
    for _ in range(n_pairs):
        coin, init = random_coin(rng), random_init(rng)
        for s in iter_evolve(init, coin, t_max):
            dist = distribution(s)
            for x in s.positions:
                v = np.asarray(path_sum_oracle(init, coin, s.time, int(x)))
                worst = max(worst, abs(float(np.vdot(v, v).real) - dist[int(x)]))
    return CheckResult("oracle-equivalence", worst, tol.oracle, f"{n_pairs} pairs, t<={t_max}")


def check_bijection(rng, tol: Tolerances, n_pairs: int = 10, t_max: int = 12) -> CheckResult:
    worst = 0.0
    for _ in range(n_pairs):
        coin, init = random_coin(rng), random_init(rng)
        mem = memory_state_from_initial(init)
        for s in iter_evolve(init, coin, t_max):
            marg = memory_position_marginal(memory_evolve(mem, coin, s.time)) if s.time else None
            dist = distribution(s)
            if marg is None:
                continue
            for x in range(-s.time - 1, s.time + 2):
                worst = max(worst, abs(marg.get(x, 0.0) - dist[x]))
    return CheckResult("memory-bijection", worst, tol.oracle, f"{n_pairs} pairs, t<={t_max}")


def check_eigen(rng, tol: Tolerances, n_k: int = 1000) -> list[CheckResult]:
    res = gram = det = 0.0
    for k in rng.uniform(-np.pi, np.pi, size=n_k):
        es = hadamard_eigen(k)
        u = np.asarray(hat_u(HADAMARD, k))
        V = np.stack(es.eigenvectors, axis=1)
        lam = np.array(es.eigenvalues)
        res = max(res, float(np.max(np.linalg.norm(u @ V - V * lam, axis=0))))
        gram = max(gram, float(np.max(np.abs(V.conj().T @ V - np.eye(4)))))
        det = max(det, abs(np.prod(lam) - np.linalg.det(u)))
    return [
        CheckResult("eigen-residual", res, tol.eigen, f"{n_k} k"),
        CheckResult("eigen-orthonormality", gram, tol.eigen, f"{n_k} k"),
        CheckResult("eigenvalue-product-det", det, tol.eigen, f"{n_k} k"),
    ]


def check_fourier(rng, tol: Tolerances, n_inits: int = 20, t_max: int = 200) -> CheckResult:
    worst = 0.0
    for _ in range(n_inits):
        coin, init = random_coin(rng), random_init(rng)
        t = int(rng.integers(0, t_max + 1))
        a = np.asarray(evolve(init, coin, t).amplitudes)
        b = np.asarray(fourier_evolve(init, coin, t, 2 * t + 2).amplitudes)
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("fourier-vs-direct", worst, tol.fourier, f"{n_inits} inits, t<={t_max}")


def check_stationary(rng, tol: Tolerances, n_inits: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(n_inits):
        init = random_init(rng)
        for x in range(-6, 7):
            even, odd = stationary_amplitude(x, init)
            worst = max(
                worst,
                abs(stationary_px(x, "even", init) - float(np.vdot(even, even).real)),
                abs(stationary_px(x, "odd", init) - float(np.vdot(odd, odd).real)),
            )
        worst = max(worst, abs(stationary_p0(init) - stationary_px(0, "even", init)))
    return CheckResult("stationary-consistency", worst, tol.closed_form, f"{n_inits} inits")


def check_sum_rule(rng, tol: Tolerances, n_inits: int = 100) -> CheckResult:
    worst = max(abs(stationary_total(i) - delta_mass(i)) for i in (random_init(rng) for _ in range(n_inits)))
    return CheckResult("sum-limit-equals-delta", worst, tol.sum_rule, f"{n_inits} inits")


def check_delta_dual(rng, tol: Tolerances, n_inits: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(n_inits):
        init = random_init(rng)
        worst = max(worst, abs(delta_mass(init) - delta_mass_k_integral(init)))
    return CheckResult("delta-dual-route", worst, tol.quadrature, f"{n_inits} inits")


def check_normalization(rng, tol: Tolerances, n_inits: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(n_inits):
        law = limit_law(random_init(rng))
        worst = max(worst, abs(law.delta + law.continuous_mass() - 1.0))
    return CheckResult("limit-normalization", worst, tol.quadrature, f"{n_inits} inits")


def check_moments(rng, tol: Tolerances, n_inits: int = 20, r_max: int = 4) -> CheckResult:
    worst = 0.0
    for _ in range(n_inits):
        init = random_init(rng)
        law = limit_law(init)
        for r in range(r_max + 1):
            worst = max(worst, abs(theoretical_moment(init, r) - x_space_moment(law, r)))
    return CheckResult("moment-duality", worst, tol.moment_duality, f"{n_inits} inits, r<={r_max}")


def check_group_velocity(rng, tol: Tolerances, n_k: int = 1000, step: float = 1e-5) -> CheckResult:
    worst = 0.0
    for k in rng.uniform(-np.pi, np.pi, size=n_k):
        lam = lambda q: hadamard_eigen(q).eigenvalues[2]  # noqa: E731
        fd = 1j * (lam(k + step) - lam(k - step)) / (2 * step) / lam(k)
        worst = max(worst, abs(fd - h_j(k, 3)))
    return CheckResult("group-velocity-fd", worst, tol.finite_difference, f"{n_k} k")


def check_convergence_trend(rng, tol: Tolerances, n_inits: int = 10) -> CheckResult:
    """
    Worst-case |P(X_{2t} = 0) - limit| over inits, for t in {50, ..., 800}.

    Reports the largest later error divided by the error at t = 50; the
    trend passes when no later error exceeds the first.
    """
    times = [100, 200, 400, 800, 1600]
    errs = np.zeros(len(times))
    for _ in range(n_inits):
        init = random_init(rng)
        target = stationary_p0(init)
        for i, s in enumerate(s for s in iter_evolve(init, HADAMARD, times[-1]) if s.time in times):
            errs[i] = max(errs[i], abs(distribution(s)[0] - target))
    ratio = float(np.max(errs[1:]) / errs[0]) if errs[0] > 0 else 0.0
    return CheckResult("convergence-trend", ratio, 1.0, "max later/first error")


CHECKS: dict[str, Callable] = {
    "oracle": check_oracle,
    "bijection": check_bijection,
    "eigen": check_eigen,
    "fourier": check_fourier,
    "stationary": check_stationary,
    "sum_rule": check_sum_rule,
    "delta_dual": check_delta_dual,
    "normalization": check_normalization,
    "moments": check_moments,
    "group_velocity": check_group_velocity,
    "convergence": check_convergence_trend,
}


def run_suite(
    seed: int = 0,
    coin: CoinParams = HADAMARD,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    perturb_coin: float = 0.0,
) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [check_coin_unitarity(coin, tolerances, perturb_coin)]
    for check in CHECKS.values():
        out = check(rng, tolerances)
        results.extend(out if isinstance(out, list) else [out])
    return results
