"""Numerical tolerances and quadrature defaults shared by the checks."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # exact identities
    golden: float = 1e-12
    oracle: float = 1e-12
    unitarity: float = 1e-12
    closed_form: float = 1e-12
    sum_rule: float = 1e-10
    eigen: float = 1e-10
    fourier: float = 1e-10
    norm: float = 1e-10
    # quadrature
    quadrature: float = 1e-8
    moment_duality: float = 1e-6
    finite_difference: float = 1e-7
    # empirical, calibrated by convergence runs
    return_probability: float = 0.02
    empirical_moment: float = 1e-2
    ks_distance: float = 0.05

    def with_overrides(self, overrides: dict[str, float]) -> "Tolerances":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()

SIMPSON_PANELS = 2**14
K_GRID = 1024
DEFAULT_TIME = 500
DEFAULT_GRIDSIZE = 2**14
