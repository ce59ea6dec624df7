"""
Command-line front end.

    memwalk simulate   --time 500 --out dist.csv [--series p0.csv]
    memwalk stationary --xmax 10
    memwalk limit      --points 1001
    memwalk compare2   --init2 0.70710678118654757,0.70710678118654757j
    memwalk verify     --seed 0 [--perturb-coin 1e-3] [--tol oracle=1e-11]

Tables are written as CSV (``# key=value`` metadata lines, a header row,
17 significant digits) or JSON (``{"meta": ..., "columns": ..., "rows": ...}``).
Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from memwalk.checks import run_suite
from memwalk.config import DEFAULT_GRIDSIZE, DEFAULT_TOLERANCES, DEFAULT_TIME
from memwalk.errors import InvalidInputError, ResourceLimitError
from memwalk.limit import SUPPORT_EDGE, limit_law, two_state_density
from memwalk.spectral import stationary_total, stationary_p0, stationary_px
from memwalk.walk import (
    HADAMARD,
    SYMMETRIC_INIT,
    CoinParams,
    InitialState,
    distribution,
    iter_evolve,
)

COMMANDS = ("simulate", "stationary", "limit", "verify", "compare2")
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

DEFAULT_INIT2 = (1 / np.sqrt(2), 1j / np.sqrt(2))


def fmt_num(v: float) -> str:
    return format(float(v), ".17g")


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt_num(z.real)
    sign = "+" if z.imag >= 0 or np.isnan(z.imag) else "-"
    return f"{fmt_num(z.real)}{sign}{fmt_num(abs(z.imag))}j"


def parse_complex_list(text: str, n: int) -> tuple[complex, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated complex numbers, got {len(parts)}")
    try:
        return tuple(complex(p.replace(" ", "")) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex list {text!r}: {exc}") from None


def parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value must be a number: {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    coin: tuple[complex, complex, complex, complex] = (HADAMARD.a, HADAMARD.b, HADAMARD.c, HADAMARD.d)
    init: tuple[complex, complex, complex, complex] = SYMMETRIC_INIT.astuple()
    t: int = DEFAULT_TIME
    gridsize: int = DEFAULT_GRIDSIZE
    output_format: str = "csv"
    output_path: str = "-"
    seed: int = 0
    tolerances: tuple[tuple[str, float], ...] = field(default_factory=tuple)
    perturb_coin: float = 0.0
    series_path: str | None = None
    xmax: int = 10
    points: int = 1001
    init2: tuple[complex, complex] = DEFAULT_INIT2

    def meta(self) -> dict[str, str]:
        """Every field as text; :func:`parse_args` on :meth:`to_argv` restores it exactly."""
        out = {
            "command": self.command,
            "coin": ",".join(fmt_complex(z) for z in self.coin),
            "init": ",".join(fmt_complex(z) for z in self.init),
            "time": str(self.t),
            "grid": str(self.gridsize),
            "format": self.output_format,
            "seed": str(self.seed),
        }
        if self.tolerances:
            out["tol"] = ";".join(f"{k}={fmt_num(v)}" for k, v in self.tolerances)
        if self.perturb_coin:
            out["perturb_coin"] = fmt_num(self.perturb_coin)
        if self.command == "stationary":
            out["xmax"] = str(self.xmax)
        if self.command in ("limit", "compare2"):
            out["points"] = str(self.points)
        if self.command == "compare2":
            out["init2"] = ",".join(fmt_complex(z) for z in self.init2)
        return out

    def to_argv(self) -> list[str]:
        argv = [
            self.command,
            "--coin", ",".join(fmt_complex(z) for z in self.coin),
            "--init", ",".join(fmt_complex(z) for z in self.init),
            "--time", str(self.t),
            "--grid", str(self.gridsize),
            "--format", self.output_format,
            "--out", self.output_path,
            "--seed", str(self.seed),
            "--perturb-coin", fmt_num(self.perturb_coin),
            "--xmax", str(self.xmax),
            "--points", str(self.points),
            "--init2", ",".join(fmt_complex(z) for z in self.init2),
        ]
        for k, v in self.tolerances:
            argv += ["--tol", f"{k}={fmt_num(v)}"]
        if self.series_path is not None:
            argv += ["--series", self.series_path]
        return argv

    def coin_params(self) -> CoinParams:
        return CoinParams(*self.coin)

    def initial_state(self) -> InitialState:
        return InitialState(*self.init)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coin", type=lambda s: parse_complex_list(s, 4), metavar="a,b,c,d",
                        help="coin amplitudes, complex as re+imj (default: Hadamard)")
    common.add_argument("--init", type=lambda s: parse_complex_list(s, 4), metavar="A,B,C,D",
                        help="initial amplitudes at the origin (default: 1/2,1/2,1/2,1/2)")
    common.add_argument("--time", type=int, default=DEFAULT_TIME, metavar="T")
    common.add_argument("--grid", type=int, default=DEFAULT_GRIDSIZE, metavar="N")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", metavar="PATH", help="output file, '-' for stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--perturb-coin", type=float, default=0.0, metavar="EPS",
                        help="add EPS to coin amplitude a before the unitarity check (verify)")
    common.add_argument("--tol", type=parse_tol, action="append", default=[], metavar="NAME=VAL")
    common.add_argument("--series", default=None, metavar="PATH",
                        help="simulate: also write (t, P(X_t=0)) for every t <= T")
    common.add_argument("--xmax", type=int, default=10, help="stationary: largest |x|")
    common.add_argument("--points", type=int, default=1001, help="limit/compare2: grid points")
    common.add_argument("--init2", type=lambda s: parse_complex_list(s, 2), metavar="A,B",
                        help="compare2: 2-state initial amplitudes")

    parser = argparse.ArgumentParser(prog="memwalk", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "probability distribution at time T by direct evolution",
        "stationary": "closed-form stationary limits for even and odd t",
        "limit": "weak-limit density, delta mass and weight coefficients",
        "verify": "run the seeded invariant suite",
        "compare2": "2-state vs 4-state limit densities",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        coin=ns.coin if ns.coin is not None else RunConfig.coin,
        init=ns.init if ns.init is not None else RunConfig.init,
        t=ns.time,
        gridsize=ns.grid,
        output_format=ns.format,
        output_path=ns.out,
        seed=ns.seed,
        tolerances=tuple(ns.tol),
        perturb_coin=ns.perturb_coin,
        series_path=ns.series,
        xmax=ns.xmax,
        points=ns.points,
        init2=ns.init2 if ns.init2 is not None else DEFAULT_INIT2,
    )


def validate(cfg: RunConfig) -> None:
    """Reject bad combinations before any computation."""
    if cfg.t < 0:
        raise InvalidInputError("--time must be non-negative")
    if cfg.gridsize < 2:
        raise InvalidInputError("--grid must be at least 2")
    if cfg.xmax < 0:
        raise InvalidInputError("--xmax must be non-negative")
    if cfg.points < 1:
        raise InvalidInputError("--points must be positive")
    if cfg.perturb_coin and cfg.command != "verify":
        raise InvalidInputError("--perturb-coin only applies to verify")
    if cfg.series_path is not None and cfg.command != "simulate":
        raise InvalidInputError("--series only applies to simulate")
    DEFAULT_TOLERANCES.with_overrides(dict(cfg.tolerances))
    cfg.coin_params()
    cfg.initial_state()
    if cfg.command == "compare2":
        n = sum(abs(z) ** 2 for z in cfg.init2)
        if abs(n - 1.0) > 1e-12:
            raise InvalidInputError(f"--init2 has squared norm {n!r}, expected 1")


# -- output ------------------------------------------------------------------------


def render(meta: dict[str, str], columns: Sequence[str], rows, fmt: str) -> str:
    if fmt == "json":
        body = {
            "meta": meta,
            "columns": list(columns),
            "rows": [dict(zip(columns, (_json_value(v) for v in row))) for row in rows],
        }
        return json.dumps(body, indent=1) + "\n"
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_csv_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _csv_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return fmt_num(v)


def _json_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parse_cell(v: str) -> float | str:
    try:
        return float(v)
    except ValueError:
        return v


def parse_csv(text: str) -> tuple[dict[str, str], list[str], list[list]]:
    """Inverse of the CSV branch of :func:`render`."""
    meta: dict[str, str] = {}
    columns: list[str] = []
    rows: list[list] = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        elif not columns:
            columns = line.split(",")
        elif line:
            rows.append([_parse_cell(v) for v in line.split(",")])
    return meta, columns, rows


# -- commands ----------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig) -> int:
    init, coin = cfg.initial_state(), cfg.coin_params()
    series = []
    state = None
    for state in iter_evolve(init, coin, cfg.t):
        if cfg.series_path is not None:
            series.append((state.time, distribution(state)[0]))
    dist = distribution(state)
    meta = cfg.meta() | {"total_probability": fmt_num(dist.total())}
    rows = [(int(x), p) for x, p in zip(dist.positions, dist.probs)]
    write_output(render(meta, ("x", "probability"), rows, cfg.output_format), cfg.output_path)
    if cfg.series_path is not None:
        write_output(
            render(cfg.meta(), ("t", "p_origin"), series, cfg.output_format), cfg.series_path
        )
    return EXIT_OK


def cmd_stationary(cfg: RunConfig) -> int:
    init = cfg.initial_state()
    meta = cfg.meta() | {
        "p0": fmt_num(stationary_p0(init)),
        "delta": fmt_num(stationary_total(init)),
    }
    rows = [
        (x, stationary_px(x, "even", init), stationary_px(x, "odd", init))
        for x in range(-cfg.xmax, cfg.xmax + 1)
    ]
    write_output(render(meta, ("x", "even_limit", "odd_limit"), rows, cfg.output_format), cfg.output_path)
    return EXIT_OK


def _open_grid(n: int) -> np.ndarray:
    return np.linspace(-SUPPORT_EDGE, SUPPORT_EDGE, n + 2)[1:-1]


def cmd_limit(cfg: RunConfig) -> int:
    law = limit_law(cfg.initial_state())
    meta = cfg.meta() | {
        "delta": fmt_num(law.delta),
        "c0": fmt_num(law.c0),
        "c1": fmt_num(law.c1),
        "c2": fmt_num(law.c2),
    }
    xs = _open_grid(cfg.points)
    rows = list(zip(xs, law.density(xs)))
    write_output(render(meta, ("x", "density"), rows, cfg.output_format), cfg.output_path)
    return EXIT_OK


def cmd_compare2(cfg: RunConfig) -> int:
    law = limit_law(cfg.initial_state())
    a2, b2 = cfg.init2
    xs = _open_grid(cfg.points)
    d2 = two_state_density(a2, b2, xs)
    d4 = law.density(xs)
    meta = cfg.meta() | {"delta_2state": fmt_num(0.0), "delta_4state": fmt_num(law.delta)}
    rows = [(x, p2, p4, 0.0, law.delta) for x, p2, p4 in zip(xs, d2, d4)]
    columns = ("x", "density_2state", "density_4state", "delta_2state", "delta_4state")
    write_output(render(meta, columns, rows, cfg.output_format), cfg.output_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    tol = DEFAULT_TOLERANCES.with_overrides(dict(cfg.tolerances))
    results = run_suite(cfg.seed, cfg.coin_params(), tol, cfg.perturb_coin)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if cfg.output_path != "-":
        rows = [(r.name, r.value, r.threshold, int(r.passed)) for r in results]
        text = render(cfg.meta(), ("check", "value", "threshold", "passed"), rows, cfg.output_format)
        write_output(text, cfg.output_path)
    return EXIT_FAIL if failed else EXIT_OK


HANDLERS = {
    "simulate": cmd_simulate,
    "stationary": cmd_stationary,
    "limit": cmd_limit,
    "verify": cmd_verify,
    "compare2": cmd_compare2,
}


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(argv)
    try:
        validate(cfg)
        return HANDLERS[cfg.command](cfg)
    except (InvalidInputError, KeyError, ResourceLimitError) as exc:
        print(f"memwalk: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"memwalk: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
