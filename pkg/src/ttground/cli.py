"""``ttground`` command line: solve, bench and oracle.

Configuration files are flat ``section.key = value`` lines (``[section]``
headers are also accepted and prefix the keys that follow).  Any key can be
overridden on the command line as ``--section.key=value``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

from .models import heisenberg_mpo
from .oracle import DENSE_MATRIX_LIMIT, LANCZOS_LIMIT, OracleError, exact_ground_state, write_fixture
from .sweeps import (
    ALGORITHMS,
    ENRICH_MODES,
    Adaptive,
    FixedSchedule,
    ScheduleEntry,
    SweepConfig,
    SweepResult,
    run,
)
from .tt import tt_random

log = logging.getLogger("ttground")

CSV_COLUMNS = ["sweep", "site", "direction", "lambda", "lambda_error", "resid_estimate", "max_rank", "wall_seconds"]
CSV_NOTES = [
    "wall_seconds: cumulative wall-clock time from a monotonic clock (stands in for CPU time)",
    "iteration axis: one half-sweep, i.e. 2*sweep + (direction == 'left')",
    "lambda_error: lambda - reference_lambda, empty when no reference is known",
]


class ConfigError(ValueError):
    pass


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _opt_int(s: str):
    return None if s.strip().lower() in ("", "none", "inf") else int(s)


def _opt_float(s: str):
    return None if s.strip().lower() in ("", "none") else float(s)


def _schedule(s: str):
    if s.strip().lower() in ("", "none"):
        return None
    entries = []
    for item in s.split(","):
        rank, _, weight = item.strip().partition(":")
        entries.append(ScheduleEntry(int(rank), float(weight) if weight else 0.0))
    return tuple(entries)


# dotted key -> (RunConfig field, parser)
KEYS = {
    "model.d": ("d", int),
    "model.periodic": ("periodic", _bool),
    "solver.algorithm": ("algorithm", str),
    "solver.eps": ("eps", float),
    "solver.rmax": ("rmax", _opt_int),
    "solver.enrich_rank": ("enrich_rank", int),
    "solver.enrich_mode": ("enrich_mode", str),
    "solver.eps_z": ("eps_z", float),
    "solver.weight_a": ("weight_a", float),
    "solver.kick_rank": ("kick_rank", int),
    "solver.max_sweeps": ("max_sweeps", int),
    "solver.tol_lambda": ("tol_lambda", _opt_float),
    "solver.local_tol": ("local_tol", _opt_float),
    "solver.schedule": ("schedule", _schedule),
    "solver.init_rank": ("init_rank", int),
    "solver.time_limit": ("time_limit", _opt_float),
    "seed": ("seed", int),
    "reference_lambda": ("reference_lambda", _opt_float),
    "output.csv": ("csv", str),
}


@dataclass
class RunConfig:
    d: int = 8
    periodic: bool = True
    algorithm: str = "amen"
    eps: float = 1e-6
    rmax: int | None = None
    enrich_rank: int = 4
    enrich_mode: str = "global_z"
    eps_z: float = 0.0
    weight_a: float = 1e-4
    kick_rank: int = 0
    max_sweeps: int = 20
    tol_lambda: float | None = None
    local_tol: float | None = None
    schedule: tuple | None = None
    init_rank: int = 4
    time_limit: float | None = None
    seed: int = 1
    reference_lambda: float | None = None
    csv: str = "ttground.csv"

    def validate(self):
        for name in ("eps", "eps_z", "weight_a", "tol_lambda", "local_tol", "time_limit", "reference_lambda"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ConfigError(f"{name} must be finite")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"solver.algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}")
        if self.enrich_mode not in ENRICH_MODES:
            raise ConfigError(f"solver.enrich_mode must be one of {', '.join(ENRICH_MODES)}")
        if self.d < 2:
            raise ConfigError("model.d must be at least 2")
        return self

    def sweep_config(self, algorithm: str | None = None) -> SweepConfig:
        strategy = FixedSchedule(self.schedule) if self.schedule else Adaptive(self.eps, self.rmax)
        return SweepConfig(
            algorithm=algorithm or self.algorithm,
            rank_strategy=strategy,
            max_sweeps=self.max_sweeps,
            tol_lambda=self.tol_lambda,
            enrich_rank=self.enrich_rank,
            enrich_mode=self.enrich_mode,
            eps_z=self.eps_z,
            weight_a=self.weight_a,
            kick_rank=self.kick_rank,
            seed=self.seed,
            reference_lambda=self.reference_lambda,
            local_tol=self.local_tol,
            time_limit=self.time_limit,
        )


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    section = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        if section and "." not in key:
            key = f"{section}.{key}"
        out[key] = value.strip()
    return out


def build_config(values: dict[str, str], base: RunConfig | None = None) -> RunConfig:
    cfg = base or RunConfig()
    updates = {}
    for key, raw in values.items():
        if key not in KEYS:
            raise ConfigError(f"unknown config key '{key}'")
        name, conv = KEYS[key]
        try:
            updates[name] = conv(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for '{key}': {exc}") from None
    return replace(cfg, **updates).validate()


def parse_overrides(extra: list[str]) -> dict[str, str]:
    out = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument '{tok}'")
        key, sep, value = tok[2:].partition("=")
        if not sep:
            value = next(it, None)
            if value is None:
                raise ConfigError(f"missing value for '{key}'")
        out[key] = value
    return out


def load_run_config(path: str | None, extra: list[str]) -> RunConfig:
    values = {}
    if path:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    values.update(parse_overrides(extra))
    return build_config(values)


def write_csv(path, rows, algorithm: str | None = None, reference: float | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for note in CSV_NOTES:
            fh.write(f"# {note}\n")
        if reference is not None:
            fh.write(f"# reference_lambda = {reference!r}\n")
        w = csv.writer(fh)
        w.writerow((["algorithm"] if algorithm == "*" else []) + CSV_COLUMNS)
        for alg, r in rows:
            err = "" if r.lambda_error is None else repr(r.lambda_error)
            row = [r.sweep, r.site, r.direction, repr(r.lam), err, repr(r.resid_estimate), r.max_rank, f"{r.wall_seconds:.6f}"]
            w.writerow(([alg] if algorithm == "*" else []) + row)


def _initial_state(cfg: RunConfig):
    return tt_random([3] * cfg.d, cfg.init_rank, cfg.seed, clamp=True)


def _solve_one(cfg: RunConfig, algorithm: str) -> SweepResult:
    A = heisenberg_mpo(cfg.d, cfg.periodic)
    return run(A, _initial_state(cfg), cfg.sweep_config(algorithm))


def _exit_code(res: SweepResult) -> int:
    return 0 if res.converged else 2


def cmd_solve(cfg: RunConfig) -> int:
    t = time.monotonic()
    res = _solve_one(cfg, cfg.algorithm)
    write_csv(cfg.csv, [(cfg.algorithm, r) for r in res.records], reference=cfg.reference_lambda)
    print(f"lambda = {res.energy:.16e}")
    print(f"max_rank = {res.x.max_rank}")
    print(f"seconds = {time.monotonic() - t:.3f}")
    if not res.converged:
        print(f"stopped after {res.sweeps} sweeps without reaching tol_lambda", file=sys.stderr)
    return _exit_code(res)


def _oracle_reference(d: int, periodic: bool) -> float:
    N = 3**d
    if N > LANCZOS_LIMIT:
        raise ConfigError(f"reference_lambda is required for d={d} (oracle limited to 3^12 states)")
    method = "dense" if N <= DENSE_MATRIX_LIMIT else "lanczos"
    return exact_ground_state(heisenberg_mpo(d, periodic), method)[0]


def _per_algorithm_path(path: str, alg: str) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}_{alg}{p.suffix or '.csv'}")


def cmd_bench(cfg: RunConfig, algorithms: list[str]) -> int:
    if not algorithms:
        raise ConfigError("bench needs at least one algorithm")
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{alg}'")
    if cfg.reference_lambda is None:
        cfg = replace(cfg, reference_lambda=_oracle_reference(cfg.d, cfg.periodic))
    merged = []
    codes = []
    for alg in algorithms:
        try:
            res = _solve_one(cfg, alg)
        except Exception as exc:  # report and keep going with the other algorithms
            print(f"{alg}: failed: {exc}", file=sys.stderr)
            codes.append(1)
            continue
        rows = [(alg, r) for r in res.records]
        write_csv(_per_algorithm_path(cfg.csv, alg), rows, reference=cfg.reference_lambda)
        merged.extend(rows)
        codes.append(_exit_code(res))
        err = res.energy - cfg.reference_lambda
        print(f"{alg}: lambda = {res.energy:.16e} error = {err:.3e} max_rank = {res.x.max_rank} "
              f"seconds = {res.records[-1].wall_seconds:.2f}")
    write_csv(cfg.csv, merged, algorithm="*", reference=cfg.reference_lambda)
    return max(codes)


def default_fixture_path(d: int, periodic: bool) -> Path:
    return Path("fixtures") / f"heisenberg_{'periodic' if periodic else 'open'}_d{d}.txt"


def cmd_oracle(d: int, periodic: bool, method: str, fixture: str | None = None) -> int:
    lam, _ = exact_ground_state(heisenberg_mpo(d, periodic), method)
    print(f"lambda = {lam:.16e}")
    path = Path(fixture) if fixture else default_fixture_path(d, periodic)
    bc = "--periodic" if periodic else "--open"
    write_fixture(path, lam, [f"generated by: ttground oracle --d {d} {bc} --method {method}",
                              f"spin-1 Heisenberg chain, {'periodic' if periodic else 'open'}, d = {d}"])
    return 0


def _limit_threads():
    n = os.environ.get("TTGROUND_THREADS")
    if n:
        from threadpoolctl import threadpool_limits

        threadpool_limits(int(n))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ttground", description="Tensor-train ground-state solvers.")
    p.add_argument("-v", "--verbose", action="store_true", help="log one line per half-sweep")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="run one solver")
    s.add_argument("--config")
    b = sub.add_parser("bench", help="run several solvers on the same model")
    b.add_argument("--config")
    b.add_argument("--algorithms", default="dmrg2,dmrg1c,amen")
    o = sub.add_parser("oracle", help="brute-force reference eigenvalue")
    o.add_argument("--d", type=int, required=True)
    bc = o.add_mutually_exclusive_group()
    bc.add_argument("--periodic", dest="periodic", action="store_true", default=True)
    bc.add_argument("--open", dest="periodic", action="store_false")
    o.add_argument("--method", choices=["dense", "lanczos"], default="dense")
    o.add_argument("--fixture")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    _limit_threads()
    try:
        if args.command == "oracle":
            if extra:
                raise ConfigError(f"unexpected argument '{extra[0]}'")
            return cmd_oracle(args.d, args.periodic, args.method, args.fixture)
        cfg = load_run_config(args.config, extra)
        if args.command == "solve":
            return cmd_solve(cfg)
        algs = [a.strip() for a in args.algorithms.split(",") if a.strip()]
        return cmd_bench(cfg, algs)
    except (ConfigError, ValueError, OSError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
