"""Alternating sweep drivers: DMRG1, DMRG2, corrected one-site DMRG and AMEn.

All four share the same skeleton.  A half-sweep visits sites ``0..d-2``
left-to-right or ``d-1..1`` right-to-left, solves the reduced eigenproblem at
the orthogonality center and then moves the center one site on.  The
algorithms differ only in how that move is made:

* ``dmrg1``  plain QR shift, optionally with a random kick of ``kick_rank``
  columns;
* ``dmrg1c`` replaces the core by the dominant subspace of the core and its
  weighted correction slices (this perturbs the state);
* ``amen``   appends a low-rank approximation of the residual
  ``z = A x - theta x`` and zero-pads the neighbour (the state is unchanged);
* ``dmrg2``  solves over two sites and splits the supercore by SVD.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .contraction import (
    EnvironmentStack,
    contract_left,
    contract_right,
    correction_block,
    env_init,
    interface_matrix,
)
from .local_eig import rayleigh_from_env, smallest_eigpair
from .tt import (
    TTMatrix,
    TTVector,
    mpo_apply,
    orthogonalize,
    shift_ortho,
    truncation_rank,
    tt_add,
    tt_round,
    tt_scale,
)
from .tt import enrich as tt_enrich

log = logging.getLogger(__name__)

ALGORITHMS = ("dmrg1", "dmrg2", "dmrg1c", "amen")
ENRICH_MODES = ("global_z", "local_projection", "als_z")


@dataclass(frozen=True)
class ScheduleEntry:
    max_rank: int
    weight_a: float = 0.0


@dataclass(frozen=True)
class FixedSchedule:
    """Per-sweep rank caps (and DMRG1c weights); the last entry repeats."""

    entries: tuple[ScheduleEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a fixed schedule needs at least one entry")
        object.__setattr__(self, "entries", tuple(self.entries))

    def entry(self, sweep: int) -> ScheduleEntry:
        return self.entries[min(sweep, len(self.entries) - 1)]


@dataclass(frozen=True)
class Adaptive:
    """SVD truncation to relative accuracy ``eps`` with an optional rank cap."""

    eps: float
    rmax: int | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("adaptive truncation needs eps > 0")


RankStrategy = Union[FixedSchedule, Adaptive]


@dataclass
class SweepConfig:
    algorithm: str = "amen"
    rank_strategy: RankStrategy = field(default_factory=lambda: Adaptive(1e-6))
    max_sweeps: int = 20
    tol_lambda: float | None = None
    enrich_rank: int = 4
    enrich_mode: str = "global_z"
    eps_z: float = 0.0
    weight_a: float = 1e-4
    kick_rank: int = 0
    seed: int = 1
    reference_lambda: float | None = None
    local_tol: float | None = None
    krylov_size: int = 30
    restarts: int = 3
    dense_threshold: int = 1500
    time_limit: float | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.enrich_mode not in ENRICH_MODES:
            raise ValueError(f"unknown enrich mode {self.enrich_mode!r}")
        if self.enrich_rank < 0 or self.kick_rank < 0:
            raise ValueError("enrichment ranks must be non-negative")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


@dataclass
class ConvergenceRecord:
    sweep: int
    site: int
    direction: str
    lam: float
    lambda_error: float | None
    resid_estimate: float
    max_rank: int
    wall_seconds: float
    local_tol: float = 0.0


@dataclass
class SweepResult:
    x: TTVector
    energy: float
    records: list[ConvergenceRecord]
    converged: bool
    sweeps: int


@dataclass
class StepEvent:
    """What an observer sees; ``x`` and ``env`` are live objects, not copies."""

    stage: str
    sweep: int
    site: int
    direction: str
    x: TTVector
    env: EnvironmentStack
    theta: float


def _matricize(core: np.ndarray, direction: str) -> np.ndarray:
    r0, n, r1 = core.shape
    if direction == "right":
        return core.reshape(r0 * n, r1)
    return core.reshape(r0, n * r1).T


def averaging_step(
    xcore: np.ndarray,
    S_full: np.ndarray,
    a: float,
    rank: int | None = None,
    direction: str = "right",
    eps: float | None = None,
    rmax: int | None = None,
):
    """Dominant subspace of ``[X | sqrt(a) S_1 | sqrt(a) S_2 | ...]``.

    Each correction slice ``S_gamma`` is scaled to unit Frobenius norm first.
    Either a fixed ``rank`` or an ``eps`` truncation (tail <= eps * norm,
    capped at ``rmax``) picks the new rank.  Returns the new core and the
    transfer matrix ``T = U^T X``; for ``right`` the caller multiplies the
    next core by ``T`` from the left, for ``left`` the previous core by
    ``T^T`` from the right.
    """
    r0, n, r1 = xcore.shape
    X = _matricize(xcore, direction)
    if direction == "right":
        nslices = S_full.shape[2] // r1
        slices = S_full.reshape(r0, n, nslices, r1).transpose(2, 0, 1, 3).reshape(nslices, r0 * n, r1)
    else:
        nslices = S_full.shape[0] // r0
        slices = S_full.reshape(nslices, r0, n, r1).reshape(nslices, r0, n * r1).transpose(0, 2, 1)
    blocks = [X]
    if a > 0:
        xn = np.linalg.norm(X)
        for s in slices:
            sn = np.linalg.norm(s)
            if sn > 1e-14 * max(xn, 1e-300):
                blocks.append(math.sqrt(a) * s / sn)
    G = np.concatenate(blocks, axis=1)
    if rank is not None and rank > X.shape[0]:
        raise ValueError(f"target rank {rank} exceeds the {X.shape[0]} rows of the core")
    U, s, _ = np.linalg.svd(G, full_matrices=False)
    numerical = int(np.sum(s > 1e-14 * s[0])) if s.size and s[0] > 0 else 1
    if rank is None:
        if eps is None:
            raise ValueError("averaging_step needs either rank or eps")
        r = truncation_rank(s, eps * np.linalg.norm(s), rmax)
    else:
        r = rank
    r = max(1, min(r, numerical))
    U = U[:, :r]
    T = U.T @ X
    if direction == "right":
        return U.reshape(r0, n, r), T
    return U.T.reshape(r, n, r1), T


def compute_residual_tt(
    A: TTMatrix,
    x: TTVector,
    theta: float,
    mode: str = "global_z",
    rho: int | None = None,
    eps_z: float = 0.0,
) -> TTVector | None:
    """TT approximation of ``z = A x - theta x``.

    ``global_z`` builds ``z`` exactly (ranks ``(R + 1) r``) and compresses it
    by TT-SVD to ``eps_z`` / rank ``rho``; the result has its center at site 0.
    ``local_projection`` builds no global vector and returns ``None``: the
    sweep assembles its enrichment from the correction block instead.
    """
    if mode == "local_projection":
        return None
    if mode not in ("global_z", "als_z"):
        raise ValueError(f"unknown residual mode {mode!r}")
    z = tt_add(mpo_apply(A, x), tt_scale(x, -theta))
    return tt_round(z, eps_z, rho)


class _Sweeper:
    def __init__(self, A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer: Callable | None):
        if A.col_modes != x0.mode_sizes:
            raise ValueError("operator and initial state shapes differ")
        self.A = A
        self.cfg = cfg
        self.observer = observer
        self.x = x0.copy()
        orthogonalize(self.x, 0)
        self._normalize()
        self.env = env_init(A, self.x)
        self.records: list[ConvergenceRecord] = []
        self.rng = np.random.Generator(np.random.Philox(cfg.seed))
        self.t0 = time.monotonic()
        self.sweep = 0
        self.lam = rayleigh_from_env(self.env, 0)
        self.dlam = math.inf
        self.z: TTVector | None = None
        self.zenv: _ResidualFrames | None = None
        self.timed_out = False
        modes = self.x.mode_sizes
        self._feasible = [min(math.prod(modes[:b]), math.prod(modes[b:])) for b in range(self.x.d + 1)]

    # bookkeeping ---------------------------------------------------------

    def _normalize(self):
        c = self.x.center
        nrm = np.linalg.norm(self.x.cores[c])
        if nrm == 0 or not np.isfinite(nrm):
            raise FloatingPointError("state collapsed to zero or non-finite norm")
        self.x.cores[c] = self.x.cores[c] / nrm

    def _emit(self, stage, k, direction, theta=math.nan):
        if self.observer is not None:
            self.observer(StepEvent(stage, self.sweep, k, direction, self.x, self.env, theta))

    def _local_tol(self):
        if self.cfg.local_tol is not None:
            return self.cfg.local_tol
        return min(1e-3, max(1e-10, 1e-2 * self.dlam))

    def _elapsed(self):
        return time.monotonic() - self.t0

    def _record(self, k, direction, theta, resid, tol):
        if not np.isfinite(theta):
            raise FloatingPointError(f"non-finite eigenvalue at site {k}")
        ref = self.cfg.reference_lambda
        self.records.append(
            ConvergenceRecord(
                sweep=self.sweep,
                site=k,
                direction=direction,
                lam=float(theta),
                lambda_error=None if ref is None else float(theta - ref),
                resid_estimate=float(resid),
                max_rank=self.x.max_rank,
                wall_seconds=self._elapsed(),
                local_tol=tol,
            )
        )
        if self.cfg.time_limit is not None and self._elapsed() > self.cfg.time_limit:
            self.timed_out = True

    def _solve(self, op, v0):
        tol = self._local_tol()
        rep = smallest_eigpair(
            op,
            v0,
            tol=tol,
            maxit=self.cfg.restarts,
            krylov_size=self.cfg.krylov_size,
            dense_threshold=self.cfg.dense_threshold,
        )
        return rep, tol

    def _bond_cap(self, k, direction):
        """Largest useful rank on the bond the center is about to cross."""
        b = k + 1 if direction == "right" else k
        return self._feasible[b]

    def _rank_caps(self):
        rs = self.cfg.rank_strategy
        if isinstance(rs, FixedSchedule):
            e = rs.entry(self.sweep)
            return None, e.max_rank, e.weight_a
        return rs.eps, rs.rmax, self.cfg.weight_a

    # one-site machinery --------------------------------------------------

    def solve_site(self, k, direction):
        op = self.env.local_operator(k)
        shape = self.x.cores[k].shape
        rep, tol = self._solve(op, self.x.cores[k].reshape(-1))
        self.x.cores[k] = rep.vector.reshape(shape)
        self.env.invalidate(k)
        self._record(k, direction, rep.theta, rep.resid_norm, tol)
        self._emit("solved", k, direction, rep.theta)
        return rep.theta

    def _after_move(self, k, direction):
        nb = k + 1 if direction == "right" else k - 1
        self.env.invalidate(nb)
        self.env.update(k, direction)
        self._emit("moved", nb, direction)

    def move_plain(self, k, direction, theta):
        rho = self.cfg.kick_rank if self.cfg.algorithm == "dmrg1" else 0
        if rho > 0:
            _, rmax, _ = self._rank_caps()
            r = self.x.ranks[k + 1] if direction == "right" else self.x.ranks[k]
            cap = self._bond_cap(k, direction) if rmax is None else min(rmax, self._bond_cap(k, direction))
            rho = max(0, min(rho, cap - r))
        if self.cfg.kick_rank > 0:
            self.truncate_site(k, direction)
        if rho > 0:
            r0, n, r1 = self.x.cores[k].shape
            shape = (r0, n, rho) if direction == "right" else (rho, n, r1)
            tt_enrich(self.x, k, self.rng.standard_normal(shape), direction)
        else:
            shift_ortho(self.x, k, direction)
        self._after_move(k, direction)

    def move_average(self, k, direction, theta):
        eps, rmax, a = self._rank_caps()
        core = self.x.cores[k]
        if direction == "right":
            S = correction_block(self.env.get_left(k), self.A.cores[k], core, "right")
        else:
            S = correction_block(self.env.get_right(k + 1), self.A.cores[k], core, "left")
        r0, n, r1 = core.shape
        cap = min(self._bond_cap(k, direction), r0 * n if direction == "right" else n * r1)
        if eps is None:
            U, T = averaging_step(core, S, a, rank=min(rmax, cap), direction=direction)
        else:
            rmax = cap if rmax is None else min(rmax, cap)
            U, T = averaging_step(core, S, a, direction=direction, eps=eps, rmax=rmax)
        self.x.cores[k] = U
        if direction == "right":
            self.x.cores[k + 1] = np.tensordot(T, self.x.cores[k + 1], axes=([1], [0]))
            self.x.center = k + 1
        else:
            self.x.cores[k - 1] = np.tensordot(self.x.cores[k - 1], T.T, axes=([2], [0]))
            self.x.center = k - 1
        self._normalize()
        self.env.invalidate(k)
        self._after_move(k, direction)

    def enrichment_block(self, k, direction, theta):
        cfg = self.cfg
        rho = cfg.enrich_rank
        if cfg.enrich_mode == "global_z":
            z = compute_residual_tt(self.A, self.x, theta, "global_z", rho, cfg.eps_z)
            if direction == "right":
                M = interface_matrix(self.x, z, k, "left")
                return np.tensordot(M, z.cores[k], axes=([1], [0]))
            orthogonalize(z, z.d - 1)
            M = interface_matrix(self.x, z, k, "right")
            return np.tensordot(z.cores[k], M, axes=([2], [1]))
        if cfg.enrich_mode == "local_projection":
            return self._local_projection_block(k, direction, theta, rho)
        return self.zenv.enrichment(k, direction, theta)

    def _local_projection_block(self, k, direction, theta, rho):
        core = self.x.cores[k]
        r0, n, r1 = core.shape
        X = _matricize(core, direction)
        if direction == "right":
            S = correction_block(self.env.get_left(k), self.A.cores[k], core, "right")
            Y = S.reshape(r0 * n, -1)
        else:
            S = correction_block(self.env.get_right(k + 1), self.A.cores[k], core, "left")
            Y = S.reshape(-1, n * r1).T
        # the theta * X part of the residual lies in span(X) and drops out here
        Q, _ = np.linalg.qr(X)
        Y = Y - Q @ (Q.T @ Y)
        U, s, _ = np.linalg.svd(Y, full_matrices=False)
        U = U[:, : min(rho, U.shape[1])] * s[: min(rho, U.shape[1])]
        if direction == "right":
            return U.reshape(r0, n, -1)
        return U.T.reshape(-1, n, r1)

    def move_enrich(self, k, direction, theta):
        if self.cfg.enrich_rank == 0:
            shift_ortho(self.x, k, direction)
            self._after_move(k, direction)
            return
        self.truncate_site(k, direction)
        if self.zenv is not None:
            self.zenv.advance(k, direction, theta)
        S = self.enrichment_block(k, direction, theta)
        r = self.x.ranks[k + 1] if direction == "right" else self.x.ranks[k]
        room = max(0, self._bond_cap(k, direction) - r)
        S = S[:, :, :room] if direction == "right" else S[:room]
        self._emit("pre_enrich", k, direction, theta)
        tt_enrich(self.x, k, S, direction)
        self._after_move(k, direction)
        if self.zenv is not None:
            self.zenv.update(k, direction)
        self._emit("post_enrich", k + (1 if direction == "right" else -1), direction, theta)

    # two-site ------------------------------------------------------------

    def solve_bond(self, k, direction):
        x = self.x
        c0, c1 = x.cores[k], x.cores[k + 1]
        r0, n0, _ = c0.shape
        _, n1, r2 = c1.shape
        sup = np.tensordot(c0, c1, axes=([2], [0]))
        op = self.env.local_operator(k, two_site=True)
        rep, tol = self._solve(op, sup.reshape(-1))
        u, s, vt = np.linalg.svd(rep.vector.reshape(r0 * n0, n1 * r2), full_matrices=False)
        eps, rmax, _ = self._rank_caps()
        if eps is None:
            r = min(rmax, s.size)
        else:
            r = truncation_rank(s, eps * np.linalg.norm(s), rmax)
        r = max(1, r)
        u, s, vt = u[:, :r], s[:r], vt[:r]
        s = s / np.linalg.norm(s)
        if direction == "right":
            x.cores[k] = u.reshape(r0, n0, r)
            x.cores[k + 1] = (s[:, None] * vt).reshape(r, n1, r2)
            x.center = k + 1
        else:
            x.cores[k] = (u * s).reshape(r0, n0, r)
            x.cores[k + 1] = vt.reshape(r, n1, r2)
            x.center = k
        self.env.invalidate(k)
        self.env.invalidate(k + 1)
        self._record(k, direction, rep.theta, rep.resid_norm, tol)
        self._emit("solved", k, direction, rep.theta)
        if direction == "right":
            self.env.update(k, "right")
        else:
            self.env.update(k + 1, "left")

    # truncation ----------------------------------------------------------

    def truncate_site(self, k, direction):
        """SVD-truncate the bond ahead of the center before it gets enriched.

        With the center at ``k`` both frames are orthonormal, so this is the
        exact best approximation on that bond.  The budget per bond is
        ``eps / sqrt(d - 1)`` of the (unit) norm; a fixed schedule caps the
        rank only.
        """
        eps, rmax, _ = self._rank_caps()
        core = self.x.cores[k]
        r0, n, r1 = core.shape
        X = _matricize(core, direction)
        u, s, vt = np.linalg.svd(X, full_matrices=False)
        budget = 0.0 if eps is None else eps * np.linalg.norm(s) / math.sqrt(max(self.x.d - 1, 1))
        r = max(1, truncation_rank(s, budget, rmax))
        if r == s.size and (direction == "right" and r == r1 or direction == "left" and r == r0):
            return
        u, s, vt = u[:, :r], s[:r] / np.linalg.norm(s[:r]), vt[:r]
        if direction == "right":
            self.x.cores[k] = (u * s).reshape(r0, n, r)
            self.x.cores[k + 1] = np.tensordot(vt, self.x.cores[k + 1], axes=([1], [0]))
        else:
            self.x.cores[k] = (u * s).T.reshape(r, n, r1)
            self.x.cores[k - 1] = np.tensordot(self.x.cores[k - 1], vt.T, axes=([2], [0]))
        self.env.invalidate(k)
        nb = k + 1 if direction == "right" else k - 1
        self.env.invalidate(nb)
        if self.zenv is not None:
            # the neighbour core absorbed the right factor; refresh z's view of it
            self.zenv.update(nb, "left" if direction == "right" else "right")
        self._emit("truncated", k, direction)

    def run(self) -> SweepResult:
        cfg = self.cfg
        d = self.x.d
        if cfg.algorithm == "amen" and cfg.enrich_mode == "als_z" and cfg.enrich_rank > 0:
            self.zenv = _ResidualFrames(self.A, self.x, self.env, cfg.enrich_rank, self.rng)
        move = {
            "dmrg1": self.move_plain,
            "dmrg1c": self.move_average,
            "amen": self.move_enrich,
        }.get(cfg.algorithm)
        converged = False
        lam_prev = self.lam
        for sweep in range(cfg.max_sweeps):
            self.sweep = sweep
            for direction in ("right", "left"):
                lam_half = self.lam
                if d == 1:
                    self.lam = self.solve_site(0, direction)
                elif cfg.algorithm == "dmrg2":
                    bonds = range(d - 1) if direction == "right" else range(d - 2, -1, -1)
                    for k in bonds:
                        self.solve_bond(k, direction)
                        if self.timed_out:
                            break
                else:
                    sites = range(d - 1) if direction == "right" else range(d - 1, 0, -1)
                    for k in sites:
                        theta = self.solve_site(k, direction)
                        move(k, direction, theta)
                        if self.timed_out:
                            break
                if d > 1:
                    self.lam = rayleigh_from_env(self.env, self.x.center)
                self.dlam = abs(lam_half - self.lam)
                log.info(
                    "sweep %d %s: lambda=%.12f max_rank=%d t=%.1fs",
                    sweep, direction, self.lam, self.x.max_rank, self._elapsed(),
                )
                if self.timed_out or d == 1:
                    break
            tol = cfg.tol_lambda if cfg.tol_lambda is not None else 1e-8 * max(1.0, abs(self.lam))
            if abs(lam_prev - self.lam) < tol:
                converged = True
                break
            lam_prev = self.lam
            if self.timed_out:
                break
        return SweepResult(self.x, self.lam, self.records, converged, self.sweep + 1)


class _ResidualFrames:
    """Residual ``z = A x - theta x`` kept as its own rank-``rho`` TT and refined by ALS.

    Holds the mixed environments ``<z|A|x>`` and ``<z|x>`` with the z frame on
    the bra side.  At each site the z core becomes the projection of the
    current residual onto z's own frames; the enrichment for ``x`` is the
    residual projected onto x's frame on the visited side and z's frame on
    the side still ahead.
    """

    def __init__(self, A, x, env, rank, rng):
        self.A = A
        self.x = x
        self.env = env
        d = x.d
        ranks = [1] + [rank] * (d - 1) + [1]
        cores = [rng.standard_normal((ranks[k], x.mode_sizes[k], ranks[k + 1])) for k in range(d)]
        self.z = TTVector(cores)
        self.reset(x.center)

    def reset(self, center):
        d = self.x.d
        orthogonalize(self.z, center)
        self.zA_left = [None] * (d + 1)
        self.zx_left = [None] * (d + 1)
        self.zA_right = [None] * (d + 1)
        self.zx_right = [None] * (d + 1)
        self.zA_left[0], self.zx_left[0] = np.ones((1, 1, 1)), np.ones((1, 1))
        self.zA_right[d], self.zx_right[d] = np.ones((1, 1, 1)), np.ones((1, 1))
        for k in range(center):
            self.update(k, "right")
        for k in range(d - 1, center, -1):
            self.update(k, "left")

    def update(self, k, direction):
        W, xc, zc = self.A.cores[k], self.x.cores[k], self.z.cores[k]
        if direction == "right":
            self.zA_left[k + 1] = contract_left(self.zA_left[k], W, zc, xc)
            self.zx_left[k + 1] = _overlap_left(self.zx_left[k], zc, xc)
        else:
            self.zA_right[k] = contract_right(self.zA_right[k + 1], W, zc, xc)
            self.zx_right[k] = _overlap_right(self.zx_right[k + 1], zc, xc)

    def advance(self, k, direction, theta):
        """Replace the z core at ``k`` and move z's center with x's."""
        zc = _residual_block(
            self.zA_left[k], self.zx_left[k], self.A.cores[k], self.x.cores[k],
            self.zA_right[k + 1], self.zx_right[k + 1], theta,
        )
        r0, n, r1 = zc.shape
        if direction == "right":
            q, _ = np.linalg.qr(zc.reshape(r0 * n, r1))
            self.z.cores[k] = q.reshape(r0, n, -1)
            self.z.cores[k + 1] = self.z.cores[k + 1][: q.shape[1]]
            self.z.center = k + 1
        else:
            q, _ = np.linalg.qr(zc.reshape(r0, n * r1).T)
            self.z.cores[k] = q.T.reshape(-1, n, r1)
            self.z.cores[k - 1] = self.z.cores[k - 1][:, :, : q.shape[1]]
            self.z.center = k - 1

    def enrichment(self, k, direction, theta):
        W, xc = self.A.cores[k], self.x.cores[k]
        if direction == "right":
            eye = np.eye(xc.shape[0])
            return _residual_block(
                self.env.get_left(k), eye, W, xc, self.zA_right[k + 1], self.zx_right[k + 1], theta
            )
        eye = np.eye(xc.shape[2])
        return _residual_block(self.zA_left[k], self.zx_left[k], W, xc, self.env.get_right(k + 1), eye, theta)


def _residual_block(LA, Lx, W, xc, RA, Rx, theta):
    """``(A - theta) x`` at one site, projected with the given frame environments."""
    t = np.tensordot(LA, xc, axes=([2], [0]))  # (b, g, j, c)
    t = np.tensordot(t, W, axes=([1, 2], [0, 2]))  # (b, c, i, h)
    Ax = np.tensordot(t, RA, axes=([1, 3], [2, 1]))  # (b, i, d)
    xx = np.tensordot(np.tensordot(Lx, xc, axes=([1], [0])), Rx, axes=([2], [1]))
    return Ax - theta * xx


def _overlap_left(M, bra, ket):
    t = np.tensordot(M, ket, axes=([1], [0]))
    return np.tensordot(bra, t, axes=([0, 1], [0, 1]))


def _overlap_right(M, bra, ket):
    t = np.tensordot(ket, M, axes=([2], [1]))
    return np.tensordot(bra, t, axes=([1, 2], [1, 2]))


def _run(A, x0, cfg, algorithm, observer):
    if cfg.algorithm != algorithm:
        cfg = SweepConfig(**{**cfg.__dict__, "algorithm": algorithm})
    sw = _Sweeper(A, x0, cfg, observer)
    return sw.run()


def run_dmrg1(A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer=None) -> SweepResult:
    return _run(A, x0, cfg, "dmrg1", observer)


def run_dmrg2(A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer=None) -> SweepResult:
    return _run(A, x0, cfg, "dmrg2", observer)


def run_dmrg1c(A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer=None) -> SweepResult:
    return _run(A, x0, cfg, "dmrg1c", observer)


def run_amen(A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer=None) -> SweepResult:
    return _run(A, x0, cfg, "amen", observer)


def run(A: TTMatrix, x0: TTVector, cfg: SweepConfig, observer=None) -> SweepResult:
    return _run(A, x0, cfg, cfg.algorithm, observer)
