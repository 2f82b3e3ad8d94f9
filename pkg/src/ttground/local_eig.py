"""Smallest eigenpair of a reduced operator, plus the global Rayleigh quotient."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .contraction import EnvironmentStack, LocalOperator, contract_left, local_dense
from .tt import TTMatrix, TTVector

log = logging.getLogger(__name__)

DENSE_THRESHOLD = 1500


class NonFiniteError(FloatingPointError):
    pass


@dataclass
class LocalSolveReport:
    theta: float
    vector: np.ndarray
    iterations: int
    resid_norm: float
    path: str
    breakdown: bool = False


def _rq(op, v):
    w = op(v)
    return float(v @ w), w


def smallest_eigpair(
    op: LocalOperator,
    v0: np.ndarray,
    tol: float = 1e-8,
    maxit: int = 3,
    krylov_size: int = 30,
    dense_threshold: int = DENSE_THRESHOLD,
) -> LocalSolveReport:
    """Minimal eigenpair of ``op`` started from ``v0``.

    Converged means ``||A v - theta v|| <= tol * max(1, |theta|)``.  The
    returned ``theta`` never exceeds the Rayleigh quotient of ``v0``.
    ``maxit`` counts Lanczos restarts.
    """
    v0 = np.asarray(v0, dtype=np.float64).reshape(-1)
    nrm = np.linalg.norm(v0)
    if not np.isfinite(nrm):
        raise NonFiniteError("warm start contains non-finite values")
    if nrm == 0:
        raise ValueError("warm start must be nonzero")
    v = v0 / nrm
    theta0, w0 = _rq(op, v)
    if not np.isfinite(theta0):
        raise NonFiniteError("operator produced non-finite values")
    res0 = float(np.linalg.norm(w0 - theta0 * v))
    if res0 <= tol * max(1.0, abs(theta0)):
        return LocalSolveReport(theta0, v, 0, res0, "dense" if op.size <= dense_threshold else "iterative")
    if op.size <= dense_threshold:
        return _dense(op, v, theta0, res0)
    return _lanczos(op, v, w0, theta0, res0, tol, maxit, krylov_size)


def _dense(op, v, theta0, res0):
    M = local_dense(op, max_dim=op.size)
    M = 0.5 * (M + M.T)
    if not np.all(np.isfinite(M)):
        raise NonFiniteError("reduced operator has non-finite entries")
    w, V = scipy.linalg.eigh(M, subset_by_index=[0, 0])
    theta, u = float(w[0]), V[:, 0]
    if u @ v < 0:
        u = -u
    if theta > theta0:
        return LocalSolveReport(theta0, v, 1, res0, "dense")
    res = float(np.linalg.norm(M @ u - theta * u))
    return LocalSolveReport(theta, u, 1, res, "dense")


def _lanczos(op, v, w, theta, res, tol, maxit, m):
    n = v.size
    m = min(m, n)
    best = (theta, v, res)
    iters = 0
    breakdown = False
    for _ in range(max(1, maxit)):
        V = np.empty((m, n))
        alpha = np.empty(m)
        beta = np.empty(m)
        V[0] = v
        k = m
        for j in range(m):
            if j > 0:
                w = op(V[j])
            iters += 1
            alpha[j] = V[j] @ w
            w = w - alpha[j] * V[j]
            if j > 0:
                w -= beta[j - 1] * V[j - 1]
            # two passes of full reorthogonalization
            for _ in range(2):
                w -= V[: j + 1].T @ (V[: j + 1] @ w)
            beta[j] = np.linalg.norm(w)
            if not np.isfinite(beta[j]):
                raise NonFiniteError("Lanczos produced non-finite values")
            if beta[j] <= 1e-14 * max(1.0, abs(alpha[j])):
                k = j + 1
                breakdown = True
                break
            if j + 1 < m:
                V[j + 1] = w / beta[j]
        ev, S = scipy.linalg.eigh_tridiagonal(alpha[:k], beta[: k - 1], select="i", select_range=(0, 0))
        theta_k = float(ev[0])
        s = S[:, 0]
        u = V[:k].T @ s
        u /= np.linalg.norm(u)
        res_k = abs(beta[k - 1] * s[-1]) if not breakdown else 0.0
        if theta_k <= best[0]:
            best = (theta_k, u, res_k)
        if breakdown or best[2] <= tol * max(1.0, abs(best[0])):
            break
        v = best[1]
        w = op(v)
    if breakdown:
        log.warning("Lanczos breakdown after %d steps; returning best Ritz pair", iters)
    theta, u, res = best
    return LocalSolveReport(theta, u, iters, res, "iterative", breakdown)


def rayleigh(A: TTMatrix, x: TTVector) -> float:
    """``(x, Ax) / (x, x)`` by a single environment pass."""
    if A.col_modes != x.mode_sizes:
        raise ValueError("operator and state shapes differ")
    L = np.ones((1, 1, 1))
    N = np.ones((1, 1))
    for W, c in zip(A.cores, x.cores):
        L = contract_left(L, W, c, c)
        t = np.tensordot(N, c, axes=([1], [0]))
        N = np.tensordot(c, t, axes=([0, 1], [0, 1]))
    nn = float(N[0, 0])
    if nn == 0:
        raise ZeroDivisionError("rayleigh quotient of a zero vector")
    return float(L[0, 0, 0]) / nn


def rayleigh_from_env(env: EnvironmentStack, k: int) -> float:
    """Rayleigh quotient read off the environments around center ``k``."""
    op = env.local_operator(k)
    c = env.x.cores[k].reshape(-1)
    return float(c @ op(c)) / float(c @ c)
