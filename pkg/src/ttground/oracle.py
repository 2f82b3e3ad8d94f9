"""Brute-force ground states of small MPOs and the fixture files that pin them."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from .tt import DENSE_MATRIX_LIMIT, TTMatrix, mpo_to_dense

LANCZOS_LIMIT = 3**12


class OracleError(RuntimeError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


def mpo_matvec_dense(A: TTMatrix, v: np.ndarray, max_size: int = LANCZOS_LIMIT) -> np.ndarray:
    """``A v`` for a dense ``v`` by sweeping the MPO cores over the vector."""
    N = math.prod(A.col_modes)
    if N > max_size:
        raise ValueError(f"dense size {N} exceeds guard {max_size}")
    v = np.asarray(v, dtype=np.float64)
    if v.size != N:
        raise ValueError(f"vector length {v.size} does not match operator size {N}")
    # t[done rows, op bond, remaining cols]
    t = v.reshape(1, 1, N)
    for W in A.cores:
        I, R, J = t.shape
        _, i, j, R2 = W.shape
        t = t.reshape(I, R, j, J // j)
        t = np.tensordot(t, W, axes=([1, 2], [0, 2]))  # (I, rest, i, R2)
        t = t.transpose(0, 2, 3, 1).reshape(I * i, R2, J // j)
    return t.reshape(-1)


def exact_ground_state(A: TTMatrix, method: str = "dense", tol: float = 1e-12):
    """Minimal eigenvalue and eigenvector of ``A`` by brute force.

    ``dense`` diagonalizes the full matrix; ``lanczos`` runs ARPACK on the
    matrix-free MPO action.
    """
    N = math.prod(A.row_modes)
    if method == "dense":
        if N > DENSE_MATRIX_LIMIT:
            raise ValueError(f"dense oracle limited to {DENSE_MATRIX_LIMIT} states, got {N}")
        H = mpo_to_dense(A)
        H = 0.5 * (H + H.T)
        w, V = scipy.linalg.eigh(H, subset_by_index=[0, 0])
        return float(w[0]), V[:, 0]
    if method == "lanczos":
        if N > LANCZOS_LIMIT:
            raise ValueError(f"lanczos oracle limited to {LANCZOS_LIMIT} states, got {N}")
        op = spla.LinearOperator((N, N), matvec=lambda v: mpo_matvec_dense(A, v), dtype=np.float64)
        v0 = np.random.default_rng(0).standard_normal(N)
        try:
            w, V = spla.eigsh(op, k=1, which="SA", v0=v0, tol=tol, ncv=min(N, 40), maxiter=10 * N)
        except spla.ArpackNoConvergence as exc:
            best = (exc.eigenvalues[0], exc.eigenvectors[:, 0]) if len(exc.eigenvalues) else None
            raise OracleError("Lanczos oracle did not converge", best) from exc
        lam, v = float(w[0]), V[:, 0]
        res = np.linalg.norm(mpo_matvec_dense(A, v) - lam * v)
        if res > 1e-8 * max(1.0, abs(lam)):
            raise OracleError(f"Lanczos residual {res:.2e} too large", (lam, v))
        return lam, v
    raise ValueError(f"unknown oracle method {method!r}")


def write_fixture(path, lam: float, comments=()) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(f"lambda = {lam:.16e}")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")


def read_fixture(path) -> float:
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line.startswith("lambda"):
            return float(line.split("=", 1)[1])
    raise ValueError(f"no 'lambda = ...' line in {path}")
