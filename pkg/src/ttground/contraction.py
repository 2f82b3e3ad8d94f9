"""Left/right environments of <x|A|x> and the reduced (local) operators they define.

``left[k]`` contracts sites ``0..k-1`` and ``right[k]`` contracts sites
``k..d-1``; both are indexed ``[bra, op, ket]``.  The reduced operator at site
``k`` is ``(left[k], W_k, right[k + 1])`` and never gets materialized unless
asked for explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tt import TTMatrix, TTShapeError, TTVector

_ONE = np.ones((1, 1, 1))


class StaleEnvironmentError(RuntimeError):
    """A cached environment was read after a core it depends on changed."""


def contract_left(L: np.ndarray, W: np.ndarray, bra: np.ndarray, ket: np.ndarray) -> np.ndarray:
    t = np.tensordot(L, ket, axes=([2], [0]))  # (b, g, j, c)
    t = np.tensordot(t, W, axes=([1, 2], [0, 2]))  # (b, c, i, h)
    return np.tensordot(bra, t, axes=([0, 1], [0, 2])).transpose(0, 2, 1)  # (b', h, c)


def contract_right(R: np.ndarray, W: np.ndarray, bra: np.ndarray, ket: np.ndarray) -> np.ndarray:
    t = np.tensordot(ket, R, axes=([2], [2]))  # (a, j, d, h)
    t = np.tensordot(t, W, axes=([1, 3], [2, 3]))  # (a, d, g, i)
    return np.tensordot(t, bra, axes=([1, 3], [2, 1])).transpose(2, 1, 0)  # (b, g, a)


class EnvironmentStack:
    """Cached environments for one state ``x`` and operator ``A``.

    Entries are invalidated whenever the sweep writes a core; reading an
    invalid entry raises instead of silently recomputing.
    """

    def __init__(self, A: TTMatrix, x: TTVector):
        if A.col_modes != x.mode_sizes or A.row_modes != x.mode_sizes:
            raise TTShapeError("operator and state shapes differ")
        self.A = A
        self.x = x
        d = x.d
        self.left: list[np.ndarray | None] = [None] * (d + 1)
        self.right: list[np.ndarray | None] = [None] * (d + 1)
        self.left[0] = _ONE
        self.right[d] = _ONE

    @property
    def d(self) -> int:
        return self.x.d

    def get_left(self, k: int) -> np.ndarray:
        env = self.left[k]
        if env is None:
            raise StaleEnvironmentError(f"left environment {k} is stale")
        return env

    def get_right(self, k: int) -> np.ndarray:
        env = self.right[k]
        if env is None:
            raise StaleEnvironmentError(f"right environment {k} is stale")
        return env

    def invalidate(self, k: int) -> None:
        """Mark everything that depends on core ``k`` as stale."""
        for j in range(k + 1, self.d + 1):
            self.left[j] = None
        for j in range(0, k + 1):
            self.right[j] = None

    def update(self, k: int, direction: str) -> None:
        """Recompute ``left[k + 1]`` (``right``) or ``right[k]`` (``left``) from site ``k``."""
        W, c = self.A.cores[k], self.x.cores[k]
        if direction == "right":
            self.left[k + 1] = contract_left(self.get_left(k), W, c, c)
        elif direction == "left":
            self.right[k] = contract_right(self.get_right(k + 1), W, c, c)
        else:
            raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")

    def build_right(self, stop: int = 1) -> None:
        for k in range(self.d - 1, stop - 1, -1):
            self.update(k, "left")

    def build_left(self, stop: int | None = None) -> None:
        stop = self.d - 1 if stop is None else stop
        for k in range(0, stop):
            self.update(k, "right")

    def local_operator(self, k: int, two_site: bool = False) -> "LocalOperator":
        if two_site:
            return LocalOperator(
                self.get_left(k), (self.A.cores[k], self.A.cores[k + 1]), self.get_right(k + 2)
            )
        return LocalOperator(self.get_left(k), (self.A.cores[k],), self.get_right(k + 1))

    def reset(self, center: int) -> None:
        """Drop all caches and rebuild the environments needed around ``center``."""
        d = self.d
        self.left = [None] * (d + 1)
        self.right = [None] * (d + 1)
        self.left[0] = _ONE
        self.right[d] = _ONE
        self.build_left(center)
        self.build_right(center + 1)


def env_init(A: TTMatrix, x: TTVector) -> EnvironmentStack:
    """Environments for a right-orthogonalized ``x`` (center at site 0)."""
    if x.center != 0:
        raise ValueError("env_init expects x with its orthogonality center at site 0")
    env = EnvironmentStack(A, x)
    env.build_right(1)
    return env


def env_update(env: EnvironmentStack, k: int, direction: str) -> None:
    env.update(k, direction)


@dataclass
class LocalOperator:
    """Reduced operator on one or two sites, applied as L -> W(s) -> R."""

    L: np.ndarray
    W: tuple
    R: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        mid = tuple(w.shape[2] for w in self.W)
        return (self.L.shape[2],) + mid + (self.R.shape[2],)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.size != self.size:
            raise TTShapeError(f"local vector has length {v.size}, expected {self.size}")
        return self.apply_block(v.reshape(-1, 1)).reshape(-1)

    def apply_block(self, V: np.ndarray) -> np.ndarray:
        """Apply to every column of ``V`` (shape ``(size, m)``) at once."""
        m = V.shape[1]
        t = np.tensordot(self.L, V.reshape(self.shape + (m,)), axes=([2], [0]))  # (b, g, j.., c, m)
        for w in self.W:
            # open op index at axis 1, next ket mode at axis 2
            t = np.tensordot(t, w, axes=([1, 2], [0, 2]))  # (b, ..rest.., i, h)
            t = np.moveaxis(t, t.ndim - 1, 1)
        # t: (b, h, c, m, i1, i2..)
        out = np.tensordot(t, self.R, axes=([1, 2], [1, 2]))  # (b, m, i1.., d)
        out = np.moveaxis(out, 1, -1)
        return out.reshape(-1, m)

    __call__ = apply


def local_apply(op: LocalOperator, v: np.ndarray) -> np.ndarray:
    return op.apply(v)


def local_dense(op: LocalOperator, max_dim: int = 1500) -> np.ndarray:
    """The reduced operator as a dense matrix; column ``j`` equals ``local_apply(op, e_j)``."""
    m = op.size
    if m > max_dim:
        raise ValueError(f"local dimension {m} exceeds dense guard {max_dim}")
    t = op.L  # (b, g, a) grows to (b, i.., g, a, j..)
    for w in op.W:
        t = np.tensordot(t, w, axes=([t.ndim - 2 - (t.ndim - 3) // 2], [0]))
        # new axes (i, j, h) are at the end; move i before the op axis, h into its place
        nb = (t.ndim - 3) // 2  # row modes already placed, including this one
        t = np.moveaxis(t, [t.ndim - 3, t.ndim - 1], [nb, nb + 1])
    # t: (b, i.., h, a, j..)
    nsite = len(op.W)
    t = np.tensordot(t, op.R, axes=([nsite + 1], [1]))  # (b, i.., a, j.., d, c)
    t = np.moveaxis(t, -2, nsite + 1)  # (b, i.., d, a, j.., c)
    return t.reshape(m, m)


def correction_block(env_side: np.ndarray, W: np.ndarray, xcore: np.ndarray, direction: str = "right") -> np.ndarray:
    """System part of ``(A_gamma ⊗ I) x`` in the orthonormal frame of ``x``.

    For ``right`` the input is ``left[k]`` and the result has shape
    ``(r_left, n, R_k * r_k)`` with the trailing index ordered ``(gamma, alpha)``.
    For ``left`` the input is ``right[k + 1]`` and the result has shape
    ``(R_{k-1} * r_{k-1}, n, r_right)``.
    """
    if direction == "right":
        t = np.tensordot(env_side, xcore, axes=([2], [0]))  # (b, g, j, c)
        t = np.tensordot(t, W, axes=([1, 2], [0, 2]))  # (b, c, i, h)
        b, c, i, h = t.shape
        return t.transpose(0, 2, 3, 1).reshape(b, i, h * c)
    if direction == "left":
        t = np.tensordot(xcore, env_side, axes=([2], [2]))  # (a, j, d, h)
        t = np.tensordot(t, W, axes=([1, 3], [2, 3]))  # (a, d, g, i)
        a, dd, g, i = t.shape
        return t.transpose(2, 0, 3, 1).reshape(g * a, i, dd)
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def close_correction(S_full: np.ndarray, env_side: np.ndarray, direction: str = "right") -> np.ndarray:
    """Contract the open operator bond of a correction block with the other environment."""
    if direction == "right":
        b, i, hc = S_full.shape
        h, dd, c = env_side.shape[1], env_side.shape[0], env_side.shape[2]
        S = S_full.reshape(b, i, h, c)
        return np.tensordot(S, env_side, axes=([2, 3], [1, 2]))  # (b, i, d)
    gb, i, dd = S_full.shape
    h = env_side.shape[1]
    S = S_full.reshape(h, -1, i, dd)
    return np.tensordot(env_side, S, axes=([1, 2], [0, 1]))  # (b, i, d)


def interface_matrix(x: TTVector, z: TTVector, k: int, side: str = "left") -> np.ndarray:
    """Overlap of the frames of ``x`` and ``z`` on one side of site ``k``.

    ``side='left'`` contracts sites ``0..k-1`` and returns ``(r^x_k, r^z_k)``;
    ``side='right'`` contracts sites ``k+1..d-1`` and returns
    ``(r^x_{k+1}, r^z_{k+1})``.
    """
    if x.mode_sizes != z.mode_sizes:
        raise TTShapeError("mode sizes differ")
    M = np.ones((1, 1))
    if side == "left":
        for j in range(k):
            t = np.tensordot(M, z.cores[j], axes=([1], [0]))
            M = np.tensordot(x.cores[j], t, axes=([0, 1], [0, 1]))
        return M
    if side == "right":
        for j in range(x.d - 1, k, -1):
            t = np.tensordot(z.cores[j], M, axes=([2], [1]))
            M = np.tensordot(x.cores[j], t, axes=([1, 2], [1, 2]))
        return M
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")
