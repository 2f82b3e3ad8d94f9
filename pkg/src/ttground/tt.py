"""Tensor-train vectors and matrices (MPS / MPO).

Core layout is fixed: a vector core has shape ``(r_left, n, r_right)`` and an
operator core has shape ``(R_left, n_row, n_col, R_right)``.  Dense vectors use
row-major ordering of the multi-index with the first site varying slowest.

Sites are indexed from 0.  ``TTVector.center`` records the orthogonality
center ``c``: cores ``0..c-1`` are left-orthonormal and cores ``c+1..d-1`` are
right-orthonormal.  ``None`` means nothing is known.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

DENSE_VECTOR_LIMIT = 10**7
DENSE_MATRIX_LIMIT = 3**8


class TTShapeError(ValueError):
    """Raised when tensor-train operands have incompatible shapes."""


class OrthoCenterError(ValueError):
    """Raised when an operation requires a different orthogonality center."""


@dataclass
class TTVector:
    cores: list[np.ndarray]
    center: int | None = None

    def __post_init__(self):
        if not self.cores:
            raise TTShapeError("a tensor train needs at least one core")
        self.cores = [np.asarray(c, dtype=np.float64) for c in self.cores]
        for k, c in enumerate(self.cores):
            if c.ndim != 3:
                raise TTShapeError(f"core {k} must be 3-way, got shape {c.shape}")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[2] != 1:
            raise TTShapeError("boundary ranks must be 1")
        for k in range(self.d - 1):
            if self.cores[k].shape[2] != self.cores[k + 1].shape[0]:
                raise TTShapeError(f"rank mismatch between cores {k} and {k + 1}")

    @property
    def d(self) -> int:
        return len(self.cores)

    @property
    def mode_sizes(self) -> list[int]:
        return [c.shape[1] for c in self.cores]

    @property
    def ranks(self) -> list[int]:
        return [1] + [c.shape[2] for c in self.cores]

    @property
    def max_rank(self) -> int:
        return max(self.ranks)

    def copy(self) -> "TTVector":
        return TTVector([c.copy() for c in self.cores], self.center)

    def norm(self) -> float:
        if self.center is not None:
            return float(np.linalg.norm(self.cores[self.center]))
        return math.sqrt(max(tt_dot(self, self), 0.0))

    def __len__(self):
        return self.d


@dataclass
class TTMatrix:
    cores: list[np.ndarray]
    symmetric: bool = field(default=False)

    def __post_init__(self):
        if not self.cores:
            raise TTShapeError("a TT matrix needs at least one core")
        self.cores = [np.asarray(c, dtype=np.float64) for c in self.cores]
        for k, c in enumerate(self.cores):
            if c.ndim != 4:
                raise TTShapeError(f"operator core {k} must be 4-way, got shape {c.shape}")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[3] != 1:
            raise TTShapeError("boundary operator ranks must be 1")
        for k in range(self.d - 1):
            if self.cores[k].shape[3] != self.cores[k + 1].shape[0]:
                raise TTShapeError(f"operator rank mismatch between cores {k} and {k + 1}")

    @property
    def d(self) -> int:
        return len(self.cores)

    @property
    def row_modes(self) -> list[int]:
        return [c.shape[1] for c in self.cores]

    @property
    def col_modes(self) -> list[int]:
        return [c.shape[2] for c in self.cores]

    @property
    def ranks(self) -> list[int]:
        return [1] + [c.shape[3] for c in self.cores]

    def __len__(self):
        return self.d


def _normalize_ranks(d: int, ranks) -> list[int]:
    if np.isscalar(ranks):
        out = [1] + [int(ranks)] * (d - 1) + [1]
    else:
        ranks = [int(r) for r in ranks]
        if len(ranks) == d + 1:
            out = ranks
        elif len(ranks) == d - 1:
            out = [1] + ranks + [1]
        else:
            raise TTShapeError(f"expected {d - 1} or {d + 1} ranks, got {len(ranks)}")
    if out[0] != 1 or out[-1] != 1:
        raise TTShapeError("boundary ranks must be 1")
    if any(r < 1 for r in out):
        raise ValueError("ranks must be positive")
    return out


def feasible_ranks(mode_sizes: Sequence[int], ranks: Sequence[int]) -> list[int]:
    """Clamp ``r_0..r_d`` to what the mode sizes can support."""
    d = len(mode_sizes)
    ranks = list(ranks)
    left = 1
    for k in range(1, d):
        left = min(left * mode_sizes[k - 1], ranks[k])
        ranks[k] = left
    right = 1
    for k in range(d - 1, 0, -1):
        right = min(right * mode_sizes[k], ranks[k])
        ranks[k] = right
    return ranks


def tt_random(mode_sizes: Sequence[int], ranks, seed: int = 0, *, clamp: bool = False) -> TTVector:
    """Random unit-norm TT with standard normal entries, right-orthogonalized.

    Entries come from a Philox counter-based stream, so a given seed gives the
    same cores on every platform.  ``ranks`` is a scalar, the ``d - 1`` interior
    ranks, or the full ``r_0..r_d`` list.
    """
    mode_sizes = [int(n) for n in mode_sizes]
    if not mode_sizes or any(n < 1 for n in mode_sizes):
        raise ValueError("mode sizes must be positive")
    d = len(mode_sizes)
    r = _normalize_ranks(d, ranks)
    if clamp:
        r = feasible_ranks(mode_sizes, r)
    rng = np.random.Generator(np.random.Philox(seed))
    cores = [rng.standard_normal((r[k], mode_sizes[k], r[k + 1])) for k in range(d)]
    x = TTVector(cores)
    orthogonalize(x, 0)
    nrm = np.linalg.norm(x.cores[0])
    if nrm > 0:
        x.cores[0] /= nrm
    return x


def tt_from_dense(v: np.ndarray, mode_sizes: Sequence[int], eps: float = 0.0, rmax: int | None = None) -> TTVector:
    """TT-SVD of a dense vector; the result is left-orthogonal with center ``d - 1``."""
    mode_sizes = [int(n) for n in mode_sizes]
    d = len(mode_sizes)
    v = np.asarray(v, dtype=np.float64)
    if v.size != math.prod(mode_sizes):
        raise TTShapeError("vector length does not match mode sizes")
    nrm = np.linalg.norm(v)
    budget = eps * nrm / math.sqrt(max(d - 1, 1))
    cores = []
    rest = v.reshape(1, -1)
    r_prev = 1
    for k in range(d - 1):
        mat = rest.reshape(r_prev * mode_sizes[k], -1)
        u, s, vt = np.linalg.svd(mat, full_matrices=False)
        r = truncation_rank(s, budget, rmax)
        u, s, vt = _pad_degenerate(u[:, :r], s[:r], vt[:r])
        cores.append(u.reshape(r_prev, mode_sizes[k], -1))
        rest = s[:, None] * vt
        r_prev = u.shape[1]
    cores.append(rest.reshape(r_prev, mode_sizes[-1], 1))
    return TTVector(cores, center=d - 1)


def truncation_rank(s: np.ndarray, tol: float, rmax: int | None = None) -> int:
    """Smallest rank whose discarded singular-value tail has Euclidean norm <= tol."""
    s = np.asarray(s)
    if s.size == 0:
        return 0
    # tail[r] = ||s[r:]||
    tail = np.sqrt(np.cumsum((s[::-1] ** 2))[::-1])
    tail = np.append(tail, 0.0)
    ok = np.nonzero(tail <= tol)[0]
    r = int(ok[0])
    if rmax is not None:
        r = min(r, int(rmax))
    return r


def _pad_degenerate(u, s, vt):
    # a rank-0 split keeps shapes valid as a rank-1 split with a zero factor
    if s.size == 0:
        u = np.zeros((u.shape[0], 1))
        u[0, 0] = 1.0
        return u, np.zeros(1), np.zeros((1, vt.shape[1]))
    return u, s, vt


def tt_to_dense(x: TTVector, max_size: int = DENSE_VECTOR_LIMIT) -> np.ndarray:
    size = math.prod(x.mode_sizes)
    if size > max_size:
        raise ValueError(f"dense size {size} exceeds guard {max_size}")
    out = np.ones((1, 1))
    for c in x.cores:
        out = (out @ c.reshape(c.shape[0], -1)).reshape(-1, c.shape[2])
    return out.reshape(-1)


def _check_same_modes(x: TTVector, y: TTVector):
    if x.mode_sizes != y.mode_sizes:
        raise TTShapeError(f"mode sizes differ: {x.mode_sizes} vs {y.mode_sizes}")


def tt_dot(x: TTVector, y: TTVector) -> float:
    """Euclidean inner product by left-to-right bond contraction."""
    _check_same_modes(x, y)
    env = np.ones((1, 1))
    for a, b in zip(x.cores, y.cores):
        t = np.tensordot(env, b, axes=([1], [0]))  # (ra, n, rb')
        env = np.tensordot(a, t, axes=([0, 1], [0, 1]))  # (ra', rb')
    return float(env[0, 0])


def tt_norm(x: TTVector) -> float:
    return x.norm()


def tt_scale(x: TTVector, alpha: float) -> TTVector:
    y = x.copy()
    k = y.center if y.center is not None else 0
    y.cores[k] = y.cores[k] * alpha
    return y


def tt_add(x: TTVector, y: TTVector) -> TTVector:
    """Exact sum with block-diagonal cores; interior ranks add."""
    _check_same_modes(x, y)
    d = x.d
    if d == 1:
        return TTVector([x.cores[0] + y.cores[0]])
    cores = []
    for k, (a, b) in enumerate(zip(x.cores, y.cores)):
        if k == 0:
            c = np.concatenate([a, b], axis=2)
        elif k == d - 1:
            c = np.concatenate([a, b], axis=0)
        else:
            c = np.zeros((a.shape[0] + b.shape[0], a.shape[1], a.shape[2] + b.shape[2]))
            c[: a.shape[0], :, : a.shape[2]] = a
            c[a.shape[0]:, :, a.shape[2]:] = b
        cores.append(c)
    return TTVector(cores)


def shift_ortho(x: TTVector, k: int, direction: str) -> TTVector:
    """Move the orthogonality center from site ``k`` one step, in place."""
    if x.center != k:
        raise OrthoCenterError(f"orthogonality center is {x.center}, not {k}")
    c = x.cores[k]
    r0, n, r1 = c.shape
    if direction == "right":
        if k >= x.d - 1:
            raise ValueError("cannot shift right from the last site")
        q, r = np.linalg.qr(c.reshape(r0 * n, r1))
        x.cores[k] = q.reshape(r0, n, -1)
        x.cores[k + 1] = np.tensordot(r, x.cores[k + 1], axes=([1], [0]))
        x.center = k + 1
    elif direction == "left":
        if k <= 0:
            raise ValueError("cannot shift left from the first site")
        q, r = np.linalg.qr(c.reshape(r0, n * r1).T)
        x.cores[k] = q.T.reshape(-1, n, r1)
        x.cores[k - 1] = np.tensordot(x.cores[k - 1], r.T, axes=([2], [0]))
        x.center = k - 1
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    return x


def orthogonalize(x: TTVector, center: int) -> TTVector:
    """Bring ``x`` into mixed canonical form around ``center``, in place."""
    d = x.d
    if not 0 <= center < d:
        raise IndexError(f"center {center} out of range for d={d}")
    if x.center is None:
        x.center = 0
        for k in range(d - 1):
            shift_ortho(x, k, "right")
        for k in range(d - 1, center, -1):
            shift_ortho(x, k, "left")
        return x
    while x.center < center:
        shift_ortho(x, x.center, "right")
    while x.center > center:
        shift_ortho(x, x.center, "left")
    return x


def tt_round(x: TTVector, eps: float = 0.0, rmax: int | None = None, *, full_output: bool = False):
    """Truncate ranks so that ``||x - y|| <= eps * ||x||`` with ranks <= ``rmax``.

    Each of the ``d - 1`` bonds gets the budget ``eps * ||x|| / sqrt(d - 1)``.
    The result has its orthogonality center at site 0.  With ``full_output``
    the achieved relative error bound is returned as a second value; it exceeds
    ``eps`` only when ``rmax`` binds.
    """
    y = x.copy()
    d = y.d
    orthogonalize(y, d - 1)
    nrm = np.linalg.norm(y.cores[-1])
    if d == 1:
        return (y, 0.0) if full_output else y
    budget = eps * nrm / math.sqrt(d - 1)
    discarded = 0.0
    for k in range(d - 1, 0, -1):
        c = y.cores[k]
        r0, n, r1 = c.shape
        u, s, vt = np.linalg.svd(c.reshape(r0, n * r1), full_matrices=False)
        r = truncation_rank(s, budget, rmax)
        discarded += float(np.sum(s[r:] ** 2))
        u, s, vt = _pad_degenerate(u[:, :r], s[:r], vt[:r])
        y.cores[k] = vt.reshape(-1, n, r1)
        y.cores[k - 1] = np.tensordot(y.cores[k - 1], u * s, axes=([2], [0]))
    y.center = 0
    if full_output:
        err = math.sqrt(discarded) / nrm if nrm > 0 else 0.0
        return y, err
    return y


def mpo_apply(A: TTMatrix, x: TTVector) -> TTVector:
    """Exact ``A x`` with ranks ``R_k * r_k`` and no truncation."""
    if A.col_modes != x.mode_sizes:
        raise TTShapeError(f"operator columns {A.col_modes} do not match vector modes {x.mode_sizes}")
    cores = []
    for w, c in zip(A.cores, x.cores):
        t = np.einsum("gijh,ajb->gaihb", w, c)
        g, a, i, h, b = t.shape
        cores.append(t.reshape(g * a, i, h * b))
    return TTVector(cores)


def enrich(x: TTVector, k: int, S: np.ndarray, direction: str = "right") -> TTVector:
    """Append the columns of ``S`` to core ``k`` and zero-pad the neighbor, in place.

    The represented vector does not change.  The enlarged core is then
    re-orthogonalized and the center moves to ``k + 1`` (``right``) or
    ``k - 1`` (``left``).  For ``right``, ``S`` has shape ``(r_left, n, rho)``;
    for ``left`` it has shape ``(rho, n, r_right)``.
    """
    if x.center != k:
        raise OrthoCenterError(f"orthogonality center is {x.center}, not {k}")
    S = np.asarray(S, dtype=np.float64)
    c = x.cores[k]
    r0, n, r1 = c.shape
    if direction == "right":
        if k >= x.d - 1:
            raise ValueError("cannot enrich to the right of the last site")
        if S.ndim != 3 or S.shape[:2] != (r0, n):
            raise TTShapeError(f"enrichment block shape {S.shape} does not match core {c.shape}")
        rho = S.shape[2]
        nxt = x.cores[k + 1]
        x.cores[k] = np.concatenate([c, S], axis=2)
        x.cores[k + 1] = np.concatenate([nxt, np.zeros((rho,) + nxt.shape[1:])], axis=0)
    elif direction == "left":
        if k <= 0:
            raise ValueError("cannot enrich to the left of the first site")
        if S.ndim != 3 or S.shape[1:] != (n, r1):
            raise TTShapeError(f"enrichment block shape {S.shape} does not match core {c.shape}")
        rho = S.shape[0]
        prv = x.cores[k - 1]
        x.cores[k] = np.concatenate([c, S], axis=0)
        x.cores[k - 1] = np.concatenate([prv, np.zeros(prv.shape[:2] + (rho,))], axis=2)
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    return shift_ortho(x, k, direction)


def mpo_identity(mode_sizes: Sequence[int]) -> TTMatrix:
    return TTMatrix([np.eye(n).reshape(1, n, n, 1) for n in mode_sizes], symmetric=True)


def mpo_to_dense(A: TTMatrix, max_size: int = DENSE_MATRIX_LIMIT) -> np.ndarray:
    rows = math.prod(A.row_modes)
    cols = math.prod(A.col_modes)
    if max(rows, cols) > max_size:
        raise ValueError(f"dense size {max(rows, cols)} exceeds guard {max_size}")
    out = np.ones((1, 1, 1))  # (rows, cols, R)
    for w in A.cores:
        t = np.tensordot(out, w, axes=([2], [0]))  # (I, J, i, j, R')
        I, J, i, j, R = t.shape
        out = t.transpose(0, 2, 1, 3, 4).reshape(I * i, J * j, R)
    return out[:, :, 0]


_VEC_MAGIC = b"TTV1"
_MAT_MAGIC = b"TTM1"


def save_tt(path, obj: TTVector | TTMatrix) -> None:
    """Write a TT vector or matrix in the portable little-endian container."""
    if isinstance(obj, TTVector):
        header = [obj.d] + obj.mode_sizes + obj.ranks
        magic = _VEC_MAGIC
    elif isinstance(obj, TTMatrix):
        header = [obj.d] + obj.row_modes + obj.col_modes + obj.ranks
        magic = _MAT_MAGIC
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(np.asarray(header, dtype="<i8").tobytes())
        for c in obj.cores:
            fh.write(np.ascontiguousarray(c, dtype="<f8").tobytes())


def load_tt(path) -> TTVector | TTMatrix:
    data = Path(path).read_bytes()
    magic, pos = data[:4], 4

    def ints(count):
        nonlocal pos
        vals = struct.unpack_from(f"<{count}q", data, pos)
        pos += 8 * count
        return list(vals)

    (d,) = ints(1)
    if magic == _VEC_MAGIC:
        modes = ints(d)
        ranks = ints(d + 1)
        shapes = [(ranks[k], modes[k], ranks[k + 1]) for k in range(d)]
    elif magic == _MAT_MAGIC:
        rows = ints(d)
        cols = ints(d)
        ranks = ints(d + 1)
        shapes = [(ranks[k], rows[k], cols[k], ranks[k + 1]) for k in range(d)]
    else:
        raise ValueError(f"unknown TT container magic {magic!r}")
    cores = []
    for shape in shapes:
        size = math.prod(shape)
        cores.append(np.frombuffer(data, dtype="<f8", count=size, offset=pos).reshape(shape).copy())
        pos += 8 * size
    if pos != len(data):
        raise ValueError("trailing bytes in TT container")
    if magic == _VEC_MAGIC:
        return TTVector(cores)
    return TTMatrix(cores)
