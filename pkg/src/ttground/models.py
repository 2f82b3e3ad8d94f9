"""Benchmark operators as MPOs: the spin-1 Heisenberg chain and diagonal test operators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .tt import TTMatrix


@dataclass(frozen=True)
class SpinOperators:
    """Real spin-1 matrices in the ladder form (``Sy`` is never needed)."""

    Sz: np.ndarray
    Sp: np.ndarray
    Sm: np.ndarray
    Sx: np.ndarray
    Id: np.ndarray

    def dot_terms(self):
        """``(a, b, c)`` triples with ``S_i . S_j = sum c * a_i b_j``."""
        return [(self.Sz, self.Sz, 1.0), (self.Sp, self.Sm, 0.5), (self.Sm, self.Sp, 0.5)]


def spin_one() -> SpinOperators:
    Sz = np.diag([1.0, 0.0, -1.0])
    Sp = np.sqrt(2.0) * (np.outer([1, 0, 0], [0, 1, 0]) + np.outer([0, 1, 0], [0, 0, 1])).astype(float)
    Sm = Sp.T.copy()
    return SpinOperators(Sz=Sz, Sp=Sp, Sm=Sm, Sx=(Sp + Sm) / 2, Id=np.eye(3))


def heisenberg_mpo(d: int, periodic: bool = True) -> TTMatrix:
    """Unit-coupling spin-1 Heisenberg chain ``sum_i S_i . S_{i+1}``.

    Channel layout of the bulk core (rows = incoming bond, cols = outgoing):
    0 = nothing placed yet, 1..3 = open nearest-neighbour term (Sz, Sm, Sp
    expected next), 4 = finished.  The periodic chain adds channels 5..7 that
    carry the first-site operator of the wrap term ``S_d . S_1`` through the
    bulk, giving rank 8 instead of 5.
    """
    if d < 2:
        raise ValueError("the Heisenberg chain needs d >= 2")
    s = spin_one()
    I, Sz, Sp, Sm = s.Id, s.Sz, s.Sp, s.Sm
    R = 8 if periodic else 5
    W = np.zeros((R, 3, 3, R))
    W[0, :, :, 0] = I
    W[0, :, :, 1] = Sz
    W[0, :, :, 2] = 0.5 * Sp
    W[0, :, :, 3] = 0.5 * Sm
    W[1, :, :, 4] = Sz
    W[2, :, :, 4] = Sm
    W[3, :, :, 4] = Sp
    W[4, :, :, 4] = I
    if periodic:
        for c in (5, 6, 7):
            W[c, :, :, c] = I
    first = W[0:1].copy()
    if periodic:
        first[0, :, :, 5] = Sz
        first[0, :, :, 6] = 0.5 * Sp
        first[0, :, :, 7] = 0.5 * Sm
    last = W[:, :, :, 4:5].copy()
    if periodic:
        last[5, :, :, 0] = Sz
        last[6, :, :, 0] = Sm
        last[7, :, :, 0] = Sp
    cores = [first] + [W.copy() for _ in range(d - 2)] + [last]
    return TTMatrix(cores, symmetric=True)


def heisenberg_dense(d: int, periodic: bool = True) -> np.ndarray:
    """Explicit Kronecker sum of the exchange terms, for small ``d`` only."""
    if d < 2:
        raise ValueError("the Heisenberg chain needs d >= 2")
    s = spin_one()
    N = 3**d
    H = np.zeros((N, N))
    bonds = [(i, i + 1) for i in range(d - 1)]
    if periodic:
        bonds.append((d - 1, 0))
    for i, j in bonds:
        for a, b, coef in s.dot_terms():
            ops = [s.Id] * d
            ops[i] = a
            ops[j] = b
            H += coef * reduce(np.kron, ops)
    return H


def diag_test_mpo(values: Sequence[Sequence[float]]) -> TTMatrix:
    """Rank-1 MPO equal to the Kronecker product of ``diag(values[k])``."""
    return TTMatrix([np.diag(np.asarray(v, dtype=float))[None, :, :, None] for v in values], symmetric=True)
