import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ttground.models import diag_test_mpo, heisenberg_dense, heisenberg_mpo, spin_one
from ttground.tt import mpo_to_dense


def test_ladder_commutator():
    s = spin_one()
    assert np.abs(s.Sp @ s.Sm - s.Sm @ s.Sp - 2 * s.Sz).max() < 1e-14


def test_casimir():
    s = spin_one()
    C = s.Sz @ s.Sz + 0.5 * (s.Sp @ s.Sm + s.Sm @ s.Sp)
    assert_allclose(np.linalg.eigvalsh(C), [2, 2, 2], atol=1e-13)


def test_sx_is_real_symmetric():
    s = spin_one()
    assert np.array_equal(s.Sx, s.Sx.T)
    assert_allclose(np.linalg.eigvalsh(s.Sx), [-1, 0, 1], atol=1e-14)


def test_two_site_periodic():
    s = spin_one()
    H = mpo_to_dense(heisenberg_mpo(2))
    expected = 2 * (np.kron(s.Sz, s.Sz) + 0.5 * np.kron(s.Sp, s.Sm) + 0.5 * np.kron(s.Sm, s.Sp))
    assert_allclose(H, expected, atol=1e-14)
    assert abs(np.linalg.eigvalsh(H)[0] + 4) < 1e-12


def test_three_site_periodic():
    assert abs(np.linalg.eigvalsh(mpo_to_dense(heisenberg_mpo(3)))[0] + 3) < 1e-12


@pytest.mark.parametrize("periodic", [True, False])
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7, 8])
def test_mpo_equals_kronecker_sum(d, periodic):
    A = heisenberg_mpo(d, periodic)
    assert np.abs(mpo_to_dense(A) - heisenberg_dense(d, periodic)).max() < 1e-12


def test_bond_ranks():
    assert heisenberg_mpo(10, periodic=True).ranks == [1] + [8] * 9 + [1]
    assert heisenberg_mpo(10, periodic=False).ranks == [1] + [5] * 9 + [1]


def test_symmetric():
    for d in (4, 6):
        H = mpo_to_dense(heisenberg_mpo(d))
        assert np.abs(H - H.T).max() < 1e-13


def test_d_too_small():
    with pytest.raises(ValueError):
        heisenberg_mpo(1)


def test_energy_density_trend(fixture_lambda):
    # consistency trend only: negative and approaching -1.4014840 from below
    dens = [fixture_lambda(d) / d for d in (4, 6, 8, 10)]
    assert all(e < 0 for e in dens)
    assert all(abs(a) > abs(b) for a, b in zip(dens, dens[1:]))
    assert abs(dens[-1] - (-140.14840390392 / 100)) < 0.05


class TestDiag:
    def test_uniform(self):
        A = diag_test_mpo([[1, 2, 3]] * 3)
        H = mpo_to_dense(A)
        w, V = np.linalg.eigh(H)
        assert w[0] == 1
        assert abs(abs(V[0, 0]) - 1) < 1e-14

    def test_single_signed_site(self):
        A = diag_test_mpo([[1, 1, 1], [-1, 0, 1], [1, 1, 1]])
        assert np.linalg.eigvalsh(mpo_to_dense(A))[0] == -1

    def test_mixed_brute_force(self):
        vals = [[0.5, -2.0, 1.5], [1.0, 3.0, -0.25], [-1.0, 2.0, 0.75], [2.0, -0.5, 1.0]]
        brute = min(np.prod(t) for t in itertools.product(*vals))
        assert abs(np.linalg.eigvalsh(mpo_to_dense(diag_test_mpo(vals)))[0] - brute) < 1e-12
