import numpy as np

import superadmm_solver as sa
from conftest import random_quasidefinite


def _pattern(rows, cols, n):
    return sa.csc_from_triplets(n, n, rows, cols, np.ones(len(rows)))


def test_diagonal_pattern_any_permutation():
    pat = _pattern(range(6), range(6), 6)
    perm = sa.mindeg_order(pat)
    assert sorted(perm.tolist()) == list(range(6))
    assert sa.symbolic_factorize(pat, perm).lnz == 0


def test_arrowhead_orders_dense_node_late():
    # dense first row/col: natural order fills completely (10 off-diagonal
    # nonzeros), minimum degree keeps it at 4
    rows = [0, 0, 0, 0, 0, 1, 2, 3, 4]
    cols = [0, 1, 2, 3, 4, 1, 2, 3, 4]
    pat = _pattern(rows, cols, 5)
    perm = sa.mindeg_order(pat)
    assert sa.symbolic_factorize(pat, perm).lnz == 4
    assert sa.symbolic_factorize(pat, sa.natural_order(5)).lnz == 10


def test_tridiagonal_stays_fill_free():
    n = 7
    rows = list(range(n)) + list(range(n - 1))
    cols = list(range(n)) + list(range(1, n))
    pat = _pattern(rows, cols, n)
    assert sa.symbolic_factorize(pat, sa.natural_order(n)).lnz == n - 1
    perm = sa.mindeg_order(pat)
    assert sa.symbolic_factorize(pat, perm).lnz == n - 1


def test_never_worse_than_natural_on_random_corpus():
    rng = np.random.default_rng(11)
    for trial in range(30):
        n = int(rng.integers(2, 25))
        m = int(rng.integers(0, 25))
        kkt, _ = random_quasidefinite(rng, n, m)
        pat = kkt.matrix
        perm = sa.mindeg_order(pat)
        lnz_md = sa.symbolic_factorize(pat, perm).lnz
        lnz_nat = sa.symbolic_factorize(pat, sa.natural_order(n + m)).lnz
        assert lnz_md <= lnz_nat, (trial, lnz_md, lnz_nat)


def test_permutation_is_bijection():
    rng = np.random.default_rng(12)
    kkt, _ = random_quasidefinite(rng, 15, 20)
    perm = sa.mindeg_order(kkt.matrix)
    assert sorted(perm.tolist()) == list(range(35))
