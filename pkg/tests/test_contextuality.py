import numpy as np

from qfound.contextuality import (
    coloring_search, mermin_square, spin1_matrices, spin1_squares, square_report,
    wigner_category_count,
)


def test_spin1_algebra():
    sx, sy, sz = spin1_matrices()
    assert np.allclose(sx @ sy - sy @ sx, 1j * sz)
    rep = spin1_squares()
    assert rep["ok"]
    assert max(rep["commutator_norms"].values()) < 1e-12
    assert rep["sum_residual"] < 1e-12


def test_square_products():
    rep = square_report()
    assert max(rep["row_residuals"] + rep["col_residuals"]) < 1e-12
    assert rep["max_commutator"] < 1e-12
    assert rep["eigenvalues_pm1"]
    sq = mermin_square()
    assert sq.row_signs == (1, 1, 1) and sq.col_signs == (1, 1, -1)


def test_no_coloring():
    rep = coloring_search()
    assert rep["assignments_examined"] == 512
    assert rep["colorings_found"] == 0
    assert rep["parity_contradiction"]


def test_consistent_signs_do_have_colorings():
    rep = coloring_search(col_signs=(1, 1, 1))
    assert rep["colorings_found"] == 16
    for g in rep["solutions"]:
        g = np.array(g)
        assert (g.prod(axis=0) == 1).all() and (g.prod(axis=1) == 1).all()


def test_category_counts():
    rep = wigner_category_count()
    assert rep["without_locality"] == 256
    assert rep["with_locality"] == 16
