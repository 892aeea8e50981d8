"""Exact sparse elimination: echelon form, kernels, spans, modular assist."""

from gmpy2 import mpq

from halfder import linalg
from halfder.scalars import CyclotomicField, GenericQField


def _q(n, d=1):
    return mpq(n, d)


def test_kernel_single_difference_row():
    # [[1, -1]] -> one-dimensional kernel spanned by (1, 1)
    pivots = linalg.rref([{0: _q(1), 1: _q(-1)}])
    basis = linalg.kernel_basis(pivots, 2, _q(1))
    assert basis == [{0: _q(1), 1: _q(1)}]


def test_kernel_identity_is_trivial():
    pivots = linalg.rref([{0: _q(1)}, {1: _q(1)}])
    assert linalg.kernel_basis(pivots, 2, _q(1)) == []


def test_rref_is_canonical_under_row_order():
    rows = [
        {0: _q(2), 1: _q(4), 2: _q(-2)},
        {1: _q(1), 2: _q(3)},
        {0: _q(1), 2: _q(5)},
    ]
    a = linalg.rref(list(rows))
    b = linalg.rref(list(reversed(rows)))
    assert a == b


def test_kernel_vectors_satisfy_rows():
    rows = [
        {0: _q(1), 1: _q(-2), 3: _q(1)},
        {1: _q(1), 2: _q(1), 4: _q(-1)},
        {0: _q(3), 2: _q(1), 4: _q(2)},
    ]
    basis = linalg.kernel_basis(linalg.rref(rows), 5, _q(1))
    assert len(basis) == 2
    for vec in basis:
        for row in rows:
            assert linalg.residual(row, vec) is None


def test_in_span():
    basis = [{0: _q(1), 2: _q(1)}, {1: _q(1), 2: _q(-1)}]
    assert linalg.in_span({0: _q(2), 1: _q(3), 2: _q(-1)}, basis)
    assert not linalg.in_span({3: _q(1)}, basis)
    assert not linalg.in_span({0: _q(1), 1: _q(1)}, basis)


def test_rank_and_restrict():
    vecs = [{0: _q(1), 1: _q(1)}, {0: _q(2), 1: _q(2)}, {2: _q(5)}]
    assert linalg.rank(vecs) == 2
    restricted = [linalg.restrict(v, {0}) for v in vecs]
    assert linalg.rank(r for r in restricted if r) == 1


def test_solve_kernel_modular_matches_plain_rational():
    field = GenericQField("2")
    rows = [
        {0: _q(2), 1: _q(-2)},
        {1: _q(1), 2: _q(-1)},
        {0: _q(1), 2: _q(-1)},  # dependent
        {3: _q(7)},
    ]
    plain = linalg.solve_kernel(rows, 5, field.one, None)
    assisted = linalg.solve_kernel(rows, 5, field.one, field.modp_map())
    assert plain == assisted
    assert len(plain) == 2  # (1,1,1,0,0) and the untouched column 4


def test_solve_kernel_modular_matches_plain_cyclotomic():
    field = CyclotomicField(3)
    z = field.zeta
    one = field.one
    rows = [
        {0: one - z, 1: z * z},
        {1: one, 2: z},
        {0: (one - z) * 3, 1: z * z * 3},  # multiple of the first
    ]
    plain = linalg.solve_kernel(rows, 4, one, None)
    assisted = linalg.solve_kernel(rows, 4, one, field.modp_map())
    assert plain == assisted
    for vec in assisted:
        for row in rows:
            assert linalg.residual(row, vec) is None
