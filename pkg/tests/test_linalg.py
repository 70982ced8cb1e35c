from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superharm.algebra import (
    GradingScheme,
    SchemeKind,
    SuperPolynomial,
    enumerate_slice,
    parse_polynomial,
)
from superharm.algebra import x as algx, y as algy
from superharm.linalg import (
    MatrixBudgetError,
    coordinates,
    in_span,
    independent_subset,
    kernel_basis_polys,
    nullspace,
    poly_matrix,
    rank,
    rref,
    solve,
    span_rank,
    spans_equal,
)
from superharm.operators import named_operator

F = Fraction


def test_rref_simple():
    red, pivots = rref([[F(2), F(4)], [F(1), F(2)]])
    assert red == [[F(1), F(2)]]
    assert pivots == [0]


def test_rank_and_nullspace():
    mat = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    assert rank(mat) == 2
    null = nullspace(mat, 3)
    assert len(null) == 1
    for v in null:
        for row in mat:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_solve_consistent_and_not():
    mat = [[F(1), F(1)], [F(0), F(1)]]
    assert solve(mat, [F(3), F(1)]) == [F(2), F(1)]
    assert solve([[F(1), F(1)], [F(1), F(1)]], [F(0), F(1)]) is None


matrices = st.lists(
    st.lists(st.integers(-4, 4).map(F), min_size=3, max_size=3),
    min_size=1,
    max_size=4,
)


@given(matrices)
@settings(max_examples=60)
def test_rank_nullity(mat):
    assert rank(mat) + len(nullspace(mat, 3)) == 3


@given(matrices)
@settings(max_examples=60)
def test_nullspace_annihilates(mat):
    for v in nullspace(mat, 3):
        for row in mat:
            assert sum(a * b for a, b in zip(row, v)) == 0


def polys(*texts):
    return [parse_polynomial(t) for t in texts]


def test_span_helpers():
    a = polys("x1 + y1", "x1 - y1")
    assert span_rank(a) == 2
    assert in_span(parse_polynomial("x1"), a)
    assert not in_span(parse_polynomial("x2"), a)
    assert spans_equal(a, polys("x1", "y1"))
    assert not spans_equal(a, polys("x1"))


def test_coordinates_roundtrip():
    basis = polys("x1 + th1*vt1", "y1", "x1 - y1")
    target = parse_polynomial("2*x1 + 3*y1 + th1*vt1")
    coords = coordinates(target, basis)
    assert coords is not None
    rebuilt = SuperPolynomial.zero()
    for c, b in zip(coords, basis):
        rebuilt = rebuilt + b.scale(c)
    assert rebuilt == target
    assert coordinates(parse_polynomial("x2"), basis) is None


def test_independent_subset_stable():
    fam = polys("x1", "2*x1", "y1", "x1 + y1")
    assert independent_subset(fam) == [0, 2]


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("SUPERHARM_MAX_CELLS", "4")
    with pytest.raises(MatrixBudgetError):
        rref([[F(1)] * 3, [F(2)] * 3])
    monkeypatch.setenv("SUPERHARM_MAX_CELLS", "huge")
    with pytest.raises(MatrixBudgetError):
        rref([[F(1)]])


def test_blocked_kernel_matches_unblocked():
    sch = GradingScheme(SchemeKind.GL_NATURAL, 2, 2)
    delta = named_operator("DELTA", sch)
    sl = enumerate_slice(sch, (2, 1))
    plain = kernel_basis_polys(delta, list(sl.basis))
    # deg(x_i) - deg(y_i) is conserved by every d_x_i d_y_i term
    blocked = kernel_basis_polys(
        delta,
        list(sl.basis),
        block_key=lambda m: tuple(
            m.exponent(algx(i)) - m.exponent(algy(i)) for i in (1, 2)
        ),
    )
    assert spans_equal(plain, blocked)


def test_blocked_kernel_rejects_bad_key():
    sch = GradingScheme(SchemeKind.GL_NATURAL, 2, 1)
    delta = named_operator("DELTA", sch)
    sl = enumerate_slice(sch, (1, 1))
    with pytest.raises(ValueError):
        kernel_basis_polys(delta, list(sl.basis), block_key=lambda m: m.degree())
