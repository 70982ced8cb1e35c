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
    theta,
    vartheta,
    x,
    x0,
    y,
)
from superharm.operators import (
    DiffOperator,
    apply,
    compose,
    named_operator,
    op_power,
    super_commutator,
)
from superharm.representations import (
    NOT_A_WEIGHT_VECTOR,
    AlgebraElement,
    AlgebraFamily,
    AlgebraSpace,
    algebra_basis,
    algebra_space,
    bracket,
    cartan_basis,
    is_orthosymplectic,
    matrix_unit,
    osp_basis,
    osp_stabilizer_check,
    positive_generators,
    rep_operator,
    verify_homomorphism,
    weight_of,
)
from superharm.report import Verdict

P = SuperPolynomial.variable
GL11 = GradingScheme(SchemeKind.GL_NATURAL, 1, 1)
GL21 = GradingScheme(SchemeKind.GL_NATURAL, 2, 1)
GL23 = GradingScheme(SchemeKind.GL_NATURAL, 2, 3)
TW4113 = GradingScheme(SchemeKind.GL_TWISTED, 4, 1, 1, 3)
TW3113 = GradingScheme(SchemeKind.GL_TWISTED, 3, 1, 1, 3)
EV11 = GradingScheme(SchemeKind.OSP_EVEN_NATURAL, 1, 1)
EV21 = GradingScheme(SchemeKind.OSP_EVEN_NATURAL, 2, 1)
EV23 = GradingScheme(SchemeKind.OSP_EVEN_NATURAL, 2, 3)
EVTW4113 = GradingScheme(SchemeKind.OSP_EVEN_TWISTED, 4, 1, 1, 3)
EVTW3113 = GradingScheme(SchemeKind.OSP_EVEN_TWISTED, 3, 1, 1, 3)
ODD11 = GradingScheme(SchemeKind.OSP_ODD_NATURAL, 1, 1)
ODD21 = GradingScheme(SchemeKind.OSP_ODD_NATURAL, 2, 1)
ODDTW3113 = GradingScheme(SchemeKind.OSP_ODD_TWISTED, 3, 1, 1, 3)

GL_SP = AlgebraSpace(AlgebraFamily.GL, 2, 1)


def E(space, a, b):
    return matrix_unit(space, a, b)


# ===================================================================
# matrix spaces and the super-bracket
# ===================================================================

def test_space_dimensions():
    assert AlgebraSpace(AlgebraFamily.GL, 2, 3).lie_dimension() == 25
    assert AlgebraSpace(AlgebraFamily.OSP_EVEN, 2, 1).lie_dimension() == 17
    assert AlgebraSpace(AlgebraFamily.OSP_EVEN, 2, 3).lie_dimension() == 51
    assert AlgebraSpace(AlgebraFamily.OSP_ODD, 1, 1).lie_dimension() == 12


def test_space_parity():
    sp = AlgebraSpace(AlgebraFamily.GL, 2, 1)
    assert [sp.index_parity(a) for a in sp.indices()] == [0, 0, 1]
    odd = AlgebraSpace(AlgebraFamily.OSP_ODD, 1, 1)
    assert odd.index_parity(0) == 0
    assert [odd.index_parity(a) for a in odd.indices()] == [0, 0, 0, 1, 1]


def test_bracket_even_pair():
    got = bracket(E(GL_SP, 1, 2), E(GL_SP, 2, 1))
    assert got == E(GL_SP, 1, 1) - E(GL_SP, 2, 2)
    assert got.render() == "E[1,1] - E[2,2]"


def test_bracket_odd_pair_anticommutes():
    # both units are odd, so the bracket gains a plus sign
    got = bracket(E(GL_SP, 1, 3), E(GL_SP, 3, 1))
    assert got == E(GL_SP, 1, 1) + E(GL_SP, 3, 3)


def test_bracket_cartan_action():
    assert bracket(E(GL_SP, 1, 1), E(GL_SP, 1, 2)) == E(GL_SP, 1, 2)
    assert bracket(E(GL_SP, 2, 2), E(GL_SP, 1, 2)) == -E(GL_SP, 1, 2)


def test_element_arithmetic_and_render():
    e = E(GL_SP, 1, 2).scale(2) - E(GL_SP, 2, 1)
    assert e.render() == "2*E[1,2] - E[2,1]"
    assert e.coefficient(1, 2) == 2
    assert (e - e).is_zero()
    assert e.parity() == 0
    assert (E(GL_SP, 1, 3) + E(GL_SP, 1, 2)).parity() is None
    assert (E(GL_SP, 1, 3) + E(GL_SP, 1, 2)).parity_part(1) == E(GL_SP, 1, 3)


def test_unit_out_of_range():
    with pytest.raises(ValueError):
        E(GL_SP, 0, 1)
    with pytest.raises(ValueError):
        E(AlgebraSpace(AlgebraFamily.OSP_EVEN, 1, 1), 5, 1)


unit_idx = st.integers(min_value=1, max_value=4)


@st.composite
def gl22_units(draw):
    sp = AlgebraSpace(AlgebraFamily.GL, 2, 2)
    return E(sp, draw(unit_idx), draw(unit_idx))


@given(gl22_units(), gl22_units())
@settings(max_examples=60, deadline=None)
def test_bracket_super_antisymmetry(u, v):
    sgn = -1 if (u.parity() and v.parity()) else 1
    assert bracket(u, v) == bracket(v, u).scale(-sgn)


@given(gl22_units(), gl22_units(), gl22_units())
@settings(max_examples=60, deadline=None)
def test_bracket_super_jacobi(a, b, c):
    pa, pb, pc = a.parity(), b.parity(), c.parity()
    s1 = -1 if (pa and pc) else 1
    s2 = -1 if (pb and pa) else 1
    s3 = -1 if (pc and pb) else 1
    total = (bracket(a, bracket(b, c)).scale(s1)
             + bracket(b, bracket(c, a)).scale(s2)
             + bracket(c, bracket(a, b)).scale(s3))
    assert total.is_zero()


# ===================================================================
# osp inside gl
# ===================================================================

def test_osp_basis_dimensions():
    for scheme in (EV21, EV23, ODD11, ODD21):
        sp = algebra_space(scheme)
        basis = osp_basis(sp)
        assert len(basis) == sp.lie_dimension()


def test_osp_basis_is_independent():
    sp = algebra_space(EV21)
    basis = osp_basis(sp)
    keys = sorted({k for e in basis for k, _ in e.terms()})
    rows = [[e.coefficient(a, b) for a, b in keys] for e in basis]
    from superharm.linalg import rank

    assert rank(rows) == len(basis)


def test_osp_membership():
    sp = algebra_space(EV21)
    for e in osp_basis(sp):
        assert is_orthosymplectic(e)
    assert not is_orthosymplectic(E(sp, 1, 1))  # E[1,1] alone is not in osp
    assert is_orthosymplectic(E(sp, 1, 1) - E(sp, 3, 3))


def test_osp_bracket_closure_sample():
    sp = algebra_space(ODD11)
    basis = osp_basis(sp)
    for u in basis:
        for v in basis:
            br = bracket(u, v)
            assert br.is_zero() or is_orthosymplectic(br)


# ===================================================================
# representing operators: spot values from every variant
# ===================================================================

def w(coeff, mult="", dbos=(), dferm=()):
    p = parse_polynomial(mult) if mult else SuperPolynomial.one()
    (mono, c), = p.terms()
    assert c == 1
    return DiffOperator.word(coeff, mono, dbos, dferm)


def test_gl_natural_units():
    assert rep_operator(E(algebra_space(GL23), 1, 3), GL23) == (
        w(1, "x1", dferm=(theta(1),)) + w(-1, "vt1", dbos=((y(1), 1),)))
    assert rep_operator(E(algebra_space(GL23), 3, 1), GL23) == (
        w(1, "th1", dbos=((x(1), 1),)) + w(1, "y1", dferm=(vartheta(1),)))
    assert rep_operator(E(algebra_space(GL23), 1, 2), GL23) == (
        w(1, "x1", dbos=((x(2), 1),)) + w(-1, "y2", dbos=((y(1), 1),)))
    assert rep_operator(E(algebra_space(GL23), 3, 4), GL23) == (
        w(1, "th1", dferm=(theta(2),)) + w(-1, "vt2", dferm=(vartheta(1),)))


def test_gl_twisted_units():
    sp = algebra_space(TW4113)
    # lowering unit across the first twisted wall: two multipliers
    assert rep_operator(E(sp, 2, 1), TW4113) == (
        w(-1, "x1*x2") + w(-1, "y1", dbos=((y(2), 1),)))
    # raising unit inside the twisted wall: two derivatives
    assert rep_operator(E(sp, 1, 2), TW4113) == (
        w(1, dbos=((x(1), 1), (x(2), 1))) + w(-1, "y2", dbos=((y(1), 1),)))
    # diagonal unit picks up the constant shifts
    assert rep_operator(E(sp, 1, 1), TW4113) == (
        w(-1, "x1", dbos=((x(1), 1),)) + DiffOperator.scalar(-1)
        + w(-1, "y1", dbos=((y(1), 1),)))
    assert rep_operator(E(sp, 4, 4), TW4113) == (
        w(1, "x4", dbos=((x(4), 1),)) + w(1, "y4", dbos=((y(4), 1),))
        + DiffOperator.scalar(1))
    # odd units in the three column regimes
    assert rep_operator(E(sp, 1, 5), TW4113) == (
        w(1, dbos=((x(1), 1),), dferm=(theta(1),)) + w(-1, "vt1", dbos=((y(1), 1),)))
    assert rep_operator(E(sp, 2, 5), TW4113) == (
        w(1, "x2", dferm=(theta(1),)) + w(-1, "vt1", dbos=((y(2), 1),)))
    assert rep_operator(E(sp, 4, 5), TW4113) == (
        w(1, "x4", dferm=(theta(1),)) + w(1, "y4*vt1"))
    assert rep_operator(E(sp, 5, 1), TW4113) == (
        w(-1, "x1*th1") + w(1, "y1", dferm=(vartheta(1),)))
    assert rep_operator(E(sp, 5, 4), TW4113) == (
        w(1, "th1", dbos=((x(4), 1),)) + w(1, dbos=((y(4), 1),), dferm=(vartheta(1),)))


def test_osp_natural_units():
    sp = algebra_space(EV21)
    assert rep_operator(E(sp, 1, 3), EV21) == w(1, "x1", dbos=((y(1), 1),))
    assert rep_operator(E(sp, 5, 2), EV21) == w(1, "th1", dbos=((x(2), 1),))
    sp0 = algebra_space(ODD21)
    assert rep_operator(E(sp0, 0, 1), ODD21) == w(1, "x0", dbos=((x(1), 1),))
    combo = E(sp0, 0, 1) - E(sp0, 3, 0)
    assert rep_operator(combo, ODD21) == (
        w(1, "x0", dbos=((x(1), 1),)) + w(-1, "y1", dbos=((x0(), 1),)))


def test_osp_even_twisted_units():
    sp = algebra_space(EVTW4113)
    n = 4
    # antisymmetric even combination straddling both twisted walls
    got = rep_operator(E(sp, n + 4, 1) - E(sp, n + 1, 4), EVTW4113)
    assert got == w(-1, "x1", dbos=((y(4), 1),)) + w(-1, "y1", dbos=((x(4), 1),))
    # odd symmetric combination away from the walls
    got = rep_operator(E(sp, 2, 2 * n + 2) + E(sp, 2 * n + 1, n + 2), EVTW4113)
    assert got == (w(1, "x2", dferm=(vartheta(1),)) + w(1, "th1", dbos=((y(2), 1),)))
    # gl(n)-type combination with a two-derivative atom
    got = rep_operator(E(sp, 1, 2) - E(sp, n + 2, n + 1), EVTW4113)
    assert got == w(1, dbos=((x(1), 1), (x(2), 1))) + w(-1, "y2", dbos=((y(1), 1),))


def test_osp_odd_twisted_units():
    sp = algebra_space(ODDTW3113)
    assert rep_operator(E(sp, 0, 1), ODDTW3113) == w(-1, "x0*x1")
    assert rep_operator(E(sp, 0, 2), ODDTW3113) == w(1, "x0", dbos=((x(2), 1),))
    assert rep_operator(E(sp, 1, 0), ODDTW3113) == w(1, dbos=((x(1), 1), (x0(), 1)))
    assert rep_operator(E(sp, 0, 0), ODDTW3113) == w(1, "x0", dbos=((x0(), 1),))
    assert rep_operator(E(sp, 4, 0), ODDTW3113) == w(1, "y1", dbos=((x0(), 1),))
    assert rep_operator(E(sp, 0, 7), ODDTW3113) == w(1, "x0", dferm=(theta(1),))
    assert rep_operator(E(sp, 8, 0), ODDTW3113) == w(1, "vt1", dbos=((x0(), 1),))


def test_rep_operator_space_mismatch():
    with pytest.raises(ValueError):
        rep_operator(E(GL_SP, 1, 1), GL23)


# ===================================================================
# homomorphism checks
# ===================================================================

@pytest.mark.parametrize("scheme", [
    GL11, GL21, TW3113, EV11, EVTW3113, ODD11, ODDTW3113,
])
def test_homomorphism_all_variants(scheme):
    report = verify_homomorphism(scheme)
    assert report.verdict is Verdict.PASS, report.explanation
    assert report.dimensions["pairs_checked"] == len(algebra_basis(scheme)) ** 2


def test_homomorphism_with_sample_slice():
    sample = enumerate_slice(GL21, (1, 1))
    report = verify_homomorphism(GL21, sample)
    assert report.verdict is Verdict.PASS
    assert report.dimensions["sample_dimension"] == sample.dimension()


def test_homomorphism_detects_corruption(monkeypatch):
    import superharm.representations as reps

    original = reps._gl_natural_unit

    def corrupted(scheme, a, b):
        got = original(scheme, a, b)
        if (a, b) == (1, 2):
            return got.scale(-1)
        return got

    reps._unit_operator.cache_clear()
    monkeypatch.setattr(reps, "_gl_natural_unit", corrupted)
    try:
        report = verify_homomorphism(GL11)
        assert report.verdict is Verdict.FAIL
        assert "mismatch" in report.explanation
    finally:
        reps._unit_operator.cache_clear()


# ===================================================================
# positive generators, Cartan, weights
# ===================================================================

def test_positive_generator_counts():
    assert len(positive_generators(GL23)) == 1 + 3 + 6
    assert len(positive_generators(GL23, even_only=True)) == 1 + 3
    assert len(positive_generators(EV21)) == 1 + 1 + 0 + 1 + 2 * 2
    assert len(positive_generators(EV21, even_only=True)) == 3
    # odd variant appends one family per row/column-0 pair
    assert len(positive_generators(ODD21)) == len(positive_generators(EV21)) + 2 + 1


def test_cartan_weights_natural():
    assert weight_of(P(x(1)) * P(x(1)), GL23) == (2, 0, 0, 0, 0)
    vec = P(theta(1)) * (P(vartheta(2)) * P(vartheta(3)))
    assert weight_of(vec, GL23) == (0, 0, 1, -1, -1)
    assert weight_of(P(x(1)) + P(theta(1)), GL23) is NOT_A_WEIGHT_VECTOR
    with pytest.raises(ValueError):
        weight_of(SuperPolynomial.zero(), GL23)


def test_cartan_weights_twisted_shift():
    # the twisted diagonal operators carry constant shifts, so the vacuum
    # already has a nonzero weight
    wt = weight_of(SuperPolynomial.one(), TW4113)
    assert wt == (-1, 0, 0, 1, 0)


def test_cartan_weights_osp():
    assert weight_of(P(x(1)), EV23) == (1, 0, 0, 0, 0)
    assert weight_of(P(theta(2)), EV23) == (0, 0, 0, 1, 0)
    assert weight_of(P(y(1)), EV23) == (-1, 0, 0, 0, 0)
    assert weight_of(P(x0()), ODD21) == (0, 0, 0)


def test_singular_vector_shape_example():
    # x1 in the (1,0) slice is annihilated by every positive generator
    v = P(x(1))
    for g in positive_generators(GL23):
        assert apply(rep_operator(g, GL23), v).is_zero()
    assert weight_of(v, GL23) == (1, 0, 0, 0, 0)


# ===================================================================
# structural invariants of the representations
# ===================================================================

@pytest.mark.parametrize("scheme", [
    GL21, TW3113, EV21, EVTW3113, ODD11, ODD21, ODDTW3113,
])
def test_rep_commutes_with_delta(scheme):
    dl = named_operator("DELTA", scheme)
    for e in algebra_basis(scheme):
        got = super_commutator(rep_operator(e, scheme), dl)
        assert got.is_zero(), (e.render(), got.render())


def test_eta_invariance_natural():
    for scheme in (GL21, EV21, EV23, ODD11, ODD21):
        eta = apply(named_operator("ETA", scheme), SuperPolynomial.one())
        for e in algebra_basis(scheme):
            assert apply(rep_operator(e, scheme), eta).is_zero(), e.render()


def test_eta_invariance_twisted():
    for scheme in (TW3113, EVTW3113, ODDTW3113):
        eta = named_operator("ETA", scheme)
        for e in algebra_basis(scheme):
            assert super_commutator(rep_operator(e, scheme), eta).is_zero(), e.render()


def test_local_nilpotency_of_positive_generators():
    for scheme in (GL21, EV21, ODD11, TW3113):
        cap = 2 if (scheme.is_twisted or scheme.has_x0) else None
        label = (1, 1) if scheme.is_gl else 2
        sl = enumerate_slice(scheme, label, cap)
        bound = max(u.degree() for u in sl.basis) + 2 * scheme.m + 2
        for g in positive_generators(scheme):
            op = rep_operator(g, scheme)
            for mono in sl.basis:
                p = SuperPolynomial.monomial(mono)
                for _ in range(bound):
                    p = apply(op, p)
                assert p.is_zero(), (g.render(), mono.render())


# ===================================================================
# stabilizer characterization
# ===================================================================

def test_stabilizer_osp_even():
    report = osp_stabilizer_check(EV21)
    assert report.verdict is Verdict.PASS
    assert report.dimensions["kernel_dimension"] == 17
    assert report.dimensions["atom_count"] == 36


def test_stabilizer_osp_odd():
    report = osp_stabilizer_check(ODD11)
    assert report.verdict is Verdict.PASS
    assert report.dimensions["kernel_dimension"] == 12
    assert report.dimensions["atom_count"] == 25


def test_stabilizer_rejects_other_schemes():
    with pytest.raises(ValueError):
        osp_stabilizer_check(EVTW3113)
    with pytest.raises(ValueError):
        osp_stabilizer_check(GL21)
