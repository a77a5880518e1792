import pytest
from hypothesis import assume, given, strategies as st

from bqfcorr.forms import FormClass, QuadForm, classify, normalize_indefinite, reduce_definite
from bqfcorr.numtheory import is_square
from bqfcorr.repcount import count_rep
from oracles import indefinite_rep_oracle


def test_classify_examples():
    assert classify(QuadForm(1, 0, 1)) is FormClass.POSITIVE_DEFINITE
    assert classify(QuadForm(1, 0, -2)) is FormClass.INDEFINITE
    assert classify(QuadForm(-1, 0, -1)) is FormClass.NEGATIVE_DEFINITE


def test_constructor_rejects_bad_forms():
    with pytest.raises(ValueError):
        QuadForm(2, 0, 2)  # not primitive
    with pytest.raises(ValueError):
        QuadForm(1, 3, 2)  # D = 1
    with pytest.raises(ValueError):
        QuadForm(2, 1, -3)  # D = 25


def test_parse_and_str_roundtrip():
    f = QuadForm.parse(" 3, -1 ,-5")
    assert f == QuadForm(3, -1, -5) and str(f) == "3,-1,-5" and f.D == 61
    with pytest.raises(ValueError):
        QuadForm.parse("1,2")


def _is_reduced(g):
    return -g.a < g.b <= g.a <= g.c and (g.b >= 0 or g.a != g.c)


def test_reduce_definite_examples():
    assert reduce_definite(QuadForm(1, 0, 1)) == QuadForm(1, 0, 1)
    assert _is_reduced(QuadForm(2, 2, 3))
    assert reduce_definite(QuadForm(2, 2, 3)) == QuadForm(2, 2, 3)
    # <3,2,3> under x -> x + y
    assert reduce_definite(QuadForm(3, 8, 8)) == QuadForm(3, 2, 3)
    with pytest.raises(ValueError):
        reduce_definite(QuadForm(1, 0, -2))


def test_normalize_indefinite_examples():
    assert normalize_indefinite(QuadForm(1, 0, -2)) == QuadForm(1, 0, -2)
    g = normalize_indefinite(QuadForm(-2, 0, 1))
    assert g.a > 0 > g.c and g.D == 8
    # swap substitution (x, y) -> (y, -x) turns <-2,0,1> into <1,0,-2>
    assert {QuadForm(-2, 0, 1)(y, -x) for x in range(-5, 6) for y in range(-5, 6)} == {
        g(x, y) for x in range(-5, 6) for y in range(-5, 6)
    }
    h = normalize_indefinite(QuadForm(1, 3, 1))
    assert h.a > 0 > h.c and h.D == 5
    assert h == QuadForm(1, 1, -1)
    with pytest.raises(ValueError):
        normalize_indefinite(QuadForm(1, 0, 1))


coef = st.integers(-40, 40)


@st.composite
def definite_forms(draw):
    a, b, c = draw(st.integers(1, 40)), draw(coef), draw(st.integers(1, 40))
    assume(b * b - 4 * a * c < 0)
    try:
        return QuadForm(a, b, c)
    except ValueError:
        assume(False)


@st.composite
def indefinite_forms(draw):
    a, b, c = draw(coef), draw(coef), draw(coef)
    D = b * b - 4 * a * c
    assume(D > 0 and not is_square(D))
    try:
        return QuadForm(a, b, c)
    except ValueError:
        assume(False)


@given(definite_forms())
def test_reduce_definite_properties(f):
    g = reduce_definite(f)
    assert g.D == f.D
    assert _is_reduced(g)
    assert classify(g) is classify(f)
    assert reduce_definite(g) == g


@given(indefinite_forms())
def test_normalize_indefinite_properties(f):
    g = normalize_indefinite(f)
    assert g.D == f.D and g.a > 0 > g.c
    assert abs(g.b) ** 2 < g.D
    assert classify(g) is FormClass.INDEFINITE


@pytest.mark.parametrize("f", [QuadForm(3, 8, 8), QuadForm(7, 13, 9), QuadForm(5, -17, 20), QuadForm(2, 3, 4)])
def test_reduction_preserves_rep_counts_definite(f):
    g = reduce_definite(f)
    assert [count_rep(f, n) for n in range(1, 201)] == [count_rep(g, n) for n in range(1, 201)]


# forms with small fundamental units so every orbit meets |y| <= 2000
@pytest.mark.parametrize(
    "f", [QuadForm(-2, 0, 1), QuadForm(1, 3, 1), QuadForm(-1, 4, -1), QuadForm(3, 5, 1), QuadForm(-1, 5, -1)]
)
def test_normalization_preserves_counts(f):
    g = normalize_indefinite(f)
    for n in list(range(-60, 0)) + list(range(1, 61)):
        assert count_rep(g, n) == indefinite_rep_oracle(f, n), n
