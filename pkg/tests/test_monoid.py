import pytest
from hypothesis import given
from hypothesis import strategies as st

from grlocal import Monoid, PreconditionError
from grlocal.monoid import DegreeOrder, parse_order

N2 = Monoid.natvec(2)
W = Monoid.word("xy")

natvec2 = st.tuples(st.integers(0, 4), st.integers(0, 4))
words = st.text(alphabet="xy", max_size=4)


def test_compose():
    assert N2.compose((1, 0), (0, 1)) == (1, 1)
    assert W.compose("xy", "") == "xy"
    assert W.compose("x", "y") == "xy"
    assert W.compose("y", "x") == "yx"


def test_compose_rejects_mixed_kinds():
    with pytest.raises(PreconditionError):
        N2.compose((1, 0), "x")
    with pytest.raises(PreconditionError):
        N2.compose((1, 0), (1, 0, 0))


def test_grlex_and_deglex_orders():
    assert N2.sorted([(1, 1), (1, 0), (0, 1), (0, 0)]) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert W.sorted(["xx", "y", "", "x"]) == ["", "x", "y", "xx"]
    assert N2.compare((1, 1), (1, 1)) == 0
    assert W.compare("x", "y") == -1


def test_grevlex_differs_from_grlex():
    grev = Monoid.natvec(3, "grevlex")
    grlex = Monoid.natvec(3, "grlex")
    a, b = (1, 0, 1), (0, 2, 0)
    assert grlex.compare(a, b) == 1
    assert grev.compare(a, b) == -1


def test_parse_order_alias():
    assert parse_order("grrevlex") is DegreeOrder.GRREVLEX
    with pytest.raises(PreconditionError):
        parse_order("revlex")


def test_enumerate_upto():
    assert N2.enumerate_upto((1, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert W.enumerate_upto("yy") == ["", "x", "y", "xx", "xy", "yx", "yy"]
    assert N2.enumerate_upto((0, 0)) == [(0, 0)]


def test_factorizations():
    assert set(N2.factorizations((1, 1))) == {
        ((0, 0), (1, 1)),
        ((0, 1), (1, 0)),
        ((1, 0), (0, 1)),
        ((1, 1), (0, 0)),
    }
    assert set(W.factorizations("xy")) == {("", "xy"), ("x", "y"), ("xy", "")}


def test_literals_round_trip():
    assert N2.parse(N2.format((2, 3))) == (2, 3)
    assert W.parse('""') == ""
    one = Monoid.natvec(1)
    assert one.format((3,)) == "3"
    assert one.parse("3") == (3,) == one.parse("(3)")
    with pytest.raises(PreconditionError):
        W.parse('"xz"')


@given(natvec2, natvec2, natvec2)
def test_natvec_order_is_translation_invariant(a, b, c):
    if N2.compare(a, b) < 0:
        assert N2.compare(N2.compose(c, a), N2.compose(c, b)) < 0
        assert N2.compare(N2.compose(a, c), N2.compose(b, c)) < 0


@given(words, words, words)
def test_word_order_is_translation_invariant(a, b, c):
    if W.compare(a, b) < 0:
        assert W.compare(c + a, c + b) < 0
        assert W.compare(a + c, b + c) < 0


@given(words, words)
def test_word_cancellation(a, b):
    g = W.compose(a, b)
    assert W.right_quotient(g, b) == a
    assert W.left_quotient(g, a) == b
    assert (W.identity, g) in W.factorizations(g) and (g, W.identity) in W.factorizations(g)


@given(natvec2)
def test_identity_is_least_and_window_is_sorted(bound):
    win = N2.enumerate_upto(bound)
    assert win[0] == N2.identity
    assert all(N2.compare(x, y) < 0 for x, y in zip(win, win[1:]))
    assert len(win) == (bound[0] + 1) * (bound[1] + 1)
