import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GENS, words
from defring.fox import Projection, fox_derivative, fox_matrix, fox_matrix_of, project, restrict_to_xinf
from defring.freegroup import FreeWord, GroupRingElt, commutator, gr_mul_word_left, word_inv, word_mul
from defring.presentation import PlaceSpec, build_wingberg
from defring.series import MagnusSeries

L = FreeWord.letter
E = FreeWord.identity()
ONE = GroupRingElt.one()


def grw(w, c=1):
    return GroupRingElt.word(w, c)


def closed_form_commutator(u, i, j):
    """d[u, s_j]/d s_i written out term by term."""
    du = fox_derivative(u, i)
    dinv = fox_derivative(word_inv(u), i)
    out = du + gr_mul_word_left(word_mul(u, L(j)), dinv)
    if i == j:
        out = out + grw(u) - grw(commutator(u, L(i)))
    return out


def test_power_derivative():
    s = L("s")
    assert fox_derivative(s**3, "s") == ONE + grw(s) + grw(s**2)
    assert fox_derivative(s**-2, "s") == grw(s**-1, -1) + grw(s**-2, -1)
    assert fox_derivative(L("t"), "s") == GroupRingElt.zero()
    assert fox_derivative(E, "s") == GroupRingElt.zero()


def test_commutator_derivative_example():
    u = L("s1") * L("s3", 2)
    assert fox_derivative(commutator(u, L("s2")), "s1") == closed_form_commutator(u, "s1", "s2")


@given(words())
def test_fundamental_identity(w):
    total = GroupRingElt.zero()
    for s in GENS:
        d = fox_derivative(w, s)
        total = total + d * (grw(L(s)) - ONE)
    assert total == grw(w) - ONE


@given(words(max_len=8), st.sampled_from(GENS), st.sampled_from(GENS))
def test_commutator_closed_form(u, i, j):
    assert fox_derivative(commutator(u, L(j)), i) == closed_form_commutator(u, i, j)


@given(words(max_len=6), words(max_len=6), st.sampled_from(GENS))
def test_product_rule(u, v, s):
    assert fox_derivative(u * v, s) == fox_derivative(u, s) + gr_mul_word_left(u, fox_derivative(v, s))


def _pi(D=8, N=3, p=5):
    return Projection({"t": E, "sp": E, "s1": E, "g": L("gamma")}, ("gamma",), p, N, D)


def test_projection_examples():
    pi = _pi()
    T = MagnusSeries.variable(0, 1, 5, 3, 8)
    assert project(grw(L("s1")), pi) == 1
    assert project(grw(L("g")), pi) == 1 + T
    with pytest.raises(KeyError):
        project(grw(L("zz")), pi)


@pytest.mark.parametrize("q,qp", [(5, 1), (25, 5), (125, 25)])
def test_tame_column(q, qp):
    pi = _pi()
    t, g, sp = L("t"), L("g"), L("sp")
    r = t**q * commutator(t, g**qp * sp)
    T = MagnusSeries.variable(0, 1, 5, 3, 8)
    expected = q - ((1 + T) ** qp - 1)
    assert project(fox_derivative(r, "t"), pi) == expected
    assert project(fox_derivative(r, "sp"), pi) == 0
    assert project(fox_derivative(r, "g"), pi) == 0


@pytest.mark.parametrize("q,qp", [(5, 1), (25, 5)])
def test_gamma_and_t_rows_match_hand_expansion(q, qp):
    t, g, sp = L("t"), L("g"), L("sp")
    r = t**q * commutator(t, g**qp * sp)
    tail = t ** (q + 1) * g**qp * sp * t**-1
    dt = GroupRingElt.zero()
    for i in range(q + 1):
        dt = dt + grw(t**i)
    dt = dt - grw(tail)
    assert fox_derivative(r, "t") == dt
    dg = GroupRingElt.zero()
    for i in range(qp):
        dg = dg + grw(t ** (q + 1) * g**i)
    for i in range(1, qp + 1):
        dg = dg - grw(tail * sp**-1 * g**-i)
    assert fox_derivative(r, "g") == dg


def test_fox_matrix_examples():
    pres = build_wingberg([PlaceSpec("v", "tame", 5, 1)])
    M = fox_matrix(pres)
    T = MagnusSeries.variable(0, 1, 5, 3, 8)
    col = M.column("r_v")
    nonzero = [(M.rows[i], x) for i, x in enumerate(col) if x]
    assert nonzero == [("t_v", 5 - T)]
    assert M["t_w", "r_w"] == 5 - T
    assert M.shape == (4, 2)

    pi = Projection({"s1": E, "s2": E}, (), 5, 3, 8)
    M1 = fox_matrix_of([("r", L("s1"))], ["s1", "s2"], pi)
    assert M1["s1", "r"] == 1 and M1["s2", "r"] == 0
    M0 = fox_matrix_of([], ["s1", "s2"], pi)
    assert M0.shape == (2, 0)


def test_restrict():
    pres = build_wingberg([PlaceSpec("v", "tame", 25, 5)])
    M = fox_matrix(pres)
    R = restrict_to_xinf(M, pres.n)
    assert R.rows == ["t_v", "sp_v", "t_w"]
    assert R.entries == M.entries[:3]
    assert restrict_to_xinf(M, 4).entries == M.entries
    with pytest.raises(ValueError):
        restrict_to_xinf(M, 5)
    d = M.to_dict()
    assert d["orientation"] == "rows=generators, columns=relations"
    assert d["entries"][2][0] == "5 - T"
