import pytest
from hypothesis import given
from hypothesis import strategies as st

from defring.freegroup import FreeWord
from defring.padic import NotAUnit, PadicInt, PrecisionMismatch
from defring.series import (
    CommSeries,
    MagnusSeries,
    c_mul,
    coeff_expansion,
    gamma_embed,
    m_mul,
    pow_padic,
    subst_T,
    unit_inv,
)

P, N, D = 5, 3, 6


def Ym(i, m=2, d=D):
    return CommSeries.variable(i, m, P, N, d)


def T(i=0, k=1, d=D):
    return MagnusSeries.variable(i, k, P, N, d)


def magnus(k=2, d=4):
    mono = st.lists(st.integers(0, k - 1), max_size=d).map(tuple)
    return st.dictionaries(mono, st.integers(-200, 200), max_size=6).map(
        lambda c: MagnusSeries(k, P, N, d, c)
    )


def comm(m=3, d=4):
    mono = st.lists(st.integers(0, d), min_size=m, max_size=m).map(tuple)
    return st.dictionaries(mono, st.integers(-200, 200), max_size=6).map(
        lambda c: CommSeries(m, P, N, d, c)
    )


def test_noncommuting_monomials():
    a, b = T(0, 2), T(1, 2)
    assert m_mul(a, b) != m_mul(b, a)
    assert m_mul(a, b).coeffs == {(0, 1): 1}


def test_small_products():
    y = Ym(0)
    assert c_mul(1 + y, 1 - y) == 1 - y * y
    t = T(d=2)
    assert (1 + t) * (1 + t) == MagnusSeries(1, P, N, 2, {(): 1, (0,): 2, (0, 0): 1})


def test_unit_inv_examples():
    y = Ym(0)
    inv = unit_inv(1 + y)
    assert inv.coeffs == {(j, 0): (-1) ** j % P**N for j in range(D + 1)}
    assert unit_inv(y.one()) == 1
    assert unit_inv(y.const(2)) == 63
    with pytest.raises(NotAUnit):
        unit_inv(y + 5)


def test_pow_padic_examples():
    y = Ym(0)
    assert pow_padic(1 + y, 3) == 1 + 3 * y + 3 * y * y + y * y * y
    assert pow_padic(1 + y, 0) == 1
    assert pow_padic(1 + y, PadicInt(P, N, 7)) * pow_padic(1 + y, PadicInt(P, N, -7)) == 1
    with pytest.raises(ValueError):
        pow_padic(2 + y, 3)
    with pytest.raises(PrecisionMismatch):
        pow_padic(1 + y, PadicInt(7, N, 1))


def test_gamma_embed_examples():
    g = FreeWord.letter("gamma")
    assert gamma_embed(g, ["gamma"], P, N, D) == 1 + T()
    inv = gamma_embed(g**-1, ["gamma"], P, N, D)
    assert inv.coeffs == {(0,) * j: (-1) ** j % P**N for j in range(D + 1)}
    assert gamma_embed(g**5, ["gamma"], P, N, 2) == MagnusSeries(1, P, N, 2, {(): 1, (0,): 5, (0, 0): 10})
    with pytest.raises(KeyError):
        gamma_embed(FreeWord.letter("x"), ["gamma"], P, N, D)


def test_gamma_embed_two_letters_noncommutative():
    a, b = FreeWord.letter("a"), FreeWord.letter("b")
    ab = gamma_embed(a * b, ["a", "b"], P, N, 3)
    ba = gamma_embed(b * a, ["a", "b"], P, N, 3)
    assert ab != ba
    assert ab.coefficient((0, 1)) == 1 and ab.coefficient((1, 0)) == 0


def test_subst_examples():
    y1, y2 = Ym(0), Ym(1)
    W = y1 * y2 + y1
    assert subst_T(5 - T(), W) == 5 - W
    t2 = T(d=2)
    assert subst_T(t2 * t2, Ym(0, d=2) - Ym(1, d=2)) == CommSeries(
        2, P, N, 2, {(2, 0): 1, (1, 1): -2, (0, 2): 1}
    )
    with pytest.raises(ValueError):
        subst_T(T(), y1 + 1)


def test_subst_gamma_quotient_against_division_oracle():
    y1, y2 = Ym(0), Ym(1)
    W = (1 + y1) * unit_inv(1 + y2) - 1
    # (1 + Y1) / (1 + Y2) = sum_b (-1)^b (Y2^b + Y1 Y2^b)
    oracle = {}
    for b in range(D + 1):
        for a in (0, 1):
            if a + b <= D and (a, b) != (0, 0):
                oracle[(a, b)] = (-1) ** b
    expected = CommSeries(2, P, N, D, {(0, 0): 5}) - CommSeries(2, P, N, D, oracle)
    got = subst_T(5 - T(), W)
    assert got == expected
    assert str(got).startswith("5 - Y_1 + Y_2 + Y_1*Y_2 - Y_2^2")


def test_coeff_expansion_examples():
    a, b = coeff_expansion(5 - ((1 + T()) ** 1 - 1))
    assert a == 5 and b[0] == -1 and all(x == 0 for x in b[1:])
    a, b = coeff_expansion(T().zero())
    assert a == 0 and all(x == 0 for x in b)
    a, b = coeff_expansion((1 + T()) ** 3)
    assert a == 1 and [x.residue for x in b] == [3, 3, 1, 0, 0, 0]
    with pytest.raises(ValueError):
        coeff_expansion(T(0, 2))


def test_parameter_mismatch():
    with pytest.raises(PrecisionMismatch):
        Ym(0) + CommSeries.variable(0, 2, P, N + 1, D)
    with pytest.raises(PrecisionMismatch):
        Ym(0) * CommSeries.variable(0, 2, P, N, D + 1)


def test_rendering():
    y = CommSeries.variable(2, 4, P, N, D)
    assert str(5 - y + 2 * y * y) == "5 - Y_3 + 2*Y_3^2"
    assert str(y.zero()) == "0"
    assert str(T(0, 2) * T(0, 2) * T(1, 2) - 1) == "-1 + T_1^2*T_2"


@given(magnus(), magnus(), magnus())
def test_magnus_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert all(len(m) <= a.D for m in (a * b).coeffs)
    assert all(v for v in (a * b).coeffs.values())


@given(magnus(k=1), magnus(k=1))
def test_one_variable_magnus_commutes(a, b):
    assert a * b == b * a


@given(comm(), comm(), comm())
def test_comm_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(comm(), st.integers(-100, 100))
def test_unit_inverse(a, u):
    if u % P == 0:
        return
    x = a - a.constant() + u
    assert x * unit_inv(x) == 1
    assert unit_inv(x) * x == 1


@given(magnus())
def test_unit_inverse_noncommutative(a):
    x = a - a.constant() + 1
    assert x * unit_inv(x) == 1 and unit_inv(x) * x == 1


@given(comm(), st.integers(-8, 8), st.integers(-8, 8))
def test_pow_padic_additive(a, e, f):
    u = a - a.constant() + 1
    assert pow_padic(u, e) * pow_padic(u, f) == pow_padic(u, e + f)


@given(comm(), st.integers(0, 6))
def test_pow_padic_matches_repeated_product(a, e):
    u = a - a.constant() + 1
    assert pow_padic(u, e) == u**e
    assert pow_padic(u, -e) == unit_inv(u) ** e


@given(comm(d=6), comm(d=6), st.integers(0, 6))
def test_truncation_coherence(a, b, d):
    assert (a * b).truncate(d) == a.truncate(d) * b.truncate(d)
