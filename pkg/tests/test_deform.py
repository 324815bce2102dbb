import warnings
from pathlib import Path

import pytest

from defring.deform import (
    InconsistentInput,
    RingPresentation,
    compare_surjection,
    ideal_family_A,
    ideal_family_B,
    parse_comm,
    ring_presentation,
    universal_matrices,
)
from defring.presentation import (
    NewTame,
    PlaceSpec,
    ValidationError,
    build_neumann_augmented,
    build_wingberg,
    parse_presentation,
)
from defring.series import CommSeries, unit_inv
from defring.verify import MatRep

FIX = Path(__file__).resolve().parents[1] / "src" / "defring" / "fixtures"


def fixture(name, **kw):
    pres = parse_presentation((FIX / f"{name}.dsl").read_text())
    return pres.with_params(**kw) if kw else pres


def ring_vars(m, p=5, N=3, D=8):
    return [CommSeries.variable(i, m, p, N, D) for i in range(m)]


def expected_tame_ideal(pres, q, qp):
    """The two expected generators, built directly from the ring variables."""
    Yv, _, Y, Y2 = ring_vars(4, pres.p, pres.N, pres.D)
    W = (1 + Y) * unit_inv(1 + Y2) - 1
    return [pres.p - W, (q - ((1 + W) ** qp - 1)) * Yv]


SCALAR_TEXT = """\
p 5
gen t_w block=Xinf chi=chi1*chi2^-1 pinned
gen z   block=Xinf chi=trivial commutes
gen g   block=Gamma chi=trivial pi=gamma
rel r = z^5 * [t_w, g]
"""


def test_family_A_scalar_row():
    pres = parse_presentation(SCALAR_TEXT)
    (a,) = ideal_family_A(pres)
    Y1 = ring_vars(3)[0]
    assert a == 5 * Y1 + 10 * Y1**2 + 10 * Y1**3 + 5 * Y1**4 + Y1**5
    (b,) = ideal_family_B(pres)
    Y2, Y3 = ring_vars(3)[1:]
    assert b == -((1 + Y2) * unit_inv(1 + Y3) - 1)


def test_family_A_empty_when_no_scalar_rows():
    pres = fixture("wingberg_tame")
    assert all(not a for a in ideal_family_A(pres))
    rp = ring_presentation(pres)
    assert ("r_w", "A") in rp.dropped and ("r_v", "A") in rp.dropped


def test_family_B_wingberg_tame():
    pres = fixture("wingberg_tame")
    assert ideal_family_B(pres) == expected_tame_ideal(pres, 25, 5)


def test_ring_presentation_free_case():
    rp = ring_presentation(fixture("cyclotomic_regular"))
    assert rp.d_prime == 2 and rp.ideal == []
    assert "I = (0), R = Z_p[[Y_1, Y_2]]" in str(rp)


def test_ring_presentation_wingberg():
    pres = fixture("wingberg_tame")
    rp = ring_presentation(pres)
    assert [(g.relation, g.family) for g in rp.ideal] == [("r_w", "B"), ("r_v", "B")]
    assert rp.ideal_gens == expected_tame_ideal(pres, 25, 5)
    for g in rp.ideal_gens:
        assert g.constant().valuation() >= 1


def test_augmented_adds_free_variables():
    base = build_wingberg([PlaceSpec("v", "tame", 25, 5)])
    aug = build_neumann_augmented(base, [NewTame("t_q")])
    rp0, rp1 = ring_presentation(base), ring_presentation(aug)
    assert rp1.d_prime == rp0.d_prime + 1
    assert len(rp1.ideal) == len(rp0.ideal)
    rp = ring_presentation(fixture("cyclotomic_augmented"))
    assert rp.d_prime == 5 and rp.ideal == []


def test_wild_fixture_with_tie():
    pres = fixture("wingberg_wild")
    rp = ring_presentation(pres)
    fams = [(g.relation, g.family) for g in rp.ideal]
    assert fams == [("r_w", "B"), ("r_v", "B"), ("Y_4", "tie")]
    Y = ring_vars(6)
    assert rp.ideal[2].series == Y[3] - 2 * Y[2]
    asg = universal_matrices(pres, rp)
    assert asg["s2_v"].b == 2 * Y[2]


def test_lower_unipotent_generators_divisible_by_Y3():
    rp = ring_presentation(fixture("cyclotomic_691"))
    assert rp.d_prime == 3
    assert rp.ideal
    for g in rp.ideal_gens:
        assert g.divisible_by(2)


def test_inconsistent_input():
    text = "p 5\ngen t_w block=Xinf chi=chi1*chi2^-1 pinned\ngen g block=Gamma chi=trivial pi=gamma\nrel r = t_w\n"
    with pytest.raises(InconsistentInput):
        ring_presentation(parse_presentation(text))


def test_pipeline_hypotheses_enforced():
    text = "p 5\ngen t_w block=Xinf chi=chi1*chi2^-1\ngen g block=Gamma chi=trivial pi=gamma\n"
    with pytest.raises(ValidationError):
        ring_presentation(parse_presentation(text))


TWO_LETTERS = """\
p 5  prec 3  deg 6
gamma gamma delta
gen t_w block=Xinf chi=chi1*chi2^-1 pinned
gen u   block=Xinf chi=chi1*chi2^-1
gen g   block=Gamma chi=trivial pi=gamma
gen h   block=Gamma chi=chi1*chi2^-1 pi=delta
rel r = t_w^5 * [t_w, g] * [u, h]
"""


def test_multivariable_gamma_drops_inactive_letters():
    pres = parse_presentation(TWO_LETTERS)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rp = ring_presentation(pres)
    Y = ring_vars(4, D=6)
    W = (1 + Y[1]) * unit_inv(1 + Y[2]) - 1
    # the u row is 1 - delta-image, which lives entirely in the inactive letter
    assert rp.ideal_gens == [5 - W]
    assert rp.warnings and caught


def test_multivariable_gamma_lower_row_is_hard_error():
    text = TWO_LETTERS.replace("gen u   block=Xinf chi=chi1*chi2^-1", "gen u   block=Xinf chi=chi2*chi1^-1")
    with pytest.raises(ValueError, match="acts nontrivially"):
        ring_presentation(parse_presentation(text))


def test_universal_matrices_examples():
    pres = fixture("wingberg_tame")
    asg = universal_matrices(pres)
    Y = ring_vars(4)
    one, zero = Y[0].one(), Y[0].zero()
    assert asg["t_w"] == MatRep(one, one, zero, one)
    assert asg["g"] == MatRep(1 + Y[2], zero, zero, 1 + Y[3])
    assert asg["t_v"] == MatRep(one, Y[0], zero, one)
    ident = universal_matrices(fixture("cyclotomic_691"))["y_10"]
    assert ident == MatRep.identity(CommSeries(3, 691, 3, 8))
    low = universal_matrices(fixture("cyclotomic_691"))["x_11"]
    assert low.c == CommSeries.variable(2, 3, 691, 3, 8) and not low.b


def test_matrices_reduce_to_residual_and_have_unit_det():
    for name in ("wingberg_tame", "wingberg_wild", "cyclotomic_691", "cyclotomic_augmented"):
        pres = fixture(name)
        for g, M in universal_matrices(pres).images.items():
            assert M.det().constant().is_unit()
            expect_b = 1 if pres.gen(g).pinned else 0
            assert (M.a.constant(), M.b.constant(), M.c.constant(), M.d.constant()) == (1, expect_b, 0, 1)


def test_json_round_trip_is_byte_identical():
    for name in ("wingberg_tame", "wingberg_wild", "cyclotomic_691", "cyclotomic_regular"):
        rp = ring_presentation(fixture(name))
        text = rp.to_json()
        back = RingPresentation.from_json(text)
        assert back.to_json() == text
        assert back.ideal_gens == rp.ideal_gens


def test_parse_comm():
    s = parse_comm("5 - Y_3 + 2*Y_1^2*Y_4 - Y_2", 4, 5, 3, 8)
    Y = ring_vars(4)
    assert s == 5 - Y[2] + 2 * Y[0] ** 2 * Y[3] - Y[1]
    assert parse_comm("0", 4, 5, 3, 8) == 0
    with pytest.raises(ValueError):
        parse_comm("5 + Y_9", 4, 5, 3, 8)


def test_truncation_coherence():
    low = ring_presentation(fixture("wingberg_tame"))
    high = ring_presentation(fixture("wingberg_tame", D=12))
    for a, b in zip(low.ideal_gens, high.ideal_gens):
        assert b.truncate(8) == a


def test_compare_examples():
    rep = compare_surjection(fixture("cyclotomic_691"), fixture("cyclotomic_691_g"))
    assert rep.mapping == {"Y_1": "Y_1", "Y_2": "Y_2"}
    assert rep.kernel == ["Y_3"]
    assert rep.krull_bound == 2
    same = compare_surjection(fixture("wingberg_tame"), fixture("wingberg_tame"))
    assert same.kernel == [] and all(a == b for a, b in same.mapping.items())
    gs = fixture("cyclotomic_691")
    # G without the identity-shaped x_1: nothing changes
    g = parse_presentation((FIX / "cyclotomic_691.dsl").read_text().replace("gen x_1   block=Xinf chi=omega^1\n", ""))
    assert "x_1" not in g.gen_names
    rep = compare_surjection(gs, g)
    assert rep.kernel == [] and rep.mapping == {"Y_1": "Y_1", "Y_2": "Y_2", "Y_3": "Y_3"}


def test_compare_name_mismatch():
    with pytest.raises(ValueError):
        compare_surjection(fixture("wingberg_tame"), fixture("wingberg_wild"))
    with pytest.raises(ValueError):
        compare_surjection(fixture("wingberg_tame"), fixture("cyclotomic_regular"))
