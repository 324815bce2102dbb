"""Presentations assembled from local data rather than typed by hand."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from ..freegroup import FreeWord, commutator, word_mul, word_pow
from ..padic import check_prime, vp
from .model import Block, Character, DiagonalCharacters, GenMeta, Presentation, Tie

GAMMA_LETTER = "gamma"


def _is_power_of(q: int, p: int) -> bool:
    if q < p:
        return False
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class PlaceSpec:
    """Local data for one place of S.

    ``kind`` is ``"tame"``, ``"wild"`` or ``"free"``. ``q`` is the p-power
    appearing in the local relation, ``q_prime`` the exponent of gamma in the
    rewritten generator s'_v = gamma^-q' s_v (defaults to q/p). ``chars`` maps a
    generator role (``"t"``, ``"s"``, ``"t2"``, ``"s2"``, ...) to its
    character; unlisted roles get chi1*chi2^-1. ``commutes`` lists the roles
    known to commute with the pinned generator.
    """

    name: str
    kind: str = "tame"
    q: int = 0
    q_prime: int | None = None
    n: int = 1
    chars: Mapping[str, Character] = field(default_factory=dict)
    commutes: tuple[str, ...] = ()

    def char(self, role: str) -> Character:
        return self.chars.get(role, Character.upper())


def _gen(name: str, spec: PlaceSpec, role: str) -> GenMeta:
    return GenMeta(
        name=name,
        block=Block.XINF,
        character=spec.char(role),
        commutes=role in spec.commutes,
    )


def build_wingberg(
    places: Sequence[PlaceSpec],
    free_rank: int = 0,
    distinguished: str = "w",
    p: int = 5,
    chi: tuple[int | None, int | None] = (None, None),
    prec: int = 3,
    deg: int = 8,
    ties: Sequence[Tie] = (),
) -> Presentation:
    """Generators and relations of the Galois group with restricted ramification.

    The distinguished place contributes gamma (the section generator, named
    ``g``) and the pinned ``t_w`` with relation t_w^p [t_w, g]. A tame place v
    contributes ``t_v`` and ``sp_v`` (standing for gamma^-q' s_v) with relation
    t_v^q [t_v, g^q' sp_v]; a wild place with n >= 2 also contributes
    ``t{i}_v``, ``s{i}_v`` for 2 <= i <= n and the commutator tail
    [t2_v, s2_v] ... [tn_v, sn_v]. ``free_rank`` adds free generators
    ``s_f1``, ``s_f2``, ... with the upper character.
    """
    check_prime(p)
    names = [pl.name for pl in places]
    if distinguished in names:
        raise ValueError(f"place {distinguished!r} is the distinguished place; do not list it again")
    if len(set(names)) != len(names):
        raise ValueError("place names must be unique")

    gens = [
        GenMeta("t_w", Block.XINF, Character.upper(), pinned=True),
        GenMeta("g", Block.GAMMA, Character.trivial(), pi=FreeWord.letter(GAMMA_LETTER)),
    ]
    t_w, g = FreeWord.letter("t_w"), FreeWord.letter("g")
    rels = [(f"r_{distinguished}", word_mul(word_pow(t_w, p), commutator(t_w, g)))]

    for pl in places:
        if pl.kind not in ("tame", "wild"):
            raise ValueError(f"place {pl.name}: kind must be 'tame' or 'wild', not {pl.kind!r}")
        if not _is_power_of(pl.q, p):
            raise ValueError(f"place {pl.name}: q = {pl.q} is not a power of {p}")
        qp = pl.q // p if pl.q_prime is None else pl.q_prime
        if qp < 1 or vp(qp, p) != vp(pl.q, p) - 1:
            raise ValueError(
                f"place {pl.name}: q' = {qp} must have p-adic valuation one less than q = {pl.q}"
            )
        if pl.kind == "wild" and pl.q != p:
            raise ValueError(f"wild place {pl.name}: q must equal p")
        if pl.kind == "tame" and pl.n != 1:
            raise ValueError(f"tame place {pl.name} takes no commutator tail")
        if pl.n < 1:
            raise ValueError(f"place {pl.name}: n must be >= 1")

        tn, sn = f"t_{pl.name}", f"sp_{pl.name}"
        gens.append(_gen(tn, pl, "t"))
        gens.append(_gen(sn, pl, "s"))
        t, s = FreeWord.letter(tn), FreeWord.letter(sn)
        word = word_mul(word_pow(t, pl.q), commutator(t, word_mul(word_pow(g, qp), s)))
        for i in range(2, pl.n + 1):
            ti, si = f"t{i}_{pl.name}", f"s{i}_{pl.name}"
            gens.append(_gen(ti, pl, f"t{i}"))
            gens.append(_gen(si, pl, f"s{i}"))
            word = word_mul(
                word, commutator(word_pow(FreeWord.letter(ti), i), word_pow(FreeWord.letter(si), i))
            )
        rels.append((f"r_{pl.name}", word))

    for i in range(1, free_rank + 1):
        gens.append(GenMeta(f"s_f{i}", Block.XINF, Character.upper()))

    return Presentation(
        p=p,
        N=prec,
        D=deg,
        diag=DiagonalCharacters(p, *chi),
        gens=tuple(gens),
        relations=tuple(rels),
        ties=tuple(ties),
        gamma_letters=(GAMMA_LETTER,),
    )


@dataclass(frozen=True)
class NewTame:
    """A free generator t_q added by allowing ramification at one more prime."""

    name: str
    character: Character = Character.upper()
    commutes: bool = False


def build_neumann_augmented(base: Presentation, new_tame: Sequence[NewTame]) -> Presentation:
    """Append free X_inf generators (no new relations); shapes are re-derived."""
    if not new_tame:
        return base
    taken = set(base.gen_names)
    extra = []
    for t in new_tame:
        if t.name in taken:
            raise ValueError(f"generator {t.name!r} already exists")
        taken.add(t.name)
        extra.append(GenMeta(t.name, Block.XINF, t.character, commutes=t.commutes))
    return replace(base, gens=tuple(base.gens) + tuple(extra))
