"""Reduced words in a free group and the integral group ring Z[F]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


@dataclass(frozen=True)
class Gen:
    index: int
    name: str


class FreeWord:
    """A freely reduced word, stored as syllables ``(letter, exponent)``.

    Letters are generator names. Instances are immutable and hashable.
    """

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[tuple[str, int]] = ()):
        self.syllables: tuple[tuple[str, int], ...] = _reduce(syllables)
        self._hash = hash(self.syllables)

    @classmethod
    def letter(cls, name: str, exp: int = 1) -> FreeWord:
        return cls(((name, exp),))

    @classmethod
    def identity(cls) -> FreeWord:
        return _EMPTY

    def __eq__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.syllables == other.syllables

    def __hash__(self):
        return self._hash

    def __len__(self):
        """Length as a word in letters and inverse letters."""
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return word_mul(self, other)

    def __pow__(self, e: int) -> FreeWord:
        return word_pow(self, e)

    def __invert__(self) -> FreeWord:
        return word_inv(self)

    def __repr__(self):
        return f"FreeWord({self})"

    def __str__(self):
        if not self.syllables:
            return "1"
        return " * ".join(name if e == 1 else f"{name}^{e}" for name, e in self.syllables)

    def letters(self) -> Iterator[tuple[str, int]]:
        """Iterate single letters as ``(name, +1 or -1)``."""
        for name, e in self.syllables:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield name, step

    def alphabet(self) -> set[str]:
        return {name for name, _ in self.syllables}


def _reduce(syllables: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for name, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == name:
            e += out[-1][1]
            out.pop()
            if e != 0:
                out.append((name, e))
        else:
            out.append((name, e))
    return tuple(out)


_EMPTY = FreeWord()


def word_mul(u: FreeWord, v: FreeWord) -> FreeWord:
    if not u.syllables:
        return v
    if not v.syllables:
        return u
    return FreeWord(u.syllables + v.syllables)


def word_inv(u: FreeWord) -> FreeWord:
    return FreeWord(tuple((name, -e) for name, e in reversed(u.syllables)))


def word_pow(u: FreeWord, e: int) -> FreeWord:
    if e < 0:
        u, e = word_inv(u), -e
    if len(u.syllables) == 1:
        name, a = u.syllables[0]
        return FreeWord(((name, a * e),))
    out = _EMPTY
    for _ in range(e):
        out = word_mul(out, u)
    return out


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    """[u, v] = u v u^-1 v^-1."""
    return FreeWord(u.syllables + v.syllables + word_inv(u).syllables + word_inv(v).syllables)


class GroupRingElt:
    """Finite Z-linear combination of reduced words.

    Coefficients are exact integers; reduction mod p^N happens only when the
    element is projected into a Magnus algebra.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FreeWord, int] | None = None):
        self.terms: dict[FreeWord, int] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w: FreeWord, c: int = 1) -> GroupRingElt:
        return cls({w: c})

    @classmethod
    def one(cls) -> GroupRingElt:
        return cls({_EMPTY: 1})

    @classmethod
    def zero(cls) -> GroupRingElt:
        return cls()

    def __eq__(self, other):
        if not isinstance(other, GroupRingElt):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: GroupRingElt) -> GroupRingElt:
        return gr_add(self, other)

    def __sub__(self, other: GroupRingElt) -> GroupRingElt:
        return gr_add(self, gr_scale(other, -1))

    def __neg__(self):
        return gr_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, int):
            return gr_scale(self, other)
        if isinstance(other, GroupRingElt):
            return gr_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"GroupRingElt({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), str(t[0]))):
            parts.append(f"{c}*({w})")
        return " + ".join(parts)


def gr_add(a: GroupRingElt, b: GroupRingElt) -> GroupRingElt:
    out = dict(a.terms)
    for w, c in b.terms.items():
        out[w] = out.get(w, 0) + c
    return GroupRingElt(out)


def gr_scale(a: GroupRingElt, c: int) -> GroupRingElt:
    return GroupRingElt({w: c * x for w, x in a.terms.items()})


def gr_mul_word_left(w: FreeWord, e: GroupRingElt) -> GroupRingElt:
    out: dict[FreeWord, int] = {}
    for u, c in e.terms.items():
        wu = word_mul(w, u)
        out[wu] = out.get(wu, 0) + c
    return GroupRingElt(out)


def gr_mul(a: GroupRingElt, b: GroupRingElt) -> GroupRingElt:
    out: dict[FreeWord, int] = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            uv = word_mul(u, v)
            out[uv] = out.get(uv, 0) + c * d
    return GroupRingElt(out)
