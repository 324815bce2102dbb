"""Fox derivatives and the projected Fox matrix.

The Fox matrix has one row per generator and one column per relation; entry
(i, j) is the image in the Magnus algebra of d r_j / d s_i under the
projection onto Gamma. Keeping only the rows of the X_inf generators gives a
relation matrix of X_inf as a module over the Iwasawa/Magnus algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Mapping, Sequence

from .freegroup import FreeWord, GroupRingElt, word_mul, word_pow
from .series import MagnusSeries, gamma_embed

if TYPE_CHECKING:
    from .presentation import Presentation


@lru_cache(maxsize=65536)
def fox_derivative(w: FreeWord, s: str) -> GroupRingElt:
    """d w / d s in the integral group ring of the free group.

    Uses d(uv) = du + u dv syllable by syllable, with
    d(s^e) = 1 + s + ... + s^(e-1) for e > 0 and
    d(s^e) = -(s^-1 + s^-2 + ... + s^e) for e < 0.
    """
    terms: dict[FreeWord, int] = {}
    prefix = FreeWord.identity()
    for name, e in w.syllables:
        if name == s:
            if e > 0:
                for k in range(e):
                    u = word_mul(prefix, FreeWord.letter(s, k))
                    terms[u] = terms.get(u, 0) + 1
            else:
                for k in range(1, -e + 1):
                    u = word_mul(prefix, FreeWord.letter(s, -k))
                    terms[u] = terms.get(u, 0) - 1
        prefix = word_mul(prefix, FreeWord.letter(name, e))
    return GroupRingElt(terms)


@dataclass(frozen=True)
class Projection:
    """The map from the free group onto Gamma, given on generators.

    ``images[name]`` is a word in the Gamma letters; generators of X_inf map
    to the empty word. ``letters`` fixes the order T_1, ..., T_k.
    """

    images: Mapping[str, FreeWord]
    letters: tuple[str, ...]
    p: int
    N: int
    D: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.letters)

    def gamma_word(self, w: FreeWord) -> FreeWord:
        out = FreeWord.identity()
        for name, e in w.syllables:
            try:
                img = self.images[name]
            except KeyError:
                raise KeyError(f"generator {name!r} has no projection") from None
            if img:
                out = word_mul(out, word_pow(img, e))
        return out

    def embed(self, w: FreeWord) -> MagnusSeries:
        g = self.gamma_word(w)
        if g not in self._cache:
            self._cache[g] = gamma_embed(g, self.letters, self.p, self.N, self.D)
        return self._cache[g]


def project(e: GroupRingElt, pi: Projection) -> MagnusSeries:
    """Linear extension of the Magnus image of pi to the group ring."""
    out = MagnusSeries(pi.k, pi.p, pi.N, pi.D)
    collected: dict[FreeWord, int] = {}
    for w, c in e.terms.items():
        g = pi.gamma_word(w)
        collected[g] = collected.get(g, 0) + c
    for g, c in collected.items():
        if c % out.mod:
            if g not in pi._cache:
                pi._cache[g] = gamma_embed(g, pi.letters, pi.p, pi.N, pi.D)
            out = out + pi._cache[g] * c
    return out


@dataclass
class FoxMatrix:
    """Rows are generators, columns are relations."""

    rows: list[str]
    cols: list[str]
    entries: list[list[MagnusSeries]]
    k: int
    p: int
    N: int
    D: int

    def __getitem__(self, ij):
        i, j = ij
        if isinstance(i, str):
            i = self.rows.index(i)
        if isinstance(j, str):
            j = self.cols.index(j)
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def column(self, j) -> list[MagnusSeries]:
        if isinstance(j, str):
            j = self.cols.index(j)
        return [row[j] for row in self.entries]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "prec": self.N,
            "deg": self.D,
            "orientation": "rows=generators, columns=relations",
            "rows": list(self.rows),
            "columns": list(self.cols),
            "entries": [[str(x) for x in row] for row in self.entries],
        }


def fox_matrix_of(
    relations: Sequence[tuple[str, FreeWord]], generators: Sequence[str], pi: Projection
) -> FoxMatrix:
    entries = [
        [project(fox_derivative(r, s), pi) for _, r in relations] for s in generators
    ]
    return FoxMatrix(
        rows=list(generators),
        cols=[name for name, _ in relations],
        entries=entries,
        k=pi.k,
        p=pi.p,
        N=pi.N,
        D=pi.D,
    )


def fox_matrix(pres: Presentation) -> FoxMatrix:
    """Projected Fox matrix of a presentation, all d generators by r relations."""
    return fox_matrix_of(pres.relations, pres.gen_names, pres.projection())


def restrict_to_xinf(M: FoxMatrix, n: int) -> FoxMatrix:
    """Drop the Gamma-tilde rows, keeping the first ``n`` (X_inf) rows."""
    d = len(M.rows)
    if not 0 <= n <= d:
        raise ValueError(f"cannot keep {n} rows of a {d}-row matrix")
    return FoxMatrix(
        rows=M.rows[:n],
        cols=list(M.cols),
        entries=[list(r) for r in M.entries[:n]],
        k=M.k,
        p=M.p,
        N=M.N,
        D=M.D,
    )
