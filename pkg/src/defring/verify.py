"""Independent checks: evaluate relations on universal matrices, test ideal membership.

Membership is decided at truncation: f lies in the ideal modulo (p^N, degree
> D) iff the linear system  f = sum_j mu_j g_j  (mu_j running over monomials
of low enough degree) is solvable over Z/p^N. That is a necessary condition
for membership in the true ideal, not a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from .freegroup import FreeWord
from .padic import NotAUnit
from .series import CommSeries, unit_inv

if TYPE_CHECKING:
    from .deform import MatAssignment, RingPresentation
    from .presentation import Presentation


# -- 2x2 matrices over truncated series -------------------------------------


@dataclass(frozen=True)
class MatRep:
    """A 2x2 matrix [[a, b], [c, d]] with CommSeries entries."""

    a: CommSeries
    b: CommSeries
    c: CommSeries
    d: CommSeries

    @classmethod
    def identity(cls, like: CommSeries) -> MatRep:
        return cls(like.one(), like.zero(), like.zero(), like.one())

    @classmethod
    def of(cls, rows) -> MatRep:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def entries(self) -> list[tuple[str, CommSeries]]:
        return [("(1,1)", self.a), ("(1,2)", self.b), ("(2,1)", self.c), ("(2,2)", self.d)]

    def det(self) -> CommSeries:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: MatRep) -> MatRep:
        return mat_mul(self, other)

    def __sub__(self, other: MatRep) -> MatRep:
        return MatRep(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __pow__(self, e: int) -> MatRep:
        return mat_pow(self, e)

    def to_rows(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def mat_mul(A: MatRep, B: MatRep) -> MatRep:
    return MatRep(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
    )


def mat_inv(A: MatRep) -> MatRep:
    det = A.det()
    try:
        di = unit_inv(det)
    except NotAUnit:
        raise NotAUnit(f"determinant {det} is not a unit") from None
    return MatRep(A.d * di, -A.b * di, -A.c * di, A.a * di)


def mat_pow(A: MatRep, e: int) -> MatRep:
    if e < 0:
        A, e = mat_inv(A), -e
    out = MatRep.identity(A.a)
    base = A
    while e:
        if e & 1:
            out = mat_mul(out, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return out


def evaluate_word(w: FreeWord, images: Mapping[str, MatRep], like: CommSeries | None = None) -> MatRep:
    """rho(w) as a product of assigned images raised to syllable exponents."""
    if like is None:
        if not images:
            raise ValueError("need at least one image or a template series")
        like = next(iter(images.values())).a
    out = MatRep.identity(like)
    inverses: dict[str, MatRep] = {}
    for name, e in w.syllables:
        if name not in images:
            raise KeyError(f"letter {name!r} has no assigned matrix")
        M = images[name]
        if e < 0:
            if name not in inverses:
                inverses[name] = mat_inv(M)
            M, e = inverses[name], -e
        out = mat_mul(out, mat_pow(M, e))
    return out


# -- closed-form action checks -----------------------------------------------


@dataclass
class LemmaReport:
    case: str
    passed: bool
    lhs: MatRep
    expected: MatRep
    det_ok: bool | None = None

    def __str__(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = "" if self.det_ok is None else f", det = 1: {self.det_ok}"
        return f"case {self.case}: {tag}{extra}"


def check_action_lemma(case: str, p: int = 5, N: int = 3, D: int = 8) -> LemmaReport:
    """Commutators of generic special images against their closed forms.

    (i)   s = diag(1+Y, 1+Y'), x = [[1, U], [0, 1]]:
          s x s^-1 x^-1 = [[1, ((1+Y)/(1+Y') - 1) U], [0, 1]]
    (ii)  s = [[1, 0], [Y, 1]], x = [[1, U], [0, 1]]:
          [s, x] = [[1 - YU, YU^2], [-Y^2 U, Y^2 U^2 + YU + 1]], determinant 1
    (iii) s = (1+Y) Id, x = [[1, U], [0, 1]]: [s, x] = Id
    """
    var = lambda i: CommSeries.variable(i, 3, p, N, D)  # noqa: E731
    Y, Y2, U = var(0), var(1), var(2)
    one, zero = Y.one(), Y.zero()
    x = MatRep(one, U, zero, one)
    if case == "i":
        s = MatRep(one + Y, zero, zero, one + Y2)
        W = (one + Y) * unit_inv(one + Y2) - 1
        expected = MatRep(one, W * U, zero, one)
    elif case == "ii":
        s = MatRep(one, zero, Y, one)
        expected = MatRep(one - Y * U, Y * U * U, -(Y * Y * U), Y * Y * U * U + Y * U + one)
    elif case == "iii":
        s = MatRep(one + Y, zero, zero, one + Y)
        expected = MatRep.identity(one)
    else:
        raise ValueError(f"unknown case {case!r}; use i, ii or iii")
    lhs = s * x * mat_inv(s) * mat_inv(x)
    det_ok = (expected.det() == one) if case == "ii" else None
    passed = lhs == expected and det_ok is not False
    return LemmaReport(case, passed, lhs, expected, det_ok)


# -- ideal membership at truncation ------------------------------------------


def _monomials(m: int, max_deg: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(max_deg + 1):
        for combo in combinations_with_replacement(range(m), deg):
            mono = [0] * m
            for i in combo:
                mono[i] += 1
            out.append(tuple(mono))
    return out


class IdealSolver:
    """Reduce the linear span of {mu * g_j : deg mu <= D - lowdeg g_j} over Z/p^N.

    The elimination is done once per generator list; :meth:`member` then
    tests right-hand sides against the stored pivots.
    """

    def __init__(self, gens: Sequence[CommSeries], like: CommSeries):
        self.like = like
        self.p, self.N, self.D, self.m = like.p, like.N, like.D, like.m
        self.mod = like.mod
        self.gens = [g for g in gens if g]
        self._exact = {g for g in self.gens} | {-g for g in self.gens}
        self.rows = _monomials(self.m, self.D)
        self.row_of = {mono: i for i, mono in enumerate(self.rows)}
        self.dtype = np.int64 if self.mod * self.mod < 2**62 else object
        self.steps = None

    def _ensure(self):
        if self.steps is None:
            self._eliminate()

    def _columns(self):
        for g in self.gens:
            low = g.valuation_degree()
            for mu in _monomials(self.m, self.D - low):
                col = {}
                for mono, c in g.coeffs.items():
                    prod = tuple(a + b for a, b in zip(mono, mu))
                    if sum(prod) <= self.D:
                        col[self.row_of[prod]] = c
                if col:
                    yield col

    def _eliminate(self):
        cols = list(self._columns())
        A = np.zeros((len(self.rows), len(cols)), dtype=self.dtype)
        for j, col in enumerate(cols):
            for i, c in col.items():
                A[i, j] = c
        self.steps = []  # (level, pivot row, factors for every row)
        p, mod = self.p, self.mod
        for v in range(self.N):
            pv = p**v
            while True:
                val_v = (A % (pv * p) != 0) & (A % pv == 0) if A.size else np.zeros((0, 0), bool)
                hits = np.argwhere(val_v)
                if hits.size == 0:
                    break
                r, c = hits[0]
                unit = int(A[r, c]) // pv
                u_inv = pow(unit, -1, mod)
                col = A[:, c].copy()
                factors = (col // pv) * u_inv % mod if self.dtype is object else ((col // pv) % mod * u_inv) % mod
                factors[r] = 0
                A = (A - np.outer(factors, A[r]) % mod) % mod
                self.steps.append((v, int(r), factors))
                A[r, :] = 0
                A[:, c] = 0

    def _vector(self, f: CommSeries) -> np.ndarray:
        b = np.zeros(len(self.rows), dtype=self.dtype)
        for mono, c in f.coeffs.items():
            b[self.row_of[mono]] = c
        return b

    def _reduce(self, f: CommSeries, strict: bool):
        b = self._vector(f)
        p, mod = self.p, self.mod
        for v, r, factors in self.steps:
            br = int(b[r])
            if br == 0:
                continue
            if br % (p**v):
                if strict:
                    return None
                continue
            b = (b - factors * br % mod) % mod
            b[r] = 0
        return b

    def member(self, f: CommSeries) -> bool:
        if not f or f in self._exact:
            return True
        if not self.gens:
            return False
        self._ensure()
        b = self._reduce(f, strict=True)
        return b is not None and not b.any()

    def residual(self, f: CommSeries) -> CommSeries:
        """What is left of f after reduction; zero for members."""
        if not f or f in self._exact:
            return f.zero()
        self._ensure()
        b = self._reduce(f, strict=False)
        return type(f)(self.m, self.p, self.N, self.D, {self.rows[i]: int(x) for i, x in enumerate(b) if x})


def ideal_member(f: CommSeries, gens: Sequence[CommSeries]) -> bool:
    """Is f in the ideal generated by ``gens`` modulo (p^N, degree > D)?"""
    for g in gens:
        f._check(g)
    return IdealSolver(gens, f).member(f)


# -- relation check -----------------------------------------------------------


@dataclass
class EntryFailure:
    relation: str
    entry: str
    residue: str

    def __str__(self):
        return f"relation {self.relation}, entry {self.entry}: {self.residue} not in I"


@dataclass
class RelationReport:
    p: int
    N: int
    D: int
    failures: list[EntryFailure] = field(default_factory=list)
    exact: list[tuple[str, str, str]] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "prec": self.N,
            "deg": self.D,
            "passed": self.passed,
            "relations": self.checked,
            "failures": [
                {"relation": f.relation, "entry": f.entry, "residue": f.residue} for f in self.failures
            ],
            "exact_matches": [
                {"relation": r, "entry": e, "generator": g} for r, e, g in self.exact
            ],
        }

    def __str__(self):
        head = f"# p = {self.p}, prec = {self.N}, deg = {self.D}"
        lines = [head]
        for r, e, g in self.exact:
            lines.append(f"relation {r}, entry {e}: equals ideal generator {g}")
        for f in self.failures:
            lines.append(str(f))
        n = len(self.checked)
        lines.append(
            f"PASS: {n} relation(s) map into I" if self.passed else f"FAIL: {len(self.failures)} entry failure(s)"
        )
        return "\n".join(lines)


def check_relations(pres: Presentation, rp: RingPresentation, asg: MatAssignment) -> RelationReport:
    """For every relation r, each entry of rho(r) - Id must lie in I at truncation."""
    like = CommSeries(rp.d_prime, rp.p, rp.N, rp.D)
    gens = [g.series for g in rp.ideal]
    solver = IdealSolver(gens, like)
    named = {}
    for g in rp.ideal:
        named.setdefault(g.series, f"{g.family}:{g.relation}")
        named.setdefault(-g.series, f"{g.family}:{g.relation}")
    report = RelationReport(rp.p, rp.N, rp.D)
    ident = MatRep.identity(like)
    for rname, w in pres.relations:
        report.checked.append(rname)
        E = evaluate_word(w, asg.images, like) - ident
        for pos, entry in E.entries():
            if not entry:
                continue
            if entry in named:
                report.exact.append((rname, pos, named[entry]))
                continue
            if not solver.member(entry):
                report.failures.append(EntryFailure(rname, pos, str(solver.residual(entry))))
    return report
