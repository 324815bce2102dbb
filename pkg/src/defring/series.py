"""Truncated power series over Z/p^N.

``MagnusSeries`` is the noncommutative algebra Z_p[[T_1..T_k]] cut at total
degree D; monomials are tuples of variable indices, so ``(0, 1)`` is T_1 T_2.
``CommSeries`` is the commutative ring Z_p[[Y_1..Y_m]] cut at total degree D;
monomials are exponent vectors.

Coefficients are stored as residues in ``[0, p**N)``; ``coefficient`` hands
them out as :class:`PadicInt`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence, TypeVar, Union

from .freegroup import FreeWord
from .padic import NotAUnit, PadicInt, PrecisionMismatch, balanced, binom_int, check_prime

Scalar = Union[int, PadicInt]
S = TypeVar("S", bound="_Series")


class _Series:
    __slots__ = ("nvars", "p", "N", "D", "mod", "coeffs")

    def __init__(self, nvars: int, p: int, N: int, D: int, coeffs: Mapping | None = None):
        check_prime(p)
        if N < 1 or D < 0:
            raise ValueError("need precision >= 1 and degree cap >= 0")
        self.nvars = nvars
        self.p = p
        self.N = N
        self.D = D
        self.mod = p**N
        out = {}
        for mono, c in (coeffs or {}).items():
            if self._deg(mono) > D:
                continue
            c = int(c) % self.mod
            if c:
                out[mono] = c
        self.coeffs: dict = out

    # subclass hooks
    @staticmethod
    def _deg(mono) -> int:
        raise NotImplementedError

    @staticmethod
    def _combine(a, b):
        raise NotImplementedError

    def _unit_mono(self):
        raise NotImplementedError

    # construction helpers
    def _like(self: S, coeffs: Mapping) -> S:
        return type(self)(self.nvars, self.p, self.N, self.D, coeffs)

    def _params(self):
        return (self.nvars, self.p, self.N, self.D)

    def _check(self, other: _Series):
        if type(other) is not type(self) or other._params() != self._params():
            theirs = other._params() if isinstance(other, _Series) else type(other).__name__
            raise PrecisionMismatch(f"series parameters differ: {self._params()} vs {theirs}")

    def _scalar(self, c: Scalar) -> int:
        if isinstance(c, PadicInt):
            if (c.prime, c.precision) != (self.p, self.N):
                raise PrecisionMismatch("scalar lives in a different Z/p^N")
            return c.residue
        return int(c)

    def const(self: S, c: Scalar) -> S:
        return self._like({self._unit_mono(): self._scalar(c)})

    def one(self: S) -> S:
        return self.const(1)

    def zero(self: S) -> S:
        return self._like({})

    # arithmetic
    def __add__(self: S, other) -> S:
        if isinstance(other, (int, PadicInt)):
            other = self.const(other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self: S) -> S:
        return self._like({m: -c for m, c in self.coeffs.items()})

    def __sub__(self: S, other) -> S:
        if isinstance(other, (int, PadicInt)):
            other = self.const(other)
        return self + (-other)

    def __rsub__(self: S, other) -> S:
        return (-self) + other

    def __mul__(self: S, other) -> S:
        if isinstance(other, (int, PadicInt)):
            c = self._scalar(other)
            return self._like({m: c * x for m, x in self.coeffs.items()})
        if not isinstance(other, _Series):
            return NotImplemented
        self._check(other)
        return self._like(_truncated_product(self, other))

    def __rmul__(self: S, other) -> S:
        if isinstance(other, (int, PadicInt)):
            return self * other
        return NotImplemented

    def __pow__(self: S, e: int) -> S:
        if e < 0:
            return unit_inv(self) ** (-e)
        out = self.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.const(other)
        if not isinstance(other, _Series):
            return NotImplemented
        return type(self) is type(other) and self._params() == other._params() and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self._params(), frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    # inspection
    def coefficient(self, mono) -> PadicInt:
        return PadicInt(self.p, self.N, self.coeffs.get(mono, 0))

    def constant(self) -> PadicInt:
        return self.coefficient(self._unit_mono())

    def valuation_degree(self) -> int:
        """Lowest degree carrying a nonzero coefficient (D + 1 for the zero series)."""
        return min((self._deg(m) for m in self.coeffs), default=self.D + 1)

    def truncate(self: S, D: int) -> S:
        return type(self)(self.nvars, self.p, self.N, D, self.coeffs)

    def terms(self):
        """``(monomial, balanced integer coefficient)`` in canonical order."""
        for m in sorted(self.coeffs, key=self._sort_key):
            yield m, balanced(self.coeffs[m], self.mod)

    def _sort_key(self, mono):
        raise NotImplementedError


def _truncated_product(a: _Series, b: _Series) -> dict:
    D = a.D
    deg = a._deg
    combine = a._combine
    by_deg: dict[int, list] = {}
    for m, c in b.coeffs.items():
        by_deg.setdefault(deg(m), []).append((m, c))
    b_levels = sorted(by_deg.items())
    out: dict = {}
    for ma, ca in a.coeffs.items():
        room = D - deg(ma)
        for db, items in b_levels:
            if db > room:
                break
            for mb, cb in items:
                m = combine(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
    return out


class MagnusSeries(_Series):
    """Element of the truncated Magnus algebra on ``k`` variables."""

    __slots__ = ()

    def __init__(self, k: int, p: int, N: int, D: int, coeffs: Mapping | None = None):
        super().__init__(k, p, N, D, coeffs)

    @property
    def k(self) -> int:
        return self.nvars

    @staticmethod
    def _deg(mono) -> int:
        return len(mono)

    @staticmethod
    def _combine(a, b):
        return a + b

    def _unit_mono(self):
        return ()

    def _sort_key(self, mono):
        return (len(mono), mono)

    @classmethod
    def variable(cls, i: int, k: int, p: int, N: int, D: int) -> MagnusSeries:
        """T_{i+1} (0-based index ``i``)."""
        return cls(k, p, N, D, {(i,): 1})

    def only_uses(self, i: int) -> bool:
        return all(all(x == i for x in m) for m in self.coeffs)

    def __str__(self):
        return render_magnus(self)

    def __repr__(self):
        return f"MagnusSeries(k={self.k}, p={self.p}, N={self.N}, D={self.D}: {self})"


class CommSeries(_Series):
    """Element of Z/p^N [[Y_1..Y_m]] truncated at total degree D."""

    __slots__ = ()

    def __init__(self, m: int, p: int, N: int, D: int, coeffs: Mapping | None = None):
        super().__init__(m, p, N, D, coeffs)

    @property
    def m(self) -> int:
        return self.nvars

    @staticmethod
    def _deg(mono) -> int:
        return sum(mono)

    @staticmethod
    def _combine(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _unit_mono(self):
        return (0,) * self.nvars

    def _sort_key(self, mono):
        return (sum(mono), tuple(-e for e in mono))

    @classmethod
    def variable(cls, i: int, m: int, p: int, N: int, D: int) -> CommSeries:
        """Y_{i+1} (0-based index ``i``)."""
        mono = [0] * m
        mono[i] = 1
        return cls(m, p, N, D, {tuple(mono): 1})

    def divisible_by(self, i: int) -> bool:
        """Every monomial contains Y_{i+1}."""
        return all(mono[i] > 0 for mono in self.coeffs)

    def substitute(self, images: Sequence[CommSeries]) -> CommSeries:
        """Replace Y_j by ``images[j]`` (ring homomorphism, truncated)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        out = images[0].zero() if images else self.zero()
        powers: dict[tuple[int, int], CommSeries] = {}

        def power(j, e):
            key = (j, e)
            if key not in powers:
                powers[key] = images[j] ** e
            return powers[key]

        for mono, c in self.coeffs.items():
            term = out.one() * c
            for j, e in enumerate(mono):
                if e:
                    term = term * power(j, e)
            out = out + term
        return out

    def __str__(self):
        return render_comm(self)

    def __repr__(self):
        return f"CommSeries(m={self.m}, p={self.p}, N={self.N}, D={self.D}: {self})"


# -- operations -------------------------------------------------------------


def m_add(a: MagnusSeries, b: MagnusSeries) -> MagnusSeries:
    return a + b


def m_mul(a: MagnusSeries, b: MagnusSeries) -> MagnusSeries:
    return a * b


def c_add(a: CommSeries, b: CommSeries) -> CommSeries:
    return a + b


def c_mul(a: CommSeries, b: CommSeries) -> CommSeries:
    return a * b


def unit_inv(a: S) -> S:
    """Two-sided inverse of a series with unit constant term.

    Writes a = c (1 + u) with u in the augmentation ideal and sums the
    geometric series c^-1 (1 - u + u^2 - ...) through degree D.
    """
    c = a.constant()
    if not c.is_unit():
        raise NotAUnit(f"constant term {c.residue} is not a unit mod {a.p}^{a.N}")
    c_inv = c.inv()
    u = a * c_inv - 1
    out = a.one()
    term = a.one()
    for _ in range(a.D):
        term = -(term * u)
        if not term:
            break
        out = out + term
    return out * c_inv


def pow_padic(u: S, a: Scalar) -> S:
    """u^a for u = 1 + (augmentation part) and a p-adic exponent.

    Expands sum_j C(a, j) (u - 1)^j through degree D, with binomials taken
    at the balanced integer lift of ``a``.
    """
    if u.constant() != 1:
        raise ValueError("pow_padic needs a series with constant term 1")
    if isinstance(a, PadicInt):
        if (a.prime, a.precision) != (u.p, u.N):
            raise PrecisionMismatch("exponent lives in a different Z/p^N")
        a_int = a.lift()
    else:
        a_int = int(a)
    x = u - 1
    out = u.one()
    xj = u.one()
    for j in range(1, u.D + 1):
        xj = xj * x
        if not xj:
            break
        out = out + xj * binom_int(a_int, j)
    return out


@lru_cache(maxsize=4096)
def _gamma_power(i: int, e: int, k: int, p: int, N: int, D: int) -> MagnusSeries:
    one_plus_t = MagnusSeries(k, p, N, D, {(): 1, (i,): 1})
    return pow_padic(one_plus_t, e)


def gamma_embed(w: FreeWord, letters: Sequence[str], p: int, N: int, D: int) -> MagnusSeries:
    """Magnus image of a word in the Gamma generators: gamma_i -> 1 + T_i."""
    index = {name: i for i, name in enumerate(letters)}
    k = len(letters)
    out = MagnusSeries(k, p, N, D, {(): 1})
    for name, e in w.syllables:
        if name not in index:
            raise KeyError(f"{name!r} is not a Gamma generator")
        out = out * _gamma_power(index[name], e, k, p, N, D)
    return out


def subst_T(f: MagnusSeries, W: CommSeries, active: int = 0) -> CommSeries:
    """Substitute T_active -> W and every other T -> 0.

    With k = 1 this is plain substitution f(W). ``W`` must have zero constant
    term so the result converges in the degree filtration.
    """
    if W.constant() != 0:
        raise ValueError("substituted series must have zero constant term")
    if (f.p, f.N) != (W.p, W.N):
        raise PrecisionMismatch("series over different Z/p^N")
    by_len: dict[int, int] = {}
    for mono, c in f.coeffs.items():
        if all(x == active for x in mono):
            by_len[len(mono)] = c
    out = W.zero()
    Wj = W.one()
    for j in range(0, max(by_len, default=-1) + 1):
        if j:
            Wj = Wj * W
            if not Wj:
                break
        if j in by_len:
            out = out + Wj * by_len[j]
    return out


def coeff_expansion(f: MagnusSeries) -> tuple[PadicInt, list[PadicInt]]:
    """Split a one-variable series as a + sum_k b_k T^k, k = 1..D."""
    if f.k != 1:
        raise ValueError("coefficient expansion needs a one-variable series (k = 1)")
    a = f.constant()
    b = [f.coefficient((0,) * j) for j in range(1, f.D + 1)]
    return a, b


# -- rendering --------------------------------------------------------------


def _join_terms(pieces: Iterable[tuple[int, str]]) -> str:
    out = []
    for c, mono in pieces:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out) if out else "0"


def comm_var_names(m: int) -> list[str]:
    return [f"Y_{i + 1}" for i in range(m)]


def render_comm(s: CommSeries, names: Sequence[str] | None = None) -> str:
    """Canonical text: graded order, balanced coefficients, ``Y_i^e`` factors."""
    names = names or comm_var_names(s.m)
    pieces = []
    for mono, c in s.terms():
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
        pieces.append((c, "*".join(factors)))
    return _join_terms(pieces)


def render_magnus(s: MagnusSeries) -> str:
    names = ["T"] if s.k == 1 else [f"T_{i + 1}" for i in range(s.k)]
    pieces = []
    for mono, c in s.terms():
        runs: list[list[int]] = []
        for x in mono:
            if runs and runs[-1][0] == x:
                runs[-1][1] += 1
            else:
                runs.append([x, 1])
        factors = [names[x] if e == 1 else f"{names[x]}^{e}" for x, e in runs]
        pieces.append((c, "*".join(factors)))
    return _join_terms(pieces)
