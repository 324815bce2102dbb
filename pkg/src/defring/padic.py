"""Fixed-precision arithmetic in Z/p^N Z, used as the truncated model of Z_p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb


class PrecisionMismatch(ValueError):
    """Operands live in different rings Z/p^N."""


class NotAUnit(ArithmeticError):
    """Raised when inverting an element divisible by p."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` if it is an odd prime, raise ``ValueError`` otherwise."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("p = 2 is not supported: the prime must be odd")
    return p


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def balanced(residue: int, modulus: int) -> int:
    """Representative of ``residue`` in the symmetric interval around 0."""
    r = residue % modulus
    return r - modulus if 2 * r > modulus else r


@dataclass(frozen=True, slots=True)
class PadicInt:
    """An element of Z/p^N Z.

    ``residue`` is always reduced into ``[0, p**N)``. Plain Python ints are
    coerced when mixed with a PadicInt in arithmetic.
    """

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.prime**self.precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if (other.prime, other.precision) != (self.prime, self.precision):
                raise PrecisionMismatch(
                    f"Z/{self.prime}^{self.precision} vs Z/{other.prime}^{other.precision}"
                )
            return other
        if isinstance(other, int):
            return PadicInt(self.prime, self.precision, other)
        return NotImplemented

    def _new(self, residue: int) -> PadicInt:
        return PadicInt(self.prime, self.precision, residue)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.residue + other.residue)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.residue - other.residue)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(other.residue - self.residue)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.residue * other.residue)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return self._new(pow(self.residue, e, self.modulus))

    def __int__(self):
        return self.residue

    def __bool__(self):
        return self.residue != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.residue == other % self.modulus
        if isinstance(other, PadicInt):
            return (self.prime, self.precision, self.residue) == (
                other.prime,
                other.precision,
                other.residue,
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.prime, self.precision, self.residue))

    def __repr__(self):
        return f"PadicInt({self.residue} mod {self.prime}^{self.precision})"

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def inv(self) -> PadicInt:
        if not self.is_unit():
            raise NotAUnit(f"{self.residue} is divisible by {self.prime}")
        return self._new(pow(self.residue, -1, self.modulus))

    def valuation(self) -> int:
        """p-adic valuation, with N standing for zero at this precision."""
        if self.residue == 0:
            return self.precision
        return vp(self.residue, self.prime)

    def lift(self) -> int:
        """Balanced integer representative, so small negatives come back negative."""
        return balanced(self.residue, self.modulus)


def add(a: PadicInt, b: PadicInt) -> PadicInt:
    return a + b


def sub(a: PadicInt, b: PadicInt) -> PadicInt:
    return a - b


def mul(a: PadicInt, b: PadicInt) -> PadicInt:
    return a * b


def neg(a: PadicInt) -> PadicInt:
    return -a


def inv(a: PadicInt) -> PadicInt:
    return a.inv()


def valuation(a: PadicInt) -> int:
    return a.valuation()


def binom_int(a: int, j: int) -> int:
    """Exact binomial coefficient C(a, j) for any integer a (including negative)."""
    if j < 0:
        return 0
    if a >= 0:
        return comb(a, j)
    # C(-m, j) = (-1)^j C(m + j - 1, j)
    return (-1) ** j * comb(-a + j - 1, j)


def binom_padic(a: PadicInt, j: int) -> PadicInt:
    """C(a, j) mod p^N.

    ``a`` is lifted to its balanced integer representative and the binomial
    is evaluated exactly before reduction. For the small integers that occur
    as Fox-matrix coefficients this is the true value; for general residues
    the result depends on the lift once ``j >= p``.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    return PadicInt(a.prime, a.precision, binom_int(a.lift(), j))


def teichmuller(a0: int, p: int, precision: int) -> PadicInt:
    """Teichmüller lift of ``a0 mod p``: the (p-1)-st root of unity congruent to it."""
    check_prime(p)
    if a0 % p == 0:
        raise ValueError("the Teichmüller lift is only defined for units")
    mod = p**precision
    x = a0 % p
    for _ in range(precision):
        x = pow(x, p, mod)
    return PadicInt(p, precision, x)
