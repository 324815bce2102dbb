"""Annotated pro-p presentations: generators with character data, relations, ties."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from ..fox import Projection
from ..freegroup import FreeWord
from ..padic import check_prime


class ValidationError(ValueError):
    """A presentation breaks a structural requirement."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(v.message for v in self.violations) or "invalid presentation"
        super().__init__(msg)


class BorelCaseError(ValueError):
    """The diagonal characters satisfy chi1 = chi2 or chi1 = -chi2."""


class IncomparableCharacters(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Character:
    """omega^omega * chi1^e1 * chi2^e2, a character of A.

    Kept in the form the user wrote it; comparisons go through
    :class:`DiagonalCharacters`, which knows what chi1 and chi2 are.
    """

    omega: int = 0
    e1: int = 0
    e2: int = 0

    @classmethod
    def trivial(cls) -> Character:
        return cls()

    @classmethod
    def upper(cls) -> Character:
        """chi1 * chi2^-1, the character of upper unipotent images."""
        return cls(0, 1, -1)

    @classmethod
    def lower(cls) -> Character:
        return cls(0, -1, 1)

    def __mul__(self, other: Character) -> Character:
        return Character(self.omega + other.omega, self.e1 + other.e1, self.e2 + other.e2)

    def __str__(self):
        parts = []
        if self.omega:
            parts.append(f"omega^{self.omega}")
        for name, e in (("chi1", self.e1), ("chi2", self.e2)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class DiagonalCharacters:
    """The pair (chi1, chi2) on the diagonal of the residual representation.

    Either both are powers of the Teichmüller character (``chi1_omega`` and
    ``chi2_omega`` set) or both are left symbolic. In symbolic mode complex
    conjugation is normalized to diag(1, -1): chi1 even, chi2 odd, and
    characters are compared as formal words in chi1, chi2.
    """

    p: int
    chi1_omega: int | None = None
    chi2_omega: int | None = None

    def __post_init__(self):
        if (self.chi1_omega is None) != (self.chi2_omega is None):
            raise ValueError("give both chi1 and chi2 as omega powers, or neither")

    @property
    def numeric(self) -> bool:
        return self.chi1_omega is not None

    @property
    def order(self) -> int:
        return self.p - 1

    def resolve(self, ch: Character):
        """Normal form: ``("omega", m mod p-1)`` or ``("sym", e1, e2)``."""
        if self.numeric:
            m = ch.omega + ch.e1 * self.chi1_omega + ch.e2 * self.chi2_omega
            return ("omega", m % self.order)
        if ch.omega % self.order:
            if ch.e1 or ch.e2:
                raise IncomparableCharacters(
                    f"{ch} mixes omega with symbolic chi1/chi2"
                )
            return ("omega", ch.omega % self.order)
        return ("sym", ch.e1, ch.e2)

    def equal(self, a: Character, b: Character) -> bool:
        ra, rb = self.resolve(a), self.resolve(b)
        if ra[0] != rb[0]:
            if self.is_trivial(a) and self.is_trivial(b):
                return True
            return False
        return ra == rb

    def is_trivial(self, ch: Character) -> bool:
        r = self.resolve(ch)
        return r == ("omega", 0) or r == ("sym", 0, 0)

    def is_odd(self, ch: Character) -> bool:
        """Value at complex conjugation is -1."""
        r = self.resolve(ch)
        if r[0] == "omega":
            return r[1] % 2 == 1
        return r[2] % 2 == 1

    def borel_violation(self) -> str | None:
        if not self.numeric:
            return None
        m1, m2, o = self.chi1_omega % self.order, self.chi2_omega % self.order, self.order
        if m1 == m2:
            return "chi1 = chi2"
        if m1 == (m2 + o // 2) % o:
            return "chi1 = -chi2"
        return None

    def odd_violation(self) -> str | None:
        if not self.numeric:
            return None
        if (self.chi1_omega + self.chi2_omega) % 2 == 0:
            return "residual representation is even (chi1*chi2 at complex conjugation is +1)"
        return None


class ImageShape(enum.Enum):
    SCALAR = "scalar"
    DIAGONAL = "diagonal"
    UPPER = "upper"
    PINNED = "pinned"
    LOWER = "lower"
    IDENTITY = "identity"

    @property
    def var_count(self) -> int:
        return {"scalar": 1, "diagonal": 2, "upper": 1, "pinned": 0, "lower": 1, "identity": 0}[
            self.value
        ]


class Block(enum.Enum):
    XINF = "Xinf"
    GAMMA = "Gamma"


_XINF_RANK = {
    ImageShape.SCALAR: 0,
    ImageShape.DIAGONAL: 1,
    ImageShape.UPPER: 2,
    ImageShape.LOWER: 3,
    ImageShape.IDENTITY: 4,
    ImageShape.PINNED: 5,
}
_GAMMA_RANK = {
    ImageShape.DIAGONAL: 0,
    ImageShape.SCALAR: 1,
    ImageShape.UPPER: 2,
    ImageShape.LOWER: 3,
    ImageShape.IDENTITY: 4,
    ImageShape.PINNED: 5,
}


def classify_image(
    ch: Character, diag: DiagonalCharacters, commutes_with_pinned: bool = False
) -> ImageShape:
    """Shape of the universal image of a generator on which A acts through ``ch``.

    Odd characters give unipotent images (upper for chi1/chi2, lower for
    chi2/chi1) or the identity; even nontrivial ones give the identity; the
    trivial character gives a diagonal image. Commuting with the pinned
    generator kills everything except upper unipotent images and collapses
    diagonal images to scalars.
    """
    why = diag.borel_violation()
    if why:
        raise BorelCaseError(why)
    if diag.is_trivial(ch):
        return ImageShape.SCALAR if commutes_with_pinned else ImageShape.DIAGONAL
    if diag.equal(ch, Character.upper()):
        return ImageShape.UPPER
    if commutes_with_pinned:
        return ImageShape.IDENTITY
    if diag.is_odd(ch) and diag.equal(ch, Character.lower()):
        return ImageShape.LOWER
    return ImageShape.IDENTITY


@dataclass(frozen=True)
class GenMeta:
    name: str
    block: Block
    character: Character = Character()
    pi: FreeWord = FreeWord()
    pinned: bool = False
    commutes: bool = False
    shape: ImageShape | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Tie:
    """Y_target = sum(coef * Y_source): a linear relation imposed by the A-action."""

    target: int
    combo: tuple[tuple[int, int], ...]

    def __str__(self):
        rhs = " + ".join(f"{c} * Y_{i}" if c != 1 else f"Y_{i}" for c, i in self.combo)
        return f"Y_{self.target} = {rhs or '0'}"


@dataclass(frozen=True)
class Variable:
    index: int
    generator: str
    role: str

    @property
    def name(self) -> str:
        return f"Y_{self.index}"


@dataclass(frozen=True)
class VariableTable:
    variables: tuple[Variable, ...]

    @property
    def d_prime(self) -> int:
        return len(self.variables)

    def of(self, generator: str) -> list[Variable]:
        return [v for v in self.variables if v.generator == generator]

    def index_of(self, generator: str, role: str | None = None) -> int:
        """0-based position of the (first) variable of a generator."""
        for pos, v in enumerate(self.variables):
            if v.generator == generator and (role is None or v.role == role):
                return pos
        raise KeyError(f"{generator!r} carries no variable")

    def __iter__(self):
        return iter(self.variables)

    def __len__(self):
        return len(self.variables)


def _sort_gens(gens: Iterable[GenMeta]) -> list[GenMeta]:
    def key(g: GenMeta):
        if g.block is Block.XINF:
            return (0, _XINF_RANK.get(g.shape, 4))
        return (1, _GAMMA_RANK.get(g.shape, 4))

    return sorted(gens, key=key)


@dataclass(frozen=True)
class Presentation:
    """A pro-p presentation with the metadata needed to read off universal images.

    Generators are normalized on construction: X_inf block first (scalar,
    upper, lower, identity, pinned last), then Gamma-tilde (diagonal,
    upper, lower, identity). Shapes are derived from characters.
    """

    p: int
    N: int
    D: int
    diag: DiagonalCharacters
    gens: tuple[GenMeta, ...]
    relations: tuple[tuple[str, FreeWord], ...] = ()
    ties: tuple[Tie, ...] = ()
    gamma_letters: tuple[str, ...] | None = None

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1 or self.D < 1:
            raise ValueError("precision and degree cap must be >= 1")
        if self.diag.p != self.p:
            object.__setattr__(self, "diag", replace(self.diag, p=self.p))
        try:
            shaped = [
                replace(g, shape=classify_image(g.character, self.diag, g.commutes))
                for g in self.gens
            ]
            shaped = [
                replace(g, shape=ImageShape.PINNED) if g.pinned else g for g in shaped
            ]
            shaped = _sort_gens(shaped)
        except (BorelCaseError, IncomparableCharacters):
            shaped = [replace(g, shape=None) for g in self.gens]
        object.__setattr__(self, "gens", tuple(shaped))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "ties", tuple(self.ties))
        if self.gamma_letters is None:
            letters: list[str] = []
            for g in self.gens:
                if g.block is Block.GAMMA:
                    for name, _ in g.pi.syllables:
                        if name not in letters:
                            letters.append(name)
            object.__setattr__(self, "gamma_letters", tuple(letters))
        else:
            object.__setattr__(self, "gamma_letters", tuple(self.gamma_letters))

    # structure -------------------------------------------------------------
    @property
    def gen_names(self) -> list[str]:
        return [g.name for g in self.gens]

    def gen(self, name: str) -> GenMeta:
        for g in self.gens:
            if g.name == name:
                return g
        raise KeyError(name)

    def xinf(self) -> list[GenMeta]:
        return [g for g in self.gens if g.block is Block.XINF]

    def gamma_gens(self) -> list[GenMeta]:
        return [g for g in self.gens if g.block is Block.GAMMA]

    def _count(self, block: Block, shape: ImageShape) -> int:
        return sum(1 for g in self.gens if g.block is block and g.shape is shape)

    @property
    def d(self) -> int:
        return len(self.gens)

    @property
    def n(self) -> int:
        return len(self.xinf())

    @property
    def k(self) -> int:
        return len(self.gamma_letters)

    @property
    def r(self) -> int:
        return len(self.relations)

    @property
    def u_xinf(self) -> int:
        return self._count(Block.XINF, ImageShape.SCALAR)

    @property
    def v_xinf(self) -> int:
        return self.u_xinf + self._count(Block.XINF, ImageShape.UPPER)

    @property
    def u_gamma(self) -> int:
        return self._count(Block.GAMMA, ImageShape.DIAGONAL)

    @property
    def v_gamma(self) -> int:
        return self.u_gamma + self._count(Block.GAMMA, ImageShape.UPPER)

    @property
    def w_gamma(self) -> int:
        return self.v_gamma + self._count(Block.GAMMA, ImageShape.LOWER)

    def counts(self) -> dict[str, int]:
        return {
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "u_Xinf": self.u_xinf,
            "v_Xinf": self.v_xinf,
            "u_Gamma": self.u_gamma,
            "v_Gamma": self.v_gamma,
            "w_Gamma": self.w_gamma,
        }

    def pinned(self) -> GenMeta | None:
        return next((g for g in self.gens if g.pinned), None)

    def diagonal_gamma(self) -> GenMeta | None:
        return next(
            (g for g in self.gens if g.block is Block.GAMMA and g.shape is ImageShape.DIAGONAL),
            None,
        )

    def projection(self) -> Projection:
        return Projection(
            images={g.name: g.pi for g in self.gens},
            letters=self.gamma_letters,
            p=self.p,
            N=self.N,
            D=self.D,
        )

    def with_params(self, p: int | None = None, N: int | None = None, D: int | None = None):
        return replace(
            self,
            p=self.p if p is None else p,
            N=self.N if N is None else N,
            D=self.D if D is None else D,
        )


def allocate_variables(pres: Presentation) -> VariableTable:
    """Assign the deformation variables Y_1..Y_d'.

    Order: scalar and upper-unipotent X_inf generators, the diagonal pair of
    each Gamma-tilde diagonal generator, Gamma-tilde unipotent generators,
    then lower-unipotent X_inf generators. The pinned generator and identity
    images carry no variable.
    """
    out: list[Variable] = []

    def add(g: GenMeta, role: str):
        out.append(Variable(len(out) + 1, g.name, role))

    def each(block: Block, shape: ImageShape):
        return [g for g in pres.gens if g.block is block and g.shape is shape]

    for g in each(Block.XINF, ImageShape.SCALAR):
        add(g, "scalar")
    for g in each(Block.XINF, ImageShape.UPPER):
        add(g, "upper")
    for g in each(Block.XINF, ImageShape.DIAGONAL):
        add(g, "diag_1")
        add(g, "diag_2")
    for g in each(Block.GAMMA, ImageShape.DIAGONAL):
        add(g, "diag_1")
        add(g, "diag_2")
    for g in each(Block.GAMMA, ImageShape.SCALAR):
        add(g, "scalar")
    for g in each(Block.GAMMA, ImageShape.UPPER):
        add(g, "upper")
    for g in each(Block.GAMMA, ImageShape.LOWER):
        add(g, "lower")
    for g in each(Block.XINF, ImageShape.LOWER):
        add(g, "lower")
    return VariableTable(tuple(out))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    requirement: str
    blocks_pipeline_only: bool = False

    def __str__(self):
        return f"[{self.code}] {self.message} ({self.requirement})"


def validate(pres: Presentation) -> list[Violation]:
    """Check a presentation; an empty list means it is usable for the ideal pipeline.

    Violations with ``blocks_pipeline_only`` set still leave a structurally
    sound presentation (usable for matrices and comparison) but rule out the
    ideal-of-relations computation.
    """
    out: list[Violation] = []

    def bad(code, message, requirement, pipeline=False):
        out.append(Violation(code, message, requirement, pipeline))

    why = pres.diag.borel_violation()
    if why:
        bad("borel", f"not in the Borel case: {why}", "chi1 != +-chi2")
    why = pres.diag.odd_violation()
    if why:
        bad("odd", why, "residual representation must be odd")
    if any(g.shape is None for g in pres.gens) and not why:
        for g in pres.gens:
            try:
                pres.diag.resolve(g.character)
            except IncomparableCharacters as exc:
                bad("character", f"generator {g.name}: {exc}", "characters must be comparable")

    names = pres.gen_names
    if len(set(names)) != len(names):
        bad("duplicate", "generator names are not unique", "generator names must be unique")

    for g in pres.gens:
        if g.block is Block.XINF and g.pi:
            bad("pi", f"X_inf generator {g.name} has nontrivial projection {g.pi}",
                "X_inf generators project trivially to Gamma")
        if g.block is Block.GAMMA and not g.pi:
            bad("pi", f"Gamma-tilde generator {g.name} has trivial projection",
                "Gamma-tilde generators project onto Gamma")

    gamma_images = [g.pi for g in pres.gamma_gens()]
    singles = [w.syllables[0][0] for w in gamma_images if len(w.syllables) == 1 and w.syllables[0][1] == 1]
    if len(singles) != len(gamma_images) or sorted(singles) != sorted(pres.gamma_letters):
        bad("gamma_basis", "Gamma-tilde generators must map bijectively onto the Gamma letters",
            "Gamma-tilde is a section of the free group Gamma")
    if pres.n != pres.d - pres.k:
        bad("count", f"n = {pres.n} but d - k = {pres.d} - {pres.k}",
            "X_inf needs exactly d - k generators")

    pinned = [g for g in pres.gens if g.pinned]
    if len(pinned) > 1:
        bad("pinned", f"{len(pinned)} generators are pinned", "at most one pinned generator")
    for g in pinned:
        if g.block is not Block.XINF:
            bad("pinned", f"pinned generator {g.name} is not in X_inf", "pinned generator lies in X_inf")
        elif g.shape is not None and not pres.diag.equal(g.character, Character.upper()):
            bad("pinned", f"pinned generator {g.name} has character {g.character}, not chi1*chi2^-1",
                "pinned image [[1,1],[0,1]] needs the upper unipotent character")

    if all(g.shape is not None for g in pres.gens) and list(pres.gens) != _sort_gens(pres.gens):
        bad("order", "generators are not in special order", "scalar, unipotent, identity, pinned; then Gamma-tilde")

    if pres.u_gamma > 1:
        bad("u_gamma", f"u_Gamma <= 1 violated (u_Gamma = {pres.u_gamma})",
            "at most one diagonal Gamma-tilde generator (Leopoldt)")

    declared = set(names)
    for rname, w in pres.relations:
        missing = w.alphabet() - declared
        if missing:
            bad("relation", f"relation {rname} uses undeclared generators {sorted(missing)}",
                "relations are words in the declared generators")

    if all(g.shape is not None for g in pres.gens):
        dprime = allocate_variables(pres).d_prime
        targets = [t.target for t in pres.ties]
        if len(set(targets)) != len(targets):
            bad("tie", "a variable is tied twice", "each tie fixes a distinct variable")
        for t in pres.ties:
            used = [t.target] + [i for _, i in t.combo]
            if any(not 1 <= i <= dprime for i in used):
                bad("tie", f"tie {t} refers to a variable outside Y_1..Y_{dprime}", "ties use allocated variables")
            if any(i in targets for _, i in t.combo):
                bad("tie", f"tie {t} uses a tied variable on its right-hand side", "ties must not chain")

    # hypotheses of the ideal pipeline
    if pres.w_gamma != pres.v_gamma:
        bad("w_gamma", "w_Gamma != v_Gamma: ideal pipeline unavailable",
            "no lower unipotent Gamma-tilde images", True)
    if pres.u_gamma != 1:
        bad("u_gamma_1", f"u_Gamma = {pres.u_gamma}: the ideal pipeline needs exactly one diagonal Gamma-tilde generator",
            "Gamma contains the cyclotomic Z_p-extension", True)
    if not pinned:
        bad("no_pinned", "no pinned generator: residual image would be diagonal",
            "residual image is not diagonal", True)
    for g in pres.gens:
        if g.block is Block.XINF and g.shape is ImageShape.DIAGONAL:
            bad("xinf_diagonal", f"X_inf generator {g.name} has a two-variable diagonal image; mark it 'commutes' if it commutes with the pinned generator",
                "X_inf images are scalar, unipotent, identity or pinned", True)
        if g.block is Block.GAMMA and g.shape is ImageShape.SCALAR:
            bad("gamma_scalar", f"Gamma-tilde generator {g.name} has a scalar image",
                "diagonal Gamma-tilde images carry two distinct variables", True)
    return out


def structural(violations: Sequence[Violation]) -> list[Violation]:
    return [v for v in violations if not v.blocks_pipeline_only]
