"""The ideal of relations and the universal matrices of a presentation.

The restricted Fox matrix M (X_inf rows, relation columns, entries in the
Magnus algebra) becomes, relation by relation:

* family A: prod over scalar rows (1 + Y_i)^{a_i} - 1, a_i the constant term;
* family B: the pinned row plus the upper-unipotent rows, with the active
  Gamma variable T replaced by W = (1 + Y)/(1 + Y') - 1, where Y, Y' is the
  diagonal pair of the Gamma-tilde generator;
* family C: the lower-unipotent rows, with T replaced by (1 + Y')/(1 + Y) - 1.

Gamma letters other than the active one act trivially on scalar and
upper-unipotent images, so their monomials are dropped from those rows.
"""

from __future__ import annotations

import json
import re
import warnings as _warnings
from dataclasses import dataclass, field

from .fox import FoxMatrix, fox_matrix, restrict_to_xinf
from .presentation.model import (
    ImageShape,
    Presentation,
    ValidationError,
    Variable,
    VariableTable,
    allocate_variables,
    validate,
)
from .series import CommSeries, MagnusSeries, pow_padic, subst_T, unit_inv
from .verify import MatRep


class InconsistentInput(ValueError):
    """An ideal generator is a unit, so the residual representation has no deformation."""


@dataclass(frozen=True)
class IdealGen:
    relation: str
    family: str
    series: CommSeries

    def __str__(self):
        return f"{self.series}    [{self.family}, {self.relation}]"


@dataclass
class RingPresentation:
    """Z_p[[Y_1..Y_d']]/I at precision p^N and degree cap D."""

    p: int
    N: int
    D: int
    variables: VariableTable
    ideal: list[IdealGen] = field(default_factory=list)
    dropped: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def d_prime(self) -> int:
        return self.variables.d_prime

    @property
    def ideal_gens(self) -> list[CommSeries]:
        return [g.series for g in self.ideal]

    def ring(self) -> CommSeries:
        return CommSeries(self.d_prime, self.p, self.N, self.D)

    def without(self, index: int) -> RingPresentation:
        """Copy with one ideal generator removed."""
        rest = self.ideal[:index] + self.ideal[index + 1 :]
        return RingPresentation(self.p, self.N, self.D, self.variables, rest, list(self.dropped), list(self.warnings))

    def ring_text(self) -> str:
        names = ", ".join(v.name for v in self.variables)
        ring = f"Z_p[[{names}]]"
        if not self.ideal:
            return f"I = (0), R = {ring}"
        return f"I = ({', '.join(str(g.series) for g in self.ideal)}), R = {ring}/I"

    def __str__(self):
        lines = [f"# p = {self.p}, prec = {self.N}, deg = {self.D}", f"d' = {self.d_prime}"]
        for v in self.variables:
            lines.append(f"  {v.name}  {v.generator}  {v.role}")
        lines.append(self.ring_text())
        for i, g in enumerate(self.ideal, 1):
            lines.append(f"  g{i} = {g}")
        for rel, fam in self.dropped:
            lines.append(f"  dropped zero generator [{fam}, {rel}]")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "prec": self.N,
            "deg": self.D,
            "d_prime": self.d_prime,
            "variables": [
                {"name": v.name, "source_generator": v.generator, "role": v.role} for v in self.variables
            ],
            "ideal": [
                {"relation": g.relation, "family": g.family, "series": str(g.series)} for g in self.ideal
            ],
            "dropped": [{"relation": r, "family": f} for r, f in self.dropped],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> RingPresentation:
        p, N, D = data["p"], data["prec"], data["deg"]
        variables = VariableTable(
            tuple(
                Variable(i + 1, v["source_generator"], v["role"]) for i, v in enumerate(data["variables"])
            )
        )
        m = len(variables)
        ideal = [
            IdealGen(g["relation"], g["family"], parse_comm(g["series"], m, p, N, D)) for g in data["ideal"]
        ]
        dropped = [(d["relation"], d["family"]) for d in data.get("dropped", [])]
        return cls(p, N, D, variables, ideal, dropped, list(data.get("warnings", [])))

    @classmethod
    def from_json(cls, text: str) -> RingPresentation:
        return cls.from_dict(json.loads(text))


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*((?:Y_\d+(?:\^\d+)?\*?)*)")


def parse_comm(text: str, m: int, p: int, N: int, D: int) -> CommSeries:
    """Inverse of the canonical rendering, e.g. ``5 - Y_3 + 2*Y_1^2*Y_4``."""
    text = text.strip()
    if text == "0":
        return CommSeries(m, p, N, D)
    coeffs: dict[tuple[int, ...], int] = {}
    pos = 0
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse series at {text[pos:]!r}")
        sign, num, mono_text = mt.groups()
        if num is None and not mono_text:
            raise ValueError(f"empty term in {text!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        mono = [0] * m
        for name, e in re.findall(r"Y_(\d+)(?:\^(\d+))?", mono_text):
            i = int(name) - 1
            if not 0 <= i < m:
                raise ValueError(f"Y_{name} is outside Y_1..Y_{m}")
            mono[i] += int(e) if e else 1
        key = tuple(mono)
        coeffs[key] = coeffs.get(key, 0) + c
        pos = mt.end()
    return CommSeries(m, p, N, D, coeffs)


# -- the pipeline ---------------------------------------------------------------


@dataclass
class _Context:
    pres: Presentation
    table: VariableTable
    ring: CommSeries
    active: int
    gamma_shape: dict[int, ImageShape]
    W: CommSeries
    W_low: CommSeries
    warnings: list[str]

    def Y(self, generator: str, role: str | None = None) -> CommSeries:
        i = self.table.index_of(generator, role)
        return CommSeries.variable(i, self.ring.m, self.ring.p, self.ring.N, self.ring.D)


def _context(pres: Presentation, require_pipeline: bool = True) -> _Context:
    violations = validate(pres)
    if require_pipeline and violations:
        raise ValidationError(violations)
    table = allocate_variables(pres)
    ring = CommSeries(table.d_prime, pres.p, pres.N, pres.D)
    diag_gen = pres.diagonal_gamma()
    if diag_gen is None:
        raise ValidationError([v for v in violations if v.code == "u_gamma_1"] or violations)
    active = pres.gamma_letters.index(diag_gen.pi.syllables[0][0])
    gamma_shape = {}
    for g in pres.gamma_gens():
        gamma_shape[pres.gamma_letters.index(g.pi.syllables[0][0])] = g.shape
    one = ring.one()
    y1 = CommSeries.variable(table.index_of(diag_gen.name, "diag_1"), ring.m, ring.p, ring.N, ring.D)
    y2 = CommSeries.variable(table.index_of(diag_gen.name, "diag_2"), ring.m, ring.p, ring.N, ring.D)
    W = (one + y1) * unit_inv(one + y2) - 1
    W_low = (one + y2) * unit_inv(one + y1) - 1
    return _Context(pres, table, ring, active, gamma_shape, W, W_low, [])


def _act(ctx: _Context, f: MagnusSeries, row: str, col: str, shape: ImageShape) -> MagnusSeries:
    """Drop monomials in Gamma letters that act trivially on a row of the given shape."""
    if f.k == 1:
        return f
    keep, dropped = {}, False
    for mono, c in f.coeffs.items():
        inactive = [x for x in mono if x != ctx.active]
        if not inactive:
            keep[mono] = c
            continue
        if shape is ImageShape.LOWER:
            bad = [x for x in inactive if ctx.gamma_shape.get(x) is not ImageShape.IDENTITY]
            if bad:
                letter = ctx.pres.gamma_letters[bad[0]]
                raise ValueError(
                    f"entry ({row}, {col}) has monomial {MagnusSeries(f.k, f.p, f.N, f.D, {mono: c})} "
                    f"in {letter!r}, which acts nontrivially on the lower unipotent image of {row}"
                )
        dropped = True
    if dropped:
        ctx.warnings.append(
            f"entry ({row}, {col}): monomials in Gamma letters other than "
            f"{ctx.pres.gamma_letters[ctx.active]!r} act trivially and were dropped"
        )
    return MagnusSeries(f.k, f.p, f.N, f.D, keep)


def _families(ctx: _Context, M: FoxMatrix, j: int) -> list[tuple[str, CommSeries]]:
    col = M.cols[j]
    ring = ctx.ring
    fam_a = ring.one()
    fam_b = ring.zero()
    fam_c = ring.zero()
    touches_upper = touches_lower = False
    for i, name in enumerate(M.rows):
        g = ctx.pres.gen(name)
        entry = M.entries[i][j]
        if not entry:
            continue
        shape = g.shape
        if shape is ImageShape.SCALAR:
            a = _act(ctx, entry, name, col, shape).constant()
            fam_a = fam_a * pow_padic(ring.one() + ctx.Y(name), a)
        elif shape is ImageShape.PINNED:
            fam_b = fam_b + subst_T(_act(ctx, entry, name, col, shape), ctx.W, ctx.active)
            touches_upper = True
        elif shape is ImageShape.UPPER:
            term = subst_T(_act(ctx, entry, name, col, shape), ctx.W, ctx.active)
            fam_b = fam_b + term * ctx.Y(name)
            touches_upper = True
        elif shape is ImageShape.LOWER:
            term = subst_T(_act(ctx, entry, name, col, shape), ctx.W_low, ctx.active)
            fam_c = fam_c + term * ctx.Y(name)
            touches_lower = True
    if touches_upper and touches_lower:
        ctx.warnings.append(
            f"relation {col} involves both upper and lower unipotent generators; "
            "its linearized generators need not generate the full relation ideal"
        )
    return [("A", fam_a - 1), ("B", fam_b), ("C", fam_c)]


def ideal_family_A(pres: Presentation, M: FoxMatrix | None = None) -> list[CommSeries]:
    """One generator per relation from the scalar rows (zeros kept)."""
    ctx = _context(pres)
    M = M or restrict_to_xinf(fox_matrix(pres), pres.n)
    return [_families(ctx, M, j)[0][1] for j in range(len(M.cols))]


def ideal_family_B(pres: Presentation, M: FoxMatrix | None = None) -> list[CommSeries]:
    """One generator per relation from the pinned and upper-unipotent rows (zeros kept)."""
    ctx = _context(pres)
    M = M or restrict_to_xinf(fox_matrix(pres), pres.n)
    return [_families(ctx, M, j)[1][1] for j in range(len(M.cols))]


def _tie_images(ctx: _Context) -> list[CommSeries]:
    ring = ctx.ring
    images = [CommSeries.variable(i, ring.m, ring.p, ring.N, ring.D) for i in range(ring.m)]
    for t in ctx.pres.ties:
        rhs = ring.zero()
        for c, i in t.combo:
            rhs = rhs + images[i - 1] * c
        images[t.target - 1] = rhs
    return images


def ring_presentation(pres: Presentation) -> RingPresentation:
    """Z_p[[Y_1..Y_d']]/I from the restricted Fox matrix.

    Raises :class:`ValidationError` if the presentation is outside the
    pipeline's hypotheses and :class:`InconsistentInput` if some generator
    has a unit constant term.
    """
    ctx = _context(pres)
    M = restrict_to_xinf(fox_matrix(pres), pres.n)
    rp = RingPresentation(pres.p, pres.N, pres.D, ctx.table)
    for j, col in enumerate(M.cols):
        for fam, series in _families(ctx, M, j):
            if not series:
                if fam != "C" or any(ctx.pres.gen(r).shape is ImageShape.LOWER for r in M.rows):
                    rp.dropped.append((col, fam))
                continue
            rp.ideal.append(IdealGen(col, fam, series))
    ring = ctx.ring
    for t in pres.ties:
        lhs = CommSeries.variable(t.target - 1, ring.m, ring.p, ring.N, ring.D)
        rhs = ring.zero()
        for c, i in t.combo:
            rhs = rhs + CommSeries.variable(i - 1, ring.m, ring.p, ring.N, ring.D) * c
        rp.ideal.append(IdealGen(f"Y_{t.target}", "tie", lhs - rhs))
    for g in rp.ideal:
        if g.series.constant().valuation() < 1:
            raise InconsistentInput(
                f"generator [{g.family}, {g.relation}] has unit constant term {g.series.constant().lift()}"
            )
    rp.warnings = list(dict.fromkeys(ctx.warnings))
    for w in rp.warnings:
        _warnings.warn(w, stacklevel=2)
    return rp


# -- universal matrices -----------------------------------------------------------


@dataclass
class MatAssignment:
    p: int
    N: int
    D: int
    images: dict[str, MatRep]

    def __getitem__(self, name: str) -> MatRep:
        return self.images[name]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "prec": self.N,
            "deg": self.D,
            "images": {name: M.to_rows() for name, M in self.images.items()},
        }

    def __str__(self):
        lines = [f"# p = {self.p}, prec = {self.N}, deg = {self.D}"]
        lines += [f"{name} -> {M}" for name, M in self.images.items()]
        return "\n".join(lines)


def universal_matrices(pres: Presentation, rp: RingPresentation | None = None) -> MatAssignment:
    """Image of every generator under the universal deformation, ties substituted."""
    table = rp.variables if rp is not None else allocate_variables(pres)
    ring = CommSeries(table.d_prime, pres.p, pres.N, pres.D)
    ctx = _Context(pres, table, ring, 0, {}, ring.zero(), ring.zero(), [])
    Yimg = _tie_images(ctx)
    one, zero = ring.one(), ring.zero()

    def Y(name, role=None):
        return Yimg[table.index_of(name, role)]

    images = {}
    for g in pres.gens:
        s = g.shape
        if s is ImageShape.SCALAR:
            M = MatRep(one + Y(g.name), zero, zero, one + Y(g.name))
        elif s is ImageShape.DIAGONAL:
            M = MatRep(one + Y(g.name, "diag_1"), zero, zero, one + Y(g.name, "diag_2"))
        elif s is ImageShape.UPPER:
            M = MatRep(one, Y(g.name), zero, one)
        elif s is ImageShape.PINNED:
            M = MatRep(one, one, zero, one)
        elif s is ImageShape.LOWER:
            M = MatRep(one, zero, Y(g.name), one)
        else:
            M = MatRep.identity(ring)
        images[g.name] = M
    return MatAssignment(pres.p, pres.N, pres.D, images)


# -- comparing G_S with a quotient G ------------------------------------------------


@dataclass
class SurjectionReport:
    mapping: dict[str, str]
    kernel: list[str]
    krull_bound: int | None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mapping": dict(self.mapping),
            "kernel_variables": list(self.kernel),
            "krull_lower_bound_mod_p": self.krull_bound,
            "notes": list(self.notes),
        }

    def __str__(self):
        lines = ["variable map R_GS -> R_G:"]
        lines += [f"  {a} -> {b}" for a, b in self.mapping.items()]
        lines.append("kernel variables: {" + ", ".join(self.kernel) + "}")
        if self.krull_bound is not None:
            lines.append(f"dim_Krull R_GS/p >= dim_Krull R_G/p >= {self.krull_bound}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def compare_surjection(pres_gs: Presentation, pres_g: Presentation) -> SurjectionReport:
    """Match the variables of R_GS with those of R_G through generator names.

    Variables of R_GS whose generator carries no variable in G are kernel
    variables. The Krull bound is d'_G minus the number of ideal generators
    of R_G that are nonzero mod p (Krull's principal ideal theorem), a lower
    bound for dim R_G/p and hence for dim R_GS/p.
    """
    if pres_gs.p != pres_g.p:
        raise ValueError(f"different primes: {pres_gs.p} vs {pres_g.p}")
    names_gs = set(pres_gs.gen_names)
    missing = [n for n in pres_g.gen_names if n not in names_gs]
    if missing:
        raise ValueError(f"generators of G not found in G_S: {missing}")
    t_gs, t_g = allocate_variables(pres_gs), allocate_variables(pres_g)
    by_key = {(v.generator, v.role): v.name for v in t_g}
    mapping, kernel, notes = {}, [], []
    matched = set()
    for v in t_gs:
        target = by_key.get((v.generator, v.role))
        if target is None:
            kernel.append(v.name)
        else:
            mapping[v.name] = target
            matched.add(target)
    unmatched = [v.name for v in t_g if v.name not in matched]
    if unmatched:
        raise ValueError(f"variables of R_G with no preimage in R_GS: {unmatched}")
    bound = None
    try:
        rp = ring_presentation(pres_g)
        bound = rp.d_prime - sum(1 for g in rp.ideal if _nonzero_mod_p(g.series))
    except (ValidationError, ValueError) as exc:
        notes.append(f"no Krull bound: R_G is outside the ideal pipeline ({exc})")
    return SurjectionReport(mapping, kernel, bound, notes)


def _nonzero_mod_p(s: CommSeries) -> bool:
    return any(c % s.p for c in s.coeffs.values())
