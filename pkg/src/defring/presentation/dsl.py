"""Line-oriented text format for annotated presentations, plus a JSON mirror.

Example::

    p 5  prec 3  deg 8
    chi1 omega^0   chi2 omega^1
    gen t_w block=Xinf chi=chi1*chi2^-1 pinned
    gen g   block=Gamma chi=trivial pi=gamma
    rel r_w = t_w^5 * [t_w, g]
    tie Y_2 = 3 * Y_4

``#`` starts a comment. Words use ``*`` for products, ``^`` for integer
powers, ``[a, b]`` for the commutator a b a^-1 b^-1, and parentheses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..freegroup import FreeWord, commutator, word_mul, word_pow
from .model import (
    Block,
    Character,
    DiagonalCharacters,
    GenMeta,
    Presentation,
    Tie,
    ValidationError,
    structural,
    validate,
)

DEFAULT_PREC = 3
DEFAULT_DEG = 8


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[\^*\[\](),{}+=-]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, offset: int = 0) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), offset + m.start(kind) + 1))
        pos = m.end()
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok], line: int, end_col: int):
        self.toks = toks
        self.i = 0
        self.line = line
        self.end_col = end_col

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {text or kind}, found end of line", self.line, self.end_col)
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            raise ParseError(f"expected {text or kind}, found {tok.text!r}", self.line, tok.col)
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.text!r}", self.line, tok.col)

    def integer(self) -> int:
        """Integer literal, optionally braced with + and - arithmetic: {12-1}."""
        if self.accept("{"):
            total = self._signed()
            while True:
                if self.accept("+"):
                    total += self._signed()
                elif self.accept("-"):
                    total -= self._signed()
                else:
                    break
            self.take("}")
            return total
        return self._signed()

    def _signed(self) -> int:
        neg = self.accept("-")
        tok = self.take(kind="int")
        v = int(tok.text)
        return -v if neg else v


def _word(cur: _Cursor, known: set[str] | None) -> FreeWord:
    out = _factor(cur, known)
    while cur.accept("*"):
        out = word_mul(out, _factor(cur, known))
    return out


def _factor(cur: _Cursor, known: set[str] | None) -> FreeWord:
    tok = cur.peek()
    if tok is None:
        raise ParseError("expected a word, found end of line", cur.line, cur.end_col)
    if cur.accept("("):
        base = _word(cur, known)
        cur.take(")")
    elif cur.accept("["):
        a = _word(cur, known)
        cur.take(",")
        b = _word(cur, known)
        cur.take("]")
        base = commutator(a, b)
    elif tok.kind == "int" and tok.text == "1":
        cur.i += 1
        base = FreeWord.identity()
    elif tok.kind == "ident":
        cur.i += 1
        if known is not None and tok.text not in known:
            raise ParseError(f"undeclared generator {tok.text!r}", cur.line, tok.col)
        base = FreeWord.letter(tok.text)
    else:
        raise ParseError(f"unexpected {tok.text!r} in word", cur.line, tok.col)
    while cur.accept("^"):
        base = word_pow(base, cur.integer())
    return base


def parse_word(text: str, known: set[str] | None = None, line: int = 0, offset: int = 0) -> FreeWord:
    """Parse a group word such as ``s1^2 * [t, g^-1] * s3``."""
    cur = _Cursor(_tokenize(text, line, offset), line, offset + len(text) + 1)
    w = _word(cur, known)
    cur.done()
    return w


def _character(text: str, line: int, offset: int) -> Character:
    cur = _Cursor(_tokenize(text, line, offset), line, offset + len(text) + 1)
    ch = Character()
    while True:
        tok = cur.take(kind=None) if cur.peek() and cur.peek().kind == "int" else cur.take(kind="ident")
        if tok.kind == "int":
            if tok.text != "1":
                raise ParseError(f"bad character factor {tok.text!r}", line, tok.col)
            f = Character()
        elif tok.text == "trivial":
            f = Character()
        elif tok.text in ("omega", "chi1", "chi2"):
            e = cur.integer() if cur.accept("^") else 1
            f = {
                "omega": Character(omega=e),
                "chi1": Character(e1=e),
                "chi2": Character(e2=e),
            }[tok.text]
        else:
            raise ParseError(f"unknown character {tok.text!r}", line, tok.col)
        ch = ch * f
        if not cur.accept("*"):
            break
    cur.done()
    return ch


_WORDCHUNK = re.compile(r"\S+")


def parse_presentation(text: str, check: bool = True) -> Presentation:
    """Parse the DSL into a :class:`Presentation`.

    Raises :class:`ParseError` (with line/column) for syntax problems and
    undeclared generators, :class:`ValidationError` when ``check`` is set and
    the result violates a structural requirement.
    """
    params = {"p": None, "prec": DEFAULT_PREC, "deg": DEFAULT_DEG}
    chis: dict[str, int | None] = {}
    letters: list[str] | None = None
    gens: list[GenMeta] = []
    rels: list[tuple[str, FreeWord]] = []
    ties: list[Tie] = []
    pending_rels: list[tuple[int, int, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        first = _WORDCHUNK.search(body)
        head = first.group()
        col0 = first.start() + 1
        rest_at = first.end()
        rest = body[rest_at:]

        if head in ("p", "prec", "deg"):
            chunks = list(_WORDCHUNK.finditer(body))
            if len(chunks) % 2:
                raise ParseError("expected key/value pairs like 'p 5 prec 3 deg 8'", lineno, col0)
            for key, val in zip(chunks[::2], chunks[1::2]):
                if key.group() not in params:
                    raise ParseError(f"unknown parameter {key.group()!r}", lineno, key.start() + 1)
                try:
                    params[key.group()] = int(val.group())
                except ValueError:
                    raise ParseError(f"{key.group()} needs an integer", lineno, val.start() + 1) from None
        elif head in ("chi1", "chi2"):
            chunks = list(_WORDCHUNK.finditer(body))
            if len(chunks) % 2:
                raise ParseError("expected 'chi1 <char> chi2 <char>'", lineno, col0)
            for key, val in zip(chunks[::2], chunks[1::2]):
                if key.group() not in ("chi1", "chi2"):
                    raise ParseError(f"unexpected {key.group()!r}", lineno, key.start() + 1)
                if val.group() == "symbolic":
                    chis[key.group()] = None
                    continue
                ch = _character(val.group(), lineno, val.start())
                if ch.e1 or ch.e2:
                    raise ParseError("diagonal characters must be omega powers or 'symbolic'", lineno, val.start() + 1)
                chis[key.group()] = ch.omega
        elif head == "gamma":
            letters = rest.split()
            for name in letters:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                    raise ParseError(f"bad Gamma letter {name!r}", lineno, body.index(name) + 1)
        elif head == "gen":
            gens.append(_parse_gen(body, rest_at, lineno))
        elif head == "rel":
            m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=", rest)
            if not m:
                raise ParseError("expected 'rel <name> = <word>'", lineno, rest_at + 1)
            pending_rels.append((lineno, rest_at + m.end(), m.group(1), rest[m.end():]))
        elif head == "tie":
            ties.append(_parse_tie(rest, rest_at, lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col0)

    if params["p"] is None:
        raise ParseError("missing 'p' line")
    known = {g.name for g in gens}
    seen_rel = set()
    for lineno, offset, name, wtext in pending_rels:
        if name in seen_rel:
            raise ParseError(f"duplicate relation name {name!r}", lineno, offset)
        seen_rel.add(name)
        rels.append((name, parse_word(wtext, known, lineno, offset)))

    diag = DiagonalCharacters(params["p"], chis.get("chi1"), chis.get("chi2"))
    if ("chi1" in chis) != ("chi2" in chis):
        raise ParseError("declare both chi1 and chi2")
    try:
        pres = Presentation(
            p=params["p"],
            N=params["prec"],
            D=params["deg"],
            diag=diag,
            gens=tuple(gens),
            relations=tuple(rels),
            ties=tuple(ties),
            gamma_letters=tuple(letters) if letters is not None else None,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if check:
        bad = structural(validate(pres))
        if bad:
            raise ValidationError(bad)
    return pres


def _parse_gen(body: str, start: int, lineno: int) -> GenMeta:
    chunks = list(_WORDCHUNK.finditer(body, start))
    if not chunks:
        raise ParseError("expected a generator name", lineno, start + 1)
    name = chunks[0].group()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
        raise ParseError(f"bad generator name {name!r}", lineno, chunks[0].start() + 1)
    fields = {"block": None, "chi": Character(), "pi": FreeWord(), "pinned": False, "commutes": False}
    for c in chunks[1:]:
        item, col = c.group(), c.start() + 1
        if item in ("pinned", "commutes"):
            fields[item] = True
            continue
        key, eq, val = item.partition("=")
        if not eq:
            raise ParseError(f"unknown flag {item!r}", lineno, col)
        vcol = c.start() + len(key) + 1
        if key == "block":
            try:
                fields["block"] = Block(val)
            except ValueError:
                raise ParseError(f"block must be Xinf or Gamma, not {val!r}", lineno, vcol + 1) from None
        elif key == "chi":
            fields["chi"] = _character(val, lineno, vcol)
        elif key == "pi":
            fields["pi"] = parse_word(val, None, lineno, vcol)
        else:
            raise ParseError(f"unknown field {key!r}", lineno, col)
    if fields["block"] is None:
        fields["block"] = Block.GAMMA if fields["pi"] else Block.XINF
    return GenMeta(
        name=name,
        block=fields["block"],
        character=fields["chi"],
        pi=fields["pi"],
        pinned=fields["pinned"],
        commutes=fields["commutes"],
    )


def _parse_var(cur: _Cursor) -> int:
    tok = cur.take(kind="ident")
    m = re.fullmatch(r"Y_(\d+)", tok.text)
    if not m:
        raise ParseError(f"expected a variable Y_i, found {tok.text!r}", cur.line, tok.col)
    return int(m.group(1))


def _parse_tie(rest: str, offset: int, lineno: int) -> Tie:
    cur = _Cursor(_tokenize(rest, lineno, offset), lineno, offset + len(rest) + 1)
    target = _parse_var(cur)
    cur.take("=")
    combo = []
    sign = -1 if cur.accept("-") else 1
    while True:
        tok = cur.peek()
        if tok is not None and tok.kind == "int":
            c = int(cur.take(kind="int").text)
            cur.take("*")
        else:
            c = 1
        combo.append((sign * c, _parse_var(cur)))
        if cur.accept("+"):
            sign = 1
        elif cur.accept("-"):
            sign = -1
        else:
            break
    cur.done()
    return Tie(target, tuple(combo))


# -- rendering --------------------------------------------------------------


def render_word(w: FreeWord) -> str:
    if not w.syllables:
        return "1"
    return " * ".join(n if e == 1 else f"{n}^{e}" for n, e in w.syllables)


def render_presentation(pres: Presentation) -> str:
    """DSL text that parses back to an equal presentation."""
    lines = [f"p {pres.p}  prec {pres.N}  deg {pres.D}"]
    if pres.diag.numeric:
        lines.append(f"chi1 omega^{pres.diag.chi1_omega}   chi2 omega^{pres.diag.chi2_omega}")
    if pres.gamma_letters:
        lines.append("gamma " + " ".join(pres.gamma_letters))
    for g in pres.gens:
        parts = [f"gen {g.name}", f"block={g.block.value}", f"chi={g.character}"]
        if g.pi:
            parts.append("pi=" + render_word(g.pi).replace(" ", ""))
        if g.pinned:
            parts.append("pinned")
        if g.commutes:
            parts.append("commutes")
        lines.append(" ".join(parts))
    for name, w in pres.relations:
        lines.append(f"rel {name} = {render_word(w)}")
    for t in pres.ties:
        lines.append(f"tie {t}")
    return "\n".join(lines) + "\n"


def presentation_to_dict(pres: Presentation) -> dict:
    return {
        "p": pres.p,
        "prec": pres.N,
        "deg": pres.D,
        "chi1": pres.diag.chi1_omega,
        "chi2": pres.diag.chi2_omega,
        "gamma": list(pres.gamma_letters),
        "generators": [
            {
                "name": g.name,
                "block": g.block.value,
                "chi": [g.character.omega, g.character.e1, g.character.e2],
                "pi": [list(s) for s in g.pi.syllables],
                "pinned": g.pinned,
                "commutes": g.commutes,
                "shape": g.shape.value if g.shape else None,
            }
            for g in pres.gens
        ],
        "relations": [
            {"name": name, "word": [list(s) for s in w.syllables]} for name, w in pres.relations
        ],
        "ties": [{"target": t.target, "combo": [list(c) for c in t.combo]} for t in pres.ties],
        "counts": pres.counts() if all(g.shape for g in pres.gens) else None,
    }


def presentation_from_dict(data: dict) -> Presentation:
    gens = tuple(
        GenMeta(
            name=g["name"],
            block=Block(g["block"]),
            character=Character(*g["chi"]),
            pi=FreeWord(tuple((n, e) for n, e in g["pi"])),
            pinned=g["pinned"],
            commutes=g["commutes"],
        )
        for g in data["generators"]
    )
    return Presentation(
        p=data["p"],
        N=data["prec"],
        D=data["deg"],
        diag=DiagonalCharacters(data["p"], data.get("chi1"), data.get("chi2")),
        gens=gens,
        relations=tuple(
            (r["name"], FreeWord(tuple((n, e) for n, e in r["word"]))) for r in data["relations"]
        ),
        ties=tuple(Tie(t["target"], tuple((c, i) for c, i in t["combo"])) for t in data["ties"]),
        gamma_letters=tuple(data["gamma"]),
    )


def presentation_to_json(pres: Presentation) -> str:
    return json.dumps(presentation_to_dict(pres), indent=2)


def presentation_from_json(text: str) -> Presentation:
    return presentation_from_dict(json.loads(text))
