"""Job description language: tokenizer, parser, printer and potential builder.

Example::

    job check
    genus 1
    potential elliptic_wp2 { n 1  g2 4/1  g3 0/1 }

Rationals are always written ``p/q``; integers (genus, n, exponents) are bare.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import SpecError, UnsupportedHalfPeriod, UnsupportedShape
from .exactalg import QuadraticField, rational_sqrt
from .potentials import (
    EllipticPotential,
    LocalPotential,
    PoleData,
    PolynomialPotential,
    RationalPotential,
    build_elliptic_u,
    quantized_strength,
)

JOB_KINDS = ("check", "curve", "frobenius", "explore")
FORMATS = ("json", "text")
SHIFTS = ("zero", "plus", "minus")

_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|([{}])|(-?\d+/-?\d+)|(-?\d+(?![\d/]))|([A-Za-z_][A-Za-z0-9_]*)|(\S+))")

# constructor -> {key: kind}; kinds: rat, int, shift, rats, pole
CONSTRUCTORS = {
    "elliptic_wp2": {"n": "int", "g2": "rat", "g3": "rat", "shift": "shift"},
    "elliptic": {"g2": "rat", "g3": "rat", "wp2": "rat", "wp1": "rat", "const": "rat", "shift": "shift"},
    "rational": {"constant": "rat", "pole": "pole"},
    "polynomial": {"V": "rats", "W": "rats"},
    "local": {"pole": "pole"},
}
_REQUIRED = {"elliptic_wp2": ("n", "g2", "g3"), "elliptic": ("g2", "g3")}
POLE_KEYS = ("at", "n", "phi")


@dataclass(frozen=True)
class Token:
    kind: str  # word, int, rat, lbrace, rbrace, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if m is None or m.end() == pos:
                break
            col = m.start(m.lastindex) + 1 if m.lastindex else pos + 1
            comment, brace, rat, integer, word, junk = m.groups()
            pos = m.end()
            if comment:
                break
            if brace:
                out.append(Token("lbrace" if brace == "{" else "rbrace", brace, lineno, col))
            elif rat:
                out.append(Token("rat", rat, lineno, col))
            elif integer:
                out.append(Token("int", integer, lineno, col))
            elif word:
                out.append(Token("word", word, lineno, col))
            elif junk:
                raise SpecError(f"unexpected text {junk!r}", lineno, col)
    last = len(text.splitlines()) or 1
    out.append(Token("eof", "", last + 1, 1))
    return out


@dataclass(frozen=True)
class PoleSpec:
    at: Fraction
    phi: tuple = ()  # sorted (exponent, value) pairs
    n: int | None = None

    def to_pole(self) -> PoleData:
        return PoleData(self.at, dict(self.phi), self.n)


@dataclass(frozen=True)
class PotentialSpec:
    constructor: str
    params: tuple = ()  # (key, value) in canonical key order
    poles: tuple = ()

    def param(self, key, default=None):
        return dict(self.params).get(key, default)


@dataclass(frozen=True)
class JobSpec:
    job: str
    potential: PotentialSpec
    genus: int | None = None
    truncation: int | None = None
    lambdas: tuple = ()
    format: str | None = None


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, tok, message, expected=None):
        raise SpecError(message, tok.line, tok.column, expected)

    def expect(self, kind, expected_desc):
        t = self.take()
        if t.kind != kind:
            self.fail(t, f"unexpected {t.text or 'end of input'!r}", {expected_desc})
        return t

    def rational(self) -> Fraction:
        t = self.take()
        if t.kind != "rat":
            self.fail(t, f"expected a rational p/q, got {t.text or 'end of input'!r}", {"<p/q>"})
        p, q = t.text.split("/")
        if int(q) <= 0:
            self.fail(t, "denominator must be positive", {"<p/q>"})
        return Fraction(int(p), int(q))

    def integer(self) -> int:
        return int(self.expect("int", "<int>").text)

    def word(self, choices) -> str:
        t = self.take()
        if t.kind != "word" or t.text not in choices:
            self.fail(t, f"unexpected {t.text or 'end of input'!r}", set(choices))
        return t.text

    def parse(self) -> JobSpec:
        seen = {}
        job, genus, trunc, fmt, pot = "check", None, None, None, None
        lambdas = ()
        stmts = ("job", "genus", "truncation", "lambda", "format", "potential")
        while self.peek().kind != "eof":
            t = self.take()
            if t.kind != "word" or t.text not in stmts:
                self.fail(t, f"unexpected {t.text!r}", set(stmts))
            if t.text in seen:
                self.fail(t, f"duplicate statement {t.text!r} (first at line {seen[t.text].line})")
            seen[t.text] = t
            if t.text == "job":
                job = self.word(JOB_KINDS)
            elif t.text == "genus":
                nt = self.peek()
                genus = self.integer()
                if genus < 1:
                    self.fail(nt, f"genus must be >= 1, got {genus}")
            elif t.text == "truncation":
                nt = self.peek()
                trunc = self.integer()
                if trunc < 1:
                    self.fail(nt, f"truncation must be >= 1, got {trunc}")
            elif t.text == "lambda":
                vals = [self.rational()]
                while self.peek().kind == "rat":
                    vals.append(self.rational())
                lambdas = tuple(vals)
            elif t.text == "format":
                fmt = self.word(FORMATS)
            else:
                pot = self.potential()
        if pot is None:
            self.fail(self.peek(), "missing potential statement", {"potential"})
        return JobSpec(job, pot, genus, trunc, lambdas, fmt)

    def potential(self) -> PotentialSpec:
        ct = self.peek()
        ctor = self.word(tuple(CONSTRUCTORS))
        keys = CONSTRUCTORS[ctor]
        self.expect("lbrace", "{")
        params, poles = {}, []
        while self.peek().kind != "rbrace":
            kt = self.take()
            if kt.kind != "word" or kt.text not in keys:
                self.fail(kt, f"unknown key {kt.text or 'end of input'!r} for {ctor}", set(keys) | {"}"})
            key, kind = kt.text, keys[kt.text]
            if kind == "pole":
                poles.append((kt, self.pole()))
                continue
            if key in params:
                self.fail(kt, f"duplicate key {key!r}")
            if kind == "rat":
                params[key] = self.rational()
            elif kind == "int":
                params[key] = self.integer()
            elif kind == "shift":
                params[key] = self.word(SHIFTS)
            else:
                vals = [self.rational()]
                while self.peek().kind == "rat":
                    vals.append(self.rational())
                params[key] = tuple(vals)
        self.take()
        for req in _REQUIRED.get(ctor, ()):
            if req not in params:
                self.fail(ct, f"{ctor} needs key {req!r}", {req})
        if ctor == "elliptic_wp2" and params["n"] < 1:
            self.fail(ct, "n must be a positive integer")
        if "shift" in params and params.get("g3", 0) != 0:
            self.fail(ct, "half-period shift requires g3 = 0/1")
        if ctor == "elliptic_wp2" and "shift" in params and params["n"] != 1:
            self.fail(ct, "half-period shift is supported for n = 1 only")
        locs = {}
        for pt, pole in poles:
            if pole.at in locs:
                self.fail(pt, f"duplicate pole location {pole.at}")
            locs[pole.at] = pt
            if ctor == "rational" and any(e >= 0 for e, _ in pole.phi):
                self.fail(pt, "rational poles take principal parts only (phi exponents < 0)")
        order = [k for k in keys if k in params]
        return PotentialSpec(ctor, tuple((k, params[k]) for k in order), tuple(p for _, p in poles))

    def pole(self) -> PoleSpec:
        open_tok = self.peek()
        self.expect("lbrace", "{")
        at, n, phi = None, None, {}
        while self.peek().kind != "rbrace":
            kt = self.take()
            if kt.kind != "word" or kt.text not in POLE_KEYS:
                self.fail(kt, f"unknown pole key {kt.text or 'end of input'!r}", set(POLE_KEYS) | {"}"})
            if kt.text == "at":
                if at is not None:
                    self.fail(kt, "duplicate key 'at'")
                at = self.rational()
            elif kt.text == "n":
                if n is not None:
                    self.fail(kt, "duplicate key 'n'")
                nt = self.peek()
                n = self.integer()
                if n < 1:
                    self.fail(nt, "n must be a positive integer")
            else:
                et = self.peek()
                e = self.integer()
                if e in phi:
                    self.fail(et, f"duplicate phi exponent {e}")
                phi[e] = self.rational()
        self.take()
        if at is None:
            self.fail(open_tok, "pole needs 'at'", {"at"})
        if n is not None and phi.get(-4, 0) and quantized_strength(n) != phi[-4]:
            self.fail(open_tok, f"n={n} does not match phi -4 {phi[-4]}")
        if n is not None and -4 not in phi:
            phi[-4] = Fraction(quantized_strength(n))
        return PoleSpec(at, tuple(sorted((e, v) for e, v in phi.items() if v)), n)


def parse_spec(text: str) -> JobSpec:
    """Parse a job description; raises SpecError with line, column and expected tokens."""
    return _Parser(text).parse()


def _rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _format_pole(p: PoleSpec) -> str:
    parts = [f"at {_rat(p.at)}"]
    if p.n is not None:
        parts.append(f"n {p.n}")
    parts += [f"phi {e} {_rat(v)}" for e, v in p.phi]
    return "pole { " + "  ".join(parts) + " }"


def format_spec(spec: JobSpec) -> str:
    """Canonical text form; parse_spec(format_spec(s)) == s."""
    lines = [f"job {spec.job}"]
    if spec.genus is not None:
        lines.append(f"genus {spec.genus}")
    if spec.truncation is not None:
        lines.append(f"truncation {spec.truncation}")
    if spec.lambdas:
        lines.append("lambda " + " ".join(_rat(x) for x in spec.lambdas))
    if spec.format is not None:
        lines.append(f"format {spec.format}")
    pot = spec.potential
    body = []
    for k, v in pot.params:
        if isinstance(v, tuple):
            body.append(f"{k} " + " ".join(_rat(x) for x in v))
        elif isinstance(v, int) and not isinstance(v, bool) and CONSTRUCTORS[pot.constructor][k] == "int":
            body.append(f"{k} {v}")
        elif isinstance(v, str):
            body.append(f"{k} {v}")
        else:
            body.append(f"{k} {_rat(v)}")
    if pot.poles:
        lines.append(f"potential {pot.constructor} {{")
        if body:
            lines.append("  " + "  ".join(body))
        lines += ["  " + _format_pole(p) for p in pot.poles]
        lines.append("}")
    else:
        lines.append(f"potential {pot.constructor} {{ " + "  ".join(body) + " }")
    return "\n".join(lines) + "\n"


def _shift_field(g2, shift):
    if shift in (None, "zero") or rational_sqrt(g2) is not None:
        return None
    return QuadraticField(0, g2, name="r")


def build_potential(pot: PotentialSpec):
    """Instantiate the Potential described by ``pot``."""
    p = dict(pot.params)
    try:
        if pot.constructor == "elliptic_wp2":
            shift = p.get("shift")
            return build_elliptic_u(p["n"], p["g2"], p["g3"], shifted=shift is not None,
                                    branch=shift or "zero", field=_shift_field(p["g2"], shift))
        if pot.constructor == "elliptic":
            shift = p.get("shift")
            return EllipticPotential(p["g2"], p["g3"], p.get("wp2", 0), p.get("wp1", 0), p.get("const", 0),
                                     shift=shift, field=_shift_field(p["g2"], shift))
        if pot.constructor == "rational":
            return RationalPotential([q.to_pole() for q in pot.poles], p.get("constant", 0))
        if pot.constructor == "polynomial":
            return PolynomialPotential(p.get("V", ()), p.get("W", ()))
        if pot.constructor == "local":
            return LocalPotential([q.to_pole() for q in pot.poles])
    except (ValueError, UnsupportedShape, UnsupportedHalfPeriod) as exc:
        raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown constructor {pot.constructor!r}", expected=set(CONSTRUCTORS))


__all__ = [
    "CONSTRUCTORS",
    "JOB_KINDS",
    "JobSpec",
    "PoleSpec",
    "PotentialSpec",
    "build_potential",
    "format_spec",
    "parse_spec",
    "tokenize",
]
