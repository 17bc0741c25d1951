"""First-order formulas over (Q, <) and (Q, +, <).

Problems are read from a small s-expression format::

    theory doag
    vars x: x1 x2 ; y: y1
    formula (and (= x2 (+ x1 y1)) (< y1 x1))

Atoms are kept in canonical form ``term REL 0`` with ``REL`` one of ``<``,
``<=``, ``=``: integer coefficients with gcd 1, and for equations the first
variable (in name order) has a positive coefficient.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Mapping, Optional, Union

Rational = Fraction

DLO = "dlo"
DOAG = "doag"
THEORIES = (DLO, DOAG)
RELATIONS = ("<", "<=", "=")


class FormulaError(ValueError):
    """Base class for input errors."""


class ParseError(FormulaError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class UndeclaredVariable(ParseError):
    pass


class TheoryMismatch(ParseError):
    pass


class EmptyPartition(ParseError):
    pass


class MissingAssignment(FormulaError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "missing assignment"


# --------------------------------------------------------------------------
# terms and atoms


@dataclass(frozen=True)
class LinearTerm:
    coeffs: tuple[tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    @classmethod
    def make(cls, coeffs: Mapping[str, Fraction], const=0) -> "LinearTerm":
        items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if c != 0))
        return cls(items, Fraction(const))

    @classmethod
    def var(cls, name: str) -> "LinearTerm":
        return cls(((name, Fraction(1)),), Fraction(0))

    @classmethod
    def constant(cls, c) -> "LinearTerm":
        return cls((), Fraction(c))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def __add__(self, other: "LinearTerm") -> "LinearTerm":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinearTerm.make(d, self.const + other.const)

    def __neg__(self) -> "LinearTerm":
        return LinearTerm(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other: "LinearTerm") -> "LinearTerm":
        return self + (-other)

    def scale(self, k) -> "LinearTerm":
        k = Fraction(k)
        return LinearTerm.make({v: c * k for v, c in self.coeffs}, self.const * k)

    def value(self, point: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for v, c in self.coeffs:
            if v not in point:
                raise MissingAssignment(f"no value for variable {v!r}")
            total += c * Fraction(point[v])
        return total

    def canonical(self, fix_sign: bool) -> "LinearTerm":
        """Scale by a positive rational to coprime integers (any sign if ``fix_sign``)."""
        vals = [c for _, c in self.coeffs] + [self.const]
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g == 0:
            return self
        k = Fraction(den, g)
        if fix_sign and self.coeffs and self.coeffs[0][1] < 0:
            k = -k
        return self.scale(k)


@dataclass(frozen=True)
class Atom:
    """``term rel 0``."""
    term: LinearTerm
    rel: str

    @classmethod
    def make(cls, term: LinearTerm, rel: str) -> "Atom":
        if rel not in RELATIONS:
            raise FormulaError(f"unknown relation {rel!r}")
        return cls(term.canonical(rel == "="), rel)

    @classmethod
    def compare(cls, rel: str, lhs: LinearTerm, rhs: LinearTerm) -> "Atom":
        return cls.make(lhs - rhs, rel)

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        v = self.term.value(point)
        if self.rel == "<":
            return v < 0
        if self.rel == "<=":
            return v <= 0
        return v == 0

    @property
    def variables(self) -> tuple[str, ...]:
        return self.term.variables

    def is_dlo_shaped(self) -> bool:
        """Variable-vs-variable or variable-vs-constant, up to positive scaling."""
        cs = [c for _, c in self.term.coeffs]
        if len(cs) == 0:
            return True
        if len(cs) == 1:
            return True
        if len(cs) == 2:
            return cs[0] == -cs[1] and self.term.const == 0
        return False


@dataclass(frozen=True)
class Truth:
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Exists:
    vars: tuple[str, ...]
    body: object


@dataclass(frozen=True)
class Forall:
    vars: tuple[str, ...]
    body: object


Formula = Union[Atom, Truth, And, Or, Not, Exists, Forall]


def conj(*args) -> Formula:
    return And(tuple(args))


def disj(*args) -> Formula:
    return Or(tuple(args))


def iter_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from iter_atoms(a)
    elif isinstance(f, Not):
        yield from iter_atoms(f.arg)
    elif isinstance(f, (Exists, Forall)):
        yield from iter_atoms(f.body)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return set(f.variables)
    if isinstance(f, Truth):
        return set()
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Not):
        return free_vars(f.arg)
    return free_vars(f.body) - set(f.vars)


def bound_vars(f: Formula) -> set[str]:
    if isinstance(f, (Atom, Truth)):
        return set()
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for a in f.args:
            out |= bound_vars(a)
        return out
    if isinstance(f, Not):
        return bound_vars(f.arg)
    return set(f.vars) | bound_vars(f.body)


def is_quantifier_free(f: Formula) -> bool:
    return not bound_vars(f)


# --------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class Partition:
    x_vars: tuple[str, ...]
    y_vars: tuple[str, ...]

    def __post_init__(self):
        if not self.x_vars or not self.y_vars:
            raise EmptyPartition("both sides of the variable partition must be non-empty")
        if set(self.x_vars) & set(self.y_vars):
            raise FormulaError("x and y variables must be disjoint")
        if len(set(self.x_vars)) != len(self.x_vars) or len(set(self.y_vars)) != len(self.y_vars):
            raise FormulaError("duplicate variable in partition")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.x_vars + self.y_vars


@dataclass(frozen=True)
class Problem:
    theory: str
    partition: Partition
    formula: Formula

    def __post_init__(self):
        validate(self.theory, self.partition, self.formula)


def validate(theory: str, partition: Partition, formula: Formula) -> None:
    if theory not in THEORIES:
        raise FormulaError(f"unknown theory {theory!r}")
    declared = set(partition.vars)
    extra = free_vars(formula) - declared
    if extra:
        raise UndeclaredVariable(f"undeclared variable(s): {', '.join(sorted(extra))}")
    clash = bound_vars(formula) & declared
    if clash:
        raise FormulaError(f"bound variable(s) shadow the partition: {', '.join(sorted(clash))}")
    if theory == DLO:
        for a in iter_atoms(formula):
            if not a.is_dlo_shaped():
                raise TheoryMismatch(f"atom {atom_sexpr(a)} is not expressible in DLO")


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s+|#[^\n]*|(?P<lp>\()|(?P<rp>\))|(?P<colon>:)|(?P<semi>;)"
    r"|(?P<num>-?\d+(?:/\d+)?(?![A-Za-z0-9_]))|(?P<op><=|<|=|\+|\*|-)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind is not None:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, theory: Optional[str] = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.theory = theory
        self._free_refs: list = []
        self._binders: list = []

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str = "token") -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise ParseError(f"unexpected end of input, expected {what}", last.line, last.col + len(last.text))
        self.i += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.next(text or kind)
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(f"expected {text or kind}, got {t.text!r}", t.line, t.col)
        return t

    def done(self):
        t = self.peek()
        if t is not None:
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)

    # problem header -------------------------------------------------------
    def problem(self) -> Problem:
        self.expect("ident", "theory")
        t = self.expect("ident")
        if t.text not in THEORIES:
            raise ParseError(f"unknown theory {t.text!r}", t.line, t.col)
        self.theory = t.text
        vtok = self.expect("ident", "vars")
        xs = self._side("x")
        self.expect("semi")
        ys = self._side("y")
        if not xs or not ys:
            raise EmptyPartition("both sides of the variable partition must be non-empty", vtok.line, vtok.col)
        self.expect("ident", "formula")
        f = self.sexpr()
        self.done()
        try:
            part = Partition(tuple(xs), tuple(ys))
        except EmptyPartition:
            raise
        except FormulaError as e:
            raise ParseError(str(e), vtok.line, vtok.col) from None
        declared = set(part.vars)
        for name, tok in self._free_refs:
            if name not in declared:
                raise UndeclaredVariable(f"undeclared variable {name!r}", tok.line, tok.col)
        for name, tok in self._binders:
            if name in declared:
                raise ParseError(f"bound variable {name!r} is also a partition variable", tok.line, tok.col)
        return Problem(self.theory, part, f)

    def _side(self, label: str) -> list[str]:
        self.expect("ident", label)
        self.expect("colon")
        names = []
        while (t := self.peek()) is not None and t.kind == "ident" and t.text != "formula":
            names.append(self.next().text)
        return names

    # formulas -------------------------------------------------------------
    def formula_only(self) -> Formula:
        f = self.sexpr()
        self.done()
        return f

    def sexpr(self, bound: frozenset = frozenset()) -> Formula:
        t = self.next("formula")
        if t.kind == "ident" and t.text in ("true", "false"):
            return TRUE if t.text == "true" else FALSE
        if t.kind != "lp":
            raise ParseError(f"expected '(', got {t.text!r}", t.line, t.col)
        head = self.next("connective or relation")
        if head.kind == "ident" and head.text in ("and", "or"):
            args = []
            while self.peek() is not None and self.peek().kind != "rp":
                args.append(self.sexpr(bound))
            self.expect("rp")
            if not args:
                raise ParseError(f"({head.text}) needs at least one argument", head.line, head.col)
            return (And if head.text == "and" else Or)(tuple(args))
        if head.kind == "ident" and head.text == "not":
            arg = self.sexpr(bound)
            self.expect("rp")
            return Not(arg)
        if head.kind == "ident" and head.text in ("exists", "forall"):
            self.expect("lp")
            names = []
            while self.peek() is not None and self.peek().kind == "ident":
                tok = self.next()
                names.append(tok.text)
                self._binders.append((tok.text, tok))
            self.expect("rp")
            if not names:
                raise ParseError("quantifier binds no variables", head.line, head.col)
            body = self.sexpr(bound | frozenset(names))
            self.expect("rp")
            return (Exists if head.text == "exists" else Forall)(tuple(names), body)
        if head.kind == "op" and head.text in RELATIONS:
            lhs = self.term(bound)
            rhs = self.term(bound)
            self.expect("rp")
            return Atom.compare(head.text, lhs, rhs)
        raise ParseError(f"unknown connective {head.text!r}", head.line, head.col)

    def term(self, bound: frozenset) -> LinearTerm:
        t = self.next("term")
        if t.kind == "num":
            return LinearTerm.constant(Fraction(t.text))
        if t.kind == "ident":
            if t.text not in bound:
                self._free_refs.append((t.text, t))
            return LinearTerm.var(t.text)
        if t.kind != "lp":
            raise ParseError(f"expected a term, got {t.text!r}", t.line, t.col)
        op = self.next("term operator")
        if self.theory == DLO:
            raise TheoryMismatch(f"DLO terms are variables or constants; '({op.text}' is not allowed", op.line, op.col)
        if op.kind == "op" and op.text == "+":
            parts = []
            while self.peek() is not None and self.peek().kind != "rp":
                parts.append(self.term(bound))
            self.expect("rp")
            if not parts:
                raise ParseError("(+) needs at least one term", op.line, op.col)
            out = parts[0]
            for p in parts[1:]:
                out = out + p
            return out
        if op.kind == "op" and op.text == "*":
            k = self.expect("num")
            arg = self.term(bound)
            self.expect("rp")
            return arg.scale(Fraction(k.text))
        if op.kind == "op" and op.text == "-":
            a = self.term(bound)
            b = self.term(bound)
            self.expect("rp")
            return a - b
        raise ParseError(f"unknown term operator {op.text!r}", op.line, op.col)


def parse(text: str) -> Problem:
    """Parse a problem file.  Raises :class:`ParseError` subclasses."""
    return _Parser(text).problem()


def parse_formula(text: str, theory: str = DOAG) -> Formula:
    """Parse a bare s-expression formula (no header, no declaration check)."""
    return _Parser(text, theory).formula_only()


# --------------------------------------------------------------------------
# printing


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _side_sexpr(items: list[tuple[str, Fraction]], const: Fraction) -> str:
    parts = [v if c == 1 else f"(* {format_rational(c)} {v})" for v, c in items]
    if const != 0 or not parts:
        parts.append(format_rational(const))
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def atom_sexpr(a: Atom) -> str:
    pos = [(v, c) for v, c in a.term.coeffs if c > 0]
    neg = [(v, -c) for v, c in a.term.coeffs if c < 0]
    k = a.term.const
    lhs = _side_sexpr(pos, k if k > 0 else Fraction(0))
    rhs = _side_sexpr(neg, -k if k < 0 else Fraction(0))
    return f"({a.rel} {lhs} {rhs})"


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Atom):
        return atom_sexpr(f)
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, And):
        return "(and " + " ".join(to_sexpr(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_sexpr(a) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.arg)})"
    kw = "exists" if isinstance(f, Exists) else "forall"
    return f"({kw} ({' '.join(f.vars)}) {to_sexpr(f.body)})"


def format_problem(p: Problem) -> str:
    return (
        f"theory {p.theory}\n"
        f"vars x: {' '.join(p.partition.x_vars)} ; y: {' '.join(p.partition.y_vars)}\n"
        f"formula {to_sexpr(p.formula)}\n"
    )


# --------------------------------------------------------------------------
# evaluation


def evaluate(f: Formula, point: Mapping[str, Fraction]) -> bool:
    """Truth value of a quantifier-free formula at a rational point."""
    if isinstance(f, Atom):
        return f.holds(point)
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, And):
        return all(evaluate(a, point) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, point) for a in f.args)
    if isinstance(f, Not):
        return not evaluate(f.arg, point)
    raise FormulaError("evaluate() needs a quantifier-free formula; use eval_quantified_oracle")


def _candidates(body: Formula, var: str, point: Mapping[str, Fraction]) -> list[Fraction]:
    roots = set()
    for a in iter_atoms(body):
        coeffs = a.term.as_dict()
        c = coeffs.pop(var, 0)
        if c == 0:
            continue
        rest = LinearTerm.make(coeffs, a.term.const).value(point)
        roots.add(-rest / c)
    if not roots:
        return [Fraction(0)]
    rs = sorted(roots)
    out = [rs[0] - 1, rs[-1] + 1] + rs
    out += [(p + q) / 2 for p, q in zip(rs, rs[1:])]
    return out


def _eval_q(f: Formula, point: dict) -> bool:
    if isinstance(f, (Atom, Truth)):
        return evaluate(f, point)
    if isinstance(f, And):
        return all(_eval_q(a, point) for a in f.args)
    if isinstance(f, Or):
        return any(_eval_q(a, point) for a in f.args)
    if isinstance(f, Not):
        return not _eval_q(f.arg, point)
    (var,) = f.vars
    results = (
        _eval_q(f.body, {**point, var: c}) for c in _candidates(f.body, var, point)
    )
    return any(results) if isinstance(f, Exists) else all(results)


def eval_quantified_oracle(f: Formula, point: Mapping[str, Fraction]) -> bool:
    """Decide a formula with one bound variable by finite candidate substitution.

    At a fixed assignment of the free variables every atom is a half-line,
    point or nothing in the bound variable, so its truth is constant between
    consecutive roots; roots, midpoints and the two outer points suffice.
    """
    bv = bound_vars(f)
    if len(bv) > 1:
        raise FormulaError(f"oracle handles one bound variable, got {sorted(bv)}")
    return _eval_q(f, {k: Fraction(v) for k, v in point.items()})
