"""Exact graded multivariate polynomial arithmetic over arbitrary-precision ints.

A polynomial is a sparse mapping from monomials to integer coefficients.
Variables carry an integer degree, which may be negative: formal-group-law
coefficients such as ``a11`` live in degree ``1-i-j``, the Bott class ``b``
in degree ``-1``, while geometric classes (hyperplane classes, Chern roots)
live in positive degrees.  Every polynomial therefore has a well-defined
grading and splits exactly into homogeneous components.

The module also provides the symmetric-function rewriting used by the
splitting principle (``symmetric_reduce``) and a textual grammar with a
bit-exact parse/print round trip.

Coefficients are Python ints, so all arithmetic is arbitrary precision.
Values are immutable after construction; all operations are pure.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class ContextError(ValueError):
    """Two different variables with the same name met in one computation."""


class GradingError(ValueError):
    """A substitution image does not match the substituted variable's degree."""


class SymmetryError(ValueError):
    """Input to symmetric_reduce is not symmetric in the root variables."""


class ParseError(ValueError):
    """Malformed polynomial text."""


@dataclass(frozen=True)
class Variable:
    """A named graded variable; degree is immutable after creation."""

    name: str
    degree: int

    def __repr__(self):
        return f"Variable({self.name!r}, {self.degree})"


def lazard_variable(i: int, j: int) -> Variable:
    """Coefficient generator a_{ij} in canonical form (i <= j), degree 1-i-j.

    Both spellings of a symmetric pair name the same variable: requesting
    (2, 1) returns ``a12``.
    """
    if i < 1 or j < 1:
        raise ValueError("lazard indices must be >= 1")
    if i > 9 or j > 9:
        raise ValueError("lazard indices above 9 are not supported by the grammar")
    i, j = min(i, j), max(i, j)
    return Variable(f"a{i}{j}", 1 - i - j)


#: Bott class of periodic K-theory; written ``b`` in the textual grammar.
BOTT = Variable("b", -1)

_LAZARD_RE = re.compile(r"^a([1-9])([1-9])$")


def geometric_variable(name: str, degree: int = 1) -> Variable:
    """A geometric class (positive degree)."""
    if degree < 1:
        raise ValueError("geometric variables must have positive degree")
    return Variable(name, degree)


class Monomial:
    """A product of variable powers, stored sparsely.

    Zero exponents are never stored.  Exponents are normally positive;
    negative exponents are tolerated so that Laurent scalars such as b^-1
    can be represented, but no operation in this package produces them.
    """

    __slots__ = ("_pairs",)

    def __init__(self, pairs: Iterable[tuple[Variable, int]] = ()):
        items = [(v, e) for v, e in pairs if e != 0]
        items.sort(key=lambda ve: ve[0].name)
        self._pairs = tuple(items)

    @property
    def pairs(self) -> tuple[tuple[Variable, int], ...]:
        return self._pairs

    def degree(self) -> int:
        return sum(v.degree * e for v, e in self._pairs)

    def degree_in(self, variables) -> int:
        return sum(e for v, e in self._pairs if v in variables)

    def exponent(self, var: Variable) -> int:
        for v, e in self._pairs:
            if v == var:
                return e
        return 0

    def variables(self) -> tuple[Variable, ...]:
        return tuple(v for v, _ in self._pairs)

    def __mul__(self, other: "Monomial") -> "Monomial":
        exps: dict[Variable, int] = dict(self._pairs)
        for v, e in other._pairs:
            exps[v] = exps.get(v, 0) + e
        return Monomial(exps.items())

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._pairs == other._pairs

    def __hash__(self):
        return hash(self._pairs)

    def sort_key(self):
        return tuple((v.name, e) for v, e in self._pairs)

    def __repr__(self):
        if not self._pairs:
            return "1"
        return "*".join(
            v.name if e == 1 else f"{v.name}^{e}" for v, e in self._pairs
        )


_ONE_MONOMIAL = Monomial()


def _check_context(vars_a: Iterable[Variable], vars_b: Iterable[Variable]):
    seen: dict[str, Variable] = {}
    for v in itertools.chain(vars_a, vars_b):
        prev = seen.get(v.name)
        if prev is not None and prev != v:
            raise ContextError(
                f"variable name {v.name!r} is bound to two different degrees "
                f"({prev.degree} and {v.degree})"
            )
        seen[v.name] = v


class CoefficientPoly:
    """Sparse exact polynomial; immutable after construction."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {m: c for m, c in (terms or {}).items() if c != 0}
        self._terms = clean

    # ---------- constructors ----------
    @staticmethod
    def zero() -> "CoefficientPoly":
        return CoefficientPoly()

    @staticmethod
    def const(n: int) -> "CoefficientPoly":
        return CoefficientPoly({_ONE_MONOMIAL: int(n)})

    @staticmethod
    def one() -> "CoefficientPoly":
        return CoefficientPoly.const(1)

    @staticmethod
    def variable(v: Variable, exp: int = 1, coeff: int = 1) -> "CoefficientPoly":
        return CoefficientPoly({Monomial([(v, exp)]): coeff})

    # ---------- views ----------
    def terms(self):
        return self._terms.items()

    def coefficient(self, monomial: Monomial) -> int:
        return self._terms.get(monomial, 0)

    def constant_term(self) -> int:
        return self._terms.get(_ONE_MONOMIAL, 0)

    def variables(self) -> set[Variable]:
        out: set[Variable] = set()
        for m in self._terms:
            out.update(m.variables())
        return out

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # ---------- arithmetic ----------
    @staticmethod
    def _coerce(other) -> "CoefficientPoly":
        if isinstance(other, CoefficientPoly):
            return other
        if isinstance(other, int):
            return CoefficientPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_context(self.variables(), other.variables())
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return CoefficientPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CoefficientPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_context(self.variables(), other.variables())
        out: dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = ma * mb
                out[m] = out.get(m, 0) + ca * cb
        return CoefficientPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = CoefficientPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scaled(self, c) -> "CoefficientPoly":
        """Multiplication by a scalar polynomial; shared protocol with Element."""
        return self * c

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # ---------- grading ----------
    def homogeneous_components(self) -> dict[int, "CoefficientPoly"]:
        """Split into homogeneous parts; the parts partition the polynomial."""
        buckets: dict[int, dict[Monomial, int]] = {}
        for m, c in self._terms.items():
            buckets.setdefault(m.degree(), {})[m] = c
        return {d: CoefficientPoly(t) for d, t in sorted(buckets.items())}

    def is_homogeneous(self) -> bool:
        return len({m.degree() for m in self._terms}) <= 1

    def degree(self) -> int | None:
        """Degree of a homogeneous polynomial; None for 0 or mixed input."""
        degs = {m.degree() for m in self._terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    # ---------- structural operations ----------
    def substitute(
        self,
        assignment: Mapping[Variable, "CoefficientPoly"],
        *,
        allow_degree_change: bool = False,
    ) -> "CoefficientPoly":
        """Homomorphic substitution of variables by polynomials.

        Unless the caller explicitly waives grading, each image must be
        homogeneous of the substituted variable's degree (the waiver is what
        specializations such as b -> 1 use).
        """
        if not allow_degree_change:
            for v, image in assignment.items():
                if not image.is_zero() and image.degree() != v.degree:
                    raise GradingError(
                        f"image of {v.name} (degree {v.degree}) is not homogeneous "
                        f"of that degree"
                    )
        total = CoefficientPoly.zero()
        for m, c in self._terms.items():
            term = CoefficientPoly.const(c)
            for v, e in m.pairs:
                if v in assignment:
                    if e < 0:
                        raise GradingError(
                            f"cannot substitute into negative power of {v.name}"
                        )
                    term = term * (assignment[v] ** e)
                else:
                    term = term * CoefficientPoly.variable(v, e)
            total = total + term
        return total

    def truncate_at_degree(self, geometric_vars, bound: int) -> "CoefficientPoly":
        """Drop terms whose total exponent in the given variables exceeds bound."""
        if bound < 0:
            raise ValueError("truncation bound must be >= 0")
        vars_set = set(geometric_vars)
        kept = {
            m: c
            for m, c in self._terms.items()
            if m.degree_in(vars_set) <= bound
        }
        return CoefficientPoly(kept)

    def __repr__(self):
        return f"CoefficientPoly({format_poly(self)})"


def poly_arith(p: CoefficientPoly, q: CoefficientPoly, op: str) -> CoefficientPoly:
    """Named arithmetic entry point: op in {'add', 'mul', 'neg'}."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Symmetric-function rewriting (fundamental theorem of symmetric polynomials)
# ---------------------------------------------------------------------------

def elementary_symmetric(k: int, roots: Sequence[Variable]) -> CoefficientPoly:
    """The k-th elementary symmetric polynomial in the given root variables."""
    if k == 0:
        return CoefficientPoly.one()
    total: dict[Monomial, int] = {}
    for subset in itertools.combinations(roots, k):
        m = Monomial([(v, 1) for v in subset])
        total[m] = total.get(m, 0) + 1
    return CoefficientPoly(total)


def _swap_roots(p: CoefficientPoly, a: Variable, b: Variable) -> CoefficientPoly:
    out: dict[Monomial, int] = {}
    for m, c in p.terms():
        pairs = []
        for v, e in m.pairs:
            if v == a:
                v = b
            elif v == b:
                v = a
            pairs.append((v, e))
        mm = Monomial(pairs)
        out[mm] = out.get(mm, 0) + c
    return CoefficientPoly(out)


def symmetric_reduce(
    p: CoefficientPoly,
    roots: Sequence[Variable],
    targets: Sequence[Variable],
) -> CoefficientPoly:
    """Rewrite a symmetric polynomial in the roots as a polynomial in the
    elementary symmetric variables ``targets[k-1] = e_k``.

    Implemented by leading-term subtraction in graded lex order on the root
    variables, the standard terminating algorithm.  Coefficients may involve
    arbitrary non-root variables.  Raises SymmetryError on asymmetric input.
    """
    r = len(roots)
    if len(targets) != r:
        raise ValueError("need one target variable per root")
    for i in range(r - 1):
        if _swap_roots(p, roots[i], roots[i + 1]) != p:
            raise SymmetryError(
                f"input is not symmetric under swapping {roots[i].name} "
                f"and {roots[i + 1].name}"
            )

    root_set = set(roots)
    remaining = p
    result = CoefficientPoly.zero()
    while not remaining.is_zero():
        # Leading root-exponent vector in graded lex order.
        best = None
        for m in dict(remaining.terms()):
            exps = tuple(m.exponent(v) for v in roots)
            key = (sum(exps), exps)
            if best is None or key > best[0]:
                best = (key, exps)
        exps = best[1]
        if not any(exps):
            # Purely non-root remainder: passes through unchanged.
            keep = {
                m: c for m, c in remaining.terms() if m.degree_in(root_set) == 0
            }
            result = result + CoefficientPoly(keep)
            remaining = remaining - CoefficientPoly(keep)
            continue
        lam = list(exps)
        if any(lam[i] < lam[i + 1] for i in range(r - 1)):
            raise SymmetryError("leading exponent of a symmetric polynomial "
                                "must be weakly decreasing; input not symmetric")
        # Coefficient of the leading root-monomial (a polynomial in the rest).
        lead_pairs = [(v, e) for v, e in zip(roots, lam) if e]
        coeff_terms: dict[Monomial, int] = {}
        for m, c in remaining.terms():
            if tuple(m.exponent(v) for v in roots) == exps:
                rest = Monomial([(v, e) for v, e in m.pairs if v not in root_set])
                coeff_terms[rest] = coeff_terms.get(rest, 0) + c
        coeff = CoefficientPoly(coeff_terms)
        lam.append(0)
        e_term = CoefficientPoly.one()
        expanded = CoefficientPoly.one()
        for k in range(1, r + 1):
            power = lam[k - 1] - lam[k]
            if power:
                e_term = e_term * (CoefficientPoly.variable(targets[k - 1]) ** power)
                expanded = expanded * (elementary_symmetric(k, roots) ** power)
        result = result + coeff * e_term
        remaining = remaining - coeff * expanded
    return result


# ---------------------------------------------------------------------------
# Textual grammar: round-trip parse/print
# ---------------------------------------------------------------------------

def _format_monomial(m: Monomial) -> str:
    factors = []
    for v, e in m.pairs:
        factors.append(v.name if e == 1 else f"{v.name}^{e}")
    return "*".join(factors)


def format_poly(p: CoefficientPoly) -> str:
    """Canonical text form; ``parse_poly`` reads it back bit-exactly."""
    if p.is_zero():
        return "0"
    items = sorted(p.terms(), key=lambda mc: mc[0].sort_key())
    pieces: list[str] = []
    for idx, (m, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = _format_monomial(m)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if idx == 0:
            pieces.append(text if c > 0 else f"-{text}")
        else:
            pieces.append(f" {sign} {text}")
    return "".join(pieces)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at {text[pos:]!r}")
            break
        if match.group("int"):
            tokens.append(("int", match.group("int")))
        elif match.group("name"):
            tokens.append(("name", match.group("name")))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    `*` is optional: juxtaposition multiplies (``2a11*u^2`` == ``2*a11*u^2``).
    Unknown names of the form a<i><j> resolve to canonical Lazard generators
    and ``b`` to the Bott class; all other names must be declared.
    """

    def __init__(self, tokens, variables: Mapping[str, Variable], auto_scalars: bool):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables
        self.auto_scalars = auto_scalars

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def resolve(self, name: str) -> Variable:
        if name in self.variables:
            return self.variables[name]
        if self.auto_scalars:
            m = _LAZARD_RE.match(name)
            if m:
                return lazard_variable(int(m.group(1)), int(m.group(2)))
            if name == "b":
                return BOTT
        raise ParseError(f"unknown variable {name!r}")

    def parse_expr(self) -> CoefficientPoly:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.parse_term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                term = self.parse_term()
                total = total + (term if val == "+" else -term)
            else:
                return total

    def parse_term(self) -> CoefficientPoly:
        total = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                total = total * self.parse_factor()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                total = total * self.parse_factor()
            else:
                return total

    def parse_factor(self) -> CoefficientPoly:
        kind, val = self.take()
        if kind == "int":
            base = CoefficientPoly.const(int(val))
        elif kind == "name":
            base = CoefficientPoly.variable(self.resolve(val))
        elif kind == "op" and val == "(":
            base = self.parse_expr()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise ParseError("expected ')'")
        else:
            raise ParseError(f"unexpected token {val!r}")
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "int":
                raise ParseError("expected integer exponent after '^'")
            exp = int(val)
            if neg:
                # Laurent power, only meaningful for invertible scalars like b.
                if len(base) != 1:
                    raise ParseError("negative powers apply to single variables only")
                ((m, c),) = base.terms()
                if c != 1 or len(m.pairs) != 1 or m.pairs[0][1] != 1:
                    raise ParseError("negative powers apply to single variables only")
                return CoefficientPoly({Monomial([(m.pairs[0][0], -exp)]): 1})
            return base ** exp
        return base


def parse_poly(
    text: str,
    variables: Mapping[str, Variable] | Iterable[Variable] = (),
    *,
    auto_scalars: bool = True,
) -> CoefficientPoly:
    """Parse the textual polynomial grammar into a CoefficientPoly."""
    if not isinstance(variables, Mapping):
        variables = {v.name: v for v in variables}
    parser = _Parser(_tokenize(text), variables, auto_scalars)
    result = parser.parse_expr()
    if parser.pos != len(parser.tokens):
        raise ParseError(f"trailing input near token {parser.pos}")
    return result
