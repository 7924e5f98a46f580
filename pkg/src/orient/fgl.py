"""Truncated formal-group-law calculus.

Provides the universal, additive (chow) and multiplicative (ktheory) laws,
formal sums and n-series, formal inverses by fixed-point iteration, the
invariant differential, and residue-formula pushforwards along projective
bundles.

All functions operate on any value supporting ``+``, ``-``, ``*`` and
``.scaled(coefficient_poly)``: both ``CoefficientPoly`` and algebra
``Element`` qualify.  Polynomial inputs are truncated explicitly through a
``truncate`` callback; algebra elements truncate themselves through their
structure constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .symbolic import (
    BOTT,
    CoefficientPoly,
    Monomial,
    Variable,
    format_poly,
    geometric_variable,
    lazard_variable,
    parse_poly,
    symmetric_reduce,
)

_ZERO = CoefficientPoly.zero()
_ONE = CoefficientPoly.one()


class FormalGroupLaw:
    """F(x, y) = x + y + sum a_ij x^i y^j, truncated at i + j <= degree_cap + 1.

    The universal law keeps the a_ij as free symmetric generators (a_ij and
    a_ji are the same variable); no further relations are imposed, which is
    faithful for all computations truncated at total degree <= 3 and for
    every fixture in this package.
    """

    def __init__(self, tag: str, degree_cap: int,
                 coefficients: Mapping[tuple[int, int], CoefficientPoly] | None = None):
        if degree_cap < 0:
            raise ValueError("degree_cap must be >= 0")
        if tag not in ("universal", "chow", "ktheory", "custom"):
            raise ValueError(f"unknown theory tag {tag!r}")
        if tag == "custom" and coefficients is None:
            raise ValueError("custom law needs explicit coefficients")
        self.tag = tag
        self.degree_cap = degree_cap
        self._custom = dict(coefficients) if coefficients else None

    # ---------- constructors ----------
    @staticmethod
    def universal(degree_cap: int) -> "FormalGroupLaw":
        return FormalGroupLaw("universal", degree_cap)

    @staticmethod
    def chow(degree_cap: int) -> "FormalGroupLaw":
        return FormalGroupLaw("chow", degree_cap)

    @staticmethod
    def ktheory(degree_cap: int) -> "FormalGroupLaw":
        return FormalGroupLaw("ktheory", degree_cap)

    @staticmethod
    def custom(coefficients: Mapping[tuple[int, int], CoefficientPoly],
               degree_cap: int) -> "FormalGroupLaw":
        return FormalGroupLaw("custom", degree_cap, coefficients)

    def with_cap(self, degree_cap: int) -> "FormalGroupLaw":
        return FormalGroupLaw(self.tag, degree_cap, self._custom)

    # ---------- law data ----------
    def coefficient(self, i: int, j: int) -> CoefficientPoly:
        """Coefficient of x^i y^j for i, j >= 1; zero above the cap."""
        if i < 1 or j < 1:
            raise ValueError("coefficients exist for i, j >= 1 only")
        if i + j > self.degree_cap + 1:
            return _ZERO
        if self.tag == "universal":
            return CoefficientPoly.variable(lazard_variable(i, j))
        if self.tag == "chow":
            return _ZERO
        if self.tag == "ktheory":
            if (i, j) == (1, 1):
                return -CoefficientPoly.variable(BOTT)
            return _ZERO
        return self._custom.get((min(i, j), max(i, j)), _ZERO)

    def scalar_variables(self) -> list[Variable]:
        """The coefficient-ring variables this law can produce."""
        if self.tag == "universal":
            out = []
            for i in range(1, self.degree_cap + 1):
                for j in range(i, self.degree_cap + 2 - i):
                    out.append(lazard_variable(i, j))
            return out
        if self.tag == "ktheory":
            return [BOTT]
        if self.tag == "custom":
            seen: list[Variable] = []
            for poly in self._custom.values():
                for v in poly.variables():
                    if v not in seen:
                        seen.append(v)
            return seen
        return []

    def same_theory(self, other: "FormalGroupLaw") -> bool:
        return self.tag == other.tag

    def __eq__(self, other):
        if not isinstance(other, FormalGroupLaw):
            return NotImplemented
        return (self.tag, self.degree_cap) == (other.tag, other.degree_cap) and (
            self._custom == other._custom
        )

    def __repr__(self):
        return f"FormalGroupLaw({self.tag!r}, cap={self.degree_cap})"

    # ---------- serialization ----------
    def to_json(self) -> dict:
        data = {"tag": self.tag, "degree_cap": self.degree_cap}
        if self.tag == "custom":
            data["coefficients"] = {
                f"{i},{j}": format_poly(p) for (i, j), p in self._custom.items()
            }
        return data

    @staticmethod
    def from_json(data: dict) -> "FormalGroupLaw":
        if data["tag"] != "custom":
            return FormalGroupLaw(data["tag"], data["degree_cap"])
        coeffs = {}
        for key, text in data["coefficients"].items():
            i, j = key.split(",")
            coeffs[(int(i), int(j))] = parse_poly(text)
        return FormalGroupLaw.custom(coeffs, data["degree_cap"])


class TheoryMorphism:
    """A coefficient-ring specialization classifying a new law.

    Maps each scalar variable of the source law to a polynomial over the
    target law's scalars; chow sends every a_ij to 0, ktheory sends a11 to
    -b and the rest to 0.
    """

    def __init__(self, source: FormalGroupLaw, target: FormalGroupLaw,
                 mapping: Mapping[Variable, CoefficientPoly],
                 *, allow_degree_change: bool = False):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        self.allow_degree_change = allow_degree_change

    @staticmethod
    def to_chow(source: FormalGroupLaw) -> "TheoryMorphism":
        mapping = {v: _ZERO for v in source.scalar_variables()}
        return TheoryMorphism(source, FormalGroupLaw.chow(source.degree_cap), mapping)

    @staticmethod
    def to_ktheory(source: FormalGroupLaw, *, sign: int = -1) -> "TheoryMorphism":
        """a11 -> sign*b, all other a_ij -> 0.

        sign=-1 is the multiplicative law x + y - b*x*y; sign=+1 is the
        opposite convention (equivalent after b -> -b), exposed because both
        appear in the literature on moduli of curves.
        """
        mapping = {}
        for v in source.scalar_variables():
            if v == lazard_variable(1, 1):
                mapping[v] = CoefficientPoly.variable(BOTT) * sign
            else:
                mapping[v] = _ZERO
        return TheoryMorphism(source, FormalGroupLaw.ktheory(source.degree_cap), mapping)

    @staticmethod
    def identity(source: FormalGroupLaw) -> "TheoryMorphism":
        return TheoryMorphism(source, source, {})

    def apply(self, poly: CoefficientPoly) -> CoefficientPoly:
        return poly.substitute(self.mapping, allow_degree_change=self.allow_degree_change)


def named_theory(name: str, degree_cap: int) -> FormalGroupLaw:
    factory = {
        "universal": FormalGroupLaw.universal,
        "chow": FormalGroupLaw.chow,
        "ktheory": FormalGroupLaw.ktheory,
    }.get(name)
    if factory is None:
        raise ValueError(f"unknown theory {name!r}")
    return factory(degree_cap)


def poly_truncator(geometric_vars, bound: int) -> Callable:
    """Truncation callback for polynomial-valued formal sums."""
    vars_set = set(geometric_vars)

    def trunc(p: CoefficientPoly) -> CoefficientPoly:
        return p.truncate_at_degree(vars_set, bound)

    return trunc


def f_add(x, y, fgl: FormalGroupLaw, truncate: Callable | None = None):
    """x +_F y = x + y + sum a_ij x^i y^j, truncated.

    ``truncate`` post-processes every term (useful for polynomial inputs);
    algebra elements need none because their products vanish above the
    dimension bound.
    """
    total = x + y
    if truncate is not None:
        total = truncate(total)
    xp = x
    for i in range(1, fgl.degree_cap + 1):
        if truncate is not None:
            xp = truncate(xp)
        yp = y
        for j in range(1, fgl.degree_cap + 2 - i):
            if truncate is not None:
                yp = truncate(yp)
            coeff = fgl.coefficient(i, j)
            if not coeff.is_zero():
                term = (xp * yp).scaled(coeff)
                if truncate is not None:
                    term = truncate(term)
                total = total + term
            if j < fgl.degree_cap + 2 - i:
                yp = yp * y
        if i < fgl.degree_cap + 1:
            xp = xp * x
    if truncate is not None:
        total = truncate(total)
    return total


def f_subtract(x, y, fgl: FormalGroupLaw, truncate: Callable | None = None,
               iterations: int | None = None):
    """x -_F y = F(x, chi(y))."""
    return f_add(x, formal_inverse(y, fgl, truncate, iterations=iterations),
                 fgl, truncate)


def f_sum(values: Sequence, fgl: FormalGroupLaw, truncate: Callable | None = None):
    """Left fold of f_add over a sequence; empty input is not allowed."""
    values = list(values)
    if not values:
        raise ValueError("f_sum needs at least one summand")
    total = values[0]
    for v in values[1:]:
        total = f_add(total, v, fgl, truncate)
    return total


def n_series(n: int, x, fgl: FormalGroupLaw, truncate: Callable | None = None):
    """[n]_F x, the n-fold formal sum of x with itself; [0]_F x = 0."""
    if n < 0:
        raise ValueError("n-series is defined for n >= 0")
    if n == 0:
        return x.scaled(_ZERO)
    total = x
    for _ in range(n - 1):
        total = f_add(total, x, fgl, truncate)
    return total


def formal_inverse(x, fgl: FormalGroupLaw, truncate: Callable | None = None,
                   *, iterations: int | None = None):
    """chi_F(x), the unique series with F(x, chi(x)) = 0 in the truncated ring.

    Fixed-point iteration y <- y - F(x, y) starting from y = -x; every pass
    gains one degree of accuracy, so degree_cap + 1 passes always suffice.
    """
    if iterations is None:
        iterations = fgl.degree_cap + 1
    y = -x
    for _ in range(iterations):
        y = y - f_add(x, y, fgl, truncate)
    return y


@dataclass(frozen=True)
class InvariantDifferential:
    """Coefficients omega_r of the invariant differential of a law.

    omega_0 = 1 and omega_r is homogeneous of degree -r.
    """

    omegas: tuple[CoefficientPoly, ...]

    def __getitem__(self, r: int) -> CoefficientPoly:
        if r < 0:
            raise IndexError("omega_r defined for r >= 0")
        return self.omegas[r]

    def __len__(self):
        return len(self.omegas)


def invariant_differential(fgl: FormalGroupLaw, r_max: int) -> InvariantDifferential:
    """omega_0 = 1; omega_r = -sum_{i=1}^{r} a_{i1} omega_{r-i}."""
    if r_max > fgl.degree_cap:
        raise ValueError("r_max exceeds the law's truncation level")
    omegas = [_ONE]
    for r in range(1, r_max + 1):
        acc = _ZERO
        for i in range(1, r + 1):
            acc = acc + fgl.coefficient(i, 1) * omegas[r - i]
        omegas.append(-acc)
    return InvariantDifferential(tuple(omegas))


# ---------------------------------------------------------------------------
# Quillen residue formula
# ---------------------------------------------------------------------------

def _laurent_mul(a: dict[int, CoefficientPoly], b: dict[int, CoefficientPoly],
                 trunc: Callable) -> dict[int, CoefficientPoly]:
    out: dict[int, CoefficientPoly] = {}
    for da, pa in a.items():
        for db, pb in b.items():
            prod = trunc(pa * pb)
            if prod.is_zero():
                continue
            d = da + db
            out[d] = out.get(d, _ZERO) + prod
    return {d: p for d, p in out.items() if not p.is_zero()}


def residue_series(fgl: FormalGroupLaw, rank: int, bound: int,
                   powers: Sequence[int]) -> dict[int, CoefficientPoly]:
    """Res_{t=0} t^m omega(t) / prod_i (t -_F x_i) dt for each requested m.

    Returned values are polynomials in the elementary symmetric variables
    ``e1..e{rank}`` of the formal Chern roots (degree of e_k is k), with
    law coefficients mixed in.  ``bound`` caps the total root degree, i.e.
    the dimension of the base.
    """
    if rank < 1:
        raise ValueError("residue pushforward needs rank >= 1")
    roots = [geometric_variable(f"_r{i}", 1) for i in range(1, rank + 1)]
    targets = [geometric_variable(f"e{k}", k) for k in range(1, rank + 1)]
    trunc = poly_truncator(roots, bound)

    # Denominator prod F(t, chi(x_i)) as a Laurent polynomial in t.
    t = geometric_variable("_t", 1)
    t_poly = CoefficientPoly.variable(t)
    denom: dict[int, CoefficientPoly] = {0: _ONE}
    for root in roots:
        chi = formal_inverse(CoefficientPoly.variable(root), fgl, trunc)
        factor_poly = f_add(t_poly, chi, fgl,
                            poly_truncator(roots + [t], bound + rank + 1))
        factor: dict[int, CoefficientPoly] = {}
        for m, c in factor_poly.terms():
            dt = m.exponent(t)
            rest = Monomial([(v, e) for v, e in m.pairs if v != t])
            factor[dt] = factor.get(dt, _ZERO) + CoefficientPoly({rest: c})
        denom = _laurent_mul(denom, factor, trunc)

    # denom = t^rank + M where every term of M carries at least one root.
    m_part = dict(denom)
    top = m_part.pop(rank, _ZERO)
    if top != _ONE:
        m_part[rank] = top - _ONE
    # 1/denom = t^-rank * sum_k (-1)^k (M * t^-rank)^k; terminates since every
    # M factor carries root degree >= 1 and roots are truncated at `bound`.
    inverse: dict[int, CoefficientPoly] = {-rank: _ONE}
    power: dict[int, CoefficientPoly] = {0: _ONE}
    for k in range(1, bound + 1):
        power = _laurent_mul(power, {d - rank: p for d, p in m_part.items()}, trunc)
        if not power:
            break
        sign = -1 if k % 2 else 1
        for d, p in power.items():
            addition = p * sign
            inverse[d - rank] = inverse.get(d - rank, _ZERO) + addition
    inverse = {d: p for d, p in inverse.items() if not p.is_zero()}

    omega = invariant_differential(fgl, min(fgl.degree_cap, bound + rank))
    omega_series = {r: omega[r] for r in range(len(omega))}
    kernel = _laurent_mul(omega_series, inverse, trunc)

    results: dict[int, CoefficientPoly] = {}
    for m in powers:
        raw = kernel.get(-1 - m, _ZERO)
        results[m] = symmetric_reduce(raw, roots, targets)
    return results


def residue_pushforward(phi: Sequence[CoefficientPoly] | CoefficientPoly,
                        chern_classes: Sequence[CoefficientPoly],
                        fgl: FormalGroupLaw, bound: int,
                        *, split_roots: bool = False) -> CoefficientPoly:
    """Pushforward of phi(xi) along a rank-r projective bundle.

    ``phi`` is the list of t-power coefficients (polynomials over the base);
    ``chern_classes`` are c_1..c_r of the bundle, or, with ``split_roots``,
    the per-summand first Chern classes of a split bundle.  Both routes must
    agree for split bundles.
    """
    if isinstance(phi, CoefficientPoly):
        phi = [phi]
    rank = len(chern_classes)
    series = residue_series(fgl, rank, bound, range(len(phi)))
    targets = [geometric_variable(f"e{k}", k) for k in range(1, rank + 1)]
    if split_roots:
        images = [
            elementary_symmetric_value(k, chern_classes, bound)
            for k in range(1, rank + 1)
        ]
    else:
        images = list(chern_classes)
    total = CoefficientPoly.zero()
    geo = set()
    for image in images:
        geo.update(v for v in image.variables() if v.degree > 0)
    for m, coeff in enumerate(phi):
        if coeff.is_zero():
            continue
        value = series[m].substitute(dict(zip(targets, images)))
        total = total + coeff * value
    if geo:
        total = total.truncate_at_degree(geo, bound)
    return total


def elementary_symmetric_value(k: int, values: Sequence[CoefficientPoly],
                               bound: int) -> CoefficientPoly:
    """e_k evaluated at explicit root classes, truncated at the given bound."""
    total = CoefficientPoly.zero()
    for subset in itertools.combinations(values, k):
        prod = _ONE
        for v in subset:
            prod = prod * v
        total = total + prod
    geo = set()
    for v in values:
        geo.update(w for w in v.variables() if w.degree > 0)
    return total.truncate_at_degree(geo, bound) if geo else total
