"""Finite free graded algebras with explicit structure constants.

A ``GradedFreeAlgebra`` is the concrete carrier of a cohomology ring: a
finite basis with degrees, a symmetric structure-constant table over the
coefficient ring, and a dimension bound above which all products vanish.
Elements are sparse coordinate vectors; maps between algebras are either
ring homomorphisms (pullbacks) or degree-shifted module maps (pushforwards).

Algebras are immutable after construction.  Equality is structural (basis
labels and degrees, theory tag, table), which is what makes serialization
round trips exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .fgl import FormalGroupLaw, TheoryMorphism
from .symbolic import (
    CoefficientPoly,
    Variable,
    format_poly,
    geometric_variable,
    parse_poly,
)

_ZERO = CoefficientPoly.zero()
_ONE = CoefficientPoly.one()

JSON_SCHEMA = "orient/graded-algebra-v1"


class AlgebraError(ValueError):
    pass


class GradedFreeAlgebra:
    """Finite free graded algebra over the coefficient ring of a theory."""

    def __init__(
        self,
        basis: Sequence[tuple[str, int]],
        unit_index: int,
        dimension: int,
        fgl: FormalGroupLaw,
        table: Mapping[tuple[int, int], Mapping[int, CoefficientPoly]],
        *,
        point_index: int | None = None,
        validate: bool = True,
    ):
        self.basis = tuple((str(label), int(degree)) for label, degree in basis)
        self.unit_index = unit_index
        self.dimension = dimension
        self.fgl = fgl
        self.point_index = point_index
        self._labels = {label: i for i, (label, _) in enumerate(self.basis)}
        if len(self._labels) != len(self.basis):
            raise AlgebraError("basis labels must be unique")
        # Normalize to i <= j storage; drop zero entries.
        norm: dict[tuple[int, int], dict[int, CoefficientPoly]] = {}
        for (i, j), row in table.items():
            key = (i, j) if i <= j else (j, i)
            entry = {k: c for k, c in row.items() if not c.is_zero()}
            if key in norm and norm[key] != entry:
                raise AlgebraError(f"conflicting table entries for {key}")
            norm[key] = entry
        self._table = norm
        if validate:
            self._validate()

    # ---------- bookkeeping ----------
    def label(self, i: int) -> str:
        return self.basis[i][0]

    def degree_of(self, i: int) -> int:
        return self.basis[i][1]

    def index(self, label: str) -> int:
        try:
            return self._labels[label]
        except KeyError:
            raise AlgebraError(f"no basis element labelled {label!r}") from None

    def rank(self) -> int:
        return len(self.basis)

    def graded_rank(self, k: int) -> int:
        return sum(1 for _, d in self.basis if d == k)

    def total_rank(self) -> int:
        return len(self.basis)

    def table_entry(self, i: int, j: int) -> dict[int, CoefficientPoly]:
        if i == self.unit_index:
            return {j: _ONE}
        if j == self.unit_index:
            return {i: _ONE}
        key = (i, j) if i <= j else (j, i)
        return self._table.get(key, {})

    def _validate(self):
        if not (0 <= self.unit_index < len(self.basis)):
            raise AlgebraError("unit index out of range")
        if self.basis[self.unit_index][1] != 0:
            raise AlgebraError("unit must sit in degree 0")
        for (i, j), row in self._table.items():
            di, dj = self.degree_of(i), self.degree_of(j)
            if row and di + dj > self.dimension:
                raise AlgebraError(
                    f"product of degrees {di}+{dj} exceeds dimension "
                    f"{self.dimension} but is nonzero"
                )
            for k, c in row.items():
                dk = self.degree_of(k)
                if dk > self.dimension:
                    raise AlgebraError("support above the dimension bound")
                want = di + dj - dk
                if c.degree() != want:
                    raise AlgebraError(
                        f"constant c^{k}_{{{i},{j}}} has degree {c.degree()}, "
                        f"expected {want}"
                    )

    # ---------- element constructors ----------
    def zero(self) -> "Element":
        return Element(self, {})

    def unit(self) -> "Element":
        return Element(self, {self.unit_index: _ONE})

    def basis_element(self, i_or_label) -> "Element":
        i = i_or_label if isinstance(i_or_label, int) else self.index(i_or_label)
        return Element(self, {i: _ONE})

    def element(self, coords: Mapping[int, CoefficientPoly]) -> "Element":
        return Element(self, coords)

    def scalar(self, c) -> "Element":
        c = c if isinstance(c, CoefficientPoly) else CoefficientPoly.const(c)
        return Element(self, {self.unit_index: c})

    # ---------- structure ----------
    def multiply(self, a: "Element", b: "Element") -> "Element":
        if a.algebra is not self or b.algebra is not self:
            raise AlgebraError("multiply requires elements of this algebra")
        coords: dict[int, CoefficientPoly] = {}
        for i, ca in a.coords.items():
            for j, cb in b.coords.items():
                scale = ca * cb
                if scale.is_zero():
                    continue
                for k, c in self.table_entry(i, j).items():
                    coords[k] = coords.get(k, _ZERO) + scale * c
        return Element(self, coords)

    def __eq__(self, other):
        if not isinstance(other, GradedFreeAlgebra):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.unit_index == other.unit_index
            and self.dimension == other.dimension
            and self.fgl == other.fgl
            and self._table == other._table
        )

    def __repr__(self):
        return (f"GradedFreeAlgebra(rank={len(self.basis)}, dim={self.dimension}, "
                f"theory={self.fgl.tag})")

    # ---------- serialization ----------
    def to_json(self) -> dict:
        return {
            "schema": JSON_SCHEMA,
            "theory": self.fgl.to_json(),
            "dimension": self.dimension,
            "unit": self.unit_index,
            "point_index": self.point_index,
            "basis": [[label, degree] for label, degree in self.basis],
            "table": [
                [i, j, sorted((k, format_poly(c)) for k, c in row.items())]
                for (i, j), row in sorted(self._table.items())
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "GradedFreeAlgebra":
        if data.get("schema") != JSON_SCHEMA:
            raise AlgebraError(f"unsupported schema {data.get('schema')!r}")
        fgl = FormalGroupLaw.from_json(data["theory"])
        table = {
            (i, j): {k: parse_poly(text) for k, text in row}
            for i, j, row in data["table"]
        }
        return GradedFreeAlgebra(
            [(label, degree) for label, degree in data["basis"]],
            data["unit"],
            data["dimension"],
            fgl,
            table,
            point_index=data.get("point_index"),
        )


class Element:
    """Sparse coordinate vector over an algebra's basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: GradedFreeAlgebra,
                 coords: Mapping[int, CoefficientPoly]):
        self.algebra = algebra
        self.coords = {i: c for i, c in coords.items() if not c.is_zero()}

    def is_zero(self) -> bool:
        return not self.coords

    def coordinate(self, label_or_index) -> CoefficientPoly:
        i = (label_or_index if isinstance(label_or_index, int)
             else self.algebra.index(label_or_index))
        return self.coords.get(i, _ZERO)

    def degree(self) -> int | None:
        """Total degree if homogeneous, else None."""
        degs = set()
        for i, c in self.coords.items():
            d = c.degree()
            if d is None:
                return None
            degs.add(d + self.algebra.degree_of(i))
        if len(degs) > 1:
            return None
        return degs.pop() if degs else None

    def homogeneous_components(self) -> dict[int, "Element"]:
        """Split by total degree (basis degree plus coefficient degree)."""
        buckets: dict[int, dict[int, CoefficientPoly]] = {}
        for i, c in self.coords.items():
            base = self.algebra.degree_of(i)
            for d, part in c.homogeneous_components().items():
                buckets.setdefault(base + d, {})
                slot = buckets[base + d]
                slot[i] = slot.get(i, _ZERO) + part
        return {d: Element(self.algebra, coords)
                for d, coords in sorted(buckets.items())}

    # ---------- arithmetic ----------
    def _require_same(self, other: "Element"):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise AlgebraError("elements belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._require_same(other)
        out = dict(self.coords)
        for i, c in other.coords.items():
            out[i] = out.get(i, _ZERO) + c
        return Element(self.algebra, out)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Element(self.algebra, {i: -c for i, c in self.coords.items()})

    def scaled(self, c) -> "Element":
        c = c if isinstance(c, CoefficientPoly) else CoefficientPoly.const(c)
        return Element(self.algebra, {i: x * c for i, x in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, CoefficientPoly)):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, CoefficientPoly)):
            return self.scaled(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("element powers must be non-negative integers")
        result = self.algebra.unit()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._require_same(other)
        return self.coords == other.coords

    def __repr__(self):
        return f"Element({format_element(self)})"


def format_element(el: Element) -> str:
    """Human-readable sum of coefficient*label terms, ordered by (degree, label)."""
    if el.is_zero():
        return "0"
    items = sorted(
        el.coords.items(),
        key=lambda ic: (el.algebra.degree_of(ic[0]), el.algebra.label(ic[0])),
    )
    pieces = []
    for i, c in items:
        label = el.algebra.label(i)
        ctext = format_poly(c)
        if i == el.algebra.unit_index:
            term = ctext if (len(c) == 1 and "+" not in ctext) else f"({ctext})"
        elif ctext == "1":
            term = label
        elif ctext == "-1":
            term = f"-{label}"
        elif len(c) == 1 and " " not in ctext:
            term = f"{ctext}*{label}"
        else:
            term = f"({ctext})*{label}"
        pieces.append(term)
    out = pieces[0]
    for term in pieces[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


class AlgebraMap:
    """A linear map between graded free algebras.

    ``kind`` is "ring_hom" for pullbacks (unit to unit, multiplicative) or
    "module_map" with a degree shift for pushforwards.
    """

    def __init__(self, source: GradedFreeAlgebra, target: GradedFreeAlgebra,
                 matrix: Sequence[Element], kind: str = "ring_hom",
                 shift: int = 0):
        if kind not in ("ring_hom", "module_map"):
            raise AlgebraError(f"unknown map kind {kind!r}")
        if len(matrix) != source.rank():
            raise AlgebraError("matrix must list one image per source basis element")
        for el in matrix:
            if el.algebra != target:
                raise AlgebraError("matrix entries must live in the target algebra")
        self.source = source
        self.target = target
        self.matrix = tuple(matrix)
        self.kind = kind
        self.shift = shift

    def apply(self, a: Element) -> Element:
        if a.algebra != self.source:
            raise AlgebraError("argument is not in the map's source algebra")
        out = self.target.zero()
        for i, c in a.coords.items():
            out = out + self.matrix[i].scaled(c)
        return out

    def __call__(self, a: Element) -> Element:
        return self.apply(a)

    def is_ring_hom(self) -> bool:
        """Unit to unit and multiplicative on all basis pairs."""
        if self.apply(self.source.unit()) != self.target.unit():
            return False
        n = self.source.rank()
        for i in range(n):
            bi = self.source.basis_element(i)
            for j in range(i, n):
                bj = self.source.basis_element(j)
                if self.apply(bi * bj) != self.apply(bi) * self.apply(bj):
                    return False
        return True

    def integer_matrix(self) -> list[list[int]]:
        """Constant (all scalars to zero) part of the matrix, target x source."""
        rows = []
        for k in range(self.target.rank()):
            row = []
            for i in range(self.source.rank()):
                coeff = self.matrix[i].coords.get(k, _ZERO)
                row.append(coeff.constant_term())
            rows.append(row)
        return rows


def projection_formula_holds(pullback: AlgebraMap, pushforward: AlgebraMap) -> bool:
    """f_*(f^*(a) . b) == a . f_*(b) on all basis pairs."""
    if pullback.source != pushforward.target or pullback.target != pushforward.source:
        raise AlgebraError("maps do not form a pullback/pushforward pair")
    for i in range(pullback.source.rank()):
        a = pullback.source.basis_element(i)
        fa = pullback.apply(a)
        for j in range(pushforward.source.rank()):
            b = pushforward.source.basis_element(j)
            lhs = pushforward.apply(fa * b)
            rhs = a * pushforward.apply(b)
            if lhs != rhs:
                return False
    return True


def evaluate_poly(poly: CoefficientPoly, assignment: Mapping[Variable, Element],
                  algebra: GradedFreeAlgebra) -> Element:
    """Evaluate a polynomial whose geometric variables map to elements.

    Variables absent from the assignment are treated as scalars and stay in
    the coefficients.
    """
    total = algebra.zero()
    for m, c in poly.terms():
        scalar = CoefficientPoly.const(c)
        vector = algebra.unit()
        for v, e in m.pairs:
            if v in assignment:
                vector = vector * (assignment[v] ** e)
            else:
                scalar = scalar * CoefficientPoly.variable(v, e)
        total = total + vector.scaled(scalar)
    return total


@dataclass(frozen=True)
class Presentation:
    """Generators with degrees plus relation polynomials, for emission and
    cross-checks against structure-constant algebras."""

    generators: tuple[tuple[str, int], ...]
    relations: tuple[CoefficientPoly, ...]
    name: str = ""

    def generator_variables(self) -> dict[str, Variable]:
        return {n: geometric_variable(n, d) for n, d in self.generators}

    def check(self, assignment: Mapping[str, Element],
              algebra: GradedFreeAlgebra) -> list[bool]:
        """Evaluate every relation at the given named elements; True means
        the relation holds (evaluates to zero)."""
        variables = self.generator_variables()
        mapping = {variables[n]: el for n, el in assignment.items() if n in variables}
        return [
            evaluate_poly(rel, mapping, algebra).is_zero() for rel in self.relations
        ]

    def render_text(self, scalars: str = "A(pt)") -> str:
        gens = ", ".join(n for n, _ in self.generators)
        rels = ",\n  ".join(format_poly(r) for r in self.relations)
        head = f"{self.name} = " if self.name else ""
        return f"{head}{scalars}[{gens}] / (\n  {rels}\n)"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": [[n, d] for n, d in self.generators],
            "relations": [format_poly(r) for r in self.relations],
        }

    def homogeneous(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)


def tensor_product(
    a: GradedFreeAlgebra, b: GradedFreeAlgebra
) -> tuple[GradedFreeAlgebra, AlgebraMap, AlgebraMap]:
    """A x B with componentwise structure constants and the two inclusions."""
    if not a.fgl.same_theory(b.fgl):
        raise AlgebraError("tensor factors must share the same theory")
    dim = a.dimension + b.dimension
    fgl = a.fgl if a.fgl.degree_cap >= dim else a.fgl.with_cap(dim)

    def pair_label(la: str, lb: str) -> str:
        if la == "1":
            return lb
        if lb == "1":
            return la
        return f"{la}*{lb}"

    basis = []
    index = {}
    for i, (la, da) in enumerate(a.basis):
        for j, (lb, db) in enumerate(b.basis):
            index[(i, j)] = len(basis)
            basis.append((pair_label(la, lb), da + db))
    unit = index[(a.unit_index, b.unit_index)]
    point = None
    if a.point_index is not None and b.point_index is not None:
        point = index[(a.point_index, b.point_index)]

    table: dict[tuple[int, int], dict[int, CoefficientPoly]] = {}
    n = len(basis)
    rev = {v: k for k, v in index.items()}
    for p in range(n):
        i1, j1 = rev[p]
        for q in range(p, n):
            i2, j2 = rev[q]
            row: dict[int, CoefficientPoly] = {}
            for k1, c1 in a.table_entry(i1, i2).items():
                for k2, c2 in b.table_entry(j1, j2).items():
                    c = c1 * c2
                    if not c.is_zero():
                        k = index[(k1, k2)]
                        row[k] = row.get(k, _ZERO) + c
            if row:
                table[(p, q)] = row
    product = GradedFreeAlgebra(basis, unit, dim, fgl, table, point_index=point)
    incl_a = AlgebraMap(
        a, product,
        [product.basis_element(index[(i, b.unit_index)]) for i in range(a.rank())],
        "ring_hom",
    )
    incl_b = AlgebraMap(
        b, product,
        [product.basis_element(index[(a.unit_index, j)]) for j in range(b.rank())],
        "ring_hom",
    )
    return product, incl_a, incl_b


def specialize(algebra: GradedFreeAlgebra,
               morphism: TheoryMorphism) -> GradedFreeAlgebra:
    """Substitute the coefficient ring along a theory morphism.

    Same basis; every structure constant is pushed through the morphism.
    The identity morphism returns an equal algebra.
    """
    table = {
        key: {k: morphism.apply(c) for k, c in row.items()}
        for key, row in algebra._table.items()
    }
    target = morphism.target
    if target.degree_cap < algebra.fgl.degree_cap:
        target = target.with_cap(algebra.fgl.degree_cap)
    return GradedFreeAlgebra(
        algebra.basis,
        algebra.unit_index,
        algebra.dimension,
        target,
        table,
        point_index=algebra.point_index,
    )


def specialize_element(el: Element, morphism: TheoryMorphism,
                       target_algebra: GradedFreeAlgebra) -> Element:
    return Element(target_algebra,
                   {i: morphism.apply(c) for i, c in el.coords.items()})
