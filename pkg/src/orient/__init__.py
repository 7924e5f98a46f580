"""Exact symbolic intersection-theory calculus for oriented cohomology rings.

Subpackages:

- ``orient.symbolic``: exact graded polynomial arithmetic.
- ``orient.fgl``: formal group laws, n-series, inverses, residue pushforwards.
- ``orient.algebra``: finite free graded algebras with structure constants.
- ``orient.constructions``: projective bundles and blowup presentations.
- ``orient.catalog``: the worked spaces and enumerative demos.
- ``orient.cli``: the ``orient`` command-line front end.
"""

__version__ = "0.1.0"
