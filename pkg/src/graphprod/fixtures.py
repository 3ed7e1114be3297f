"""Named presentations used by tests, the oracle suites and the CLI examples."""

from __future__ import annotations

from graphprod.frontend import parse_spec
from graphprod.words import Presentation

PATH_Z3_Z_Z = """\
# path v1 - v2 - v3, G_v1 = Z/3
vertex v1 Z/3
vertex v2 Z
vertex v3 Z
edge v1 v2
edge v2 v3
"""

TWO_GENERATOR = """\
# path a - c - b with torsion ends; <ac, bc> has the relation x^3 = y^3
vertex a Z/3
vertex c Z
vertex b Z/3
edge a c
edge c b
"""

INFINITE_DIHEDRAL = """\
# Z/2 * Z/2
vertex u Z/2
vertex w Z/2
"""

SQUARE_RAAG = """\
# 4-cycle a - b - c - d - a, F2 x F2
vertex a Z
vertex b Z
vertex c Z
vertex d Z
edge a b
edge b c
edge c d
edge d a
"""

SQUARE_RACG = """\
# 4-cycle right-angled Coxeter group, D_inf x D_inf
vertex a Z/2
vertex b Z/2
vertex c Z/2
vertex d Z/2
edge a b
edge b c
edge c d
edge d a
"""

PATH_RAAG = """\
# path a - b - c, all infinite cyclic
vertex a Z
vertex b Z
vertex c Z
edge a b
edge b c
"""

SPECS: dict[str, str] = {
    "path-z3": PATH_Z3_Z_Z,
    "two-generator": TWO_GENERATOR,
    "dihedral": INFINITE_DIHEDRAL,
    "square-raag": SQUARE_RAAG,
    "square-racg": SQUARE_RACG,
    "path-raag": PATH_RAAG,
}


def fixture(name: str) -> Presentation:
    return parse_spec(SPECS[name])
