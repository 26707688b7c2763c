from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aspdim import demo_coloring_program, parse_program

# The verbatim 3-coloring listing (rules only identical to the demo
# instance; this variant has no vertex facts and a different arc list).
COLORING_LISTING = """\
arc(1,2). arc(1,3). arc(2,3). arc(3,5).
arc(3,6). arc(5,6). arc(4,5). arc(4,8).
arc(5,8). arc(6,7). arc(6,9). arc(7,9).
col(r). col(b). col(g).

color(V,C):-vertex(V),col(C),
             not othercolor(V,C).
othercolor(V,C):-vertex(V),col(C),col(C1),
                  C != C1,color(V,C1).
:-arc(V1,V2),col(C),color(V1,C),color(V2,C).
"""

TRIANGLE = """\
edge(a,b). edge(b,c). edge(c,a).
tri(X,Y,Z):-edge(X,Y),edge(Y,Z),edge(Z,X).
"""

# The two strongly equivalent programs with non-transferring admissibility.
EQUIV_P1 = """\
p(a). p(b). r(a) :- p(a). r(b) :- p(b).
r(c) :- p(c). r(c) :- not r(b).
"""

EQUIV_P2 = """\
p(a). p(b). r(X) :- p(X). r(c) :- not r(b).
"""


@pytest.fixture(scope="session")
def demo_coloring():
    return demo_coloring_program()


@pytest.fixture(scope="session")
def triangle():
    return parse_program(TRIANGLE)


@pytest.fixture(scope="session")
def equiv_pair():
    return parse_program(EQUIV_P1), parse_program(EQUIV_P2)
