"""Shared integer coordinate frame for the three overlapping codes.

Everything lives on one rectified lattice: vertices (qubit sites) are the
midpoints of the edges of a cubic lattice with spacing 2, i.e. integer
triples with exactly one odd component. Constant values of s = x + y + z
(odd) pick out kagome planes; a slice occupies three consecutive planes
{h, h+2, h+4}.

Faces of the rectified lattice:
  * squares, centred on points with exactly two odd components (these are
    the cubic-lattice face centres) -- Z checks of code A;
  * triangles, one per (cubic vertex, corner sign) pair, shared between an
    octahedral cell and a cuboctahedral cell -- Z checks of codes B and C
    depending on colour.

Cells:
  * octahedra around cubic vertices (all components even) -- X checks of
    code A;
  * cuboctahedra around cubic cell centres (all components odd), 2-coloured
    in a checkerboard -- X checks of codes B (one colour class) and C (the
    other).

The colour classes alternate with s mod 4: a cuboctahedron centred in plane
s has colour index ((s - 3) // 2) % 2; index 0 serves code C's X checks and
owns code B's Z triangles, index 1 the reverse.

Each code sweeps along its own axis, two planes per timestep:
code A along z, code B along y, code C along x.
"""

from __future__ import annotations

import itertools

CODES = ("A", "B", "C")

# displacement of a slice between consecutive timesteps (two planes)
DISPLACEMENT = {"A": (0, 0, 4), "B": (0, 4, 0), "C": (4, 0, 0)}

# plane of the bottom layer at timestep 0; must be 3 mod 4 so that the
# cuboctahedron colour classes line up with the slice structure of B and C.
# Starting below the mutual-overlap region means the three codes approach,
# pass through each other, and separate as the timestep grows.
BASE_PLANE = -5

Coord = tuple[int, int, int]


def plane(p: Coord) -> int:
    return p[0] + p[1] + p[2]


def is_vertex(p: Coord) -> bool:
    return sum(c % 2 for c in p) == 1


def is_square_centre(p: Coord) -> bool:
    return sum(c % 2 for c in p) == 2


def is_cuboct_centre(p: Coord) -> bool:
    return all(c % 2 for c in p)


def is_oct_centre(p: Coord) -> bool:
    return not any(c % 2 for c in p)


def cuboct_colour(p: Coord) -> int:
    """Checkerboard class of a cuboctahedron centre (0 or 1)."""
    return ((plane(p) - 3) // 2) % 2


# colour conventions: triangles of a colour-0 cuboctahedron are Z checks of
# code B; colour-1 triangles belong to code C.  Cells with no face of a
# code's colour are its X checks.
TRI_CODE = {0: "B", 1: "C"}
XCELL_COLOUR = {"B": 1, "C": 0}


def square_vertices(f: Coord) -> list[Coord]:
    """The four vertices of the square face centred at f."""
    odd_axes = [i for i in range(3) if f[i] % 2]
    out = []
    for ax in odd_axes:
        for d in (-1, 1):
            q = list(f)
            q[ax] += d
            out.append(tuple(q))
    return out


def triangle_vertices(o: Coord, sign: Coord) -> list[Coord]:
    """Triangle of the octahedron at cubic vertex o toward corner `sign`."""
    out = []
    for ax in range(3):
        q = list(o)
        q[ax] += sign[ax]
        out.append(tuple(q))
    return out


def triangle_cuboct(o: Coord, sign: Coord) -> Coord:
    """Centre of the unique cuboctahedron owning this triangle."""
    return (o[0] + sign[0], o[1] + sign[1], o[2] + sign[2])


def triangle_colour(o: Coord, sign: Coord) -> int:
    return cuboct_colour(triangle_cuboct(o, sign))


def oct_vertices(o: Coord) -> list[Coord]:
    out = []
    for ax in range(3):
        for d in (-1, 1):
            q = list(o)
            q[ax] += d
            out.append(tuple(q))
    return out


def cuboct_vertices(p: Coord) -> list[Coord]:
    out = []
    for ax0, ax1 in ((0, 1), (0, 2), (1, 2)):
        for d0, d1 in itertools.product((-1, 1), repeat=2):
            q = list(p)
            q[ax0] += d0
            q[ax1] += d1
            out.append(tuple(q))
    return out


ALL_SIGNS = tuple(itertools.product((-1, 1), repeat=3))


def add(p: Coord, q: Coord) -> Coord:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


# ---------------------------------------------------------------------------
# per-code side walls
#
# Each code is bounded along the two axes it does not sweep.  One pair of
# walls terminates logical Z strings (SideZ), the other logical X membranes
# (SideX); the remaining X boundaries of a slice are its top and bottom
# planes.  Bounds are inclusive ranges on qubit coordinates.
#
#   code A: sweeps z; x in [1, 2L-1] (Z walls), y in [0, 2L-2] (X walls)
#   code B: sweeps y; z in [0, 2L-2] (Z walls), x in [0, 2L-2] (X walls)
#   code C: sweeps x; y in [0, 2L-2] (Z walls), z in [0, 2L-2] (X walls)
#
# A's Z walls sit at odd coordinates because its Z strings live on the fine
# cubic lattice; B and C terminate theirs on the coarse (doubled) lattice,
# which also produces their characteristic weight-2 boundary Z checks.
# ---------------------------------------------------------------------------

Z_AXIS = {"A": 0, "B": 2, "C": 1}   # axis normal to the SideZ walls
X_AXIS = {"A": 1, "B": 0, "C": 2}   # axis normal to the SideX walls
SWEEP_AXIS = {"A": 2, "B": 1, "C": 0}


def z_bounds(code: str, distance: int) -> tuple[int, int]:
    if code == "A":
        return (1, 2 * distance - 1)
    return (0, 2 * distance - 2)


def x_bounds(code: str, distance: int) -> tuple[int, int]:
    return (0, 2 * distance - 2)


def in_region(code: str, distance: int, p: Coord) -> bool:
    zl, zh = z_bounds(code, distance)
    xl, xh = x_bounds(code, distance)
    return zl <= p[Z_AXIS[code]] <= zh and xl <= p[X_AXIS[code]] <= xh


def slab_planes(timestep: int) -> tuple[int, int, int]:
    h = BASE_PLANE + 4 * timestep
    return (h, h + 2, h + 4)
