"""Subsystems of the grid map: tile enumeration, tile matrices, structure checks.

A subsystem keeps a set of selected 1-tiles (a face and a grid cell). Its
n-tiles are chains of selected 1-tiles in which each tile sits in the face
whose colour the previous tile has. All 2x2 count matrices in this module are
indexed ``[position][colour]``: the row is the face containing the tile, the
column is the colour of the face it is mapped onto.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AssumptionViolation, BudgetExceeded
from .geometry import Colour, PillowMap, SplitPoint, TileAddress, branch_coords

__all__ = [
    "Subsystem",
    "TileMatrix",
    "TileLevel",
    "StructureReport",
    "tile_matrix",
    "tile_matrix_level",
    "enumerate_tiles",
    "tile_levels",
    "count_tiles_enumerated",
    "count_tiles_paths",
    "classify_matrix",
    "local_degree_matrix",
    "interior_matrices",
    "bool_compose",
    "check_structure",
    "limit_set_diagnostics",
    "transitivity_report",
]

W, B = Colour.WHITE, Colour.BLACK


class Subsystem:
    """A subsystem of the grid map given by its selected 1-tiles.

    Parameters
    ----------
    pmap : PillowMap or int
        The ambient map (or just its scale factor).
    tiles : iterable
        Selected 1-tiles as ``(face, i, j)`` triples or level-1 ``TileAddress``.
    name : str, optional
        Label used in reports.
    """

    def __init__(self, pmap, tiles: Iterable, name: str = "custom"):
        self.pmap = pmap if isinstance(pmap, PillowMap) else PillowMap(pmap)
        s = self.pmap.s
        keyed = set()
        for t in tiles:
            if isinstance(t, TileAddress):
                if t.level != 1:
                    raise ValueError("subsystem tiles must be 1-tiles")
                face, (i, j) = t.face, t.digits[0]
            else:
                face, i, j = t
            face = Colour.parse(face)
            i, j = int(i), int(j)
            if not (0 <= i < s and 0 <= j < s):
                raise ValueError(f"cell {(i, j)} outside the {s}x{s} grid")
            keyed.add((int(face), i, j))
        self.tiles: Tuple[Tuple[int, int, int], ...] = tuple(sorted(keyed))
        self.name = name
        arr = np.array(self.tiles, dtype=np.int64).reshape(-1, 3)
        self.face = arr[:, 0]
        self.i = arr[:, 1]
        self.j = arr[:, 2]
        self.colour = self.face ^ ((self.i + self.j) & 1)
        self.lookup = np.full((2, s, s), -1, dtype=np.int64)
        for k, (f, i, j) in enumerate(self.tiles):
            self.lookup[f, i, j] = k
        self.tiles_of_colour = [np.flatnonzero(self.colour == c) for c in (0, 1)]
        self.tiles_in_face = [np.flatnonzero(self.face == c) for c in (0, 1)]

    # presets

    @classmethod
    def full(cls, s: int) -> "Subsystem":
        return cls(s, [(f, i, j) for f in (0, 1) for i in range(s) for j in range(s)], "full")

    @classmethod
    def carpet(cls, s: int = 3) -> "Subsystem":
        """Remove the central cell from both faces (needs odd ``s``)."""
        if s % 2 == 0:
            raise ValueError("the carpet needs an odd scale factor")
        c = (s - 1) // 2
        return cls(s, [(f, i, j) for f in (0, 1) for i in range(s) for j in range(s)
                       if (i, j) != (c, c)], "carpet")

    @classmethod
    def same_colour(cls, s: int) -> "Subsystem":
        """Keep only the cells whose colour equals their face."""
        return cls(s, [(f, i, j) for f in (0, 1) for i in range(s) for j in range(s)
                       if (i + j) % 2 == 0], "same_colour")

    @classmethod
    def two_fixed_tiles(cls, s: int = 4) -> "Subsystem":
        """One interior cell per face, each of the opposite colour.

        The limit set is a single period-two orbit.
        """
        if s < 4:
            raise ValueError("an interior cell of the opposite colour needs s >= 4")
        return cls(s, [(0, 1, 2), (1, 1, 2)], "two_fixed_tiles")

    @classmethod
    def random(cls, s: int, rng: np.random.Generator, p: float = 0.5) -> "Subsystem":
        """Random subset of 1-tiles, redrawn until both colours occur."""
        cells = [(f, i, j) for f in (0, 1) for i in range(s) for j in range(s)]
        while True:
            keep = rng.random(len(cells)) < p
            sub = cls(s, [c for c, k in zip(cells, keep) if k], "random")
            if sub.surjective:
                return sub

    # derived data

    @property
    def n_tiles(self) -> int:
        return len(self.tiles)

    @property
    def colour_set(self) -> Tuple[Colour, ...]:
        return tuple(Colour(c) for c in (0, 1) if len(self.tiles_of_colour[c]))

    @property
    def surjective(self) -> bool:
        """Whether the image of the domain covers the whole sphere."""
        return len(self.colour_set) == 2

    def require_surjective(self) -> None:
        if not self.surjective:
            raise AssumptionViolation(
                f"subsystem '{self.name}' is not surjective: colours {list(map(str, self.colour_set))}")

    def addresses(self) -> List[TileAddress]:
        return [TileAddress(Colour(f), ((i, j),)) for f, i, j in self.tiles]

    def __eq__(self, other):
        return isinstance(other, Subsystem) and (self.pmap, self.tiles) == (other.pmap, other.tiles)

    def __hash__(self):
        return hash((self.pmap, self.tiles))

    def __repr__(self):
        return f"Subsystem(s={self.pmap.s}, name={self.name!r}, n_tiles={self.n_tiles})"

    def describe(self) -> dict:
        return {
            "name": self.name,
            "s": self.pmap.s,
            "degree": self.pmap.degree,
            "n_tiles": self.n_tiles,
            "tiles": [[str(Colour(f)), i, j] for f, i, j in self.tiles],
            "colour_set": [str(c) for c in self.colour_set],
            "surjective": self.surjective,
        }


@dataclass(frozen=True)
class TileMatrix:
    """2x2 nonnegative integer matrix indexed ``[position][colour]``.

    With this layout the matrix of n-tiles is the n-th power of the matrix of
    1-tiles, column sums count tiles by colour and row sums by position.
    """

    rows: Tuple[Tuple[int, int], Tuple[int, int]]

    def __post_init__(self):
        r = tuple(tuple(int(v) for v in row) for row in self.rows)
        if len(r) != 2 or any(len(row) != 2 for row in r) or any(v < 0 for row in r for v in row):
            raise ValueError(f"not a 2x2 nonnegative matrix: {self.rows!r}")
        object.__setattr__(self, "rows", r)

    def N(self, colour, position) -> int:
        """Number of tiles of the given colour in the given face."""
        return self.rows[int(Colour.parse(position))][int(Colour.parse(colour))]

    def __matmul__(self, other: "TileMatrix") -> "TileMatrix":
        a, b = self.rows, other.rows
        return TileMatrix(tuple(tuple(sum(a[r][k] * b[k][c] for k in range(2)) for c in range(2))
                                for r in range(2)))

    def power(self, n: int) -> "TileMatrix":
        if n < 0:
            raise ValueError("negative power")
        out = TileMatrix(((1, 0), (0, 1)))
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def colour_counts(self) -> Tuple[int, int]:
        return (self.rows[0][0] + self.rows[1][0], self.rows[0][1] + self.rows[1][1])

    def position_counts(self) -> Tuple[int, int]:
        return (sum(self.rows[0]), sum(self.rows[1]))

    def total(self) -> int:
        return sum(self.position_counts())

    def positive(self) -> np.ndarray:
        return np.array(self.rows) > 0

    def as_lists(self):
        return [list(r) for r in self.rows]


def tile_matrix(sub: Subsystem) -> TileMatrix:
    """Counts of selected 1-tiles by position and colour."""
    m = [[0, 0], [0, 0]]
    for f, c in zip(sub.face, sub.colour):
        m[int(f)][int(c)] += 1
    return TileMatrix(m)


def enumerate_tiles(sub: Subsystem, n: int) -> List[TileAddress]:
    """All n-tiles of the subsystem as explicit addresses (small ``n`` only)."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    if not sub.surjective and n >= 1:
        warnings.warn(f"subsystem '{sub.name}' is not surjective; tiles only cover the "
                      f"colours {[str(c) for c in sub.colour_set]}", stacklevel=2)
    if n == 0:
        return [TileAddress(c) for c in sub.colour_set]
    out = []
    by_face = [[sub.tiles[k] for k in sub.tiles_in_face[c]] for c in (0, 1)]

    def grow(face0, digits, face):
        if len(digits) == n:
            out.append(TileAddress(Colour(face0), tuple(digits)))
            return
        for f, i, j in by_face[face]:
            grow(face0, digits + [(i, j)], f ^ ((i + j) & 1))

    for f in (0, 1):
        for _, i, j in by_face[f]:
            grow(f, [(i, j)], f ^ ((i + j) & 1))
    out.sort(key=lambda a: (int(a.face), a.digits))
    return out


def count_tiles_enumerated(sub: Subsystem, n: int, max_tiles: int = 1 << 25) -> TileMatrix:
    """Count n-tiles by position and colour by generating every tile.

    Each generated tile is reduced to its first face and its last 1-tile,
    which is all the count needs.
    """
    if n == 0:
        return TileMatrix([[int(c in sub.colour_set) if c == r else 0 for c in (0, 1)]
                           for r in (0, 1)])
    first = sub.face.copy()
    last = np.arange(sub.n_tiles)
    for _ in range(n - 1):
        size = sum(int(np.count_nonzero(sub.colour[last] == c)) * len(sub.tiles_in_face[c])
                   for c in (0, 1))
        if size > max_tiles:
            raise BudgetExceeded(f"{size} tiles at one level exceeds the budget of {max_tiles}")
        nf, nl = [], []
        col = sub.colour[last]
        for c in (0, 1):
            sel = col == c
            if not sel.any():
                continue
            f_c = first[sel]
            for t in sub.tiles_in_face[c]:
                nf.append(f_c)
                nl.append(np.full(f_c.shape, t))
        if not nf:
            first = last = np.zeros(0, dtype=np.int64)
            break
        first, last = np.concatenate(nf), np.concatenate(nl)
    counts = np.bincount(2 * first + sub.colour[last], minlength=4)
    return TileMatrix(((counts[0], counts[1]), (counts[2], counts[3])))


def count_tiles_paths(sub: Subsystem, n: int) -> TileMatrix:
    """Count n-tiles by path counting in the graph of 1-tiles (exact integers)."""
    if n == 0:
        return count_tiles_enumerated(sub, 0)
    N = sub.n_tiles
    adj = np.zeros((N, N), dtype=object)
    for a in range(N):
        for b in range(N):
            adj[a, b] = int(sub.face[b] == sub.colour[a])
    walk = np.identity(N, dtype=object)
    for _ in range(n - 1):
        walk = walk.dot(adj)
    m = [[0, 0], [0, 0]]
    for a in range(N):
        for b in range(N):
            if walk[a, b]:
                m[int(sub.face[a])][int(sub.colour[b])] += int(walk[a, b])
    return TileMatrix(m)


def tile_matrix_level(sub: Subsystem, n: int, method: str = "power") -> TileMatrix:
    """Matrix of n-tiles, by matrix power, explicit enumeration or path counting."""
    if method == "power":
        if n == 0:
            return count_tiles_enumerated(sub, 0)
        return tile_matrix(sub).power(n)
    if method == "enumerate":
        return count_tiles_enumerated(sub, n)
    if method == "paths":
        return count_tiles_paths(sub, n)
    raise ValueError(f"unknown method {method!r}")


def classify_matrix(A: TileMatrix) -> str:
    """``'degenerate'`` (a zero row), ``'isolated'`` or ``'regular'``."""
    (a, b), (c, d) = A.rows
    if a + b == 0 or c + d == 0:
        return "degenerate"
    if (a, b) == (1, 0) and c + d > 0:
        return "isolated"
    if (c, d) == (0, 1) and a + b > 0:
        return "isolated"
    if A.rows == ((0, 1), (1, 0)):
        return "isolated"
    return "regular"


@dataclass
class TileLevel:
    """Vectorised table of all n-tiles of a subsystem.

    Tiles are encoded by the mixed-radix integer of their 1-tile indices, first
    digit most significant; ``codes`` is sorted. ``suffix`` points to the tile
    one level up obtained by dropping the first digit (for level 1 it is the
    colour, i.e. the index of the face at level 0).
    """

    sub: Subsystem
    level: int
    codes: np.ndarray
    face: np.ndarray
    colour: np.ndarray
    cx: np.ndarray
    cy: np.ndarray
    suffix: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return len(self.codes)

    @property
    def side(self) -> float:
        return float(self.sub.pmap.s) ** (-self.level)

    def index_of(self, codes: np.ndarray) -> np.ndarray:
        """Row of each code, or -1 where the code is not a tile of this level."""
        codes = np.asarray(codes, dtype=np.int64)
        if self.level == 0:
            return codes.copy()
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.size - 1)
        return np.where(self.codes[pos] == codes, pos, -1)

    def first_digit(self) -> np.ndarray:
        return self.codes // self.sub.n_tiles ** (self.level - 1)

    def last_digit(self) -> np.ndarray:
        return self.codes % self.sub.n_tiles

    def prefix_codes(self, level: int) -> np.ndarray:
        """Codes of the ancestors at a coarser level."""
        return self.codes // self.sub.n_tiles ** (self.level - level)

    def corners(self) -> Tuple[np.ndarray, np.ndarray]:
        """Integer lower-left corners in units of the tile side."""
        scale = self.sub.pmap.s ** self.level
        return (np.rint(self.cx * scale - 0.5).astype(np.int64),
                np.rint(self.cy * scale - 0.5).astype(np.int64))

    def digits(self) -> np.ndarray:
        N = self.sub.n_tiles
        out = np.empty((self.size, self.level), dtype=np.int64)
        rem = self.codes.copy()
        for k in range(self.level - 1, -1, -1):
            out[:, k] = rem % N
            rem //= N
        return out

    def address(self, row: int) -> TileAddress:
        sub = self.sub
        if self.level == 0:
            return TileAddress(Colour(int(self.face[row])))
        ds = self.digits()[row]
        return TileAddress(Colour(int(sub.face[ds[0]])),
                           tuple((int(sub.i[d]), int(sub.j[d])) for d in ds))


def tile_levels(sub: Subsystem, depth: int, max_tiles: int = 10 ** 7) -> List[TileLevel]:
    """Tables of n-tiles for ``n = 0..depth`` with their centres.

    Level 0 always lists both faces (row = face) even if a colour is missing
    from the image; callers that care check ``sub.colour_set``.
    """
    total = tile_matrix(sub).power(depth).total() if depth > 0 else 2
    if total > max_tiles:
        raise BudgetExceeded(f"{total} tiles at level {depth} exceeds the budget of {max_tiles}")
    s, N = sub.pmap.s, sub.n_tiles
    half = np.full(2, 0.5)
    levels = [TileLevel(sub, 0, np.arange(2, dtype=np.int64), np.arange(2), np.arange(2),
                        half.copy(), half.copy())]
    for n in range(1, depth + 1):
        prev = levels[-1]
        parts = []
        for t in range(N):
            rest = np.flatnonzero(prev.face == sub.colour[t])
            if n == 1:
                rest = rest[:1]
            if not len(rest):
                continue
            x, y = branch_coords(s, int(sub.i[t]), int(sub.j[t]), prev.cx[rest], prev.cy[rest])
            code = t * N ** (n - 1) + (prev.codes[rest] if n > 1 else 0)
            parts.append((np.atleast_1d(code).astype(np.int64), np.full(len(rest), sub.face[t]),
                          prev.colour[rest], x, y, rest))
        if parts:
            cols = [np.concatenate(p) for p in zip(*parts)]
        else:
            cols = [np.zeros(0, dtype=np.int64)] * 3 + [np.zeros(0)] * 2 + [np.zeros(0, dtype=np.int64)]
        levels.append(TileLevel(sub, n, cols[0], cols[1].astype(np.int64), cols[2].astype(np.int64),
                                cols[3], cols[4], cols[5].astype(np.int64)))
    return levels


def local_degree_matrix(sub: Subsystem, p: SplitPoint, n: int) -> TileMatrix:
    """Number of n-tiles containing ``p``, by position and colour.

    A point on the face boundary is the same sphere point in both faces, so
    tiles of both faces are tested there.
    """
    lev = tile_levels(sub, n)[n]
    ax, ay = lev.corners()
    scale = sub.pmap.s ** n
    X, Y = p.x * scale, p.y * scale

    def window(v: Fraction):
        lo = -((-(v - 1)).numerator // (-(v - 1)).denominator)  # ceil(v - 1)
        return lo, v.numerator // v.denominator  # floor(v)

    (xlo, xhi), (ylo, yhi) = window(X), window(Y)
    inside = (ax >= xlo) & (ax <= xhi) & (ay >= ylo) & (ay <= yhi)
    faces = {int(p.face)} | ({0, 1} if p.on_curve else set())
    inside &= np.isin(lev.face, list(faces))
    m = np.bincount(2 * lev.face[inside] + lev.colour[inside], minlength=4)
    return TileMatrix(((m[0], m[1]), (m[2], m[3])))


# Side bits of a tile's square that lie on the boundary of its face.
_LEFT, _RIGHT, _BOTTOM, _TOP = 1, 2, 4, 8


def _side_states(sub: Subsystem, n_max: int) -> List[set]:
    """Reachable ``(position, colour, boundary sides)`` triples for levels 1..n_max.

    The sides a tile shares with its face boundary depend only on its first
    cell and the sides shared by the remaining (shorter) tile, so the reachable
    triples obey a finite recursion.
    """
    s = sub.pmap.s
    far_x = _RIGHT if (s - 1) % 2 == 0 else _LEFT
    far_y = _TOP if (s - 1) % 2 == 0 else _BOTTOM
    one = []
    for f, i, j in sub.tiles:
        mask = (_LEFT if i == 0 else 0) | (_RIGHT if i == s - 1 else 0) \
            | (_BOTTOM if j == 0 else 0) | (_TOP if j == s - 1 else 0)
        one.append((f, f ^ ((i + j) & 1), i, j, mask))
    levels = [{(f, c, m) for f, c, _, _, m in one}]
    for _ in range(1, n_max):
        nxt = set()
        for pos, col, mask in levels[-1]:
            for f, c, i, j, _ in one:
                if c != pos:
                    continue
                new = 0
                if i == 0 and mask & _LEFT:
                    new |= _LEFT
                if i == s - 1 and mask & far_x:
                    new |= _RIGHT
                if j == 0 and mask & _BOTTOM:
                    new |= _BOTTOM
                if j == s - 1 and mask & far_y:
                    new |= _TOP
                nxt.add((f, col, new))
        levels.append(nxt)
    return levels


def interior_matrices(sub: Subsystem, n_max: int) -> List[np.ndarray]:
    """Boolean matrices ``B[colour][position]`` for levels 1..n_max.

    ``B[c][c']`` says that some n-tile of colour c lies in the interior of the
    face c'. Note the layout is transposed relative to ``TileMatrix``.
    """
    out = []
    for states in _side_states(sub, n_max):
        b = np.zeros((2, 2), dtype=bool)
        for pos, col, mask in states:
            if mask == 0:
                b[col, pos] = True
        out.append(b)
    return out


def bool_compose(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Boolean product ``second . first`` for matrices laid out ``[colour][position]``.

    If ``first`` is the interior matrix of level m and ``second`` that of level
    k, the result is dominated by the interior matrix of level m + k.
    """
    return (second.astype(int) @ first.astype(int)) > 0


def _positivity_levels(sub: Subsystem, n_max: int) -> List[np.ndarray]:
    A = tile_matrix(sub).positive().astype(int)
    out, P = [], np.identity(2, dtype=int)
    for _ in range(n_max):
        P = ((P @ A) > 0).astype(int)
        out.append(P > 0)
    return out


def _irreducible_witness(levels: Sequence[np.ndarray]) -> Optional[int]:
    first = np.full((2, 2), 0)
    for n, m in enumerate(levels, start=1):
        first[(first == 0) & m] = n
    return int(first.max()) if (first > 0).all() else None


def _primitive_witness(level_fn, max_level: int) -> Optional[int]:
    """Smallest n0 <= max_level certified all-true from n0 on.

    All-true at n0 and n0 + 1 implies all-true at every sum of those two levels,
    which covers every n >= n0 (n0 - 1); the levels in between are checked
    directly.
    """
    for n0 in range(1, max_level + 1):
        top = max(n0 + 1, n0 * (n0 - 1))
        if all(level_fn(n).all() for n in range(n0, top + 1)):
            return n0
    return None


@dataclass
class StructureReport:
    tile_matrix: TileMatrix
    classification: str
    irreducible: bool
    irreducible_witness: Optional[int]
    primitive: bool
    primitive_witness: Optional[int]
    strongly_irreducible: bool
    strongly_irreducible_witness: Optional[int]
    strongly_primitive: bool
    strongly_primitive_witness: Optional[int]
    max_level: int
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "tile_matrix": self.tile_matrix.as_lists(),
            "classification": self.classification,
            "irreducible": self.irreducible,
            "irreducible_witness": self.irreducible_witness,
            "primitive": self.primitive,
            "primitive_witness": self.primitive_witness,
            "strongly_irreducible": self.strongly_irreducible,
            "strongly_irreducible_witness": self.strongly_irreducible_witness,
            "strongly_primitive": self.strongly_primitive,
            "strongly_primitive_witness": self.strongly_primitive_witness,
            "max_level": self.max_level,
            "notes": list(self.notes),
        }


def check_structure(sub: Subsystem, max_level: int = 8) -> StructureReport:
    """Irreducibility and primitivity, plain and strong, with level witnesses.

    Witnesses are searched up to ``max_level``; certificates for primitivity
    may inspect a few deeper levels through the finite side-state recursion.
    """
    A = tile_matrix(sub)
    depth = max(max_level + 1, max_level * (max_level - 1))
    pos = _positivity_levels(sub, depth)
    inner = interior_matrices(sub, depth)
    irr = _irreducible_witness(pos[:max_level])
    sirr = _irreducible_witness(inner[:max_level])
    prim = _primitive_witness(lambda n: pos[n - 1], max_level)
    sprim = _primitive_witness(lambda n: inner[n - 1], max_level)
    notes = []
    if not sub.surjective:
        notes.append("subsystem is not surjective")
    return StructureReport(A, classify_matrix(A), irr is not None, irr, prim is not None, prim,
                           sirr is not None, sirr, sprim is not None, sprim, max_level, notes)


def _alive_tiles(sub: Subsystem) -> np.ndarray:
    """Tiles admitting an infinite forward chain inside the subsystem."""
    alive = np.ones(sub.n_tiles, dtype=bool)
    while True:
        face_alive = [bool(alive[sub.tiles_in_face[c]].any()) for c in (0, 1)]
        keep = alive & np.array([face_alive[c] for c in sub.colour], dtype=bool)
        if (keep == alive).all():
            return alive
        alive = keep


def limit_set_diagnostics(sub: Subsystem, n: int = 8) -> dict:
    """Degeneracy and isolated-point diagnostics for the limit set."""
    A = tile_matrix(sub)
    An = A.power(n)
    alive = _alive_tiles(sub)
    m = [[0, 0], [0, 0]]
    for k in np.flatnonzero(alive):
        m[int(sub.face[k])][int(sub.colour[k])] += 1
    core = TileMatrix(m)
    paths = [core.power(k).position_counts() for k in range(1, max(n, 4) + 2)]
    degenerate = classify_matrix(A) == "degenerate"
    faces = [c for c in (0, 1) if paths[-1][c] > 0]
    risk = any(paths[-1][c] < 2 for c in faces) or not faces
    settled = paths[-1] == paths[-2]
    return {
        "classification": classify_matrix(A),
        "degenerate": degenerate,
        "every_tile_meets_limit_set": not degenerate,
        "per_face_path_count": list(An.colour_counts()),
        "per_position_path_count": list(An.position_counts()),
        "infinite_paths_per_face": list(paths[-1]),
        "isolated_point_risk": bool(risk),
        "limit_set_points": int(sum(paths[-1])) if settled else None,
    }


def transitivity_report(sub: Subsystem, max_level: int = 8) -> dict:
    rep = check_structure(sub, max_level)
    return {
        "transitive": rep.irreducible,
        "transitive_witness": rep.irreducible_witness,
        "mixing": rep.primitive,
        "mixing_witness": rep.primitive_witness,
    }
