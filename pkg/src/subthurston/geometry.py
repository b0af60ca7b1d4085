"""Exact geometry of the pillow sphere and the grid map ``z -> s z``.

The pillow is the square torus R^2 / (2Z)^2 modulo ``z -> -z``. It is glued
from two unit squares (faces). The white face carries the torus chart
``(x, y) -> (x, y)``, the black face the chart ``(x, y) -> (2 - x, y)``; with
these charts a point on the common boundary has the same coordinates in both
faces, which is what makes the face-independent formulas below continuous.

Under the lifted map every cell ``(i, j)`` of the s-by-s grid of a face is sent
affinely onto a whole face, reflecting along an axis whenever the matching
cell index is odd. The image face is the source face when ``i + j`` is even
and the other face when it is odd, on both faces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "Colour",
    "PillowMap",
    "SplitPoint",
    "TileAddress",
    "apply_map",
    "resolve_address",
    "branch_evaluate",
    "touches_curve",
    "tile_diameter",
    "to_torus",
    "from_torus",
    "pillow_distance",
    "branch_coords",
    "forward_coords",
]


class Colour(IntEnum):
    """Face / tile colour. Doubles as the index into 2x2 matrices."""

    WHITE = 0
    BLACK = 1

    @property
    def other(self) -> "Colour":
        return Colour(1 - int(self))

    @classmethod
    def parse(cls, value) -> "Colour":
        if isinstance(value, Colour):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("white", "w"):
                return cls.WHITE
            if key in ("black", "b"):
                return cls.BLACK
            raise ValueError(f"unknown colour {value!r}")
        if isinstance(value, (int, np.integer)) and int(value) in (0, 1):
            return cls(int(value))
        raise ValueError(f"unknown colour {value!r}")

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class PillowMap:
    """The expanding Thurston map induced by ``z -> s z`` on the pillow."""

    s: int

    def __post_init__(self):
        if not isinstance(self.s, (int, np.integer)) or isinstance(self.s, bool) or self.s < 2:
            raise ValueError(f"scale factor must be an integer >= 2, got {self.s!r}")
        object.__setattr__(self, "s", int(self.s))

    @property
    def degree(self) -> int:
        return self.s * self.s

    @property
    def expansion(self) -> float:
        """Expansion factor of the map in the flat metric."""
        return float(self.s)

    @property
    def corners(self) -> Tuple["SplitPoint", ...]:
        """The four pillow corners; they form the postcritical set."""
        return tuple(SplitPoint(Colour.WHITE, x, y) for x in (0, 1) for y in (0, 1))


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


@dataclass(frozen=True)
class SplitPoint:
    """A point of the split sphere: a face together with face coordinates.

    Coordinates are stored as exact fractions. Boundary points (one coordinate
    equal to 0 or 1) represent the same pillow point in both faces.
    """

    face: Colour
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "face", Colour.parse(self.face))
        x, y = _frac(self.x), _frac(self.y)
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise ValueError(f"face coordinates out of [0, 1]: ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def on_curve(self) -> bool:
        """True if the point lies on the common boundary of the two faces."""
        return self.x in (0, 1) or self.y in (0, 1)

    def same_point(self, other: "SplitPoint") -> bool:
        """Equality as points of the sphere (faces may differ on the boundary)."""
        if (self.x, self.y) != (other.x, other.y):
            return False
        return self.face == other.face or self.on_curve

    def as_floats(self) -> Tuple[int, float, float]:
        return int(self.face), float(self.x), float(self.y)


@dataclass(frozen=True)
class TileAddress:
    """An n-tile: starting face and the grid cells visited by its forward orbit.

    ``digits[k]`` is the cell ``(i, j)`` containing the k-th image of the tile.
    The face of each later cell is determined by the colours of the earlier ones.
    """

    face: Colour
    digits: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "face", Colour.parse(self.face))
        object.__setattr__(self, "digits", tuple((int(i), int(j)) for i, j in self.digits))

    @property
    def level(self) -> int:
        return len(self.digits)

    def faces(self) -> Tuple[Colour, ...]:
        """Face of each digit followed by the colour of the whole tile."""
        out = [self.face]
        f = int(self.face)
        for i, j in self.digits:
            f ^= (i + j) & 1
            out.append(Colour(f))
        return tuple(out)

    @property
    def colour(self) -> Colour:
        return self.faces()[-1]

    def validate(self, pmap: PillowMap) -> None:
        for i, j in self.digits:
            if not (0 <= i < pmap.s and 0 <= j < pmap.s):
                raise ValueError(f"digit {(i, j)} outside the {pmap.s}x{pmap.s} grid")


def _reflect(u: Fraction, index: int) -> Fraction:
    return u if index % 2 == 0 else 1 - u


def _cell(s: int, c: Fraction) -> int:
    return min(math.floor(s * c), s - 1)


def apply_map(pmap: PillowMap, p: SplitPoint) -> SplitPoint:
    """Image of ``p`` under the map, exactly.

    On a shared cell edge the lower-left cell is used; the image coordinates do
    not depend on that choice.
    """
    s = pmap.s
    i, j = _cell(s, p.x), _cell(s, p.y)
    x = _reflect(s * p.x - i, i)
    y = _reflect(s * p.y - j, j)
    return SplitPoint(Colour(int(p.face) ^ ((i + j) & 1)), x, y)


def _branch_one(s: int, i: int, j: int, x: Fraction, y: Fraction) -> Tuple[Fraction, Fraction]:
    return (i + _reflect(x, i)) / s, (j + _reflect(y, j)) / s


def branch_evaluate(pmap: PillowMap, address: TileAddress, q: SplitPoint) -> SplitPoint:
    """Inverse branch of the n-th iterate on the tile ``address`` evaluated at ``q``."""
    address.validate(pmap)
    if q.face != address.colour:
        raise ValueError(
            f"point lies in the {q.face} face but the tile has colour {address.colour}")
    x, y = q.x, q.y
    for i, j in reversed(address.digits):
        x, y = _branch_one(pmap.s, i, j, x, y)
    return SplitPoint(address.face, x, y)


def resolve_address(pmap: PillowMap, address: TileAddress):
    """Lower-left corner, side length and colour of a tile's square."""
    address.validate(pmap)
    colour = address.colour
    a = branch_evaluate(pmap, address, SplitPoint(colour, 0, 0))
    b = branch_evaluate(pmap, address, SplitPoint(colour, 1, 1))
    corner = (min(a.x, b.x), min(a.y, b.y))
    side = Fraction(1, pmap.s ** address.level)
    return corner, side, colour


def touches_curve(pmap: PillowMap, address: TileAddress) -> bool:
    """Whether the tile meets the boundary of its face."""
    (cx, cy), side, _ = resolve_address(pmap, address)
    return cx == 0 or cy == 0 or cx + side == 1 or cy + side == 1


def tile_diameter(pmap: PillowMap, n: int) -> float:
    """Diameter of an n-tile in the flat pillow metric."""
    return math.sqrt(2.0) * float(pmap.s) ** (-n)


def to_torus(p: SplitPoint) -> Tuple[Fraction, Fraction]:
    """A lift of ``p`` to the square torus of side 2."""
    if p.face == Colour.WHITE:
        return p.x, p.y
    return 2 - p.x, p.y


def from_torus(X, Y, face_hint: Colour = Colour.WHITE) -> SplitPoint:
    """Project a torus point to the split sphere.

    Points on the face boundary belong to both faces; ``face_hint`` picks one.
    """
    X, Y = _frac(X) % 2, _frac(Y) % 2
    if X <= 1 and Y <= 1:
        p = SplitPoint(Colour.WHITE, X, Y)
    elif X >= 1 and Y >= 1:
        p = SplitPoint(Colour.WHITE, 2 - X, 2 - Y)
    elif X >= 1:
        p = SplitPoint(Colour.BLACK, 2 - X, Y)
    else:
        p = SplitPoint(Colour.BLACK, X, 2 - Y)
    if p.on_curve and p.face != Colour.parse(face_hint):
        p = SplitPoint(Colour.parse(face_hint), p.x, p.y)
    return p


def _torus_gap(a: float, b: float) -> float:
    d = abs(a - b) % 2.0
    return min(d, 2.0 - d)


def pillow_distance(p: SplitPoint, q: SplitPoint) -> float:
    """Flat geodesic distance on the pillow."""
    P = [float(c) for c in to_torus(p)]
    Q = [float(c) for c in to_torus(q)]
    best = math.inf
    for sign in (1.0, -1.0):
        dx = _torus_gap(P[0], sign * Q[0])
        dy = _torus_gap(P[1], sign * Q[1])
        best = min(best, math.hypot(dx, dy))
    return best


# Vectorised float versions used by the numerical modules.

def branch_coords(s: int, i, j, x: np.ndarray, y: np.ndarray):
    """Apply the inverse branch of cell ``(i, j)`` to arrays of face coordinates."""
    xi = x if i % 2 == 0 else 1.0 - x
    yj = y if j % 2 == 0 else 1.0 - y
    return (i + xi) / s, (j + yj) / s


def forward_coords(s: int, face: np.ndarray, x: np.ndarray, y: np.ndarray):
    """One step of the map on arrays; returns ``(face, x, y, i, j)``."""
    i = np.minimum(np.floor(s * x), s - 1).astype(np.int64)
    j = np.minimum(np.floor(s * y), s - 1).astype(np.int64)
    u = s * x - i
    v = s * y - j
    u = np.where(i % 2 == 0, u, 1.0 - u)
    v = np.where(j % 2 == 0, v, 1.0 - v)
    return np.asarray(face) ^ ((i + j) & 1), u, v, i, j


def as_points(points: Iterable[SplitPoint]):
    """Pack split points into ``(face, x, y)`` float arrays."""
    pts: Sequence[SplitPoint] = list(points)
    face = np.array([int(p.face) for p in pts], dtype=np.int64)
    x = np.array([float(p.x) for p in pts])
    y = np.array([float(p.y) for p in pts])
    return face, x, y
