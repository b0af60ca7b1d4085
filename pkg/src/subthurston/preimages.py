"""Streaming enumeration of iterated preimages through a subsystem.

The preimages of a point under the n-th iterate form a tree: the children of
a node ``z`` are the points ``branch_U(z)`` for the selected 1-tiles ``U``
whose colour is the face of ``z``. The walker visits that tree level by level
in bounded memory, carrying Birkhoff sums of potentials along each path.

The x-coordinate of a node depends only on the column indices of the cells
on its path (and likewise for y), so level m has at most ``s**m`` distinct
x-values per root. Nodes store integer ids into per-level coordinate tables
and potentials are evaluated factor by factor on those tables.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterator, Mapping, Optional, Tuple

import numpy as np

from .combinatorics import Subsystem, tile_matrix
from .errors import BudgetExceeded

__all__ = ["Block", "PreimageTree", "preimage_blocks", "branch_sums", "count_branches"]

Block = Dict[str, np.ndarray]
FieldFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

DEFAULT_CHUNK = 1 << 20
MAX_TABLE = 5 * 10 ** 7


def count_branches(sub: Subsystem, colour: int, n: int) -> int:
    """Number of n-th preimages of a generic point in the face ``colour``."""
    return tile_matrix(sub).power(n).colour_counts()[colour]


def _axis_tables(s: int, base: np.ndarray, n: int):
    """Coordinate tables for levels 0..n; child id = cell * len(parent table) + id."""
    out = [np.asarray(base, dtype=float)]
    for _ in range(n):
        prev = out[-1]
        out.append(np.concatenate([(i + (prev if i % 2 == 0 else 1.0 - prev)) / s for i in range(s)]))
    return out


class PreimageTree:
    """Preimage tree of a set of root points, ``n`` levels deep.

    ``fields`` maps names to potentials; each node carries the Birkhoff sum of
    every field along its path (the sum over the node and its images up to,
    not including, the root).
    """

    def __init__(self, sub: Subsystem, face, x, y, n: int, fields: Mapping[str, object] = None):
        self.sub = sub
        self.n = n
        s = sub.pmap.s
        self.face = np.atleast_1d(np.asarray(face, dtype=np.int64))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if len(x) * s ** n > MAX_TABLE:
            raise BudgetExceeded(f"coordinate tables of {len(x) * s ** n} entries")
        self.X = _axis_tables(s, x, n)
        self.Y = _axis_tables(s, y, n)
        self.fields = dict(fields or {})
        self._factors: Dict[tuple, np.ndarray] = {}
        self.fan = max(1, max(len(t) for t in sub.tiles_of_colour))

    def _factor(self, axis: str, level: int, kind: tuple) -> np.ndarray:
        key = (axis, level, kind)
        if key not in self._factors:
            arr = (self.X if axis == "x" else self.Y)[level]
            if kind[0] == "cos":
                val = np.cos(np.pi * kind[1] * arr)
            elif kind[0] == "pow":
                val = arr ** kind[1]
            else:
                val = np.ones_like(arr)
            self._factors[key] = val
        return self._factors[key]

    def evaluate(self, pot, level: int, face, xid, yid) -> np.ndarray:
        """Value of a potential at nodes of a level given by their ids."""
        out = np.full(len(xid), pot.constant)
        for coef, fx, fy in pot.factor_terms():
            out += coef * self._factor("x", level, fx)[xid] * self._factor("y", level, fy)[yid]
        if pot.face_shift:
            out += pot.face_shift * (face == 1)
        return out

    def coords(self, level: int, blk: Block):
        return self.X[level][blk["xid"]], self.Y[level][blk["yid"]]

    def children(self, level: int, face, xid, yid):
        """Yield ``(rows, face, xid, yid)`` of the children at ``level + 1``, one tile at a time."""
        sub = self.sub
        nx, ny = len(self.X[level]), len(self.Y[level])
        for c in (0, 1):
            sel = np.flatnonzero(face == c)
            if not len(sel):
                continue
            bx, by = xid[sel], yid[sel]
            for t in sub.tiles_of_colour[c]:
                yield (sel, np.full(len(sel), sub.face[t]),
                       int(sub.i[t]) * nx + bx, int(sub.j[t]) * ny + by)

    def _expand(self, level: int, blk: Block) -> Block:
        parts = []
        carried = [k for k in blk if k not in ("face", "xid", "yid", "parent")]
        for sel, face, xid, yid in self.children(level, blk["face"], blk["xid"], blk["yid"]):
            part = {"face": face, "xid": xid, "yid": yid, "parent": sel}
            for k in carried:
                part[k] = blk[k][sel]
            parts.append(part)
        if not parts:
            return {k: v[:0] for k, v in blk.items()}
        out = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
        for name, pot in self.fields.items():
            out[name] += self.evaluate(pot, level + 1, out["face"], out["xid"], out["yid"])
        return out

    def blocks(self, n_stop: Optional[int] = None, chunk: int = DEFAULT_CHUNK) -> Iterator[Tuple[int, Block]]:
        """Yield ``(level, block)`` for levels ``0..n_stop`` in a fixed order.

        A block holds ``face``, ``xid``, ``yid``, ``root`` (index of the starting
        point), ``parent`` (row of the parent in the block it came from) and one
        Birkhoff-sum array per field. Deep levels arrive split over blocks.
        """
        n_stop = self.n if n_stop is None else n_stop
        R = len(self.face)
        root = {"face": self.face, "xid": np.arange(R), "yid": np.arange(R), "root": np.arange(R),
                "parent": np.full(R, -1)}
        for name in self.fields:
            root[name] = np.zeros(R)
        step = max(1, chunk // self.fan)

        def walk(blk: Block, m: int):
            yield m, blk
            if m == n_stop or not len(blk["face"]):
                return
            for lo in range(0, len(blk["face"]), step):
                piece = {k: v[lo:lo + step] for k, v in blk.items()}
                yield from walk(self._expand(m, piece), m + 1)

        yield from walk(root, 0)


def preimage_blocks(sub: Subsystem, face, x, y, n: int, fields: Mapping[str, object] = None,
                    chunk: int = DEFAULT_CHUNK) -> Iterator[Tuple[int, Block]]:
    """Blocks of the preimage tree with float coordinates ``x``, ``y`` attached."""
    tree = PreimageTree(sub, face, x, y, n, fields)
    for level, blk in tree.blocks(chunk=chunk):
        blk = dict(blk)
        blk["x"], blk["y"] = tree.coords(level, blk)
        yield level, blk


def branch_sums(sub: Subsystem, potential, face, x, y, n: int,
                weight: FieldFn = None, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """``L^n w`` at each root: sum over n-th preimages of ``w * exp(S_n phi)``.

    ``potential`` should not carry a large constant (callers split it off);
    ``weight`` is a function of ``(face, x, y)`` arrays and defaults to 1.
    """
    tree = PreimageTree(sub, face, x, y, n, {"S": potential})
    out = np.zeros(len(tree.face))
    for level, blk in tree.blocks(chunk=chunk):
        if level != n:
            continue
        w = np.exp(blk["S"])
        if weight is not None:
            w = w * weight(blk["face"], *tree.coords(level, blk))
        out += np.bincount(blk["root"], weights=w, minlength=len(out))
    return out
