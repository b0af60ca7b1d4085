"""Split transfer operators, their depth-k discretisation and spectral data.

On functions that are constant on the depth-k tiles the split operator acts
by a sparse matrix. Its row ``T`` collects, for each selected 1-tile ``U`` of
the right colour, the weight ``exp(phi)`` at the centre of the tile ``U.T``
and sends it to the depth-k truncation of ``U.T``. At tile centres this is
exactly the split operator applied to a piecewise-constant function.

A constant term of the potential only rescales the matrix, so it is kept
aside as ``log_scale``; the eigenvectors are computed from the same base
matrix for every constant shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
import scipy.sparse as sp
from scipy.special import logsumexp

from .combinatorics import Subsystem, TileLevel, check_structure, tile_levels, tile_matrix
from .errors import AssumptionViolation, ConvergenceError
from .geometry import SplitPoint, branch_coords, forward_coords
from .potential import Potential, distortion_constant, split_ratio_constant
from .preimages import branch_sums, count_branches, preimage_blocks

__all__ = [
    "SplitFunction",
    "TileMeasure",
    "TransferMatrix",
    "SpectralData",
    "PressureTable",
    "DistortionReport",
    "locate",
    "transfer_matrix",
    "solve_spectral",
    "spectral_data",
    "apply_split_operator",
    "pressure_via_tiles",
    "pressure_via_operator",
    "normalized_apply",
    "cesaro_eigenfunction",
    "verify_distortion",
    "birkhoff_levels",
]

ArrayFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def locate(tiles: TileLevel, face, x, y) -> np.ndarray:
    """Row of the depth-k tile containing each point, -1 outside the domain.

    Intended for points off the tile skeleton; on a shared edge the
    lower-left cell wins.
    """
    sub = tiles.sub
    s, N = sub.pmap.s, sub.n_tiles
    face = np.asarray(face, dtype=np.int64)
    if tiles.level == 0:
        return face.copy()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    code = np.zeros(face.shape, dtype=np.int64)
    ok = np.ones(face.shape, dtype=bool)
    for _ in range(tiles.level):
        nface, x, y, i, j = forward_coords(s, face, x, y)
        t = sub.lookup[face, i, j]
        ok &= t >= 0
        code = code * N + np.maximum(t, 0)
        face = nface
    idx = tiles.index_of(code)
    return np.where(ok, idx, -1)


@dataclass
class SplitFunction:
    """Real function on the split sphere, constant on each depth-k tile."""

    tiles: TileLevel
    values: np.ndarray

    @property
    def depth(self) -> int:
        return self.tiles.level

    def __call__(self, face, x, y) -> np.ndarray:
        idx = locate(self.tiles, face, x, y)
        if (idx < 0).any():
            raise ValueError("point outside the domain of the split function")
        return self.values[idx]

    def at(self, p: SplitPoint) -> float:
        f, x, y = p.as_floats()
        return float(self(np.array([f]), np.array([x]), np.array([y]))[0])

    def face_values(self, colour: int) -> np.ndarray:
        return self.values[self.tiles.face == colour]


@dataclass
class TileMeasure:
    """Finite measure given by its masses on the depth-k tiles."""

    tiles: TileLevel
    weights: np.ndarray

    @property
    def depth(self) -> int:
        return self.tiles.level

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def face_mass(self, colour: int) -> float:
        return float(np.sum(self.weights[self.tiles.face == colour]))

    def integrate(self, g) -> float:
        """Midpoint quadrature of a potential-like function over the tiles."""
        vals = g.evaluate(self.tiles.face, self.tiles.cx, self.tiles.cy) if hasattr(g, "evaluate") \
            else g(self.tiles.face, self.tiles.cx, self.tiles.cy)
        return float(np.dot(self.weights, vals))

    def coarse_grain(self, coarse: TileLevel) -> "TileMeasure":
        """Push the masses to the ancestor tiles at a coarser level."""
        if coarse.level > self.depth:
            raise ValueError("target level is finer than the measure")
        if coarse.level == 0:
            idx = self.tiles.face
        else:
            idx = coarse.index_of(self.tiles.prefix_codes(coarse.level))
        return TileMeasure(coarse, np.bincount(idx, weights=self.weights, minlength=coarse.size))


@dataclass
class TransferMatrix:
    """Depth-k matrix of the split operator; true matrix = exp(log_scale) * base."""

    sub: Subsystem
    phi: Potential
    levels: List[TileLevel]
    base: sp.csr_matrix
    log_scale: float

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def tiles(self) -> TileLevel:
        return self.levels[-1]


def transfer_matrix(sub: Subsystem, phi: Potential, depth: int,
                    max_tiles: int = 10 ** 7) -> TransferMatrix:
    """Sparse depth-k matrix of the split operator for the potential ``phi``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    sub.require_surjective()
    levels = tile_levels(sub, depth, max_tiles)
    L = levels[-1]
    shift, rest = phi.split_constant()
    s, N = sub.pmap.s, sub.n_tiles
    rows, cols, vals = [], [], []
    for u in range(N):
        sel = np.flatnonzero(L.face == sub.colour[u])
        if not len(sel):
            continue
        x, y = branch_coords(s, int(sub.i[u]), int(sub.j[u]), L.cx[sel], L.cy[sel])
        target = u * N ** (depth - 1) + L.codes[sel] // N
        col = L.index_of(target)
        rows.append(sel)
        cols.append(col)
        vals.append(rest.evaluate(np.full(len(sel), sub.face[u]), x, y))
    rows, cols, vals = map(np.concatenate, (rows, cols, vals))
    base = sp.csr_matrix((np.exp(vals), (rows, cols)), shape=(L.size, L.size))
    return TransferMatrix(sub, phi, levels, base, shift)


@dataclass
class SpectralData:
    """Leading eigen-data of a depth-k transfer matrix.

    ``m`` is a probability measure, ``u`` is scaled so that ``sum(u m) = 1``.
    """

    lam: float
    pressure: float
    u: SplitFunction
    m: TileMeasure
    iterations: int
    residual_right: float
    residual_left: float
    lam_right: float
    lam_left: float
    matrix: TransferMatrix
    tol: float

    @property
    def depth(self) -> int:
        return self.matrix.depth

    @property
    def lam_base(self) -> float:
        return self.lam * math.exp(-self.matrix.log_scale)

    def summary(self) -> dict:
        return {
            "depth": self.depth,
            "lambda": self.lam,
            "pressure": self.pressure,
            "iterations": self.iterations,
            "residual_right": self.residual_right,
            "residual_left": self.residual_left,
            "lambda_right": self.lam_right,
            "lambda_left": self.lam_left,
            "n_tiles": self.u.tiles.size,
            "tol": self.tol,
        }


def solve_spectral(tm: TransferMatrix, tol: float = 1e-10, max_iter: int = 100000) -> SpectralData:
    """Power iteration for the right eigenvector ``u`` and left eigenmeasure ``m``.

    Both iterations start from constant vectors. Convergence means relative
    residuals below ``tol`` for both vectors and agreement of the two
    eigenvalue estimates to ``tol``.
    """
    A = tm.base
    AT = A.T.tocsr()
    n = A.shape[0]
    u = np.ones(n)
    m = np.full(n, 1.0 / n)
    res_u = res_m = math.inf
    lam_u = lam_m = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        w = A @ u
        lam_u = float(w.max())
        if lam_u <= 0:
            raise AssumptionViolation("transfer matrix annihilates the constants")
        w /= lam_u
        res_u = float(np.max(np.abs(w - u)))
        u = w
        v = AT @ m
        lam_m = float(v.sum())
        v /= lam_m
        res_m = float(np.sum(np.abs(v - m)))
        m = v
        if res_u <= tol and res_m <= tol and abs(lam_u - lam_m) <= tol * lam_u:
            break
    else:
        raise ConvergenceError(
            f"power iteration stopped after {max_iter} steps (residuals {res_u:.3g}, {res_m:.3g})")
    if u.min() <= 0 or m.min() < 0:
        raise AssumptionViolation("leading eigenvector is not positive; the subsystem looks reducible")
    lam = float(m @ (A @ u)) / float(m @ u)
    m = m / m.sum()
    u = u / float(m @ u)
    scale = math.exp(tm.log_scale)
    return SpectralData(lam * scale, tm.log_scale + math.log(lam), SplitFunction(tm.tiles, u),
                        TileMeasure(tm.tiles, m), it, res_u, res_m, lam_u * scale, lam_m * scale, tm, tol)


def spectral_data(sub: Subsystem, phi: Potential, depth: int, tol: float = 1e-10,
                  max_iter: int = 100000) -> SpectralData:
    """Build the depth-k matrix and solve it."""
    return solve_spectral(transfer_matrix(sub, phi, depth), tol, max_iter)


def _check_generic(face, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    bad = (x <= 0) | (x >= 1) | (y <= 0) | (y >= 1)
    if bad.any():
        raise ValueError("strict mode needs points off the face boundary")


def _as_array_fn(v) -> Optional[ArrayFn]:
    if v is None:
        return None
    if isinstance(v, Potential):
        return v.evaluate
    return v


def apply_split_operator(sub: Subsystem, phi: Potential, v, q: SplitPoint, n: int,
                         strict: bool = True) -> float:
    """``(L^n v)(q)`` by summing over the inverse branches of the n-tiles.

    Summing over tiles rather than points counts a preimage once per tile
    containing it, which is the local-degree weighting on the tile skeleton;
    ``strict`` refuses points of the face boundary instead.
    """
    sub.require_surjective()
    face, x, y = q.as_floats()
    if strict:
        _check_generic(face, x, y)
    shift, rest = phi.split_constant()
    val = branch_sums(sub, rest, [face], [x], [y], n, _as_array_fn(v))[0]
    return float(val * math.exp(n * shift))


@dataclass
class PressureTable:
    method: str
    n: np.ndarray
    value: np.ndarray
    error_bar: np.ndarray
    extra: dict = field(default_factory=dict)

    def rows(self) -> list:
        return [{"n": int(k), "value": float(v), "error_bar": float(e)}
                for k, v, e in zip(self.n, self.value, self.error_bar)]


def birkhoff_levels(levels: List[TileLevel], phi: Potential) -> List[np.ndarray]:
    """Birkhoff sums of ``phi`` at the centres of all tiles of each level.

    The k-th image of the centre of an n-tile is the centre of the tile left
    after dropping k leading digits, so the sums satisfy a one-step recursion.
    """
    out = [np.zeros(levels[0].size)]
    for lev in levels[1:]:
        out.append(phi.evaluate(lev.face, lev.cx, lev.cy) + out[-1][lev.suffix])
    return out


def pressure_via_tiles(sub: Subsystem, phi: Potential, n_max: int,
                       max_tiles: int = 10 ** 7) -> PressureTable:
    """``(1/n) log Z_n`` with Birkhoff sums at tile centres, ``n = 1..n_max``.

    ``value`` uses the largest of the partition sums restricted to one colour;
    ``value_total`` in ``extra`` sums over all n-tiles. The two differ by at
    most ``log 2 / n``. The error bar bounds the distance of ``value`` from the
    supremum-based sum over all tiles.
    """
    sub.require_surjective()
    shift, rest = phi.split_constant()
    c1 = distortion_constant(sub.pmap, phi)
    slack = c1 * (math.sqrt(2.0) / 2.0) ** phi.alpha + math.log(len(sub.colour_set))
    ns = np.arange(1, n_max + 1)
    value, total = [], []
    if rest.is_constant:
        A = tile_matrix(sub)
        for n in ns:
            cc = A.power(int(n)).colour_counts()
            value.append(shift + math.log(max(cc)) / n)
            total.append(shift + math.log(sum(cc)) / n)
    else:
        levels = tile_levels(sub, n_max, max_tiles)
        sums = birkhoff_levels(levels, rest)
        for n in ns:
            lev, S = levels[n], sums[n]
            per = [logsumexp(S[lev.colour == c]) for c in (0, 1) if (lev.colour == c).any()]
            value.append(shift + max(per) / n)
            total.append(shift + logsumexp(S) / n)
    return PressureTable("tiles", ns, np.array(value), slack / ns, {"value_total": np.array(total)})


def pressure_via_operator(sub: Subsystem, phi: Potential, q: SplitPoint, n_max: int,
                          n_irr: Optional[int] = None, chunk: int = 1 << 20) -> PressureTable:
    """``(1/n) log (L^n 1)(q)`` for ``n = 1..n_max`` by exact branch sums.

    The error bar is the two-sided split-ratio bound divided by ``n``.
    """
    sub.require_surjective()
    face, x, y = q.as_floats()
    _check_generic(face, x, y)
    shift, rest = phi.split_constant()
    if n_irr is None:
        n_irr = check_structure(sub).irreducible_witness
        if n_irr is None:
            raise AssumptionViolation("subsystem is not irreducible")
    cbar = split_ratio_constant(sub.pmap, phi, n_irr)
    ns = np.arange(1, n_max + 1)
    if rest.is_constant:
        logs = [math.log(count_branches(sub, face, int(n))) for n in ns]
    else:
        acc = [[] for _ in range(n_max + 1)]
        for level, blk in preimage_blocks(sub, [face], [x], [y], n_max, {"S": rest}, chunk):
            if level:
                acc[level].append(logsumexp(blk["S"]))
        logs = [float(logsumexp(acc[n])) for n in ns]
    value = np.array([shift + lg / n for lg, n in zip(logs, ns)])
    return PressureTable("operator", ns, value, math.log(cbar) / ns)


def normalized_apply(sub: Subsystem, phi: Potential, spectral: SpectralData, v, face, x, y,
                     n: int = 1, chunk: int = 1 << 20) -> np.ndarray:
    """Normalised operator ``(1/u) lam^-n L^n(u v)`` at arrays of points.

    ``u`` is the piecewise-constant eigenfunction of ``spectral``; branch
    points and the potential are evaluated exactly. At depth-k tile centres
    this reproduces the matrix action, so ``v = 1`` returns 1 up to the
    solver residual there.
    """
    u = spectral.u
    vf = _as_array_fn(v)
    shift, rest = phi.split_constant()

    def weight(f, xx, yy):
        w = u(f, xx, yy)
        return w if vf is None else w * vf(f, xx, yy)

    face = np.atleast_1d(np.asarray(face, dtype=np.int64))
    top = branch_sums(sub, rest, face, x, y, n, weight, chunk)
    lam_base = spectral.lam * math.exp(-shift)
    return top / (u(face, x, y) * lam_base ** n)


def cesaro_eigenfunction(sub: Subsystem, phi: Potential, spectral: SpectralData, n: int,
                         backend: str = "auto", max_nodes: int = 2 * 10 ** 7,
                         normalize: bool = True) -> SplitFunction:
    """Cesàro average ``(1/n) sum_{j<n} exp(-jP) L^j 1`` on depth-k centres.

    The exact backend sums over preimages; the matrix backend iterates the
    depth-k matrix (each step re-reads values at the coarse tiles). ``auto``
    takes the exact route when its tree fits in ``max_nodes``.
    """
    tiles = spectral.u.tiles
    nodes = sum(tile_matrix(sub).power(j).total() for j in range(n)) * tiles.size
    if backend == "auto":
        backend = "exact" if nodes <= max_nodes else "matrix"
    shift, rest = phi.split_constant()
    lam_base = spectral.lam * math.exp(-shift)
    acc = np.zeros(tiles.size)
    if backend == "exact":
        sums = np.zeros((n, tiles.size))
        for level, blk in preimage_blocks(sub, tiles.face, tiles.cx, tiles.cy, n - 1,
                                          {"S": rest}):
            sums[level] += np.bincount(blk["root"], weights=np.exp(blk["S"]), minlength=tiles.size)
        for j in range(n):
            acc += sums[j] / lam_base ** j
    elif backend == "matrix":
        A = spectral.matrix.base
        vec = np.ones(tiles.size)
        for j in range(n):
            acc += vec
            vec = (A @ vec) / lam_base
    else:
        raise ValueError(f"unknown backend {backend!r}")
    acc /= n
    if normalize:
        acc /= float(spectral.m.weights @ acc)
    return SplitFunction(tiles, acc)


@dataclass
class DistortionReport:
    n: int
    n_pairs: int
    c1: float
    cbar: float
    pressure: float
    ratio_violations: int
    upper_violations: int
    lower_violations: int
    worst_ratio_excess: float
    max_normalized: float
    min_normalized: float

    @property
    def violations(self) -> int:
        return self.ratio_violations + self.upper_violations + self.lower_violations

    def as_dict(self) -> dict:
        return dict(self.__dict__, violations=self.violations)


def verify_distortion(sub: Subsystem, phi: Potential, n: int, n_pairs: int = 1000,
                      seed: int = 0, pressure: Optional[float] = None, depth: int = 4,
                      pool: int = 200) -> DistortionReport:
    """Check the distortion bounds for ``L^n 1`` at random generic points.

    Pairs are drawn from a pool of ``pool`` random points per face. For each
    pair in one face ``log L^n1(x) - log L^n1(y) <= C1 d(x, y)^alpha`` is tested;
    at every pool point ``exp(-nP) L^n1`` is compared with the split-ratio
    constant.
    """
    sub.require_surjective()
    rep = check_structure(sub)
    if rep.irreducible_witness is None:
        raise AssumptionViolation("subsystem is not irreducible")
    if pressure is None:
        pressure = spectral_data(sub, phi, depth).pressure
    hd = phi.holder_data()
    c1 = distortion_constant(sub.pmap, phi)
    cbar = split_ratio_constant(sub.pmap, phi, rep.irreducible_witness)
    rng = np.random.default_rng(seed)
    face = np.repeat([0, 1], pool)
    pts = rng.uniform(1e-6, 1 - 1e-6, size=(2 * pool, 2))
    shift, rest = phi.split_constant()
    logL = np.log(branch_sums(sub, rest, face, pts[:, 0], pts[:, 1], n)) + n * shift
    normalized = logL - n * pressure
    tol = 1e-12
    upper = int(np.count_nonzero(normalized > math.log(cbar) + tol))
    lower = int(np.count_nonzero(normalized < -math.log(cbar) - tol))
    which = rng.integers(0, 2, size=n_pairs)
    a = rng.integers(0, pool, size=n_pairs) + which * pool
    b = (a - which * pool + rng.integers(1, pool, size=n_pairs)) % pool + which * pool
    d = np.hypot(pts[a, 0] - pts[b, 0], pts[a, 1] - pts[b, 1])
    excess = np.abs(logL[a] - logL[b]) - c1 * d ** hd.alpha
    return DistortionReport(n, n_pairs, c1, cbar, pressure, int(np.count_nonzero(excess > tol)),
                            upper, lower, float(excess.max()), float(np.exp(normalized.max())),
                            float(np.exp(normalized.min())))
