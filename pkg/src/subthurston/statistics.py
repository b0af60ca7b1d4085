"""Equidistribution of preimages, Markov test measures and large deviations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from .combinatorics import Subsystem, tile_levels
from .errors import AssumptionViolation, BudgetExceeded
from .geometry import SplitPoint, forward_coords
from .potential import Potential
from .preimages import PreimageTree, preimage_blocks
from .transfer import birkhoff_levels, spectral_data
from .equilibrium import equilibrium_state

__all__ = [
    "DiscreteMeasure",
    "MarkovMeasure",
    "WeakStarTable",
    "preimage_measure",
    "preimage_integrals",
    "weak_star_table",
    "markov_entropy",
    "markov_integral",
    "rate_function",
    "mgf_pressure_check",
    "ldp_empirical",
    "ldp_rate_bound",
]


@dataclass
class DiscreteMeasure:
    """Finitely supported measure on the split sphere."""

    face: np.ndarray
    x: np.ndarray
    y: np.ndarray
    weights: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, g) -> float:
        vals = g.evaluate(self.face, self.x, self.y) if hasattr(g, "evaluate") else g(self.face, self.x, self.y)
        return float(np.dot(self.weights, vals))

    def pushforward(self, s: int) -> "DiscreteMeasure":
        face, x, y, _, _ = forward_coords(s, self.face, self.x, self.y)
        return DiscreteMeasure(face, x, y, self.weights.copy())


def preimage_measure(sub: Subsystem, phi: Potential, x: SplitPoint, n: int, mode: str = "plain",
                     max_nodes: int = 2 * 10 ** 7) -> DiscreteMeasure:
    """Probability on the n-th preimages of ``x`` weighted by ``exp(S_n phi)``.

    In ``birkhoff`` mode each preimage ``y`` is replaced by the uniform average
    of ``y, f(y), ..., f^{n-1}(y)``; the image ``f^i(y)`` is the ancestor of
    ``y`` at level ``n - i`` of the preimage tree, so its weight is the total
    weight of the leaves below it.
    """
    if mode not in ("plain", "birkhoff"):
        raise ValueError(f"unknown mode {mode!r}")
    sub.require_surjective()
    face, px, py = x.as_floats()
    nodes = sum(sub.n_tiles ** k for k in range(n + 1))
    if nodes > max_nodes:
        raise BudgetExceeded(f"preimage tree of depth {n} may hold {nodes} nodes")
    _, rest = phi.split_constant()
    # with chunk >= nodes every level arrives as a single block
    levels = [blk for _, blk in preimage_blocks(sub, [face], [px], [py], n, {"S": rest},
                                                chunk=max_nodes)]
    leaf = levels[n]
    w = np.exp(leaf["S"] - leaf["S"].max())
    if mode == "plain":
        return DiscreteMeasure(leaf["face"], leaf["x"], leaf["y"], w / w.sum())
    w = w / w.sum()
    faces, xs, ys, ws = [], [], [], []
    cur = w
    for level in range(n, 0, -1):
        blk = levels[level]
        faces.append(blk["face"])
        xs.append(blk["x"])
        ys.append(blk["y"])
        ws.append(cur / n)
        if level > 1:
            cur = np.bincount(blk["parent"], weights=cur, minlength=len(levels[level - 1]["x"]))
    return DiscreteMeasure(np.concatenate(faces), np.concatenate(xs), np.concatenate(ys), np.concatenate(ws))


def preimage_integrals(sub: Subsystem, phi: Potential, g: Potential, x: SplitPoint, n_max: int,
                       plain: bool = True, chunk: int = 1 << 20) -> dict:
    """``integral g`` against the plain and orbit-averaged preimage measures, n = 1..n_max.

    Streams over the preimage tree, so ``n_max`` is limited by time rather
    than memory. The deepest level is reduced straight from its parents
    without being materialised.
    """
    sub.require_surjective()
    face, px, py = x.as_floats()
    _, rest = phi.split_constant()
    Z = np.zeros(n_max + 1)
    P = np.zeros(n_max + 1)
    Bk = np.zeros(n_max + 1)
    shift = rest.sup_bound()
    tree = PreimageTree(sub, [face], [px], [py], n_max, {"S": rest, "G": g})
    for level, blk in tree.blocks(n_max - 1, chunk):
        if level:
            w = np.exp(blk["S"] - level * shift)
            Z[level] += w.sum()
            Bk[level] += np.dot(w, blk["G"])
            if plain:
                P[level] += np.dot(w, tree.evaluate(g, level, blk["face"], blk["xid"], blk["yid"]))
        if level != n_max - 1:
            continue
        S = blk["S"] - n_max * shift
        for sel, cf, xid, yid in tree.children(level, blk["face"], blk["xid"], blk["yid"]):
            gv = tree.evaluate(g, n_max, cf, xid, yid)
            w = np.exp(S[sel] + tree.evaluate(rest, n_max, cf, xid, yid))
            Z[n_max] += w.sum()
            Bk[n_max] += np.dot(w, blk["G"][sel] + gv)
            if plain:
                P[n_max] += np.dot(w, gv)
    ns = np.arange(1, n_max + 1)
    out = {"n": ns, "birkhoff": Bk[1:] / (Z[1:] * ns)}
    if plain:
        out["plain"] = P[1:] / Z[1:]
    return out


@dataclass
class WeakStarTable:
    n: np.ndarray
    value: np.ndarray
    target: float
    error_bar: float

    @property
    def gap(self) -> np.ndarray:
        return np.abs(self.value - self.target)

    def trend_slope(self, n_from: int = None) -> float:
        sel = self.n >= (n_from if n_from is not None else self.n.min())
        if sel.sum() < 2:
            return 0.0
        return float(np.polyfit(self.n[sel], self.gap[sel], 1)[0])

    def rows(self) -> list:
        return [{"n": int(k), "value": float(v), "error_bar": self.error_bar, "target": self.target,
                 "gap": float(abs(v - self.target))} for k, v in zip(self.n, self.value)]


def weak_star_table(entries, g: Potential, reference: float, error_bar: float = 0.0) -> WeakStarTable:
    """Gaps ``|integral g d nu_n - reference|``.

    ``entries`` is a sequence of ``(n, measure)`` pairs where ``measure`` is a
    ``DiscreteMeasure`` or an already computed integral.
    """
    ns, vals = [], []
    for n, item in entries:
        ns.append(int(n))
        vals.append(float(item.integrate(g)) if hasattr(item, "integrate") else float(item))
    return WeakStarTable(np.array(ns), np.array(vals), float(reference), float(error_bar))


class MarkovMeasure:
    """Stationary Markov chain on the selected 1-tiles of a subsystem.

    A transition ``T -> T'`` is admissible when ``T'`` lies in the face of the
    colour of ``T``; a path of the chain then spells a tile address, so the
    chain defines an invariant measure of the subsystem.
    """

    def __init__(self, sub: Subsystem, Q: np.ndarray, pi: np.ndarray = None, atol: float = 1e-12):
        self.sub = sub
        Q = np.asarray(Q, dtype=float)
        N = sub.n_tiles
        if Q.shape != (N, N):
            raise ValueError(f"transition matrix must be {N}x{N}")
        if (Q < 0).any() or (Q[~self.admissible(sub)] != 0).any():
            raise ValueError("transition matrix charges a non-admissible edge")
        if np.abs(Q.sum(axis=1) - 1).max() > atol:
            raise ValueError("rows of the transition matrix must sum to 1")
        self.Q = Q
        self.pi = _stationary(Q) if pi is None else np.asarray(pi, dtype=float)
        if np.abs(self.pi @ Q - self.pi).max() > atol or abs(self.pi.sum() - 1) > atol:
            raise ValueError("distribution is not stationary")

    @staticmethod
    def admissible(sub: Subsystem) -> np.ndarray:
        return sub.face[None, :] == sub.colour[:, None]

    @classmethod
    def uniform(cls, sub: Subsystem) -> "MarkovMeasure":
        A = cls.admissible(sub).astype(float)
        return cls(sub, A / A.sum(axis=1, keepdims=True))

    @classmethod
    def random(cls, sub: Subsystem, rng: np.random.Generator, sparsify: float = 0.5) -> "MarkovMeasure":
        """Dirichlet rows on a random nonempty subset of admissible successors."""
        A = cls.admissible(sub)
        Q = np.zeros(A.shape)
        for r in range(len(A)):
            succ = np.flatnonzero(A[r])
            keep = succ[rng.random(len(succ)) >= sparsify * rng.random()]
            if not len(keep):
                keep = succ[rng.integers(len(succ), size=1)]
            Q[r, keep] = rng.dirichlet(np.ones(len(keep)))
        return cls(sub, Q)

    @classmethod
    def deterministic(cls, sub: Subsystem, rng: Optional[np.random.Generator] = None) -> "MarkovMeasure":
        """Each tile has one successor; the measure sits on a periodic orbit."""
        A = cls.admissible(sub)
        Q = np.zeros(A.shape)
        for r in range(len(A)):
            succ = np.flatnonzero(A[r])
            Q[r, succ[0] if rng is None else rng.choice(succ)] = 1.0
        return cls(sub, Q)


def _stationary(Q: np.ndarray) -> np.ndarray:
    """Stationary law supported on one closed communicating class."""
    graph = csr_matrix(Q > 0)
    k, labels = csgraph.connected_components(graph, directed=True, connection="strong")
    for c in range(k):
        members = np.flatnonzero(labels == c)
        outside = Q[np.ix_(members, np.setdiff1d(np.arange(len(Q)), members))]
        if outside.size and outside.max() > 0:
            continue
        sub_Q = Q[np.ix_(members, members)]
        m = len(members)
        lhs = np.vstack([sub_Q.T - np.eye(m), np.ones(m)])
        rhs = np.zeros(m + 1)
        rhs[-1] = 1.0
        p = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
        pi = np.zeros(len(Q))
        pi[members] = np.clip(p, 0, None)
        return pi / pi.sum()
    raise AssumptionViolation("chain has no closed class")


def markov_entropy(mm: MarkovMeasure) -> float:
    """Entropy rate ``-sum pi_i Q_ij log Q_ij``."""
    Q = mm.Q
    logs = np.log(Q, out=np.zeros_like(Q), where=Q > 0)
    return float(-np.sum(mm.pi[:, None] * Q * logs))


def markov_integral(mm: MarkovMeasure, phi: Potential, depth: int = 6):
    """Integral of ``phi`` against the chain's measure by depth-d cylinders.

    Returns ``(value, error_bar)`` with the midpoint-quadrature error bound.
    """
    sub = mm.sub
    levels = tile_levels(sub, depth)
    N = sub.n_tiles
    prob = mm.pi.copy()
    for lev in levels[2:]:
        prev = levels[lev.level - 1]
        up = prev.index_of(lev.codes // N)
        prob = prob[up] * mm.Q[(lev.codes // N) % N, lev.codes % N]
    lev = levels[depth]
    value = float(np.dot(prob, phi.evaluate(lev.face, lev.cx, lev.cy)))
    hd = phi.holder_data()
    err = hd.seminorm * (math.sqrt(2.0) / 2.0 * sub.pmap.s ** (-depth)) ** hd.alpha
    return value, err


@dataclass
class RateReport:
    value: float
    raw: float
    entropy: float
    integral: float
    pressure: float
    error_bar: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def rate_function(mm: MarkovMeasure, phi: Potential, pressure: float, depth: int = 6) -> RateReport:
    """``I = P - h - integral phi`` for an invariant Markov measure.

    ``value`` is clipped from below at minus the quadrature error, which is
    the resolution of the computation; ``raw`` is unclipped.
    """
    h = markov_entropy(mm)
    integral, err = markov_integral(mm, phi, depth)
    raw = pressure - h - integral
    return RateReport(max(raw, -err), raw, h, integral, pressure, err)


def mgf_pressure_check(sub: Subsystem, phi: Potential, psi: Potential, n_max: int = 10,
                       depth: int = 6, tol: float = 1e-12) -> dict:
    """``(1/n) log integral exp(S_n psi) d mu_phi`` against ``P(phi + psi) - P(phi)``.

    The integral over depth-n tiles is the eigenmeasure refinement run n levels
    deep; summed over tiles it collapses to ``lam^-n m M^n u`` with the depth-k
    matrix ``M`` of ``phi + psi``. For ``n <= depth`` the direct sum over
    coarse-grained tiles with Birkhoff sums at centres is reported too.
    """
    base = spectral_data(sub, phi, depth, tol)
    tilted = spectral_data(sub, phi + psi, depth, tol)
    target = tilted.pressure - base.pressure
    M = tilted.matrix.base
    vec = base.u.values.copy()
    logacc = 0.0
    values = []
    for n in range(1, n_max + 1):
        vec = M @ vec
        top = vec.max()
        vec /= top
        logacc += math.log(top)
        total = logacc + math.log(float(base.m.weights @ vec)) + n * tilted.matrix.log_scale
        values.append(total / n - math.log(base.lam))
    direct = []
    state = equilibrium_state(base)
    levels = base.matrix.levels
    sums = birkhoff_levels(levels, psi)
    for n in range(1, min(n_max, depth) + 1):
        mu = state.measure.coarse_grain(levels[n]).weights if n < depth else state.measure.weights
        direct.append(math.log(float(np.dot(mu, np.exp(sums[n])))) / n)
    ns = np.arange(1, n_max + 1)
    return {"n": ns, "value": np.array(values), "direct": np.array(direct), "target": target,
            "gap": np.abs(np.array(values) - target)}


def ldp_empirical(sub: Subsystem, phi: Potential, g: Potential, x: SplitPoint, a: float,
                  radii: Sequence[float], n_list: Sequence[int], chunk: int = 1 << 20) -> list:
    """``(1/n) log`` of the preimage-measure mass of ``|S_n g / n - a| < r``.

    Masses come from exact enumeration of the preimage tree; an empty event
    gives ``-inf``.
    """
    sub.require_surjective()
    face, px, py = x.as_floats()
    _, rest = phi.split_constant()
    n_list = sorted(set(int(n) for n in n_list))
    radii = [float(r) for r in radii]
    shift = rest.sup_bound()
    Z = {n: 0.0 for n in n_list}
    mass = {(n, r): 0.0 for n in n_list for r in radii}
    for level, blk in preimage_blocks(sub, [face], [px], [py], max(n_list), {"S": rest, "G": g}, chunk):
        if level not in Z:
            continue
        w = np.exp(blk["S"] - level * shift)
        Z[level] += w.sum()
        dev = np.abs(blk["G"] / level - a)
        for r in radii:
            mass[(level, r)] += w[dev < r].sum()
    rows = []
    for n in n_list:
        for r in radii:
            frac = mass[(n, r)] / Z[n]
            rows.append({"n": n, "radius": r, "mass": frac,
                         "value": math.log(frac) / n if frac > 0 else -math.inf})
    return rows


def ldp_rate_bound(sub: Subsystem, phi: Potential, pressure: float, g: Potential, a: float, r: float,
                   n_chains: int = 200, seed: int = 0, depth: int = 5) -> dict:
    """``-inf I`` over sampled Markov measures with ``|integral g - a| < r``."""
    rng = np.random.default_rng(seed)
    family = [MarkovMeasure.uniform(sub)] + [MarkovMeasure.random(sub, rng) for _ in range(n_chains)]
    best, hits = math.inf, 0
    for mm in family:
        gi, _ = markov_integral(mm, g, depth)
        if abs(gi - a) < r:
            hits += 1
            best = min(best, rate_function(mm, phi, pressure, depth).value)
    return {"a": a, "radius": r, "n_chains": len(family), "hits": hits,
            "predicted_rate": -best if hits else -math.inf}
