"""Equilibrium states from spectral data: Gibbs bounds, invariance, entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .combinatorics import Subsystem, TileLevel, check_structure, tile_levels
from .errors import AssumptionViolation
from .potential import Potential, distortion_constant, split_ratio_constant
from .transfer import SpectralData, TileMeasure, birkhoff_levels, spectral_data

__all__ = [
    "EquilibriumState",
    "GibbsReport",
    "equilibrium_state",
    "refine_measure",
    "gibbs_check",
    "invariance_check",
    "entropy_estimate",
    "pressure_derivative_check",
]


@dataclass
class EquilibriumState:
    """The measure ``u m`` on depth-k tiles, normalised to a probability."""

    measure: TileMeasure
    spectral: SpectralData
    raw_mass: float

    @property
    def depth(self) -> int:
        return self.measure.depth

    @property
    def pressure(self) -> float:
        return self.spectral.pressure

    def integrate(self, g) -> float:
        return self.measure.integrate(g)


def equilibrium_state(spectral: SpectralData) -> EquilibriumState:
    """Tile masses ``u_T m_T``; ``raw_mass`` is their sum before renormalising."""
    w = spectral.u.values * spectral.m.weights
    raw = float(np.sum(w))
    return EquilibriumState(TileMeasure(spectral.m.tiles, w / raw), spectral, raw)


def _levels_for(spectral: SpectralData, depth: int, max_tiles: int) -> List[TileLevel]:
    have = spectral.matrix.levels
    if depth < len(have):
        return have[:depth + 1]
    return tile_levels(spectral.matrix.sub, depth, max_tiles)


def refine_measure(spectral: SpectralData, measure: TileMeasure, to_depth: int,
                   max_tiles: int = 10 ** 7) -> TileMeasure:
    """Extend a tile measure to deeper tiles using the eigenmeasure's splitting.

    The eigenmeasure gives the tile ``U.T`` the mass ``exp(phi(centre)) m(T) / lam``
    where ``T`` is its image; these masses are rescaled within each parent so
    that coarse-graining returns the original. ``measure`` is split in the same
    proportions, which for ``u m`` matches a piecewise-constant ``u``.
    """
    if to_depth < measure.depth:
        raise ValueError("refinement target is coarser than the measure")
    if measure.tiles.size != spectral.m.tiles.size or measure.depth != spectral.depth:
        raise ValueError("measure must live on the tiles of the spectral data")
    levels = _levels_for(spectral, to_depth, max_tiles)
    phi = spectral.matrix.phi
    N = spectral.matrix.sub.n_tiles
    m, nu = spectral.m.weights, measure.weights
    for d in range(measure.depth, to_depth):
        child, parent = levels[d + 1], levels[d]
        raw = np.exp(phi.evaluate(child.face, child.cx, child.cy)) * m[child.suffix] / spectral.lam
        up = parent.index_of(child.codes // N)
        tot = np.bincount(up, weights=raw, minlength=parent.size)
        share = np.divide(raw, tot[up], out=np.zeros_like(raw), where=tot[up] > 0)
        m, nu = m[up] * share, nu[up] * share
    return TileMeasure(levels[to_depth], nu)


@dataclass
class GibbsReport:
    n: np.ndarray
    min_ratio: np.ndarray
    max_ratio: np.ndarray
    mean_log_ratio: np.ndarray
    lower_bound: float
    upper_bound: float
    slope: float
    midpoint_slope: float
    slope_tol: float

    @property
    def within_bounds(self) -> bool:
        return bool((self.min_ratio >= self.lower_bound).all() and (self.max_ratio <= self.upper_bound).all())

    @property
    def spread_ok(self) -> bool:
        return bool((self.max_ratio / self.min_ratio <= self.upper_bound / self.lower_bound).all())

    @property
    def stable(self) -> bool:
        return abs(self.slope) <= self.slope_tol

    @property
    def ok(self) -> bool:
        return self.within_bounds and self.stable

    def rows(self) -> list:
        return [{"n": int(k), "min_ratio": float(a), "max_ratio": float(b), "mean_log_ratio": float(c)}
                for k, a, b, c in zip(self.n, self.min_ratio, self.max_ratio, self.mean_log_ratio)]


def gibbs_check(state: EquilibriumState, n_levels: int, pressure: Optional[float] = None,
                slope_tol: float = 1e-3, max_tiles: int = 10 ** 7) -> GibbsReport:
    """Ratios ``mu(X) / exp(S_n phi(centre X) - n P)`` over all n-tiles, n = 1..n_levels.

    Levels up to the state's depth are coarse-grained, deeper ones refined.
    Level stability is judged by the slope in ``n`` of the mu-weighted mean of
    the log-ratios, which picks up a pressure error as a linear drift.
    """
    spectral = state.spectral
    sub, phi = spectral.matrix.sub, spectral.matrix.phi
    P = spectral.pressure if pressure is None else pressure
    levels = _levels_for(spectral, max(n_levels, state.depth), max_tiles)
    sums = birkhoff_levels(levels[:n_levels + 1], phi)
    deep = state.measure
    if n_levels > state.depth:
        deep = refine_measure(spectral, state.measure, n_levels, max_tiles)
    ns = np.arange(1, n_levels + 1)
    lo, hi, mean = [], [], []
    for n in ns:
        mu = deep.coarse_grain(levels[n]).weights if n < deep.depth else deep.weights
        if n > deep.depth:
            raise ValueError("levels beyond the refined measure")
        logr = np.log(mu) - (sums[n] - n * P)
        lo.append(math.exp(logr.min()))
        hi.append(math.exp(logr.max()))
        mean.append(float(np.dot(mu, logr) / mu.sum()))
    rep = check_structure(sub)
    if rep.irreducible_witness is None:
        raise AssumptionViolation("subsystem is not irreducible")
    cbar = split_ratio_constant(sub.pmap, phi, rep.irreducible_witness)
    spread = math.exp(distortion_constant(sub.pmap, phi) * math.sqrt(2.0) ** phi.alpha)
    face_min = min(spectral.m.face_mass(c) for c in (0, 1))
    lower, upper = face_min / (cbar * spread), cbar * spread
    mean = np.array(mean)
    slope = float(np.polyfit(ns, mean, 1)[0]) if len(ns) > 1 else 0.0
    mid = 0.5 * (np.log(lo) + np.log(hi))
    mslope = float(np.polyfit(ns, mid, 1)[0]) if len(ns) > 1 else 0.0
    return GibbsReport(ns, np.array(lo), np.array(hi), mean, lower, upper, slope, mslope, slope_tol)


def invariance_check(state: EquilibriumState, n: int = 1) -> dict:
    """Compare ``mu(f^-n T)`` with ``mu(T)`` for the tiles T at depth ``k - n``.

    The n-fold preimage of a coarse tile inside the depth-k domain is the union
    of the depth-k tiles whose last ``k - n`` digits spell it.
    """
    k = state.depth
    if not 1 <= n <= k:
        raise ValueError("need 1 <= n <= depth")
    levels = state.spectral.matrix.levels
    top = levels[k]
    idx = np.arange(top.size)
    for d in range(k, k - n, -1):
        idx = levels[d].suffix[idx]
    coarse = levels[k - n]
    pulled = np.bincount(idx, weights=state.measure.weights, minlength=coarse.size)
    direct = state.measure.coarse_grain(coarse).weights
    defect = np.abs(pulled - direct)
    return {"n": n, "depth": k, "max_defect": float(defect.max()),
            "total_defect": float(defect.sum()), "tol": 10 * state.spectral.tol}


def entropy_estimate(state: EquilibriumState, pressure: Optional[float] = None) -> dict:
    """Measure-theoretic entropy as ``P - integral of phi``.

    The error bar is the midpoint-quadrature error of the integral.
    """
    sub, phi = state.spectral.matrix.sub, state.spectral.matrix.phi
    P = state.pressure if pressure is None else pressure
    hd = phi.holder_data()
    integral = state.integrate(phi)
    err = hd.seminorm * (math.sqrt(2.0) / 2.0 * sub.pmap.s ** (-state.depth)) ** hd.alpha
    return {"value": P - integral, "error_bar": err, "pressure": P, "integral": integral}


def pressure_derivative_check(sub: Subsystem, phi: Potential, gamma: Potential, eps: float = 1e-3,
                              depth: int = 6, richardson: bool = False, tol: float = 1e-12) -> dict:
    """Central difference of the pressure along ``gamma`` against ``integral gamma d mu``."""
    def pressure(t):
        return spectral_data(sub, phi + t * gamma, depth, tol).pressure

    def central(h):
        return (pressure(h) - pressure(-h)) / (2 * h)

    base = spectral_data(sub, phi, depth, tol)
    deriv = central(eps)
    if richardson:
        deriv = (4 * central(eps / 2) - deriv) / 3
    integral = equilibrium_state(base).integrate(gamma)
    hd = gamma.holder_data()
    quad = hd.seminorm * (math.sqrt(2.0) / 2.0 * sub.pmap.s ** (-depth)) ** hd.alpha
    return {"eps": eps, "depth": depth, "richardson": richardson, "finite_difference": deriv,
            "integral": integral, "gap": abs(deriv - integral), "error_bar": quad}
