"""Hölder potentials on the pillow and their Birkhoff sums.

Every built-in potential is a single formula in face coordinates used on both
faces. Because boundary points carry the same coordinates in either face,
such formulas are automatically continuous on the sphere, and the flat
gradient bound on the unit square is a Lipschitz constant for the pillow
metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import AssumptionViolation
from .geometry import PillowMap, SplitPoint, apply_map

__all__ = [
    "Potential",
    "HolderData",
    "constant",
    "torus_trig",
    "coordinate_poly",
    "potential_from_config",
    "birkhoff_sum",
    "distortion_constant",
    "split_ratio_constant",
]


@dataclass(frozen=True)
class HolderData:
    alpha: float
    seminorm: float
    sup: float


@dataclass(frozen=True)
class Potential:
    """Sum of a constant, cosine products and monomials in face coordinates.

    ``trig`` holds ``(k, l, c)`` for ``c cos(pi k x) cos(pi l y)``; these terms
    are well defined on the torus and invariant under ``z -> -z``. ``poly``
    holds ``(a, b, c)`` for ``c x**a y**b``. ``face_shift`` is added on the
    black face only; a nonzero value makes the potential discontinuous.
    """

    constant: float = 0.0
    trig: Tuple[Tuple[int, int, float], ...] = ()
    poly: Tuple[Tuple[int, int, float], ...] = ()
    face_shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "face_shift", float(self.face_shift))
        object.__setattr__(self, "trig", _merge(self.trig, "trig"))
        object.__setattr__(self, "poly", _merge(self.poly, "poly"))

    @property
    def kind(self) -> str:
        if self.face_shift:
            return "face_indicator"
        if not self.trig and not self.poly:
            return "constant"
        if self.trig and not self.poly:
            return "torus_trig"
        if self.poly and not self.trig:
            return "coordinate_poly"
        return "sum"

    @property
    def alpha(self) -> float:
        return 1.0

    @property
    def continuous(self) -> bool:
        return self.face_shift == 0.0

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def split_constant(self) -> Tuple[float, "Potential"]:
        """The constant term and the remainder (exact bookkeeping for shifts)."""
        return self.constant, Potential(0.0, self.trig, self.poly, self.face_shift)

    def evaluate(self, face, x, y) -> np.ndarray:
        """Vectorised evaluation on arrays of faces and face coordinates."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.full(np.broadcast(x, y).shape, self.constant)
        cache = {}

        def cosine(arr, key, k):
            if (key, k) not in cache:
                cache[(key, k)] = np.cos(np.pi * k * arr) if k else np.ones_like(arr)
            return cache[(key, k)]

        for k, l, c in self.trig:
            out = out + c * cosine(x, "x", k) * cosine(y, "y", l)
        for a, b, c in self.poly:
            out = out + c * x ** a * y ** b
        if self.face_shift:
            out = out + self.face_shift * (np.asarray(face) == 1)
        return out

    def factor_terms(self):
        """Non-constant terms as ``(coef, x_factor, y_factor)`` with factors
        ``('cos', k)``, ``('pow', a)`` or ``('one',)``."""
        def cos(k):
            return ("cos", k) if k else ("one",)

        def pw(a):
            return ("pow", a) if a else ("one",)

        return ([(c, cos(k), cos(l)) for k, l, c in self.trig]
                + [(c, pw(a), pw(b)) for a, b, c in self.poly])

    def eval(self, p: SplitPoint) -> float:
        face, x, y = p.as_floats()
        return float(self.evaluate(np.array([face]), np.array([x]), np.array([y]))[0])

    __call__ = eval

    def holder_data(self) -> HolderData:
        """Exponent, Lipschitz seminorm and sup-norm bound."""
        if not self.continuous:
            raise AssumptionViolation("a face-indicator potential is not continuous on the sphere")
        H = sum(abs(c) * math.pi * (k + l) for k, l, c in self.trig)
        H += sum(abs(c) * (a + b) for a, b, c in self.poly)
        M = abs(self.constant) + sum(abs(c) for *_, c in self.trig) + sum(abs(c) for *_, c in self.poly)
        return HolderData(1.0, H, M)

    def sup_bound(self) -> float:
        return (abs(self.constant) + sum(abs(c) for *_, c in self.trig)
                + sum(abs(c) for *_, c in self.poly) + abs(self.face_shift))

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return Potential(self.constant + other, self.trig, self.poly, self.face_shift)
        if not isinstance(other, Potential):
            return NotImplemented
        return Potential(self.constant + other.constant, self.trig + other.trig,
                         self.poly + other.poly, self.face_shift + other.face_shift)

    __radd__ = __add__

    def __mul__(self, t):
        if not isinstance(t, (int, float)):
            return NotImplemented
        t = float(t)
        return Potential(t * self.constant, tuple((k, l, t * c) for k, l, c in self.trig),
                         tuple((a, b, t * c) for a, b, c in self.poly), t * self.face_shift)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def __sub__(self, other):
        return self + (-other)

    def to_config(self) -> dict:
        out = {"kind": self.kind, "constant": self.constant}
        if self.trig:
            out["trig"] = [list(t) for t in self.trig]
        if self.poly:
            out["poly"] = [list(t) for t in self.poly]
        if self.face_shift:
            out["face_shift"] = self.face_shift
        return out


def _merge(terms: Iterable, label: str):
    acc = {}
    for a, b, c in terms:
        a, b = int(a), int(b)
        if a < 0 or b < 0:
            raise ValueError(f"negative index in {label} term {(a, b, c)}")
        acc[(a, b)] = acc.get((a, b), 0.0) + float(c)
    return tuple((a, b, c) for (a, b), c in sorted(acc.items()) if c != 0.0)


def constant(c: float) -> Potential:
    return Potential(constant=c)


def torus_trig(terms) -> Potential:
    """``sum c cos(pi k x) cos(pi l y)`` from ``(k, l, c)`` triples."""
    return Potential(trig=tuple(terms))


def coordinate_poly(terms) -> Potential:
    """``sum c x**a y**b`` from ``(a, b, c)`` triples."""
    return Potential(poly=tuple(terms))


def potential_from_config(cfg: dict) -> Potential:
    """Build a potential from its JSON description."""
    kind = cfg.get("kind", "sum")
    parts = cfg.get("parts")
    if kind == "constant":
        base = constant(cfg.get("value", 0.0))
    elif kind == "torus_trig":
        base = torus_trig(cfg["terms"])
    elif kind == "coordinate_poly":
        base = coordinate_poly(cfg["terms"])
    elif kind == "face_indicator":
        base = Potential(face_shift=cfg["value"])
    elif kind == "sum":
        base = Potential()
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    for part in parts or ():
        base = base + potential_from_config(part)
    return base + float(cfg.get("constant", 0.0))


def birkhoff_sum(pmap: PillowMap, phi: Potential, p: SplitPoint, n: int) -> float:
    """``sum_{k<n} phi(f^k p)`` along the exact orbit."""
    total = 0.0
    for _ in range(n):
        total += phi.eval(p)
        p = apply_map(pmap, p)
    return total


def distortion_constant(pmap: PillowMap, phi: Potential) -> float:
    """Constant bounding Birkhoff-sum oscillation over a tile by ``C d**alpha``.

    Inverse branches contract the flat metric exactly by ``1/s``, so the
    metric comparison constant is 1 and the expansion factor is ``s``.
    """
    hd = phi.holder_data()
    return hd.seminorm / (1.0 - pmap.expansion ** (-hd.alpha))


def split_ratio_constant(pmap: PillowMap, phi: Potential, n_irr: int) -> float:
    """Two-sided bound for normalised iterates of the split operator on 1.

    ``n_irr`` is the irreducibility witness of the subsystem.
    """
    hd = phi.holder_data()
    c1 = distortion_constant(pmap, phi)
    return pmap.degree ** n_irr * math.exp(c1 * math.sqrt(2.0) ** hd.alpha + 2 * n_irr * hd.sup)
