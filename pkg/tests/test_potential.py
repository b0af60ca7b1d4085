from fractions import Fraction
import math

import numpy as np
import pytest

from subthurston.errors import AssumptionViolation
from subthurston.geometry import Colour, PillowMap, SplitPoint, TileAddress, apply_map, branch_evaluate, pillow_distance
from subthurston.potential import (
    Potential,
    birkhoff_sum,
    constant,
    coordinate_poly,
    distortion_constant,
    potential_from_config,
    torus_trig,
)

W, B = Colour.WHITE, Colour.BLACK
TRIG = torus_trig([(1, 1, 0.3)])
MIXED = torus_trig([(2, 1, 0.2), (0, 3, -0.1)]) + coordinate_poly([(1, 0, 0.5), (1, 2, 0.25)])


def rand_point(rng, face=None, den=1009):
    face = int(rng.integers(2)) if face is None else face
    return SplitPoint(face, Fraction(int(rng.integers(1, den)), den), Fraction(int(rng.integers(1, den)), den))


class TestEvaluation:
    def test_constant(self):
        assert constant(0.7)(SplitPoint(B, Fraction(1, 3), Fraction(2, 5))) == 0.7

    def test_cosine_values(self):
        g = torus_trig([(1, 1, 1.0)])
        assert g(SplitPoint(W, 0, 0)) == pytest.approx(1.0)
        assert g(SplitPoint(W, Fraction(1, 2), Fraction(1, 2))) == pytest.approx(0.0, abs=1e-15)

    def test_same_formula_on_both_faces(self):
        p, q = SplitPoint(W, Fraction(1, 5), Fraction(3, 7)), SplitPoint(B, Fraction(1, 5), Fraction(3, 7))
        assert MIXED(p) == MIXED(q)

    def test_trig_is_a_torus_function(self):
        # cos(pi k X) cos(pi l Y) with the black chart X = 2 - x gives the same value
        rng = np.random.default_rng(0)
        for _ in range(50):
            x, y = rng.random(2)
            for k, l in [(1, 1), (2, 3), (0, 1)]:
                direct = math.cos(math.pi * k * x) * math.cos(math.pi * l * y)
                lifted = math.cos(math.pi * k * (2 - x)) * math.cos(math.pi * l * y)
                assert direct == pytest.approx(lifted)

    def test_vectorised(self):
        face = np.array([0, 1, 1])
        x, y = np.array([0.1, 0.5, 0.9]), np.array([0.2, 0.3, 0.4])
        ref = [MIXED(SplitPoint(int(f), Fraction(a), Fraction(b))) for f, a, b in zip(face, x, y)]
        assert np.allclose(MIXED.evaluate(face, x, y), ref)

    def test_face_indicator(self):
        g = Potential(face_shift=0.4)
        assert g(SplitPoint(B, Fraction(1, 2), Fraction(1, 2))) == pytest.approx(0.4)
        assert g(SplitPoint(W, Fraction(1, 2), Fraction(1, 2))) == 0.0
        assert not g.continuous
        with pytest.raises(AssumptionViolation):
            g.holder_data()


class TestHolder:
    def test_constant(self):
        hd = constant(-2.5).holder_data()
        assert (hd.alpha, hd.seminorm, hd.sup) == (1.0, 0.0, 2.5)

    def test_trig(self):
        hd = TRIG.holder_data()
        assert hd.alpha == 1.0 and hd.seminorm == pytest.approx(0.6 * math.pi) and hd.sup == pytest.approx(0.3)

    def test_seminorms_add(self):
        a, b = torus_trig([(1, 2, 0.3)]), coordinate_poly([(2, 1, 0.7)])
        assert (a + b).holder_data().seminorm == pytest.approx(a.holder_data().seminorm + b.holder_data().seminorm)

    @pytest.mark.parametrize("phi", [TRIG, MIXED, torus_trig([(3, 2, 1.0)])])
    def test_empirical_lipschitz(self, phi):
        rng = np.random.default_rng(1)
        H = phi.holder_data().seminorm
        for _ in range(10 ** 4):
            p, q = rand_point(rng), rand_point(rng)
            assert abs(phi(p) - phi(q)) <= H * pillow_distance(p, q) + 1e-12


class TestBirkhoff:
    def test_zero_length(self):
        assert birkhoff_sum(PillowMap(3), TRIG, SplitPoint(W, Fraction(1, 3), 0), 0) == 0.0

    def test_constant(self):
        assert birkhoff_sum(PillowMap(2), constant(1.5), SplitPoint(B, Fraction(2, 9), Fraction(4, 9)), 7) == \
            pytest.approx(10.5)

    def test_fixed_corner(self):
        corner = SplitPoint(W, 0, 0)
        assert birkhoff_sum(PillowMap(3), TRIG, corner, 5) == pytest.approx(5 * TRIG(corner))

    def test_cocycle(self):
        rng = np.random.default_rng(2)
        pmap = PillowMap(3)
        for _ in range(20):
            p = rand_point(rng, den=3 ** 8 * 7)
            for n in range(7):
                for m in range(7):
                    q = p
                    for _ in range(n):
                        q = apply_map(pmap, q)
                    lhs = birkhoff_sum(pmap, MIXED, p, n + m)
                    rhs = birkhoff_sum(pmap, MIXED, p, n) + birkhoff_sum(pmap, MIXED, q, m)
                    assert lhs == pytest.approx(rhs, abs=1e-12)

    @pytest.mark.parametrize("phi", [TRIG, MIXED])
    def test_branch_distortion(self, phi):
        rng = np.random.default_rng(3)
        pmap = PillowMap(3)
        C1 = distortion_constant(pmap, phi)
        for _ in range(300):
            n = int(rng.integers(1, 7))
            digits = [tuple(int(v) for v in rng.integers(0, 3, 2)) for _ in range(n)]
            a = TileAddress(int(rng.integers(2)), digits)
            x, y = rand_point(rng, int(a.colour)), rand_point(rng, int(a.colour))
            gap = abs(birkhoff_sum(pmap, phi, branch_evaluate(pmap, a, x), n)
                      - birkhoff_sum(pmap, phi, branch_evaluate(pmap, a, y), n))
            assert gap <= C1 * pillow_distance(x, y) + 1e-12


class TestAlgebra:
    def test_terms_merge(self):
        p = torus_trig([(1, 1, 0.2), (1, 1, 0.1)])
        assert p.trig == ((1, 1, pytest.approx(0.3)),)
        assert (TRIG - TRIG).is_constant

    def test_split_constant(self):
        c, rest = (MIXED + 2.0).split_constant()
        assert c == 2.0 and rest == MIXED

    def test_scaling(self):
        p = SplitPoint(W, Fraction(1, 7), Fraction(2, 7))
        assert (3 * MIXED)(p) == pytest.approx(3 * MIXED(p))
        assert (-MIXED)(p) == pytest.approx(-MIXED(p))

    def test_config_round_trip(self):
        cfg = {"kind": "sum", "parts": [{"kind": "torus_trig", "terms": [[1, 1, 0.3]]},
                                        {"kind": "coordinate_poly", "terms": [[1, 0, 0.5]]}],
               "constant": 0.25}
        p = potential_from_config(cfg)
        assert p == TRIG + coordinate_poly([(1, 0, 0.5)]) + 0.25
        assert potential_from_config({"kind": "constant", "value": 0.7}) == constant(0.7)

    def test_bad_config(self):
        with pytest.raises(ValueError):
            potential_from_config({"kind": "spline"})
        with pytest.raises(ValueError):
            torus_trig([(-1, 0, 1.0)])
