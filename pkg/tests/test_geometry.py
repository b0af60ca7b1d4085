from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subthurston.geometry import (
    Colour,
    PillowMap,
    SplitPoint,
    TileAddress,
    apply_map,
    branch_coords,
    branch_evaluate,
    forward_coords,
    from_torus,
    pillow_distance,
    resolve_address,
    tile_diameter,
    to_torus,
    touches_curve,
)

from oracles import torus_map

W, B = Colour.WHITE, Colour.BLACK
unit = st.fractions(min_value=0, max_value=1, max_denominator=60)
interior = st.fractions(min_value=0, max_value=1, max_denominator=97).filter(lambda f: 0 < f < 1)
faces = st.sampled_from([W, B])


def P(face, x, y):
    return SplitPoint(face, Fraction(x), Fraction(y))


def random_address(rng, s, n, face=None):
    face = Colour(rng.integers(2)) if face is None else face
    return TileAddress(face, [tuple(int(v) for v in rng.integers(0, s, 2)) for _ in range(n)])


class TestApplyMap:
    def test_fixed_corner(self):
        assert apply_map(PillowMap(3), P(W, 0, 0)).same_point(P(W, 0, 0))

    def test_grid_vertex_goes_to_opposite_corner(self):
        # (1/3, 1/3) lifts to (1, 1) on the torus, the far corner of the white face
        img = apply_map(PillowMap(3), P(W, Fraction(1, 3), Fraction(1, 3)))
        assert (img.x, img.y) == (1, 1) and img.face == W

    def test_quarter_point_s2(self):
        img = apply_map(PillowMap(2), P(W, Fraction(1, 4), Fraction(1, 4)))
        assert (img.face, img.x, img.y) == (W, Fraction(1, 2), Fraction(1, 2))

    @given(st.integers(2, 5), faces, unit, unit)
    def test_matches_torus_lift(self, s, face, x, y):
        img = apply_map(PillowMap(s), P(face, x, y))
        f, u, v = torus_map(s, int(face), x, y)
        assert img.same_point(SplitPoint(Colour(f), u, v))

    @given(st.integers(2, 5), faces, interior, interior)
    def test_vectorised_forward_agrees(self, s, face, x, y):
        img = apply_map(PillowMap(s), P(face, x, y))
        f, u, v, _, _ = forward_coords(s, np.array([int(face)]), np.array([float(x)]), np.array([float(y)]))
        assert int(f[0]) == int(img.face) or img.on_curve
        assert math.isclose(u[0], float(img.x), abs_tol=1e-12)
        assert math.isclose(v[0], float(img.y), abs_tol=1e-12)


class TestTorus:
    @given(faces, unit, unit)
    def test_round_trip(self, face, x, y):
        p = P(face, x, y)
        q = from_torus(*to_torus(p), face_hint=face)
        assert q == p

    @given(faces, unit, unit)
    def test_negation_invariance(self, face, x, y):
        X, Y = to_torus(P(face, x, y))
        assert from_torus(-X, -Y, face).same_point(P(face, x, y))


class TestAddresses:
    def test_zero_tile(self):
        corner, side, colour = resolve_address(PillowMap(3), TileAddress(W))
        assert corner == (0, 0) and side == 1 and colour == W

    def test_centre_tile(self):
        corner, side, colour = resolve_address(PillowMap(3), TileAddress(W, [(1, 1)]))
        assert corner == (Fraction(1, 3), Fraction(1, 3)) and side == Fraction(1, 3) and colour == W

    def test_odd_cell_is_black(self):
        assert resolve_address(PillowMap(3), TileAddress(W, [(0, 1)]))[2] == B

    def test_branch_example(self):
        q = branch_evaluate(PillowMap(3), TileAddress(W, [(0, 0)]), P(W, Fraction(1, 2), Fraction(1, 2)))
        assert (q.face, q.x, q.y) == (W, Fraction(1, 6), Fraction(1, 6))

    def test_branch_identity_at_level_zero(self):
        q = P(B, Fraction(2, 7), Fraction(1, 5))
        assert branch_evaluate(PillowMap(2), TileAddress(B), q) == q

    def test_branch_face_mismatch(self):
        with pytest.raises(ValueError):
            branch_evaluate(PillowMap(3), TileAddress(W, [(0, 1)]), P(W, Fraction(1, 2), Fraction(1, 2)))

    @pytest.mark.parametrize("s", [2, 3, 4])
    def test_round_trip_random(self, s):
        rng = np.random.default_rng(s)
        pmap = PillowMap(s)
        for n in range(7):
            for _ in range(15):
                a = random_address(rng, s, n)
                q = SplitPoint(a.colour, Fraction(int(rng.integers(0, 101)), 100),
                               Fraction(int(rng.integers(0, 101)), 100))
                p = branch_evaluate(pmap, a, q)
                for _ in range(n):
                    p = apply_map(pmap, p)
                assert p.same_point(q)

    @pytest.mark.parametrize("s,n", [(2, 4), (3, 3)])
    def test_colour_law(self, s, n):
        pmap = PillowMap(s)
        import itertools
        for face in (W, B):
            for digits in itertools.product(itertools.product(range(s), repeat=2), repeat=n):
                a = TileAddress(face, digits)
                (cx, cy), side, colour = resolve_address(pmap, a)
                p = SplitPoint(face, cx + side / 2, cy + side / 2)
                for _ in range(n):
                    p = apply_map(pmap, p)
                assert p.face == colour

    @pytest.mark.parametrize("s", [2, 3, 4, 5])
    def test_checkerboard(self, s):
        pmap = PillowMap(s)
        for face in (W, B):
            cols = [resolve_address(pmap, TileAddress(face, [(i, j)]))[2] for i in range(s) for j in range(s)]
            same = sum(c == face for c in cols)
            assert same - (len(cols) - same) == (1 if s % 2 else 0)

    def test_touches_curve(self):
        pmap = PillowMap(3)
        assert touches_curve(pmap, TileAddress(W))
        assert not touches_curve(pmap, TileAddress(W, [(1, 1)]))
        assert touches_curve(pmap, TileAddress(W, [(0, 1)]))

    def test_vectorised_branch(self):
        x, y = branch_coords(3, 2, 1, np.array([0.25]), np.array([0.5]))
        q = branch_evaluate(PillowMap(3), TileAddress(B, [(2, 1)]), P(W, Fraction(1, 4), Fraction(1, 2)))
        assert (x[0], y[0]) == (float(q.x), float(q.y))


class TestMetric:
    def test_diameters(self):
        assert tile_diameter(PillowMap(3), 0) == pytest.approx(math.sqrt(2))
        assert tile_diameter(PillowMap(3), 2) == pytest.approx(math.sqrt(2) / 9)
        for n in range(10):
            assert tile_diameter(PillowMap(3), n + 1) == pytest.approx(tile_diameter(PillowMap(3), n) / 3)

    def test_distance_across_seam(self):
        a, b = P(W, Fraction(1, 10), Fraction(1, 2)), P(B, Fraction(1, 10), Fraction(1, 2))
        assert pillow_distance(a, b) == pytest.approx(0.2)

    @given(faces, unit, unit, faces, unit, unit)
    @settings(max_examples=200)
    def test_distance_symmetric_and_bounded(self, f1, x1, y1, f2, x2, y2):
        a, b = P(f1, x1, y1), P(f2, x2, y2)
        d = pillow_distance(a, b)
        assert d == pytest.approx(pillow_distance(b, a))
        assert 0 <= d <= math.sqrt(2) + 1e-12

    @given(st.integers(2, 4), faces, unit, unit, faces, unit, unit)
    @settings(max_examples=200)
    def test_map_is_at_most_s_lipschitz(self, s, f1, x1, y1, f2, x2, y2):
        a, b = P(f1, x1, y1), P(f2, x2, y2)
        pmap = PillowMap(s)
        assert pillow_distance(apply_map(pmap, a), apply_map(pmap, b)) <= s * pillow_distance(a, b) + 1e-12


class TestValidation:
    def test_bad_scale(self):
        with pytest.raises(ValueError):
            PillowMap(1)

    def test_out_of_square(self):
        with pytest.raises(ValueError):
            SplitPoint(W, Fraction(3, 2), 0)

    def test_digit_range(self):
        with pytest.raises(ValueError):
            resolve_address(PillowMap(2), TileAddress(W, [(2, 0)]))

    def test_colour_parse(self):
        assert Colour.parse("w") == W and Colour.parse("BLACK") == B and str(B) == "black"
        with pytest.raises(ValueError):
            Colour.parse("red")
