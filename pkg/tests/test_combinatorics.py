from fractions import Fraction
import warnings

import numpy as np
import pytest

from subthurston.combinatorics import (
    Subsystem,
    TileMatrix,
    bool_compose,
    check_structure,
    classify_matrix,
    count_tiles_enumerated,
    count_tiles_paths,
    enumerate_tiles,
    interior_matrices,
    limit_set_diagnostics,
    local_degree_matrix,
    tile_levels,
    tile_matrix,
    tile_matrix_level,
    transitivity_report,
)
from subthurston.errors import AssumptionViolation
from subthurston.geometry import Colour, SplitPoint, touches_curve

from oracles import brute_preimages, containing_tiles, tile_census

W, B = Colour.WHITE, Colour.BLACK


def random_subsystems(count, seed=0, sizes=(2, 3)):
    rng = np.random.default_rng(seed)
    return [Subsystem.random(int(rng.choice(sizes)), rng, p=float(rng.uniform(0.3, 0.9)))
            for _ in range(count)]


class TestTileCounts:
    def test_carpet_level_one(self, carpet):
        assert len(enumerate_tiles(carpet, 1)) == 16

    def test_carpet_level_two(self, carpet):
        assert len(enumerate_tiles(carpet, 2)) == 128

    def test_full_level_one(self, full3):
        assert len(enumerate_tiles(full3, 1)) == 18

    def test_tile_matrices(self, carpet, full3):
        assert tile_matrix(full3).as_lists() == [[5, 4], [4, 5]]
        assert tile_matrix(carpet).as_lists() == [[4, 4], [4, 4]]
        assert tile_matrix(Subsystem(3, [(0, 0, 0)])).as_lists() == [[1, 0], [0, 0]]

    def test_levels(self, carpet, full3):
        assert tile_matrix_level(carpet, 2).as_lists() == [[32, 32], [32, 32]]
        assert tile_matrix_level(full3, 2).as_lists() == [[41, 40], [40, 41]]
        for sub in (carpet, full3):
            assert tile_matrix_level(sub, 1) == tile_matrix(sub)

    @pytest.mark.parametrize("sub_index", range(6))
    def test_power_law_against_census(self, sub_index):
        sub = random_subsystems(6, seed=11)[sub_index]
        for n in range(1, 4 if sub.pmap.s == 2 else 3):
            assert tile_matrix_level(sub, n).as_lists() == tile_census(sub.pmap.s, sub.tiles, n)

    def test_census_on_presets(self, carpet, full3):
        for sub in (carpet, full3):
            assert tile_census(3, sub.tiles, 2) == tile_matrix_level(sub, 2).as_lists()

    def test_three_methods_agree(self):
        for sub in random_subsystems(8, seed=5):
            for n in range(1, 6):
                power = tile_matrix_level(sub, n, "power")
                assert tile_matrix_level(sub, n, "paths") == power
                assert tile_matrix_level(sub, n, "enumerate") == power

    def test_colour_sums_match_enumeration(self):
        for sub in random_subsystems(5, seed=2):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                tiles = enumerate_tiles(sub, 3)
            A3 = tile_matrix(sub).power(3)
            for c in (W, B):
                assert sum(t.colour == c for t in tiles) == A3.colour_counts()[c]
                assert sum(t.face == c for t in tiles) == A3.position_counts()[c]

    def test_big_integers(self, full3):
        A = tile_matrix(full3).power(32)
        assert A.total() == 2 * 9 ** 32
        assert A.N(W, W) == (9 ** 32 + 1) // 2

    def test_level_zero(self, carpet):
        assert count_tiles_enumerated(carpet, 0).as_lists() == [[1, 0], [0, 1]]
        assert count_tiles_paths(carpet, 0).as_lists() == [[1, 0], [0, 1]]

    def test_enumeration_warns_when_not_surjective(self):
        sub = Subsystem(3, [(0, 0, 0)])
        with pytest.warns(UserWarning):
            enumerate_tiles(sub, 2)

    def test_tile_levels_centres_are_inside(self, carpet):
        lev = tile_levels(carpet, 3)[3]
        ax, ay = lev.corners()
        assert np.allclose((ax + 0.5) / 27, lev.cx) and np.allclose((ay + 0.5) / 27, lev.cy)
        for row in (0, 17, lev.size - 1):
            a = lev.address(row)
            assert a.face == lev.face[row] and a.colour == lev.colour[row]


class TestClassification:
    def test_forms(self):
        assert classify_matrix(TileMatrix([[4, 4], [0, 0]])) == "degenerate"
        assert classify_matrix(TileMatrix([[0, 1], [1, 0]])) == "isolated"
        assert classify_matrix(TileMatrix([[4, 4], [4, 4]])) == "regular"


class TestLocalDegree:
    def test_generic_point(self, carpet):
        p = SplitPoint(B, Fraction(2, 7), Fraction(5, 11))
        m = local_degree_matrix(carpet, p, 2)
        assert m.total() == 1
        assert sum(m.rows[B]) == 1

    def test_carpet_grid_vertex(self, carpet):
        m = local_degree_matrix(carpet, SplitPoint(W, Fraction(1, 3), Fraction(1, 3)), 1)
        assert m.position_counts()[W] == 3

    def test_face_corner(self, full3):
        m = local_degree_matrix(full3, SplitPoint(W, 0, 0), 1)
        # the corner lies on the seam: one tile in each face contains it
        assert m.position_counts() == (1, 1)

    @pytest.mark.parametrize("s", [2, 3])
    def test_against_containment_oracle(self, s):
        rng = np.random.default_rng(s)
        sub = random_subsystems(1, seed=s, sizes=(s,))[0]
        for _ in range(60):
            x = Fraction(int(rng.integers(0, 2 * s + 1)), 2 * s)
            y = Fraction(int(rng.integers(0, 2 * s + 1)), 2 * s)
            face = int(rng.integers(2))
            m = local_degree_matrix(sub, SplitPoint(face, x, y), 1)
            assert list(m.colour_counts()) == containing_tiles(s, sub.tiles, face, x, y)

    def test_degree_consistency(self):
        rng = np.random.default_rng(7)
        subs = random_subsystems(4, seed=8)
        for k in range(200):
            sub = subs[k % len(subs)]
            s = sub.pmap.s
            n = 1 + k % 2
            face = int(rng.integers(2))
            x = Fraction(int(rng.integers(1, 997)), 997)
            y = Fraction(int(rng.integers(1, 991)), 991)
            total = np.zeros((2, 2), dtype=int)
            for g, u, v in brute_preimages(s, sub.tiles, face, x, y, n):
                total += np.array(local_degree_matrix(sub, SplitPoint(g, u, v), n).as_lists())
            An = tile_matrix(sub).power(n)
            expected = np.zeros((2, 2), dtype=int)
            expected[:, face] = [An.N(face, 0), An.N(face, 1)]
            assert (total == expected).all()


class TestStructure:
    def test_carpet(self, carpet):
        rep = check_structure(carpet)
        assert rep.strongly_primitive and rep.strongly_primitive_witness <= 3
        assert rep.strongly_primitive_witness == 2
        assert rep.irreducible_witness == 1

    def test_same_colour(self):
        sub = Subsystem.same_colour(3)
        assert tile_matrix(sub).as_lists() == [[5, 0], [0, 5]]
        rep = check_structure(sub)
        assert not rep.irreducible and not rep.primitive and not rep.strongly_primitive
        assert not transitivity_report(sub)["transitive"]

    def test_full(self, full3):
        rep = check_structure(full3)
        assert rep.strongly_primitive and rep.primitive and rep.irreducible
        assert transitivity_report(full3) == {"transitive": True, "transitive_witness": 1,
                                              "mixing": True, "mixing_witness": 1}

    def test_carpet_transitivity(self, carpet):
        t = transitivity_report(carpet)
        assert t["transitive"] and t["mixing"]

    def test_interior_matrices_against_enumeration(self):
        for sub in random_subsystems(5, seed=3) + [Subsystem.carpet(3)]:
            inner = interior_matrices(sub, 3)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                for n in (1, 2, 3):
                    b = np.zeros((2, 2), dtype=bool)
                    for t in enumerate_tiles(sub, n):
                        if not touches_curve(sub.pmap, t):
                            b[int(t.colour), int(t.face)] = True
                    assert (b == inner[n - 1]).all()

    def test_superadditivity(self):
        for sub in random_subsystems(10, seed=4):
            inner = interior_matrices(sub, 8)
            for m in range(1, 5):
                for k in range(1, 5):
                    bound = bool_compose(inner[m - 1], inner[k - 1])
                    assert (inner[m + k - 1] >= bound).all()

    def test_implications(self):
        for sub in random_subsystems(25, seed=9):
            rep = check_structure(sub, 5)
            assert not rep.strongly_primitive or rep.primitive
            assert not rep.primitive or rep.irreducible
            assert not rep.strongly_irreducible or rep.irreducible
            assert not rep.strongly_primitive or rep.strongly_irreducible

    def test_unknown_is_not_guessed(self):
        rep = check_structure(Subsystem.same_colour(3), max_level=2)
        assert rep.irreducible_witness is None and rep.max_level == 2


class TestLimitSet:
    def test_carpet(self, carpet):
        d = limit_set_diagnostics(carpet, 4)
        assert d["every_tile_meets_limit_set"] and not d["isolated_point_risk"]
        assert d["per_face_path_count"] == [8 ** 4, 8 ** 4]
        assert d["limit_set_points"] is None

    def test_degenerate(self):
        sub = Subsystem(3, [(0, 0, 0), (0, 0, 1)])
        assert tile_matrix(sub).as_lists() == [[1, 1], [0, 0]]
        d = limit_set_diagnostics(sub)
        assert d["degenerate"] and not d["every_tile_meets_limit_set"]

    def test_two_fixed_tiles(self):
        sub = Subsystem.two_fixed_tiles(4)
        assert tile_matrix(sub).as_lists() == [[0, 1], [1, 0]]
        d = limit_set_diagnostics(sub)
        assert d["limit_set_points"] == 2 and d["isolated_point_risk"]
        assert d["classification"] == "isolated"


class TestSubsystem:
    def test_surjectivity(self):
        sub = Subsystem(3, [(0, 0, 0)])
        assert not sub.surjective
        with pytest.raises(AssumptionViolation):
            sub.require_surjective()

    def test_bad_cell(self):
        with pytest.raises(ValueError):
            Subsystem(2, [(0, 2, 0)])

    def test_carpet_needs_odd_scale(self):
        with pytest.raises(ValueError):
            Subsystem.carpet(4)
