import math

import numpy as np
import pytest


from oracles import orientation_hull_vertices, towers_by_dfs
from simplexmix.hull import (
    PointSet,
    c_constant,
    count_towers,
    extremal_set,
    hausdorff,
    is_extreme,
    pca_project,
    point_to_hull_distance,
)
from simplexmix.simplex import SamplerSpec, sample


class TestPointSet:
    def test_dedup_keeps_first(self):
        ps = PointSet(np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 5e-10], [2.0, 2.0]]))
        assert ps.n == 3
        np.testing.assert_array_equal(ps.points[0], [0.0, 0.0])

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            PointSet(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            PointSet(np.array([[np.inf, 0.0]]))

    def test_immutable(self):
        ps = PointSet(np.eye(3))
        with pytest.raises(ValueError):
            ps.points[0, 0] = 2.0

    def test_csv_round_trip(self, tmp_path):
        ps = PointSet(np.random.default_rng(0).random((5, 3)))
        path = tmp_path / "points.csv"
        ps.to_csv(path)
        np.testing.assert_array_equal(PointSet.from_csv(path).points, ps.points)

    def test_json_round_trip(self):
        ps = PointSet(np.random.default_rng(1).random((4, 2)))
        np.testing.assert_array_equal(PointSet.from_json(ps.to_json()).points, ps.points)


class TestHullDistance:
    def test_member_distance_zero(self):
        pts = np.random.default_rng(0).random((50, 4))
        assert point_to_hull_distance(pts[7], pts) == 0.0

    def test_segment_closed_form(self):
        d = point_to_hull_distance([0.0, 0.0], np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert d == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_convex_combinations_inside(self):
        # spec invariant: 1000 random convex combinations, zero within 1e-9
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(1000):
            m, d = int(rng.integers(3, 9)), int(rng.integers(2, 7))
            vertices = rng.random((m, d))
            p = rng.dirichlet(np.ones(m)) @ vertices
            worst = max(worst, point_to_hull_distance(p, vertices))
        assert worst <= 1e-9

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            point_to_hull_distance([0.0], np.zeros((0, 1)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            point_to_hull_distance([0.0, 0.0, 0.0], np.eye(2))


class TestIsExtreme:
    def test_midpoint_not_extreme(self):
        pts = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]])
        assert not is_extreme(2, pts)
        assert is_extreme(0, pts) and is_extreme(1, pts)

    def test_basis_vertices_extreme(self):
        for i in range(3):
            assert is_extreme(i, np.eye(3))

    def test_segment_cloud_min_max(self):
        pts = sample(SamplerSpec("uniform", 2, 8), 50)
        flags = [is_extreme(i, pts) for i in range(50)]
        expected = {int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))}
        assert {i for i, f in enumerate(flags) if f} == expected

    def test_index_range(self):
        with pytest.raises(IndexError):
            is_extreme(5, np.eye(3))


class TestExtremalSet:
    def test_triangle_plus_barycenter(self):
        pts = np.vstack([np.eye(3), [[1 / 3, 1 / 3, 1 / 3]]])
        es = extremal_set(PointSet(pts))
        assert es.f0 == 3
        np.testing.assert_array_equal(es.indices, [0, 1, 2])

    def test_segment_always_two(self):
        for seed in range(10):
            for n in (3, 7, 40):
                ps = PointSet(sample(SamplerSpec("uniform", 2, seed), n))
                assert extremal_set(ps).f0 == 2

    def test_matches_orientation_oracle_fixed(self):
        cloud = sample(SamplerSpec("uniform", 3, 7), 200)
        ps = PointSet(cloud)
        # drop the redundant coordinate: an affine bijection on the simplex plane
        oracle = orientation_hull_vertices(ps.points[:, :2])
        es = extremal_set(ps)
        np.testing.assert_array_equal(es.indices, oracle)

    def test_matches_orientation_oracle_random(self):
        # spec invariant: 100 random instances, n <= 500
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(4, 501))
            ps = PointSet(rng.random((n, 2)))
            np.testing.assert_array_equal(
                extremal_set(ps).indices, orientation_hull_vertices(ps.points)
            )

    def test_auto_agrees_with_perpoint(self):
        for seed in range(20):
            ps = PointSet(sample(SamplerSpec("uniform", 3, 100 + seed), 60))
            np.testing.assert_array_equal(
                extremal_set(ps, method="auto").indices,
                extremal_set(ps, method="perpoint").indices,
            )

    def test_auto_agrees_with_perpoint_higher_rank(self):
        # rank 4: the qhull shortlist runs in 4-D coordinates
        for seed in range(6):
            ps = PointSet(sample(SamplerSpec("uniform", 5, 300 + seed), 40))
            np.testing.assert_array_equal(
                extremal_set(ps, method="auto").indices,
                extremal_set(ps, method="perpoint").indices,
            )

    def test_rank_above_qhull_limit_uses_distance_scan(self):
        # rank 9 exceeds the qhull ceiling; auto falls back to per-point tests
        ps = PointSet(sample(SamplerSpec("uniform", 10, 17), 30))
        es = extremal_set(ps, method="auto")
        np.testing.assert_array_equal(es.indices, extremal_set(ps, method="perpoint").indices)
        assert es.f0 >= 10

    def test_hull_invariance_under_added_combinations(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n, d = int(rng.integers(4, 12)), int(rng.integers(2, 5))
            base = rng.random((n, d))
            combos = rng.dirichlet(np.ones(n), size=5) @ base
            before = extremal_set(PointSet(base)).indices
            after = extremal_set(PointSet(np.vstack([base, combos]))).indices
            np.testing.assert_array_equal(after, before)

    def test_full_dimensional_hull_has_at_least_j_vertices(self):
        # a hull affinely spanning the simplex needs at least J vertices
        rng = np.random.default_rng(5)
        for _ in range(20):
            j = int(rng.integers(2, 6))
            cloud = sample(SamplerSpec("uniform", j, int(rng.integers(1_000_000))), j + 5)
            assert extremal_set(PointSet(cloud)).f0 >= j

    def test_vertex_count_lower_bound(self):
        # f0 >= min(affine rank + 1, distinct points) on generic clouds
        rng = np.random.default_rng(13)
        for _ in range(40):
            n, d = int(rng.integers(2, 30)), int(rng.integers(1, 6))
            ps = PointSet(rng.random((n, d)))
            rank = np.linalg.matrix_rank(ps.points - ps.points.mean(axis=0))
            assert extremal_set(ps).f0 >= min(rank + 1, ps.n)

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            extremal_set(PointSet(np.zeros((3, 2))))

    def test_lattice_cloud_corners_only(self):
        # many exactly-collinear boundary points; only the 4 corners are extreme
        xs, ys = np.meshgrid(np.arange(5.0), np.arange(4.0))
        grid = np.column_stack([xs.ravel(), ys.ravel()])
        es = extremal_set(PointSet(grid))
        corners = {(0.0, 0.0), (4.0, 0.0), (0.0, 3.0), (4.0, 3.0)}
        found = {tuple(grid[i]) for i in es.indices}
        assert found == corners
        np.testing.assert_array_equal(
            es.indices, extremal_set(PointSet(grid), method="perpoint").indices
        )

    def test_json(self):
        es = extremal_set(PointSet(np.eye(3)))
        assert es.to_json() == '{"indices": [0, 1, 2], "f0": 3}'


class TestHausdorff:
    def test_equal_hulls_zero(self):
        a = np.vstack([np.eye(3), [[1 / 3, 1 / 3, 1 / 3]]])
        assert hausdorff(a, np.eye(3)) <= 1e-9

    def test_vertex_removed_closed_form(self):
        d = hausdorff(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([[1.0, 0.0]]))
        assert d == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_universal_bound_on_simplex(self):
        # any two hulls inside the simplex are at Hausdorff distance <= 2
        rng = np.random.default_rng(2)
        for _ in range(20):
            j = int(rng.integers(2, 6))
            a = sample(SamplerSpec("uniform", j, int(rng.integers(1 << 30))), 8)
            b = sample(SamplerSpec("uniform", j, int(rng.integers(1 << 30))), 8)
            assert hausdorff(a, b) <= 2.0

    def test_metric_properties(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            d = int(rng.integers(2, 5))
            a = rng.random((int(rng.integers(2, 8)), d))
            b = rng.random((int(rng.integers(2, 8)), d))
            c = rng.random((int(rng.integers(2, 8)), d))
            dab, dba = hausdorff(a, b), hausdorff(b, a)
            assert dab == pytest.approx(dba, abs=1e-9)
            assert dab >= 0.0
            assert dab <= hausdorff(a, c) + hausdorff(c, b) + 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            hausdorff(np.eye(2), np.eye(3))


class TestTowers:
    def test_hand_counts(self):
        assert count_towers(2).towers == 2  # two vertices below one edge
        assert count_towers(3).towers == 6  # 3 vertices x 2 incident edges

    def test_against_dfs_oracle(self):
        for j in range(2, 7):
            assert count_towers(j).towers == towers_by_dfs(j)

    def test_range_checked(self):
        for j in (1, 7):
            with pytest.raises(ValueError):
                count_towers(j)

    def test_c_constants(self):
        assert c_constant(2) == pytest.approx(2 / 3, abs=1e-15)
        assert c_constant(3) == pytest.approx(0.1875, abs=1e-12)
        assert c_constant(4) == pytest.approx(towers_by_dfs(4) / (5**3 * 6), abs=1e-15)


class TestPCAProject:
    def test_full_rank_projection_is_isometry(self):
        rng = np.random.default_rng(0)
        data = rng.random((12, 3))
        res = pca_project(data, 3)
        x = data - data.mean(axis=0)
        orig = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=2)
        proj = np.linalg.norm(
            res.scores[:, None, :] - res.scores[None, :, :], axis=2
        )
        np.testing.assert_allclose(proj, orig, atol=1e-9)

    def test_duplicated_rows_same_subspace(self):
        rng = np.random.default_rng(1)
        data = rng.random((8, 4))
        res1 = pca_project(data, 2)
        res2 = pca_project(np.vstack([data, data, data]), 2)
        np.testing.assert_allclose(res2.components, res1.components, atol=1e-9)

    def test_rank3_reconstruction(self):
        rng = np.random.default_rng(2)
        data = rng.random((30, 3)) @ rng.random((3, 8))
        res = pca_project(data, 3)
        recon = res.scores @ res.components + res.mean
        np.testing.assert_allclose(recon, data, atol=1e-8)
        assert res.explained_variance_ratio.sum() == pytest.approx(1.0, abs=1e-9)

    def test_rank_deficient_error_names_attainable(self):
        rank2 = np.outer(np.arange(6.0), [1.0, 2.0, 3.0])
        rank2[:, 0] += np.arange(6.0) ** 2
        with pytest.raises(ValueError, match="attainable d = 2"):
            pca_project(rank2, 3)

    def test_dimension_bounds(self):
        data = np.random.default_rng(3).random((5, 4))
        with pytest.raises(ValueError):
            pca_project(data, 1)
        with pytest.raises(ValueError):
            pca_project(data, 5)

    def test_deterministic_sign(self):
        data = np.random.default_rng(4).random((10, 5))
        res = pca_project(data, 3)
        for row in res.components:
            assert row[int(np.argmax(np.abs(row)))] > 0
