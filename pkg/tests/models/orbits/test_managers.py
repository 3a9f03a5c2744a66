import math

import numpy as np

from randers_lab.errors import InvalidArgumentError
from randers_lab.models.modelspace import SpaceForm, MatrixCone
from randers_lab.models.orbits import (OrbitManager, GroupAction, MatrixPoint, FULL_ROTATION, PRODUCT_ROTATION,
                                       MATRIX_CONJUGATION, GREEDY, ANGULAR_EXACT, sphere_points, rotation)
from ..test_model import ModelTest


class SpherePointsTest(ModelTest):
    def test_antipodal_anchor(self):
        anchor = np.array([0.0, 3.0, 4.0])

        points = sphere_points(3, 101, anchor)

        self.assertEqual(points.shape, (101, 3))
        np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(points[0], anchor / 5.0, atol=1e-12)
        np.testing.assert_allclose(points[1], -anchor / 5.0, atol=1e-12)

    def test_deterministic(self):
        np.testing.assert_array_equal(sphere_points(4, 50), sphere_points(4, 50))


class PackingTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)
        self._rotation = GroupAction(FULL_ROTATION)

    def test_euclidean_exact_count(self):
        report = self._manager.packing_count(self._rotation, SpaceForm(2), [100.0, 0.0], 1.0)

        self.assertEqual(report.method, ANGULAR_EXACT)
        self.assertEqual(report.count, 314)
        self.assertTrue(report.disjoint)

    def test_poincare_counts(self):
        space = SpaceForm(2, -1.0)
        counts = []
        ratios = []
        for r in (0.9, 0.99, 0.999):
            report = self._manager.packing_count(self._rotation, space, [r, 0.0], 1.0)
            counts.append(report.count)
            ratios.append(self._manager.poincare_ratio(space, report))

        self.assertEqual(counts, [25, 265, 2671])
        self.assertTrue(ratios[0] < ratios[1] < ratios[2])
        for ratio in ratios:
            self.assertLess(abs(math.log(ratio / math.pi)), math.log(2.0))

    def test_greedy_close_to_exact(self):
        rng = np.random.default_rng(1)
        space = SpaceForm(2)
        for radius, rho in zip(rng.uniform(2.0, 50.0, 50), rng.uniform(0.2, 2.0, 50)):
            y = [radius, 0.0]
            exact = self._manager.packing_count(self._rotation, space, y, rho).count
            greedy = self._manager.packing_count(self._rotation, space, y, rho, GREEDY)

            self.assertTrue(exact - 1 <= greedy.count <= exact)
            self.assertTrue(greedy.disjoint)

    def test_greedy_walk_resolution(self):
        cases = [(SpaceForm(2), [2.0, 0.0], 1.0), (SpaceForm(2), [50.0, 0.0], 0.3), (SpaceForm(2, -1.0), [0.9, 0.0], 0.5)]
        for space, y, rho in cases:
            report = self._manager.packing_count(self._rotation, space, y, rho, GREEDY)

            self.assertLessEqual(report.walk_step, rho / 20.0 * (1.0 + 1e-12))
            neighbour = float(space.distance(report.centers[0], report.centers[1]))
            self.assertGreaterEqual(neighbour, 2.0 * rho - 1e-12)
            self.assertLessEqual(neighbour, 2.0 * rho + report.walk_step * (1.0 + 1e-6) + 1e-12)

    def test_exact_spacing_has_no_walk(self):
        report = self._manager.packing_count(self._rotation, SpaceForm(2), [2.0, 0.0], 1.0)

        self.assertEqual(report.method, ANGULAR_EXACT)
        self.assertIsNone(report.walk_step)

    def test_rotation_invariance(self):
        space = SpaceForm(2, -1.0)
        y = np.array([0.5, 0.3])
        count = self._manager.packing_count(self._rotation, space, y, 0.2, GREEDY).count

        for theta in (0.3, 1.7, 4.0):
            moved = rotation(theta) @ y
            self.assertEqual(self._manager.packing_count(self._rotation, space, moved, 0.2, GREEDY).count, count)

    def test_fixed_point(self):
        report = self._manager.packing_count(self._rotation, SpaceForm(2), [0.0, 0.0], 1.0)

        self.assertEqual(report.count, 1)
        self.assertTrue(report.fixed_point)

    def test_sphere_packing_disjoint(self):
        report = self._manager.packing_count(self._rotation, SpaceForm(3), [5.0, 0.0, 0.0], 1.0)

        self.assertEqual(report.method, GREEDY)
        self.assertGreater(report.count, 10)
        self.assertTrue(report.disjoint)
        self.assertFalse(report.saturated)

    def test_matrix_packing(self):
        report = self._manager.packing_count(GroupAction(MATRIX_CONJUGATION), MatrixCone(),
                                             MatrixPoint.diagonal(10.0), 0.5)

        self.assertGreater(report.count, 1)
        self.assertTrue(report.disjoint)

    def test_exact_not_available(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.packing_count(self._rotation, SpaceForm(3), [1.0, 0.0, 0.0], 1.0, ANGULAR_EXACT)

    def test_non_positive_radius(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.packing_count(self._rotation, SpaceForm(2), [1.0, 0.0], 0.0)

    def test_wrong_space(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.packing_count(GroupAction(MATRIX_CONJUGATION), SpaceForm(2), np.eye(2), 0.5)


class CandidatePoolTest(ModelTest):
    TEST_SETTINGS = {'threads': 1, 'orbit_samples': 40}

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)

    def test_exhausted_pool_is_flagged(self):
        with self.assertLogs('randers_lab.models.orbits._managers', level='WARNING'):
            report = self._manager.packing_count(GroupAction(FULL_ROTATION), SpaceForm(3), [50.0, 0.0, 0.0], 0.1)

        self.assertEqual(report.count, 40)
        self.assertTrue(report.saturated)

    def test_product_inherits_flag(self):
        action = GroupAction(PRODUCT_ROTATION, [3, 2])

        report = self._manager.packing_count(action, SpaceForm(5), [50.0, 0.0, 0.0, 1.0, 0.0], 0.1)

        self.assertTrue(report.saturated)


class ExpansionTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)

    def test_euclidean_growth(self):
        rows = self._manager.expansion_profile(GroupAction(FULL_ROTATION), SpaceForm(2), 1.0, [10.0, 100.0, 1000.0])

        self.assertEqual([row['count'] for row in rows], [31, 314, 3141])
        self.assertEqual(set(rows[0]), {'distance', 'rho', 'count', 'method', 'disjoint', 'saturated'})
        self.assertTrue(all(row['disjoint'] and not row['saturated'] for row in rows))
        for row in rows[1:]:
            self.assertLess(abs(row['count'] / (math.pi * row['distance']) - 1.0), 0.1)

    def test_equal_radii(self):
        rows = self._manager.expansion_profile(GroupAction(FULL_ROTATION), SpaceForm(2), 1.0, [5.0, 5.0, 5.0])

        self.assertEqual(len({row['count'] for row in rows}), 1)

    def test_product_growth(self):
        action = GroupAction(PRODUCT_ROTATION, [2, 2])

        rows = self._manager.expansion_profile(action, SpaceForm(4), 1.0, [10.0, 100.0, 1000.0])

        counts = [row['count'] for row in rows]
        self.assertTrue(counts[0] < counts[1] < counts[2])

    def test_bad_radii(self):
        for radii in ([], [2.0, 1.0], [-1.0]):
            with self.assertRaises(InvalidArgumentError):
                self._manager.expansion_profile(GroupAction(FULL_ROTATION), SpaceForm(2), 1.0, radii)


class TangentBoundTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)

    def test_right_angles(self):
        angles = np.full(6, math.pi / 2.0)

        self.assertEqual(self._manager.tangent_packing_lower_bound(angles, 1.0, 2.0), 4)
        self.assertEqual(self._manager.tangent_packing_lower_bound(angles, 1.0, 1.0), 1)

    def test_monotone_in_t(self):
        angles = self._manager.ray_angles(sphere_points(3, 40))
        previous = 0
        for t in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0):
            bound = self._manager.tangent_packing_lower_bound(angles, 1.0, t)
            self.assertGreaterEqual(bound, previous)
            previous = bound

    def test_below_exact_count(self):
        rng = np.random.default_rng(7)
        rotation_action = GroupAction(FULL_ROTATION)
        space = SpaceForm(2)
        violations = 0
        for t, rho in zip(rng.uniform(2.0, 200.0, 50), rng.uniform(0.1, 3.0, 50)):
            theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, 12))
            angles = self._manager.ray_angles(np.stack([np.cos(theta), np.sin(theta)], axis=1))
            bound = self._manager.tangent_packing_lower_bound(angles, rho, t)
            count = self._manager.packing_count(rotation_action, space, [t, 0.0], rho).count
            violations += count < bound

        self.assertEqual(violations, 0)

    def test_bad_angles(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.tangent_packing_lower_bound([0.0], 1.0, 2.0)
        with self.assertRaises(InvalidArgumentError):
            self._manager.tangent_packing_lower_bound([], 1.0, 2.0)
        with self.assertRaises(InvalidArgumentError):
            self._manager.tangent_packing_lower_bound([1.0, 1.0], 1.0, 2.0)

    def test_spherical_cap_count(self):
        for t in (10.0, 100.0, 1000.0):
            estimate = self._manager.spherical_cap_count(3, 1.0, t)
            self.assertAlmostEqual(estimate * math.sin(1.0 / t) ** 2, 1.0, delta=1e-9)

        with self.assertRaises(InvalidArgumentError):
            self._manager.spherical_cap_count(3, 1.0, 1.0)


class DiameterTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)

    def test_circle(self):
        diameter = self._manager.orbit_diameter(GroupAction(FULL_ROTATION), SpaceForm(2), [3.0, 0.0], 100)

        self.assertAlmostEqual(diameter, 6.0, places=12)

    def test_fixed_point(self):
        self.assertEqual(self._manager.orbit_diameter(GroupAction(FULL_ROTATION), SpaceForm(3), [0.0] * 3, 100),
                         0.0)

    def test_product_block(self):
        action = GroupAction(PRODUCT_ROTATION, [2, 2])

        diameter = self._manager.orbit_diameter(action, SpaceForm(4), [2.0, 0.0, 0.0, 0.0], 100)

        self.assertAlmostEqual(diameter, 4.0, places=12)

    def test_matrix(self):
        diameter = self._manager.orbit_diameter(GroupAction(MATRIX_CONJUGATION), MatrixCone(),
                                                MatrixPoint.diagonal(2.0), 100)

        self.assertAlmostEqual(diameter, 2.0 * math.sqrt(2.0) * math.log(2.0), places=10)

    def test_coercivity_probe(self):
        verdict = self._manager.coercivity_probe(GroupAction(FULL_ROTATION), SpaceForm(2), 1.0, 10.0)

        self.assertFalse(verdict.small_orbit_found)
        self.assertAlmostEqual(verdict.min_diameter, 10.0, places=9)
        self.assertEqual(verdict.probes, 8)


class HausdorffTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = OrbitManager(self.settings)

    def test_matrix_diagonal(self):
        report = self._manager.orbit_hausdorff_matrix(MatrixPoint.diagonal(2.0))

        self.assertAlmostEqual(report.length, 2.0 * math.pi * math.sqrt(4.25), places=12)
        self.assertAlmostEqual(report.d_p, math.sqrt(2.0) * math.log(2.0), places=14)
        self.assertTrue(report.kappa_check)

    def test_matrix_identity(self):
        report = self._manager.orbit_hausdorff_matrix(np.eye(2))

        self.assertAlmostEqual(report.length, 2.0 * math.pi * math.sqrt(2.0), places=12)
        self.assertAlmostEqual(report.d_p, 0.0, places=14)

    def test_matrix_log_grid(self):
        for lam in np.geomspace(1.0, 1e6, 25):
            y = MatrixPoint.diagonal(lam)
            report = self._manager.orbit_hausdorff_matrix(y)
            curve = self._manager.matrix_curve_length(y)

            self.assertTrue(report.kappa_check)
            self.assertLess(abs(curve - report.length) / report.length, 1e-6)

    def test_product_spheres(self):
        report = self._manager.orbit_hausdorff_product_spheres([2, 2], [1.0, 0.0, 0.0, 1.0])

        self.assertAlmostEqual(report.measure, 4.0 * math.pi, places=12)
        self.assertEqual(report.m_g, 1.0)
        self.assertAlmostEqual(report.lower_bound, 2.0 * math.pi * math.sqrt(2.0), places=12)
        self.assertTrue(report.holds)

    def test_product_random(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            y = rng.standard_normal(4)
            y *= rng.uniform(1.0, 10.0) / np.linalg.norm(y)

            self.assertTrue(self._manager.orbit_hausdorff_product_spheres([2, 2], y).holds)

    def test_mixed_blocks_minimum(self):
        report = self._manager.orbit_hausdorff_product_spheres([2, 3], [1.0, 0.0, 0.0, 1.0, 0.0])

        self.assertAlmostEqual(report.m_g, 0.75, places=8)

    def test_zero_point(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.orbit_hausdorff_product_spheres([2, 2], [0.0] * 4)
