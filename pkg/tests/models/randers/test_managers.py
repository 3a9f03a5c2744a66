import math

import numpy as np

from randers_lab.errors import DegenerateMetricError, InvalidArgumentError
from randers_lab.models.modelspace import SpaceForm
from randers_lab.models.randers import RandersManager, RandersStructure, FunkModel, BetaProfile, BETA_CONSTANT, \
    BETA_TANH
from ..test_model import ModelTest
from .._mock import patch


def _constant(a, dim=2, curvature=0.0):
    return RandersStructure(SpaceForm(dim, curvature), BetaProfile(BETA_CONSTANT, {'a': a}))


class RandersManagerTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = RandersManager(self.settings)

    def test_finsler_norm(self):
        F = _constant(0.5)

        self.assertAlmostEqual(self._manager.finsler_norm(F, [0.5, 0.0], [1.0, 0.0]), 1.5, places=15)
        self.assertAlmostEqual(self._manager.finsler_norm(F, [0.5, 0.0], [-1.0, 0.0]), 0.5, places=15)
        self.assertAlmostEqual(self._manager.finsler_norm(F, [0.5, 0.0], [0.0, 2.0]), 2.0, places=15)

    def test_polar_transform_of_radial_covectors(self):
        F = _constant(0.5)

        self.assertAlmostEqual(self._manager.polar_transform(F, [0.5, 0.0], [1.0, 0.0]), 2.0 / 3.0, places=14)
        self.assertAlmostEqual(self._manager.polar_transform(F, [0.5, 0.0], [-1.0, 0.0]), 2.0, places=14)

    def test_polar_transform_riemannian(self):
        F = RandersStructure(SpaceForm(2, -1.0))
        x = [0.5, 0.0]

        # |alpha|_g = (1 - |x|^2) |alpha| / 2 in the Poincare chart
        self.assertAlmostEqual(self._manager.polar_transform(F, x, [0.0, 4.0]), 1.5, places=14)
        self.assertAlmostEqual(self._manager.co_norm(F, x, [0.0, 4.0]), 1.5, places=14)

    def test_finsler_gradient_is_dual(self):
        F = _constant(0.5)
        x = [0.5, 0.0]
        du = np.array([0.3, 0.7])

        gradient = self._manager.finsler_gradient(F, x, du)
        dual = self._manager.polar_transform(F, x, du)

        self.assertAlmostEqual(self._manager.finsler_norm(F, x, gradient), dual, places=12)
        self.assertAlmostEqual(float(du @ gradient), dual * dual, places=12)

    def test_finsler_gradient_of_zero(self):
        np.testing.assert_array_equal(self._manager.finsler_gradient(_constant(0.2), [0.1, 0.1], [0.0, 0.0]),
                                      [0.0, 0.0])

    def test_reversibility_and_uniformity(self):
        F = _constant(0.5, dim=3)
        x = [0.1, 0.2, 0.3]

        self.assertAlmostEqual(self._manager.reversibility(F, x), 3.0, places=14)
        self.assertAlmostEqual(self._manager.uniformity(F, x), 1.0 / 9.0, places=14)
        self.assertAlmostEqual(self._manager.volume_density(F, x), 9.0 / 16.0, places=14)

    def test_global_constants(self):
        F = RandersStructure(SpaceForm(2, -1.0), BetaProfile(BETA_TANH, {'a': 0.5, 'scale': 1.0}))

        self.assertAlmostEqual(self._manager.global_reversibility(F), 3.0, places=12)
        self.assertAlmostEqual(self._manager.global_uniformity(F), 1.0 / 9.0, places=12)
        self.assertEqual(self._manager.global_reversibility(FunkModel(2)), math.inf)
        self.assertEqual(self._manager.global_uniformity(FunkModel(2)), 0.0)

    def test_funk_is_not_reversible(self):
        funk = FunkModel(2)

        self.assertAlmostEqual(self._manager.reversibility(funk, [0.5, 0.0]), 3.0, places=14)
        self.assertAlmostEqual(self._manager.finsler_norm(funk, [0.5, 0.0], [1.0, 0.0]), 2.0, places=15)

    def test_funk_distance(self):
        self.assertAlmostEqual(self._manager.funk_distance(2, [0.5, 0.0]), math.log(2.0), places=15)

        with self.assertRaises(InvalidArgumentError):
            self._manager.funk_distance(2, [1.0, 0.0])

    def test_funk_eikonal(self):
        rng = np.random.default_rng(0)
        for dim in (2, 3):
            funk = FunkModel(dim)
            directions = rng.standard_normal((1000, dim))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
            points = directions * rng.uniform(0.05, 0.95, size=(1000, 1))

            residuals = [self._manager.eikonal_residual(funk, funk.origin(), x) for x in points]

            self.assertLess(max(residuals), 1e-6)

    def test_randers_eikonal(self):
        F = _constant(0.3, curvature=-1.0)

        self.assertLess(self._manager.eikonal_residual(F, F.base.origin(), [0.4, 0.2]), 1e-6)

    def test_eikonal_at_base_point(self):
        funk = FunkModel(2)

        with self.assertRaises(InvalidArgumentError):
            self._manager.eikonal_residual(funk, [0.1, 0.1], [0.1, 0.1])

    def test_degenerate_co_metric(self):
        F = RandersStructure(SpaceForm(2), BetaProfile(), 1.0)
        data = (np.eye(2), np.eye(2), np.array([1.0, 0.0]))

        with patch.object(RandersStructure, 'metric_data', return_value=data):
            with self.assertRaises(DegenerateMetricError):
                self._manager.polar_transform(F, [0.5, 0.0], [1.0, 0.0])

    def test_finsler_distance(self):
        F = _constant(0.5)

        self.assertAlmostEqual(self._manager.finsler_distance(F, [0.0, 0.0], [0.0, 2.0]), 3.0, places=14)

    def test_json(self):
        F = _constant(0.25, dim=3, curvature=-2.0)

        self.assertEqual(self._manager.from_json(self._manager.to_json(F)), F)


def _sample_points(rng, dim, count, bound):
    directions = rng.standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * rng.uniform(0.0, bound, size=(count, 1))


class RandomizedIdentitiesTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = RandersManager(self.settings)
        # (structure, chart radius of the sampled points)
        self._structures = [
            (_constant(0.5, dim=2), 5.0),
            (RandersStructure(SpaceForm(3, -1.0), BetaProfile(BETA_TANH, {'a': 0.6, 'scale': 0.5})), 0.9),
            (FunkModel(3), 0.9),
        ]

    def test_homogeneity(self):
        rng = np.random.default_rng(1)
        for F, bound in self._structures:
            points = _sample_points(rng, F.dim, 50, bound)
            vectors = rng.standard_normal((50, F.dim))
            for x, y in zip(points, vectors):
                value = self._manager.finsler_norm(F, x, y)
                for t in (0.0, 0.5, 2.0, 10.0):
                    scaled = self._manager.finsler_norm(F, x, t * y)
                    self.assertLessEqual(abs(scaled - t * value), 1e-12 * max(1.0, t * value))

    def test_co_norm_triangle_inequality(self):
        rng = np.random.default_rng(2)
        for F, bound in self._structures:
            points = _sample_points(rng, F.dim, 100, bound)
            for x in points:
                alpha, other = rng.standard_normal((2, F.dim))
                left = self._manager.polar_transform(F, x, alpha + other)
                right = self._manager.polar_transform(F, x, alpha) + self._manager.polar_transform(F, x, other)
                self.assertLessEqual(left, right * (1.0 + 1e-12))

    def test_reversibility_bounds_both_directions(self):
        rng = np.random.default_rng(3)
        for F, bound in self._structures:
            points = _sample_points(rng, F.dim, 50, bound)
            vectors = rng.standard_normal((50, F.dim))
            for x, y in zip(points, vectors):
                r = self._manager.reversibility(F, x)
                forward = self._manager.finsler_norm(F, x, y)
                backward = self._manager.finsler_norm(F, x, -y)
                self.assertLessEqual(forward, backward * r * (1.0 + 1e-12))
                self.assertGreaterEqual(forward * (1.0 + 1e-12), backward / r)

    def test_uniformity_is_inverse_square_of_reversibility(self):
        rng = np.random.default_rng(4)
        for F, bound in self._structures:
            for x in _sample_points(rng, F.dim, 20, bound):
                r = self._manager.reversibility(F, x)
                self.assertAlmostEqual(self._manager.uniformity(F, x), 1.0 / (r * r), places=12)

    def test_gradient_duality(self):
        rng = np.random.default_rng(5)
        for F, bound in self._structures:
            points = _sample_points(rng, F.dim, 50, bound)
            differentials = rng.standard_normal((50, F.dim))
            for x, du in zip(points, differentials):
                gradient = self._manager.finsler_gradient(F, x, du)
                dual = self._manager.polar_transform(F, x, du)
                self.assertLessEqual(abs(float(du @ gradient) - dual * dual), 1e-10 * max(1.0, dual * dual))

    def test_euclidean_eikonal(self):
        rng = np.random.default_rng(6)
        F = RandersStructure(SpaceForm(2), BetaProfile())
        directions = _sample_points(rng, 2, 100, 1.0)
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        points = directions * rng.uniform(0.1, 10.0, size=(100, 1))

        residuals = [self._manager.eikonal_residual(F, F.base.origin(), x) for x in points]

        self.assertLess(max(residuals), 1e-6)
