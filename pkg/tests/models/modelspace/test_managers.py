import math

import numpy as np

from randers_lab.errors import InvalidArgumentError
from randers_lab.models.modelspace import ModelSpaceManager, SpaceForm
from ..test_model import ModelTest


class ModelSpaceManagerTest(ModelTest):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._manager = ModelSpaceManager(self.settings)

    def test_euclidean_volume(self):
        self.assertAlmostEqual(self._manager.comparison_volume(0.0, 3, 2.0), 32.0 * math.pi / 3.0, places=12)

    def test_hyperbolic_plane_volume(self):
        volume = self._manager.comparison_volume(-1.0, 2, 1.5)

        self.assertAlmostEqual(volume, 2.0 * math.pi * (math.cosh(1.5) - 1.0), delta=1e-10)

    def test_hyperbolic_volume_array(self):
        rho = np.array([0.5, 1.0, 4.0])

        volumes = self._manager.comparison_volume(-1.0, 3, rho)

        expected = math.pi * (np.sinh(2.0 * rho) - 2.0 * rho)
        np.testing.assert_allclose(volumes, expected, rtol=1e-12)

    def test_volume_needs_positive_radius(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.comparison_volume(-1.0, 2, np.array([1.0, 0.0]))

    def test_bishop_gromov_ratio_is_one(self):
        for space, x in ((SpaceForm(3, -1.0), [0.3, 0.1, 0.0]), (SpaceForm(2, 0.0), [5.0, -1.0]),
                         (SpaceForm(2, -4.0), [0.0, 0.6])):
            ratio = self._manager.bishop_gromov_ratio(space, x, 1.2)

            self.assertAlmostEqual(ratio, 1.0, delta=1e-9)

    def test_ball_volume_independent_of_centre(self):
        rng = np.random.default_rng(7)
        for dim in (2, 3):
            space = SpaceForm(dim, -1.0)
            centres = rng.standard_normal((5, dim))
            centres *= (rng.uniform(0.0, 0.95, size=(5, 1)) / np.linalg.norm(centres, axis=1, keepdims=True))
            for x in centres:
                rho = rng.uniform(0.5, 2.0)

                self.assertAlmostEqual(self._manager.bishop_gromov_ratio(space, x, rho), 1.0, delta=1e-9)

    def test_volume_sandwich(self):
        space = SpaceForm(2, -1.0)

        rows = self._manager.volume_sandwich(space, [0.5, 1.0, 2.0], -2.0, -0.5)

        self.assertEqual(len(rows), 3)
        for row in rows:
            self.assertTrue(row['holds'])
            self.assertLess(row['lower'], row['volume'])
            self.assertLess(row['volume'], row['upper'])

    def test_volume_sandwich_order(self):
        with self.assertRaises(InvalidArgumentError):
            self._manager.volume_sandwich(SpaceForm(2, -1.0), [1.0], -0.5, 0.0)

    def test_croke_constants(self):
        self.assertEqual(self._manager.croke_constant(2), 1.0)
        self.assertAlmostEqual(self._manager.croke_constant(3), 2.0 ** (5.0 / 3.0) * math.pi ** (1.0 / 3.0),
                               delta=1e-9)
        self.assertAlmostEqual(self._manager.croke_constant(4),
                               2.0 * (2.0 * math.pi ** 2) ** 0.75 / math.pi, delta=1e-9)

    def test_polya_szego_factor_plane(self):
        self.assertAlmostEqual(self._manager.polya_szego_factor(2), 1.0 / (2.0 * math.sqrt(math.pi)), places=14)

    def test_pairwise_distances(self):
        space = SpaceForm(2, -1.0)
        points = np.array([[0.0, 0.0], [0.5, 0.0], [0.0, -0.3]])

        matrix = self._manager.pairwise_distances(space, points)

        self.assertEqual(matrix.shape, (3, 3))
        self.assertAlmostEqual(matrix[0, 1], 2.0 * math.atanh(0.5), places=12)
        self.assertAlmostEqual(matrix[1, 2], float(space.distance(points[1], points[2])), places=12)

    def test_exp_log_maps(self):
        space = SpaceForm(3, -1.0)
        exp, log = self._manager.exp_log_maps(space, [0.1, 0.0, 0.2])

        np.testing.assert_allclose(log(exp([0.3, -0.2, 0.5])), [0.3, -0.2, 0.5], atol=1e-10)

        with self.assertRaises(InvalidArgumentError):
            exp([1.0, 2.0])
