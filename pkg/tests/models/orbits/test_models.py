import math

import numpy as np

from randers_lab.errors import InvalidArgumentError
from randers_lab.models.orbits import (GroupAction, MatrixPoint, PackingReport, FULL_ROTATION, PRODUCT_ROTATION,
                                       MATRIX_CONJUGATION, GREEDY)
from ..test_model import ModelTest


class GroupActionTest(ModelTest):
    def test_blocks(self):
        action = GroupAction(PRODUCT_ROTATION, [2, 3])

        self.assertEqual(action.blocks, (2, 3))
        self.assertEqual(action.block_slices(), [slice(0, 2), slice(2, 5)])

    def test_bad_actions(self):
        for kind, blocks in (('reflection', None), (PRODUCT_ROTATION, None), (PRODUCT_ROTATION, [2, 1]),
                             (FULL_ROTATION, [2, 2]), (PRODUCT_ROTATION, [2.5])):
            with self.assertRaises(InvalidArgumentError):
                GroupAction(kind, blocks)

    def test_equality(self):
        self.assertEqual(GroupAction(MATRIX_CONJUGATION), GroupAction(MATRIX_CONJUGATION))
        self.assertNotEqual(GroupAction(PRODUCT_ROTATION, [2, 2]), GroupAction(PRODUCT_ROTATION, [2, 3]))


class MatrixPointTest(ModelTest):
    def test_diagonal(self):
        point = MatrixPoint.diagonal(4.0)

        np.testing.assert_array_equal(point.matrix, [[4.0, 0.0], [0.0, 0.25]])
        self.assertEqual(MatrixPoint.from_matrix(point.matrix), point)

    def test_determinant_constraint(self):
        with self.assertRaises(InvalidArgumentError):
            MatrixPoint(2.0, 0.0, 2.0)

    def test_positive_definite(self):
        with self.assertRaises(InvalidArgumentError):
            MatrixPoint(-1.0, 0.0, -1.0)

    def test_not_symmetric(self):
        with self.assertRaises(InvalidArgumentError):
            MatrixPoint.from_matrix([[1.0, 0.5], [0.0, 1.0]])


class PackingReportTest(ModelTest):
    def test_disjoint(self):
        self.assertTrue(PackingReport([1.0, 0.0], 0.5, 1, GREEDY).disjoint)
        self.assertTrue(PackingReport([1.0, 0.0], 0.5, 2, GREEDY, min_separation=1.0).disjoint)
        self.assertFalse(PackingReport([1.0, 0.0], 0.5, 2, GREEDY, min_separation=0.9).disjoint)

    def test_product_centers(self):
        first = PackingReport([1.0, 0.0], 0.1, 2, GREEDY, np.array([[1.0, 0.0], [-1.0, 0.0]]))
        second = PackingReport([0.0, 2.0], 0.1, 3, GREEDY, np.array([[0.0, 2.0], [2.0, 0.0], [0.0, -2.0]]))

        report = PackingReport(np.array([1.0, 0.0, 0.0, 2.0]), 0.1, 6, GREEDY, factors=[first, second],
                               min_separation=math.inf)

        self.assertEqual(report.centers.shape, (6, 4))
        np.testing.assert_array_equal(report.centers[1], [1.0, 0.0, 2.0, 0.0])
