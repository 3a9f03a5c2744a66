import math

import numpy as np

from randers_lab.errors import DIVERGENT
from randers_lab.models.numerics import QuadratureRule, IntegralResult, DescentResult, gauss_legendre
from ..test_model import ModelTest


class QuadratureRuleTest(ModelTest):
    def test_mapped_rule_is_exact_for_polynomials(self):
        rule = gauss_legendre(5)

        value = rule.integrate(lambda x: x ** 9, 0.0, 1.0)

        self.assertAlmostEqual(value, 0.1, places=14)

    def test_mapped_rows_per_cell(self):
        rule = gauss_legendre(3)

        nodes, weights = rule.mapped(np.array([0.0, 1.0]), np.array([1.0, 3.0]))

        self.assertEqual(nodes.shape, (2, 3))
        self.assertAlmostEqual(float(np.sum(weights[0])), 1.0, places=14)
        self.assertAlmostEqual(float(np.sum(weights[1])), 2.0, places=14)

    def test_read_only(self):
        rule = QuadratureRule(2, [-1.0, 1.0], [1.0, 1.0])

        with self.assertRaises(ValueError):
            rule.nodes[0] = 0.0


class IntegralResultTest(ModelTest):
    def test_divergent_drops_error(self):
        result = IntegralResult(DIVERGENT, 1.0, 10)

        self.assertTrue(result.divergent)
        self.assertIsNone(result.abs_error_estimate)

    def test_finite(self):
        result = IntegralResult(2.0, 1e-12, 96)

        self.assertFalse(result.divergent)
        self.assertEqual(result.abs_error_estimate, 1e-12)


class DescentResultTest(ModelTest):
    def test_monotone_history(self):
        self.assertTrue(DescentResult(np.zeros(1), 0.0, 0.0, 2, True, [3.0, 1.0, 1.0]).monotone)
        self.assertFalse(DescentResult(np.zeros(1), 0.0, 0.0, 2, True, [3.0, 1.0, 2.0]).monotone)

    def test_default_history(self):
        result = DescentResult(np.zeros(1), -math.pi, 0.0, 0, True)

        self.assertEqual(result.history, [-math.pi])
