import math

from randers_lab.errors import DIVERGENT
from randers_lab.models.sobolev import AdmissiblePair, Rejection, FunkVerdict, SOBOLEV, MORREY
from ..test_model import ModelTest


class AdmissiblePairTest(ModelTest):
    def test_critical_exponent(self):
        self.assertEqual(AdmissiblePair(2, 4, 3, SOBOLEV).critical_exponent, 6.0)
        self.assertEqual(AdmissiblePair(4, math.inf, 3, MORREY).critical_exponent, math.inf)

    def test_json(self):
        self.assertEqual(AdmissiblePair(4, math.inf, 3, MORREY).to_json(),
                         {'p': 4.0, 'q': 'inf', 'd': 3, 'regime': 'M'})

    def test_rejection(self):
        rejection = Rejection(1, 2, 3, 'p must exceed 1')

        self.assertFalse(rejection.admissible)
        self.assertIsNone(rejection.regime)


class FunkVerdictTest(ModelTest):
    def test_fails_when_only_lq_diverges(self):
        verdict = FunkVerdict(3, 2, 4, 3, 12.5, DIVERGENT, SOBOLEV)

        self.assertTrue(verdict.embedding_fails)
        self.assertEqual(verdict.row(), {'d': 3, 'p': 2.0, 'q': 4.0, 'regime': 'S', 't': 3.0, 'w_bound': 12.5,
                                         'lq_norm': DIVERGENT, 'fails': True})

    def test_does_not_fail_when_both_diverge(self):
        verdict = FunkVerdict(3, 2, 4, 1, DIVERGENT, DIVERGENT)

        self.assertFalse(verdict.embedding_fails)
        self.assertEqual(verdict.row()['regime'], 'none')
