import unittest

from randers_lab import Lab, Settings
from randers_lab.models.modelspace import ModelSpaceManager
from randers_lab.models.numerics import NumericsManager
from randers_lab.models.orbits import OrbitManager
from randers_lab.models.pde import PDEManager
from randers_lab.models.randers import RandersManager
from randers_lab.models.rearrange import RearrangeManager
from randers_lab.models.sobolev import SobolevManager
from .models._mock import patch


class LabTest(unittest.TestCase):

    def test_managers(self):
        lab = Lab(Settings(threads=1))

        self.assertIsInstance(lab.numerics, NumericsManager)
        self.assertIsInstance(lab.modelspace, ModelSpaceManager)
        self.assertIsInstance(lab.randers, RandersManager)
        self.assertIsInstance(lab.orbits, OrbitManager)
        self.assertIsInstance(lab.rearrange, RearrangeManager)
        self.assertIsInstance(lab.sobolev, SobolevManager)
        self.assertIsInstance(lab.pde, PDEManager)

    def test_managers_are_cached(self):
        lab = Lab(Settings(threads=1))

        self.assertIs(lab.orbits, lab.orbits)
        self.assertIs(lab.pde, lab.pde)

    def test_managers_are_lazy(self):
        lab = Lab(Settings(threads=1))

        with patch('randers_lab.lab.PDEManager') as manager:
            self.assertFalse(manager.called)
            lab.pde
            lab.pde

        manager.assert_called_once_with(lab.settings)

    def test_settings_are_shared(self):
        settings = Settings(threads=1, tol=1e-9)

        lab = Lab(settings)

        self.assertIs(lab.settings, settings)
        self.assertEqual(lab.sobolev._settings, settings)

    def test_default_settings(self):
        self.assertEqual(Lab().settings.tol, 1e-10)
