import os
import unittest

from randers_lab.errors import ValidationError
from randers_lab.settings import Settings, DEFAULTS, THREADS_ENV
from .models._mock import patch


class SettingsTest(unittest.TestCase):

    def test_defaults(self):
        with patch.dict(os.environ, {THREADS_ENV: ''}):
            settings = Settings()

        self.assertEqual(settings.tol, 1e-10)
        self.assertEqual(settings.pde_cells, 2048)
        self.assertEqual(settings.cluster_threshold, 1e-4)
        self.assertGreaterEqual(settings.threads, 1)
        self.assertEqual(set(settings.as_dict()), set(DEFAULTS))

    def test_overrides(self):
        settings = Settings(tol=1e-8, pde_cells=256.0, threads=2)

        self.assertEqual(settings.tol, 1e-8)
        self.assertEqual(settings.pde_cells, 256)
        self.assertIsInstance(settings.pde_cells, int)

    def test_invalid_values(self):
        with self.assertRaises(ValidationError) as context:
            Settings(tol=-1.0, orbit_samples=2.5, colour='red', threads=True)

        details = context.exception.details
        self.assertIn("unknown setting 'colour'", details)
        self.assertIn("'tol' must be positive", details)
        self.assertIn("'orbit_samples' must be an integer", details)
        self.assertIn("'threads' must be a positive integer", details)

    def test_greedy_step_fraction_cap(self):
        with self.assertRaises(ValidationError):
            Settings(greedy_step_fraction=0.1)
        self.assertEqual(Settings(greedy_step_fraction=0.01).greedy_step_fraction, 0.01)

    def test_read_only(self):
        settings = Settings(threads=1)

        with self.assertRaises(AttributeError):
            settings.tol = 1.0
        with self.assertRaises(AttributeError):
            settings.missing

    def test_replace(self):
        settings = Settings(threads=1)

        changed = settings.replace(pde_cells=64)

        self.assertEqual(changed.pde_cells, 64)
        self.assertEqual(settings.pde_cells, 2048)
        self.assertEqual(changed, Settings(threads=1, pde_cells=64))
        self.assertNotEqual(changed, settings)

    def test_threads_cap(self):
        with patch.dict(os.environ, {THREADS_ENV: '2'}):
            self.assertEqual(Settings(threads=8).threads, 2)
            self.assertEqual(Settings(threads=1).threads, 1)
            self.assertLessEqual(Settings().threads, 2)

    def test_bad_threads_cap(self):
        for value in ('zero', '0', '-3'):
            with patch.dict(os.environ, {THREADS_ENV: value}):
                with self.assertRaises(ValidationError):
                    Settings()

    def test_from_mapping(self):
        self.assertEqual(Settings.from_mapping({'threads': 1, 'tol': 1e-9}), Settings(threads=1, tol=1e-9))
        with self.assertRaises(ValidationError):
            Settings.from_mapping([('tol', 1e-9)])
