import io
import json
import math
import os
import shutil
import subprocess
import sys
import tempfile
import unittest

from randers_lab import cli
from randers_lab.errors import DIVERGENT, SweepFailureError
from randers_lab.models.modelspace import SpaceForm
from randers_lab.models.orbits import OrbitManager, GroupAction, FULL_ROTATION
from randers_lab.settings import Settings
from .models._mock import patch


class CommandLineTest(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def _path(self, name):
        return os.path.join(self.directory, name)

    def _run(self, *argv):
        """Run in process, return (status, output text, stderr text)."""
        output = self._path('out-{}.txt'.format(len(os.listdir(self.directory))))
        stderr = io.StringIO()
        with patch('sys.stderr', stderr):
            status = cli.main(list(argv) + ['--output', output, '--quiet'])
        text = None
        if os.path.exists(output):
            with open(output, encoding='utf-8') as handle:
                text = handle.read()
        return status, text, stderr.getvalue()

    def test_funk_row(self):
        status, text, _ = self._run('funk', '--dim', '3', '--p', '2', '--q', '4', '--format', 'json')

        self.assertEqual(status, cli.EXIT_OK)
        document = json.loads(text)
        self.assertEqual(document['schema'], 1)
        row, = document['rows']
        self.assertEqual(row['regime'], 'S')
        self.assertEqual(row['lq_norm'], 'DIVERGENT')
        self.assertTrue(row['fails'])
        self.assertTrue(math.isfinite(row['w_bound']))
        self.assertEqual(row['t'], 3.0)
        self.assertTrue(document['checks']['counterexamples_fail'])

    def test_funk_csv(self):
        status, text, _ = self._run('funk', '--dim', '3,4', '--p', '2', '--q', '4')

        lines = text.splitlines()
        self.assertEqual(status, cli.EXIT_OK)
        self.assertEqual(lines[0], '# schema=1')
        self.assertTrue(lines[1].startswith('# config={"command":"funk"'))
        self.assertEqual(lines[2], 'd,p,q,regime,t,w_bound,lq_norm,fails')
        self.assertEqual(len(lines), 5)
        for line in lines[3:]:
            self.assertTrue(line.endswith(',DIVERGENT,true'))

    def test_packing_matches_expansion_profile(self):
        status, text, _ = self._run('packing', '--space', 'euclid', '--dim', '2', '--rho', '1',
                                    '--radii', '10:1000:log')

        self.assertEqual(status, cli.EXIT_OK)
        rows = OrbitManager(Settings(threads=1)).expansion_profile(
            GroupAction(FULL_ROTATION), SpaceForm(2), 1.0, cli.parse_floats('10:1000:log', 'radii'))
        body = text.splitlines()[3:]
        self.assertEqual(len(body), 9)
        self.assertEqual([int(line.split(',')[2]) for line in body], [row['count'] for row in rows])
        self.assertEqual(body[0], '10,1,31,{},true'.format(rows[0]['method']))

    def test_packing_checks(self):
        status, text, _ = self._run('packing', '--space', 'euclid', '--dim', '2', '--rho', '1', '--radii', '100,1000',
                                    '--format', 'json')

        self.assertEqual(status, cli.EXIT_OK)
        self.assertEqual(json.loads(text)['checks'],
                         {'disjoint': True, 'candidates_sufficient': True, 'ratio_within_10_percent': True})

    def test_packing_ratio_failure(self):
        status, text, _ = self._run('packing', '--space', 'euclid', '--dim', '2', '--rho', '40', '--radii', '100',
                                    '--format', 'json')

        checks = json.loads(text)['checks']
        self.assertEqual(status, cli.EXIT_CHECK_FAILED)
        self.assertFalse(checks['ratio_within_10_percent'])
        self.assertTrue(checks['disjoint'])

    def test_exhausted_candidates_fail(self):
        with patch.object(cli, 'Settings', return_value=Settings(threads=1, orbit_samples=40)):
            status, text, _ = self._run('packing', '--space', 'euclid', '--dim', '3', '--rho', '0.1', '--radii', '50',
                                        '--format', 'json')

        self.assertEqual(status, cli.EXIT_CHECK_FAILED)
        self.assertFalse(json.loads(text)['checks']['candidates_sufficient'])

    def test_runtime_failure(self):
        def runner(lab, config):
            raise SweepFailureError('no level on the sweep satisfies both inequalities', {'levels': [1.0]})

        with patch.dict(cli.RUNNERS, {'pde': runner}):
            status, text, stderr = self._run('pde')

        self.assertEqual(status, cli.EXIT_RUNTIME)
        self.assertIsNone(text)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])['error'], 'SweepFailureError')

    def test_exit_codes_in_help(self):
        text = cli.build_parser().format_help()

        self.assertIn('2 invalid input', text)
        self.assertIn('3 a computation failed', text)

    def test_reruns_are_identical(self):
        first = self._run('packing', '--space', 'poincare', '--dim', '2', '--rho', '0.5', '--radii', '1,2,3')
        second = self._run('packing', '--space', 'poincare', '--dim', '2', '--rho', '0.5', '--radii', '1,2,3')

        self.assertEqual(first[0], cli.EXIT_OK)
        self.assertEqual(first[1], second[1])

    def test_empty_radii(self):
        status, text, stderr = self._run('packing', '--radii', '')

        self.assertEqual(status, cli.EXIT_INVALID)
        self.assertIsNone(text)
        record = json.loads(stderr.strip().splitlines()[-1])
        self.assertEqual(record['error'], 'ValidationError')
        self.assertEqual(record['message'], "'radii' is empty")

    def test_missing_parameter(self):
        status, _, stderr = self._run('funk', '--dim', '3')

        self.assertEqual(status, cli.EXIT_INVALID)
        record = json.loads(stderr.strip().splitlines()[-1])
        self.assertIn("'p' is required", record['details'])

    def test_unknown_command(self):
        status, _, stderr = self._run('plot')

        self.assertEqual(status, cli.EXIT_INVALID)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])['error'], 'ValidationError')

    def test_config_round_trip(self):
        status, text, _ = self._run('funk', '--dim', '2,3', '--p', '1.5', '--q', '2.5,inf', '--format', 'json')
        config = self._path('config.json')
        with open(config, 'w', encoding='utf-8') as handle:
            json.dump(json.loads(text)['config'], handle)

        again = self._run('funk', '--config', config, '--format', 'json')

        self.assertEqual(again[0], status)
        self.assertEqual(again[1], text)

    def test_config_overrides_flags(self):
        config = self._path('config.json')
        with open(config, 'w', encoding='utf-8') as handle:
            json.dump({'q': [4]}, handle)

        _, text, _ = self._run('funk', '--dim', '3', '--p', '2', '--q', '5', '--config', config, '--format', 'json')

        self.assertEqual(json.loads(text)['config']['q'], [4.0])

    def test_config_unknown_key(self):
        config = self._path('config.json')
        with open(config, 'w', encoding='utf-8') as handle:
            json.dump({'dim': [3], 'colour': 'red'}, handle)

        status, _, stderr = self._run('funk', '--config', config)

        self.assertEqual(status, cli.EXIT_INVALID)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])['details'], ["unknown key 'colour'"])

    def test_config_of_another_command(self):
        config = self._path('config.json')
        with open(config, 'w', encoding='utf-8') as handle:
            json.dump({'command': 'packing'}, handle)

        status, _, _ = self._run('funk', '--config', config)

        self.assertEqual(status, cli.EXIT_INVALID)

    def test_failed_checks(self):
        def runner(lab, config):
            return ['a'], [{'a': 1}], {'passed': True, 'broken': False}

        with patch.dict(cli.RUNNERS, {'funk': runner}):
            status, text, _ = self._run('funk')

        self.assertEqual(status, cli.EXIT_CHECK_FAILED)
        self.assertEqual(text.splitlines()[-1], '1')

    def test_hausdorff_matrix(self):
        status, text, _ = self._run('hausdorff', '--lambdas', '10:1e6:log:6', '--format', 'json')

        document = json.loads(text)
        self.assertEqual(status, cli.EXIT_OK)
        self.assertEqual(len(document['rows']), 6)
        self.assertTrue(document['checks']['length_matches_curve'])
        self.assertTrue(document['checks']['length_dominates'])

    def test_expansion_needs_plane(self):
        status, _, _ = self._run('expansion', '--dim', '3', '--radii', '10')

        self.assertEqual(status, cli.EXIT_INVALID)

    def test_embedding_rejects_pair(self):
        status, _, stderr = self._run('embedding', '--p', '2', '--q', '1')

        self.assertEqual(status, cli.EXIT_INVALID)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])['message'], 'exponent pair is not admissible')

    def test_module_entry_point(self):
        result = subprocess.run([sys.executable, '-m', 'randers_lab', 'funk', '--dim', '3', '--p', '2',
                                 '--q', '3', '--quiet'], stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertTrue(result.stdout.decode('utf-8').startswith('# schema=1\n'))


class FormatTest(unittest.TestCase):

    def test_format_value(self):
        self.assertEqual(cli.format_value(1.0 / 3.0), '0.33333333333333331')
        self.assertEqual(cli.format_value(DIVERGENT), 'DIVERGENT')
        self.assertEqual(cli.format_value(math.inf), 'inf')
        self.assertEqual(cli.format_value(True), 'true')
        self.assertEqual(cli.format_value(7), '7')
        self.assertEqual(cli.format_value(None), '')

    def test_parse_floats(self):
        self.assertEqual(cli.parse_floats('1,2.5,inf', 'q'), [1.0, 2.5, math.inf])
        self.assertEqual(cli.parse_floats('0:1:lin:3', 'x'), [0.0, 0.5, 1.0])
        self.assertEqual(len(cli.parse_floats('1:1000:log', 'x')), 13)
        self.assertEqual(cli.parse_floats(4, 'x'), [4.0])

    def test_bad_ranges(self):
        for text in ('1:2', '2:1:lin', '0:10:log', '1:2:cubic', 'a,b'):
            with self.assertRaises(cli.ValidationError):
                cli.parse_floats(text, 'x')
