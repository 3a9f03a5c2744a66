import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from .errors import DIVERGENT, EvaluationError, LabError, SweepFailureError, ValidationError
from .lab import Lab
from .models.modelspace import SpaceForm
from .models.orbits import GroupAction, MatrixPoint, FULL_ROTATION, PRODUCT_ROTATION
from .models.rearrange import PROFILE_KINDS
from .models.sweep import ordered_map
from .settings import Settings


logger = logging.getLogger(__name__)

SCHEMA = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_RUNTIME = 3

EXIT_CODES_HELP = ('exit status: 0 every check passed, 1 a check failed, 2 invalid input, '
                   '3 a computation failed (no admissible level, non-finite integrand)')

EUCLID = 'euclid'
POINCARE = 'poincare'
SPACES = (EUCLID, POINCARE)

LOG_POINTS_PER_DECADE = 4
LIN_POINTS = 11
CURVE_TOLERANCE = 1e-6
EXPANSION_THRESHOLD = 100.0


# value parsing shared by flags and --config files

def _number(value, name):
    if isinstance(value, bool):
        raise ValidationError("'{}' must be a number".format(name), {name: value})
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ('inf', 'infinity'):
            return math.inf
        try:
            value = float(text)
        except ValueError:
            raise ValidationError("'{}' must be a number".format(name), {name: value},
                                  ["cannot read '{}' as a number".format(text)])
    if not isinstance(value, (int, float)) or math.isnan(value):
        raise ValidationError("'{}' must be a number".format(name), {name: value})
    return float(value)


def _integer(value, name):
    number = _number(value, name)
    if not math.isfinite(number) or int(number) != number:
        raise ValidationError("'{}' must be an integer".format(name), {name: value})
    return int(number)


def _range(text, name):
    parts = text.split(':')
    if len(parts) not in (3, 4) or parts[2] not in ('lin', 'log'):
        raise ValidationError("'{}' must read start:stop:lin|log[:n]".format(name), {name: text})
    start, stop = _number(parts[0], name), _number(parts[1], name)
    mode = parts[2]
    if not (math.isfinite(start) and math.isfinite(stop)) or stop < start:
        raise ValidationError("'{}' needs finite start <= stop".format(name), {name: text})
    if mode == 'log' and not start > 0:
        raise ValidationError("'{}' needs a positive start on a log scale".format(name), {name: text})
    if len(parts) == 4:
        count = _integer(parts[3], name)
    elif mode == 'log':
        count = int(round(LOG_POINTS_PER_DECADE * math.log10(stop / start))) + 1
    else:
        count = LIN_POINTS
    if count < 1:
        raise ValidationError("'{}' needs at least one point".format(name), {name: text})
    if count == 1:
        return [start]
    points = np.geomspace(start, stop, count) if mode == 'log' else np.linspace(start, stop, count)
    return [float(point) for point in points]


def parse_floats(value, name):
    """
    Float list from a JSON list, a single number, 'a,b,c' or 'start:stop:lin|log[:n]'

    :raises: ValidationError
    """
    if isinstance(value, (list, tuple)):
        items = [_number(item, name) for item in value]
    elif isinstance(value, str):
        text = value.strip()
        if ':' in text:
            items = _range(text, name)
        else:
            items = [_number(part, name) for part in text.split(',') if part.strip()]
    else:
        items = [_number(value, name)]
    if not items:
        raise ValidationError("'{}' is empty".format(name), {name: value})
    return items


def parse_ints(value, name):
    return [_integer(item, name) for item in parse_floats(value, name)]


def parse_strings(value, name):
    if isinstance(value, str):
        items = [part.strip() for part in value.split(',') if part.strip()]
    elif isinstance(value, (list, tuple)) and all(isinstance(item, str) for item in value):
        items = list(value)
    else:
        raise ValidationError("'{}' must be a list of names".format(name), {name: value})
    if not items:
        raise ValidationError("'{}' is empty".format(name), {name: value})
    return items


def parse_bool(value, name):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    raise ValidationError("'{}' must be true or false".format(name), {name: value})


def _optional_float(value, name):
    return None if value is None else _number(value, name)


def _text(value, name):
    if not isinstance(value, str):
        raise ValidationError("'{}' must be a string".format(name), {name: value})
    return value


def _problem(value, name):
    if isinstance(value, dict):
        return value
    path = _text(value, name)
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except (OSError, ValueError) as err:
        raise ValidationError('cannot read the problem file', {name: path}, [str(err)])
    if not isinstance(data, dict):
        raise ValidationError('problem file must hold a JSON object', {name: path})
    return data


class Param:
    def __init__(self, name, parse, default=None, help=None, choices=None, flag=False):
        """

        :param name: str config key, exposed as --name
        :param parse: callable (value, name) -> normalized value
        :param default: default before normalization, None when unset
        :param choices: tuple of allowed normalized values
        :param flag: bool store_true switch
        """
        self.name = name
        self.parse = parse
        self.default = default
        self.help = help
        self.choices = choices
        self.flag = flag

    def normalize(self, value):
        if value is None:
            return None
        value = self.parse(value, self.name)
        if self.choices is not None and value not in self.choices:
            raise ValidationError("'{}' must be one of {}".format(self.name, ', '.join(self.choices)),
                                  {self.name: value})
        return value


def _choice(value, name):
    return _text(value, name)


SPACE_PARAMS = [
    Param('space', _choice, EUCLID, 'model space', SPACES),
    Param('dim', _integer, 2, 'dimension'),
    Param('curvature', _optional_float, None, 'curvature, -1 for the Poincare ball when omitted'),
]

COMMANDS = {
    'packing': SPACE_PARAMS + [
        Param('rho', _number, 1.0, 'ball radius'),
        Param('radii', parse_floats, None, 'distances of y from the fixed point'),
        Param('action', _choice, 'full', 'rotation group', ('full', 'product')),
        Param('blocks', parse_ints, None, 'block dimensions of a product rotation'),
    ],
    'expansion': SPACE_PARAMS + [
        Param('rho', _number, 1.0, 'ball radius'),
        Param('radii', parse_floats, None, 'distances of y from the fixed point'),
    ],
    'hausdorff': [
        Param('example', _choice, 'matrix', 'orbit example', ('matrix', 'product')),
        Param('lambdas', parse_floats, '1:1e6:log', 'eigenvalues of diag(l, 1/l)'),
        Param('blocks', parse_ints, '2,2', 'sphere dimensions plus one'),
        Param('samples', _integer, 100, 'random points of the product example'),
        Param('seed', _integer, 0, 'random seed'),
    ],
    'rearrange': SPACE_PARAMS + [
        Param('radius', _number, 1.0, 'radius of the ball'),
        Param('cells', _integer, 1000, 'profile cells'),
        Param('kinds', parse_strings, ','.join(PROFILE_KINDS), 'profile kinds'),
        Param('p', _number, 2.0, 'gradient exponent'),
    ],
    'funk': [
        Param('dim', parse_ints, None, 'dimensions'),
        Param('p', parse_floats, None, 'gradient exponents'),
        Param('q', parse_floats, None, 'integrability exponents, inf allowed'),
        Param('exact', parse_bool, False, 'also integrate the W norm', flag=True),
    ],
    'embedding': SPACE_PARAMS + [
        Param('p', _number, None, 'gradient exponent'),
        Param('q', _number, None, 'integrability exponent, inf allowed'),
        Param('rho', _number, 1.0, 'ball radius'),
        Param('distances', parse_floats, '0', 'distances of the ball centre from the origin'),
    ],
    'pde': [
        Param('problem', _problem, None, 'problem JSON file'),
        Param('lambdas', parse_floats, None, 'lambda grid, defaults to the problem or [0, a_bar]'),
        Param('s0', _number, 1.0, 'height of the test function'),
        Param('measure', parse_bool, True, 'measure sup J by projected ascent'),
        Param('profiles', _text, None, 'directory for one CSV per critical point'),
    ],
}

_GLOBAL_KEYS = ('command', 'tol')


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message, {'prog': self.prog})


def build_parser():
    parser = _Parser(prog='randers-lab', description='Numerical experiments on Randers spaces and orbits.',
                     epilog=EXIT_CODES_HELP)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, params in COMMANDS.items():
        sub = subparsers.add_parser(name, help='{} experiment'.format(name))
        for param in params:
            option = '--' + param.name.replace('_', '-')
            if param.flag:
                sub.add_argument(option, dest=param.name, action='store_true', default=None, help=param.help)
            else:
                sub.add_argument(option, dest=param.name, default=None, help=param.help)
        sub.add_argument('--config', help='JSON file whose keys override the flags')
        sub.add_argument('--output', default='-', help='output file, - for stdout')
        sub.add_argument('--format', default='csv', choices=('csv', 'json'))
        sub.add_argument('--tol', default=None, help='absolute quadrature tolerance')
        sub.add_argument('-v', '--verbose', action='count', default=0)
        sub.add_argument('--quiet', action='store_true')
    return parser


def resolve_config(args):
    """
    Merge defaults, flags and the --config file, in this order of precedence

    :return: dict with 'command', 'tol' and every parameter of the command

    :raises: ValidationError
    """
    params = COMMANDS[args.command]
    values = {param.name: param.default for param in params}
    values['tol'] = None
    for param in params:
        given = getattr(args, param.name)
        if given is not None:
            values[param.name] = given
    if args.tol is not None:
        values['tol'] = args.tol
    if args.config:
        values.update(_load_config(args.config, args.command, params))
    config = {'command': args.command, 'tol': _optional_float(values['tol'], 'tol')}
    for param in params:
        config[param.name] = param.normalize(values[param.name])
    return config


def _load_config(path, command, params):
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except (OSError, ValueError) as err:
        raise ValidationError('cannot read the config file', {'config': path}, [str(err)])
    if not isinstance(data, dict):
        raise ValidationError('config must be a JSON object', {'config': path})
    known = set(_GLOBAL_KEYS) | {param.name for param in params}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError('unknown config keys', {'config': path},
                              ["unknown key '{}'".format(key) for key in unknown])
    if data.get('command', command) != command:
        raise ValidationError('config belongs to another command', {'command': data['command']})
    data.pop('command', None)
    return data


# runs

def _space(config):
    space = config['space']
    curvature = config['curvature']
    if space == EUCLID:
        if curvature not in (None, 0.0):
            raise ValidationError('the Euclidean space is flat', {'curvature': curvature})
        curvature = 0.0
    else:
        curvature = -1.0 if curvature is None else curvature
        if not curvature < 0:
            raise ValidationError('the Poincare ball needs negative curvature', {'curvature': curvature})
    config['curvature'] = curvature
    return SpaceForm(config['dim'], curvature)


def _require(config, *names):
    missing = [name for name in names if config.get(name) is None]
    if missing:
        raise ValidationError('missing parameters', {'missing': missing},
                              ["'{}' is required".format(name) for name in missing])


def run_packing(lab, config):
    _require(config, 'radii')
    space = _space(config)
    if config['action'] == 'product':
        _require(config, 'blocks')
        action = GroupAction(PRODUCT_ROTATION, config['blocks'])
    else:
        action = GroupAction(FULL_ROTATION)
    rho = config['rho']
    rows = lab.orbits.expansion_profile(action, space, rho, config['radii'])
    checks = {
        'disjoint': all(row['disjoint'] for row in rows),
        'candidates_sufficient': not any(row['saturated'] for row in rows),
    }
    if action.kind == FULL_ROTATION and space.dim == 2 and space.curvature == 0:
        checks['ratio_within_10_percent'] = all(abs(row['count'] * rho / (math.pi * row['distance']) - 1.0) <= 0.1
                                                for row in rows if row['distance'] >= EXPANSION_THRESHOLD)
    return ['distance', 'rho', 'count', 'method', 'disjoint'], rows, checks


def run_expansion(lab, config):
    _require(config, 'radii')
    space = _space(config)
    if space.dim != 2:
        raise ValidationError('expansion ratios are defined for rotations of the plane', {'dim': space.dim})
    radii = config['radii']
    if any(not distance > 0 for distance in radii):
        raise ValidationError('distances must be positive', {'radii': radii})
    action = GroupAction(FULL_ROTATION)
    rho = config['rho']
    reports = ordered_map(lambda distance: lab.orbits.packing_count(action, space, space.point_at(distance), rho),
                          radii, lab.settings.threads)
    rows = []
    for distance, report in zip(radii, reports):
        if space.curvature == 0:
            ratio = report.count * rho / (math.pi * distance)
        else:
            ratio = lab.orbits.poincare_ratio(space, report)
        rows.append({'distance': distance, 'rho': rho, 'count': report.count, 'method': report.method,
                     'ratio': ratio})
    ratios = [row['ratio'] for row in rows]
    if space.curvature == 0:
        checks = {'ratio_within_10_percent': all(abs(row['ratio'] - 1.0) <= 0.1 for row in rows
                                                 if row['distance'] >= EXPANSION_THRESHOLD)}
    else:
        checks = {
            'ratio_within_factor_2': all(0.5 <= ratio <= 2.0 for ratio in ratios),
            'ratio_increasing': all(later > earlier for earlier, later in zip(ratios, ratios[1:])),
        }
    return ['distance', 'rho', 'count', 'method', 'ratio'], rows, checks


def run_hausdorff(lab, config):
    if config['example'] == 'matrix':
        rows = []
        for lam in config['lambdas']:
            if not lam > 0:
                raise ValidationError('eigenvalues must be positive', {'lambda': lam})
            y = MatrixPoint.diagonal(lam)
            report = lab.orbits.orbit_hausdorff_matrix(y)
            rows.append({
                'lambda': lam,
                'length': report.length,
                'curve_length': lab.orbits.matrix_curve_length(y),
                'd_p': report.d_p,
                'comparison': math.pi * report.d_p,
                'holds': report.kappa_check,
            })
        checks = {
            'length_matches_curve': all(abs(row['length'] - row['curve_length']) <= CURVE_TOLERANCE * row['length']
                                        for row in rows),
            'length_dominates': all(row['holds'] for row in rows),
        }
        return ['lambda', 'length', 'curve_length', 'd_p', 'comparison', 'holds'], rows, checks

    blocks = config['blocks']
    rng = np.random.default_rng(config['seed'])
    rows = []
    for index in range(config['samples']):
        y = rng.standard_normal(sum(blocks)) * 10.0 ** rng.uniform(-1.0, 2.0)
        report = lab.orbits.orbit_hausdorff_product_spheres(blocks, y)
        rows.append({
            'index': index,
            'norm': float(np.linalg.norm(y)),
            'measure': report.measure,
            'lower_bound': report.lower_bound,
            'm_g': report.m_g,
            'holds': report.holds,
        })
    checks = {'measure_dominates': all(row['holds'] for row in rows)}
    if all(block == 2 for block in blocks):
        checks['m_g_is_one'] = all(row['m_g'] == 1.0 for row in rows)
    return ['index', 'norm', 'measure', 'lower_bound', 'm_g', 'holds'], rows, checks


def run_rearrange(lab, config):
    space = _space(config)
    manager = lab.rearrange
    rows = []
    for kind in config['kinds']:
        u = manager.sample_profile(kind, space, config['radius'], config['cells'])
        star = manager.euclidean_rearrangement(u)
        norms = [manager.norm_preservation_check(u, star, q) for q in (1.0, 2.0, math.inf)]
        polya = manager.polya_szego_check(u, star, config['p'])
        again = manager.euclidean_rearrangement(star)
        rows.append({
            'kind': kind,
            'l1_gap': norms[0].discrepancy,
            'l2_gap': norms[1].discrepancy,
            'linf_gap': norms[2].discrepancy,
            'tolerance': norms[0].tolerance,
            'norms_hold': all(check.holds for check in norms),
            'polya_lhs': polya.lhs,
            'polya_rhs': polya.rhs,
            'polya_holds': polya.holds,
            'idempotence_gap': float(np.max(np.abs(again.values - star.values))),
        })
    checks = {
        'norms_preserved': all(row['norms_hold'] for row in rows),
        'polya_szego': all(row['polya_holds'] for row in rows),
        'idempotent': all(row['idempotence_gap'] <= row['tolerance'] for row in rows),
    }
    columns = ['kind', 'l1_gap', 'l2_gap', 'linf_gap', 'tolerance', 'norms_hold', 'polya_lhs', 'polya_rhs',
               'polya_holds', 'idempotence_gap']
    return columns, rows, checks


def run_funk(lab, config):
    _require(config, 'dim', 'p', 'q')
    verdicts = lab.sobolev.funk_table(config['dim'], config['p'], config['q'], config['exact'])
    rows = []
    for verdict in verdicts:
        row = verdict.row()
        if config['exact']:
            row['w_exact'] = verdict.w_norm_exact
        rows.append(row)
    columns = ['d', 'p', 'q', 'regime', 't', 'w_bound', 'lq_norm', 'fails']
    if config['exact']:
        columns.append('w_exact')
    checks = {'counterexamples_fail': all(row['fails'] for row in rows if row['regime'] != 'none')}
    return columns, rows, checks


def run_embedding(lab, config):
    _require(config, 'p', 'q')
    space = _space(config)
    pair = lab.sobolev.classify_pair(config['p'], config['q'], space.dim)
    if not pair.admissible:
        raise ValidationError('exponent pair is not admissible', {'p': config['p'], 'q': config['q']},
                              [pair.reason])
    rows = lab.sobolev.embedding_sweep(space, config['distances'], config['rho'], pair)
    checks = {'finite_quotients': all(math.isfinite(row['quotient']) and row['quotient'] > 0 for row in rows)}
    return ['distance', 'rho', 'quotient'], rows, checks


def run_pde(lab, config):
    _require(config, 'problem')
    manager = lab.pde
    problem = manager.problem_from_json(config['problem'])
    config['problem'] = problem.to_json()
    s0 = config['s0']
    params = manager.bonanno_parameters(problem, s0=s0, measure=config['measure'])
    lambdas = config['lambdas'] or list(problem.lambdas) or [0.0, params.a_bar]
    config['lambdas'] = lambdas
    reports = manager.multi_start_solve(problem, lambdas, s0=s0)
    tol = lab.settings.pde_gradient_tol
    rows = []
    stable = True
    for position, report in enumerate(reports):
        doubled = manager.grid_doubling_check(problem, report)
        stable = stable and all(row['stable'] for row in doubled)
        for index, profile in enumerate(report.profiles):
            rows.append({
                'lambda': report.lam,
                'index': index,
                'energy': report.energies[index],
                'gradient_norm': report.gradient_norms[index],
                'sup_norm': float(np.max(np.abs(profile.values))),
                'refined_gradient_norm': doubled[index]['gradient_norm'],
                'stable': doubled[index]['stable'],
                'rho0': params.rho0,
                'a_bar': params.a_bar,
            })
            if config['profiles']:
                _write_profile(config['profiles'], position, index, profile)
    witness = manager.coercivity_witness(problem.with_lambda(max(lambdas)))
    checks = {
        'bonanno_inequalities': params.hypotheses_hold,
        'candidate_bound': params.bound_respected,
        'coercive': all(row['grows'] for row in witness),
        'stationary': all(row['gradient_norm'] < tol * (1.0 + abs(row['energy'])) for row in rows),
        'stable_under_doubling': stable,
        'descent_monotone': all(start['monotone'] for report in reports for start in report.starts),
        'multiple_critical_points': any(report.count >= 2 for report in reports),
    }
    columns = ['lambda', 'index', 'energy', 'gradient_norm', 'sup_norm', 'refined_gradient_norm', 'stable',
               'rho0', 'a_bar']
    return columns, rows, checks


def _write_profile(directory, position, index, profile):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, 'lambda{}_point{}.csv'.format(position, index))
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(profile.to_csv())


RUNNERS = {
    'packing': run_packing,
    'expansion': run_expansion,
    'hausdorff': run_hausdorff,
    'rearrange': run_rearrange,
    'funk': run_funk,
    'embedding': run_embedding,
    'pde': run_pde,
}


# output

def format_value(value):
    """CSV cell: floats with 17 significant digits, tokens for DIVERGENT, infinities and booleans."""
    if value is DIVERGENT:
        return 'DIVERGENT'
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return '%.17g' % value
    return str(value)


def to_jsonable(value):
    if value is DIVERGENT:
        return 'DIVERGENT'
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return float(value)
    return value


def render(config, columns, rows, checks, output_format):
    if output_format == 'json':
        document = {'schema': SCHEMA, 'config': config, 'rows': rows, 'checks': checks}
        return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + '\n'
    buffer = io.StringIO()
    buffer.write('# schema={}\n'.format(SCHEMA))
    buffer.write('# config={}\n'.format(json.dumps(to_jsonable(config), sort_keys=True, separators=(',', ':'))))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in columns])
    return buffer.getvalue()


def _configure_logging(verbose, quiet):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s', force=True)


def _error_record(err):
    if isinstance(err, ValidationError):
        return err.record()
    return {
        'error': err.__class__.__name__,
        'message': err.msg,
        'details': [json.dumps(to_jsonable(err.content), sort_keys=True, default=repr)],
    }


def main(argv=None):
    """
    Command line entry point

    :param argv: list of str, defaults to sys.argv[1:]
    :return: int exit status
    """
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose, args.quiet)
        config = resolve_config(args)
        settings = Settings() if config['tol'] is None else Settings(tol=config['tol'])
        columns, rows, checks = RUNNERS[config['command']](Lab(settings), config)
    except LabError as err:
        sys.stderr.write(json.dumps(_error_record(err), sort_keys=True) + '\n')
        if isinstance(err, (SweepFailureError, EvaluationError)):
            return EXIT_RUNTIME
        return EXIT_INVALID

    text = render(config, columns, rows, checks, args.format)
    if args.output == '-':
        sys.stdout.write(text)
    else:
        with open(args.output, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(text)
    failed = sorted(name for name, passed in checks.items() if not passed)
    if failed:
        logger.warning('checks failed: %s', ', '.join(failed))
        return EXIT_CHECK_FAILED
    return EXIT_OK
