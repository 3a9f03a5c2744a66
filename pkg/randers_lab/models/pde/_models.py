import math

import numpy as np

from ..base import Base
from ..modelspace import SpaceForm
from ..numerics import gauss_legendre
from ..randers import RandersStructure, BetaProfile
from ...errors import DegenerateMetricError, InvalidArgumentError


GAUSSIAN = 'gaussian'
INDICATOR = 'indicator'
EXPONENTIAL = 'exponential'

ALPHA_KINDS = (GAUSSIAN, INDICATOR, EXPONENTIAL)

_ALPHA_PARAMS = {
    GAUSSIAN: ('amplitude', 'scale'),
    INDICATOR: ('amplitude', 'radius'),
    EXPONENTIAL: ('amplitude', 'scale'),
}


def _positive(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise InvalidArgumentError("'{}' must be a positive number".format(name), {name: value})
    return float(value)


class Nonlinearity(Base):
    """
    Reference nonlinearity h(s) = s_+^{q-1} for s <= 1 and s^{w-1} for s > 1, continuous at 1,
    with primitive H(s) = s_+^q / q for s <= 1 and 1/q + (s^w - 1)/w beyond.
    """
    _fields = ('w', 'q', 'C')

    def __init__(self, w=1.5, q=None, C=1.0, s0=1.0):
        """

        :param w: float growth exponent, 1 < w < p
        :param q: float exponent at the origin, q > p
        :param C: float growth constant of |h(s)| <= C (1 + |s|^{w-1})
        :param s0: float level with H > 0 on (0, s0]
        """
        self.w = _positive('w', w)
        if q is None:
            raise InvalidArgumentError('the exponent q must be given', {'q': q})
        self.q = _positive('q', q)
        self.C = _positive('C', C)
        self.s0 = _positive('s0', s0)
        if not 1.0 < self.w < self.q:
            raise InvalidArgumentError('need 1 < w < q', {'w': w, 'q': q})

    def h(self, s):
        s = np.asarray(s, dtype=float)
        positive = np.maximum(s, 0.0)
        return np.where(s <= 1.0, positive ** (self.q - 1.0), positive ** (self.w - 1.0))

    def H(self, s):
        s = np.asarray(s, dtype=float)
        positive = np.maximum(s, 0.0)
        return np.where(s <= 1.0, positive ** self.q / self.q,
                        1.0 / self.q + (positive ** self.w - 1.0) / self.w)

    def h_prime(self, s):
        s = np.asarray(s, dtype=float)
        positive = np.maximum(s, 0.0)
        inner = (self.q - 1.0) * positive ** (self.q - 2.0)
        outer = (self.w - 1.0) * np.where(s > 1.0, positive, 1.0) ** (self.w - 2.0)
        return np.where(s <= 0.0, 0.0, np.where(s <= 1.0, inner, outer))

    @property
    def s1(self):
        return 1.0

    def c1(self):
        """sup H(s)/|s|^q over 0 < |s| < s1, measured on a geometric grid down to 1e-8."""
        s = np.geomspace(1e-8, self.s1, 400)
        s = np.concatenate([s, -s])
        return float(np.max(self.H(s) / np.abs(s) ** self.q))

    def c2(self):
        """Constant with H(s) <= C2 |s|^q on the whole line."""
        s1 = self.s1
        return max(self.c1(), self.C * (1.0 + s1 ** (self.w - 1.0)) / s1 ** (self.q - 1.0))

    def check_hypotheses(self):
        """
        Grid checks of the positivity, growth and small-s conditions

        :return: dict name -> bool
        """
        positive = np.linspace(self.s0 / 1000.0, self.s0, 1000)
        wide = np.linspace(-100.0, 100.0, 20001)
        small = np.geomspace(1e-8, 1.0, 400)
        ratios = self.H(np.concatenate([small, -small])) / np.concatenate([small, small]) ** self.q
        return {
            'A1': bool(np.all(self.H(positive) > 0)),
            'A2': bool(np.all(np.abs(self.h(wide)) <= self.C * (1.0 + np.abs(wide) ** (self.w - 1.0)) + 1e-12)),
            'A3': bool(np.all(np.isfinite(ratios)) and float(np.max(ratios)) <= self.c1() * (1.0 + 1e-12)),
        }

    def to_json(self):
        return {'w': self.w, 'q': self.q, 'C': self.C}


class AlphaProfile(Base):
    """Non-negative weight alpha as a function of the Finsler distance to the centre."""
    _fields = ('kind', 'params')

    def __init__(self, kind=GAUSSIAN, params=None):
        if kind not in _ALPHA_PARAMS:
            raise InvalidArgumentError("unknown alpha profile kind '{}'".format(kind), {'kind': kind})
        params = dict(params if params is not None else {'amplitude': 1.0, 'scale': 1.0})
        if set(params) != set(_ALPHA_PARAMS[kind]):
            raise InvalidArgumentError('alpha profile parameters do not match its kind',
                                       {'kind': kind, 'params': params, 'expected': list(_ALPHA_PARAMS[kind])})
        self.kind = kind
        self.params = {name: _positive(name, value) for name, value in params.items()}

    def __call__(self, distance):
        distance = np.asarray(distance, dtype=float)
        amplitude = self.params['amplitude']
        if self.kind == GAUSSIAN:
            return amplitude * np.exp(-(distance / self.params['scale']) ** 2)
        if self.kind == EXPONENTIAL:
            return amplitude * np.exp(-distance / self.params['scale'])
        return np.where(distance <= self.params['radius'], amplitude, 0.0)

    def infimum_within(self, radius):
        """essinf of alpha over the Finsler ball of the given radius; every kind is non-increasing."""
        return float(self(radius))

    def to_json(self):
        return {'kind': self.kind, 'params': dict(self.params)}


class PDEProblem(Base):
    """
    Radial energy E = Phi - lambda J on a Randers structure over the hyperbolic space of
    curvature -kappa^2, truncated at R_max = cutoff / kappa with u(R_max) = 0.
    """
    _fields = ('structure', 'p', 'lam', 'alpha', 'nonlinearity', 'cells', 'cutoff')

    def __init__(self, structure, p, alpha, nonlinearity, lam=0.0, cells=2048, cutoff=12.0, lambdas=()):
        """

        :param structure: RandersStructure over a negatively curved SpaceForm
        :param p: float exponent, larger than the dimension
        :param alpha: AlphaProfile
        :param nonlinearity: Nonlinearity with w < p < q
        :param lam: float lambda >= 0
        :param cells: int radial cells
        :param cutoff: float R_max * kappa
        :param lambdas: sequence of float lambda values for sweeps
        """
        if not isinstance(structure, RandersStructure):
            raise InvalidArgumentError('problems live on a Randers structure', {'structure': repr(structure)})
        if not structure.base.curvature < 0:
            raise InvalidArgumentError('the base space must be negatively curved',
                                       {'curvature': structure.base.curvature})
        if structure.beta_sup >= 1.0:
            raise DegenerateMetricError('sup |beta|_g must stay below 1', {'beta_sup': structure.beta_sup})
        p = _positive('p', p)
        if not p > structure.dim:
            raise InvalidArgumentError('the exponent p must exceed the dimension', {'p': p, 'dim': structure.dim})
        if not nonlinearity.w < p < nonlinearity.q:
            raise InvalidArgumentError('need w < p < q', {'w': nonlinearity.w, 'p': p, 'q': nonlinearity.q})
        if isinstance(lam, bool) or not lam >= 0:
            raise InvalidArgumentError('lambda must be non-negative', {'lambda': lam})
        if isinstance(cells, bool) or int(cells) != cells or cells < 8:
            raise InvalidArgumentError('need at least 8 radial cells', {'cells': cells})
        if any(not value >= 0 for value in lambdas):
            raise InvalidArgumentError('lambda values must be non-negative', {'lambdas': list(lambdas)})
        if alpha.kind == EXPONENTIAL and not 1.0 / alpha.params['scale'] > (structure.dim - 1) * structure.base.sqrt_k:
            raise InvalidArgumentError('exponential alpha is not integrable at this curvature',
                                       {'scale': alpha.params['scale'], 'kappa': structure.base.sqrt_k})
        self.structure = structure
        self.p = p
        self.alpha = alpha
        self.nonlinearity = nonlinearity
        self.lam = float(lam)
        self.cells = int(cells)
        self.cutoff = _positive('cutoff', cutoff)
        self.lambdas = tuple(float(value) for value in lambdas)
        self._discretization = None

    @property
    def dim(self):
        return self.structure.dim

    @property
    def kappa(self):
        return self.structure.base.sqrt_k

    @property
    def beta_sup(self):
        return self.structure.beta_sup

    @property
    def radius(self):
        return self.cutoff / self.kappa

    @property
    def grid(self):
        return np.linspace(0.0, self.radius, self.cells + 1)

    @property
    def discretization(self):
        if self._discretization is None:
            self._discretization = RadialDiscretization(self)
        return self._discretization

    def with_lambda(self, lam):
        return self._copy(lam=lam)

    def with_cells(self, cells):
        return self._copy(cells=cells)

    def _copy(self, **changes):
        values = {
            'structure': self.structure, 'p': self.p, 'alpha': self.alpha, 'nonlinearity': self.nonlinearity,
            'lam': self.lam, 'cells': self.cells, 'cutoff': self.cutoff, 'lambdas': self.lambdas,
        }
        values.update(changes)
        return PDEProblem(**values)

    def to_json(self):
        return {
            'dim': self.dim,
            'kappa': self.kappa,
            'p': self.p,
            'lambda': self.lam,
            'lambdas': list(self.lambdas),
            'alpha': self.alpha.to_json(),
            'beta_profile': self.structure.beta_profile.to_json(),
            'beta_sup': self.beta_sup,
            'nonlinearity': self.nonlinearity.to_json(),
            'grid': {'cells': self.cells, 'cutoff': self.cutoff},
        }

    @classmethod
    def from_json(cls, data, cells=2048, cutoff=12.0):
        """
        :param data: dict decoded problem file
        :param cells: int default for a missing grid.cells
        :param cutoff: float default for a missing grid.cutoff
        :return: PDEProblem

        :raises: InvalidArgumentError
        """
        if not isinstance(data, dict):
            raise InvalidArgumentError('problem must be a JSON object', {'data': data})
        known = {'dim', 'kappa', 'p', 'lambda', 'lambdas', 'alpha', 'beta_profile', 'beta_sup', 'nonlinearity',
                 'grid'}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidArgumentError('unknown problem keys', {'keys': unknown})
        try:
            kappa = _positive('kappa', data['kappa'])
            p = data['p']
            beta = data.get('beta_profile', {'kind': 'zero', 'params': {}})
            structure = RandersStructure(SpaceForm(data['dim'], -kappa * kappa),
                                         BetaProfile(beta['kind'], beta.get('params', {})), data.get('beta_sup'))
            shape = dict(data.get('nonlinearity', {}))
            nonlinearity = Nonlinearity(shape.get('w', 1.5), shape.get('q', p + 1.0), shape.get('C', 1.0))
            alpha_data = data.get('alpha', {'kind': GAUSSIAN, 'params': {'amplitude': 1.0, 'scale': 1.0}})
            alpha = AlphaProfile(alpha_data['kind'], alpha_data.get('params'))
            grid = data.get('grid', {})
            return cls(structure, p, alpha, nonlinearity, data.get('lambda', 0.0),
                       grid.get('cells', cells), grid.get('cutoff', cutoff), data.get('lambdas', ()))
        except (KeyError, TypeError, AttributeError) as err:
            raise InvalidArgumentError('malformed problem: {}'.format(err), {'data': data})


class RadialDiscretization:
    """
    Piecewise-linear radial elements on the problem grid. The unknowns are u_0 .. u_{N-1};
    u_N = 0 is imposed at the cutoff.
    """

    def __init__(self, problem: PDEProblem, order=4):
        structure = problem.structure
        p = problem.p
        self.p = p
        self.grid = problem.grid
        self.h = float(self.grid[1] - self.grid[0])
        nodes, weights = gauss_legendre(order).mapped(self.grid[:-1], self.grid[1:])
        area = structure.area_element(nodes)
        density = structure.density(nodes)
        plus, minus = structure.dual_radial(nodes)
        riemann = structure.riemann_radial(nodes)
        finsler_volume = weights * area * density
        riemann_volume = weights * area
        self.k_plus = np.sum(finsler_volume * plus ** p, axis=1)
        self.k_minus = np.sum(finsler_volume * minus ** p, axis=1)
        self.k_riemann = np.sum(riemann_volume * riemann ** p, axis=1)
        right = (nodes - self.grid[:-1, None]) / self.h
        left = 1.0 - right
        self.mass = self._lump(finsler_volume, left, right)[:-1]
        self.riemann_mass = self._lump(riemann_volume, left, right)[:-1]
        self.distance = structure.radial_distance(self.grid)
        self.alpha = problem.alpha(self.distance)[:-1]
        self.alpha_mass = self.mass * self.alpha
        self.alpha_l1 = float(np.sum(self.alpha_mass))

    @staticmethod
    def _lump(volume, left, right):
        size = volume.shape[0] + 1
        mass = np.zeros(size)
        mass[:-1] += np.sum(volume * left, axis=1)
        mass[1:] += np.sum(volume * right, axis=1)
        return mass

    def full(self, u):
        """Unknown vector extended by the boundary value."""
        return np.append(np.asarray(u, dtype=float), 0.0)

    def slopes(self, u):
        return np.diff(self.full(u)) / self.h

    def dual_weights(self, slopes):
        return np.where(slopes >= 0, self.k_plus, self.k_minus)


class EnergyValues(Base):
    _fields = ('phi', 'j', 'energy')

    def __init__(self, phi, j, energy):
        self.phi = phi
        self.j = j
        self.energy = energy


class BonannoParameters(Base):
    _fields = ('rho0', 'a_bar', 'interval_end')

    def __init__(self, rho0, a_bar, phi_u1, j_u1, analytic_sup, c_inf, coercivity, c2, alpha_l1, sweep,
                 bound_respected=True):
        """

        :param rho0: float selected level
        :param a_bar: float right end of the lambda interval
        :param phi_u1: float Phi of the test function
        :param j_u1: float J of the test function
        :param analytic_sup: float bound on sup{J : Phi <= rho0}
        :param c_inf: float measured L^inf / W^{1,p}_g constant
        :param coercivity: float c(d, a, p, kappa)
        :param c2: float constant with H(s) <= C2 |s|^q
        :param alpha_l1: float |alpha|_{L^1}
        :param sweep: list of dict rows, one per swept level
        :param bound_respected: bool every ascent candidate obeys J <= C2 |alpha|_1 c_inf^q |u|^q
        """
        self.rho0 = rho0
        self.a_bar = a_bar
        self.interval_end = a_bar
        self.phi_u1 = phi_u1
        self.j_u1 = j_u1
        self.analytic_sup = analytic_sup
        self.c_inf = c_inf
        self.coercivity = coercivity
        self.c2 = c2
        self.alpha_l1 = alpha_l1
        self.sweep = sweep
        self.bound_respected = bound_respected

    @property
    def hypotheses_hold(self):
        """Both strict inequalities, evaluated as numbers."""
        return self.rho0 < self.phi_u1 and self.analytic_sup / self.rho0 < self.j_u1 / self.phi_u1

    def to_json(self):
        return {
            'rho0': self.rho0,
            'a_bar': self.a_bar,
            'phi_u1': self.phi_u1,
            'j_u1': self.j_u1,
            'analytic_sup': self.analytic_sup,
            'c_inf': self.c_inf,
            'coercivity': self.coercivity,
            'c2': self.c2,
            'alpha_l1': self.alpha_l1,
            'hypotheses_hold': self.hypotheses_hold,
            'bound_respected': self.bound_respected,
        }


class CriticalPointReport(Base):
    _fields = ('lam', 'energies', 'gradient_norms')

    def __init__(self, lam, profiles, energies, gradient_norms, distinct, starts):
        """

        :param lam: float lambda
        :param profiles: list of RadialProfile, lowest energy first
        :param energies: list of float
        :param gradient_norms: list of float
        :param distinct: np.ndarray bool matrix, True where two profiles differ in sup norm
        :param starts: list of dict per-start outcome
        """
        self.lam = lam
        self.profiles = profiles
        self.energies = energies
        self.gradient_norms = gradient_norms
        self.distinct = distinct
        self.starts = starts

    @property
    def count(self):
        return len(self.profiles)

    def to_json(self):
        return {
            'lambda': self.lam,
            'count': self.count,
            'energies': list(self.energies),
            'gradient_norms': list(self.gradient_norms),
            'sup_norms': [float(np.max(np.abs(profile.values))) for profile in self.profiles],
            'distinct': np.asarray(self.distinct).tolist(),
            'starts': self.starts,
        }
