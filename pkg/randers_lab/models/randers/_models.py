import math

import numpy as np

from ..base import Base
from ..modelspace import SpaceForm, EUCLIDEAN
from ..numerics import sphere_area
from ...errors import DegenerateMetricError, InvalidArgumentError


BETA_ZERO = 'zero'
BETA_CONSTANT = 'constant'
BETA_TANH = 'tanh'

BETA_KINDS = (BETA_ZERO, BETA_CONSTANT, BETA_TANH)

_BETA_PARAMS = {
    BETA_ZERO: (),
    BETA_CONSTANT: ('a',),
    BETA_TANH: ('a', 'scale'),
}


def _log_cosh(z):
    z = np.abs(z)
    return z + np.log1p(np.exp(-2.0 * z)) - math.log(2.0)


class BetaProfile(Base):
    """
    Radial magnitude b(rho) of the 1-form beta = b(rho) d rho, rho the distance to the origin.
    """
    _fields = ('kind', 'params')

    def __init__(self, kind=BETA_ZERO, params=None):
        """

        :param kind: str one of BETA_KINDS
        :param params: dict 'a' for constant, 'a' and 'scale' for tanh
        """
        params = dict(params or {})
        if kind not in _BETA_PARAMS:
            raise InvalidArgumentError("unknown beta profile kind '{}'".format(kind), {'kind': kind})
        expected = set(_BETA_PARAMS[kind])
        if set(params) != expected:
            raise InvalidArgumentError('beta profile parameters do not match its kind',
                                       {'kind': kind, 'params': params, 'expected': sorted(expected)})
        for name, value in params.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidArgumentError('beta profile parameters must be finite numbers', {name: value})
        if 'a' in params:
            if params['a'] < 0:
                raise InvalidArgumentError('beta magnitude must be non-negative', params)
            if params['a'] >= 1:
                raise DegenerateMetricError('beta magnitude must stay below 1', params)
        if 'scale' in params and params['scale'] <= 0:
            raise InvalidArgumentError('tanh scale must be positive', params)
        self.kind = kind
        self.params = {name: float(value) for name, value in params.items()}

    @property
    def sup(self):
        return self.params.get('a', 0.0)

    def magnitude(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == BETA_ZERO:
            return np.zeros_like(rho)
        if self.kind == BETA_CONSTANT:
            return np.where(rho > 0, self.params['a'], 0.0)
        return self.params['a'] * np.tanh(rho / self.params['scale'])

    def primitive(self, rho):
        """B(rho) with B(0) = 0 and B' = b."""
        rho = np.asarray(rho, dtype=float)
        if self.kind == BETA_ZERO:
            return np.zeros_like(rho)
        if self.kind == BETA_CONSTANT:
            return self.params['a'] * rho
        scale = self.params['scale']
        return self.params['a'] * scale * _log_cosh(rho / scale)

    def to_json(self):
        return {'kind': self.kind, 'params': dict(self.params)}


class RandersStructure(Base):
    """
    F(x, y) = |y|_g + beta_x(y) over a space form, beta exact and radial.
    Points and tangent vectors are given in the chart of the base space.
    """
    _fields = ('base', 'beta_profile', 'beta_sup')

    def __init__(self, base, beta_profile=None, beta_sup=None):
        """

        :param base: SpaceForm supplying g
        :param beta_profile: BetaProfile, zero when omitted
        :param beta_sup: float declared sup of |beta|_g, defaults to the profile's bound
        """
        if not isinstance(base, SpaceForm):
            raise InvalidArgumentError('Randers structures live over a SpaceForm', {'base': repr(base)})
        beta_profile = beta_profile if beta_profile is not None else BetaProfile()
        declared = beta_profile.sup if beta_sup is None else float(beta_sup)
        if not beta_profile.sup <= declared <= 1.0:
            raise InvalidArgumentError('beta_sup must bound the profile and lie in [0, 1]',
                                       {'beta_sup': beta_sup, 'profile_sup': beta_profile.sup})
        self.base = base
        self.beta_profile = beta_profile
        self.beta_sup = declared

    @property
    def dim(self):
        return self.base.dim

    def validate_point(self, x, name='x'):
        return self.base.validate_point(x, name)

    def beta_norm(self, x):
        return self.beta_profile.magnitude(self.base.radius_of(x))

    def metric_data(self, x):
        """
        Chart data at x: (A, A^-1, beta) with g_x(y, y) = y.A.y and beta_x(y) = beta.y.
        """
        x = np.asarray(x, dtype=float)
        lam = float(self.base.conformal_factor(x))
        r = float(np.linalg.norm(x))
        identity = np.eye(self.dim)
        beta = np.zeros(self.dim)
        if r > 0:
            beta = float(self.beta_norm(x)) * lam * x / r
        return lam * lam * identity, identity / (lam * lam), beta

    def distance(self, x, y):
        """d_F(x, y) = d_g(x, y) + B(rho(y)) - B(rho(x)) because beta = dB."""
        primitive = self.beta_profile.primitive
        return (self.base.distance(x, y) + primitive(self.base.radius_of(y))
                - primitive(self.base.radius_of(x)))

    def to_json(self):
        return {
            'dim': self.dim,
            'curvature': self.base.curvature,
            'beta_profile': self.beta_profile.to_json(),
            'beta_sup': self.beta_sup,
        }

    @classmethod
    def from_json(cls, data):
        try:
            base = SpaceForm(data['dim'], data['curvature'])
            profile = data['beta_profile']
            beta_profile = BetaProfile(profile['kind'], profile.get('params', {}))
            return cls(base, beta_profile, data.get('beta_sup'))
        except (KeyError, TypeError) as err:
            raise InvalidArgumentError('malformed Randers structure: {}'.format(err), {'data': data})

    # radial structure: the profile coordinate is the g-distance to the origin

    def area_element(self, r):
        return self.base.area_element(r)

    def density(self, r):
        b = self.beta_profile.magnitude(r)
        return (1.0 - b * b) ** ((self.dim + 1) / 2.0)

    def dual_radial(self, r):
        """F* of +d rho and of -d rho."""
        b = self.beta_profile.magnitude(r)
        return 1.0 / (1.0 + b), 1.0 / (1.0 - b)

    def riemann_radial(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def radial_distance(self, r):
        return np.asarray(r, dtype=float) + self.beta_profile.primitive(r)


class FunkModel(Base):
    """
    Funk metric on the open unit ball,
    F(x, y) = (sqrt(|y|^2 - (|x|^2 |y|^2 - <x, y>^2)) + <x, y>) / (1 - |x|^2).
    """
    _fields = ('dim',)

    def __init__(self, dim):
        if isinstance(dim, bool) or int(dim) != dim or dim < 2:
            raise InvalidArgumentError('dimension must be an integer >= 2', {'dim': dim})
        self.dim = int(dim)

    @property
    def beta_sup(self):
        return 1.0

    @property
    def base(self):
        return self

    @property
    def model(self):
        return EUCLIDEAN

    def validate_point(self, x, name='x'):
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dim,) or not np.all(np.isfinite(x)):
            raise InvalidArgumentError('point has wrong dimension', {name: x.tolist(), 'dim': self.dim})
        if np.any(np.sum(x * x, axis=-1) >= 1.0):
            raise InvalidArgumentError('point lies outside the unit ball', {name: x.tolist()})
        return x

    def beta_norm(self, x):
        return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)

    def metric_data(self, x):
        x = np.asarray(x, dtype=float)
        gap = 1.0 - float(np.dot(x, x))
        outer = np.outer(x, x)
        identity = np.eye(self.dim)
        metric = identity / gap + outer / (gap * gap)
        inverse = gap * (identity - outer)
        return metric, inverse, x / gap

    def norm(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        xx = np.sum(x * x, axis=-1)
        yy = np.sum(y * y, axis=-1)
        xy = np.sum(x * y, axis=-1)
        return (np.sqrt(np.maximum(yy - (xx * yy - xy * xy), 0.0)) + xy) / (1.0 - xx)

    def distance(self, x, y):
        """ln(|x - a| / |y - a|) with a the boundary point hit by the ray from x through y."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        step = y - x
        length = float(np.linalg.norm(step))
        if length == 0.0:
            return 0.0
        u = step / length
        xu = float(np.dot(x, u))
        exit_time = -xu + math.sqrt(xu * xu + 1.0 - float(np.dot(x, x)))
        return math.log(exit_time / (exit_time - length))

    def origin(self):
        return np.zeros(self.dim)

    def point_at(self, r, direction=None):
        direction = np.eye(self.dim)[0] if direction is None else np.asarray(direction, dtype=float)
        return float(r) * direction / np.linalg.norm(direction)

    def radius_of(self, x):
        return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)

    # radial structure: the profile coordinate is the Euclidean radius

    def area_element(self, r):
        r = np.asarray(r, dtype=float)
        return sphere_area(self.dim) * r ** (self.dim - 1) * (1.0 - r * r) ** (-(self.dim + 1) / 2.0)

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return (1.0 - r * r) ** ((self.dim + 1) / 2.0)

    def dual_radial(self, r):
        r = np.asarray(r, dtype=float)
        return 1.0 - r, 1.0 + r

    def riemann_radial(self, r):
        r = np.asarray(r, dtype=float)
        return 1.0 - r * r

    def radial_distance(self, r):
        return -np.log1p(-np.asarray(r, dtype=float))
