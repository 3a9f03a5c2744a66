import math

import numpy as np

from ..base import Base
from ..numerics import sphere_area
from ...errors import InvalidArgumentError


EUCLIDEAN = 'euclidean'
POINCARE_BALL = 'poincare_ball'

CHART_MARGIN = 1e-15


def s_c(c, t):
    """
    Jacobi function of the constant curvature c <= 0; t may be an array.

    :raises: InvalidArgumentError
    """
    if c > 0:
        raise InvalidArgumentError('only non-positive curvature is supported', {'c': c})
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidArgumentError('s_c needs t >= 0', {'t': t.tolist()})
    if c == 0:
        result = t
    else:
        root = math.sqrt(-c)
        result = np.sinh(root * t) / root
    return float(result) if result.ndim == 0 else result


def mobius_add(x, y):
    """Moebius addition of the unit ball; x and y may be stacks of points."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    xx = np.sum(x * x, axis=-1, keepdims=True)
    yy = np.sum(y * y, axis=-1, keepdims=True)
    numerator = (1.0 + 2.0 * xy + yy) * x + (1.0 - xx) * y
    return numerator / (1.0 + 2.0 * xy + xx * yy)


class SpaceForm(Base):
    _fields = ('dim', 'curvature')

    def __init__(self, dim, curvature=0.0):
        """

        :param dim: int dimension d >= 2
        :param curvature: float sectional curvature c <= 0
        """
        if isinstance(dim, bool) or int(dim) != dim or dim < 2:
            raise InvalidArgumentError('dimension must be an integer >= 2', {'dim': dim})
        if not curvature <= 0 or not math.isfinite(curvature):
            raise InvalidArgumentError('curvature must be finite and <= 0', {'curvature': curvature})
        self.dim = int(dim)
        self.curvature = float(curvature)

    @property
    def model(self):
        return EUCLIDEAN if self.curvature == 0 else POINCARE_BALL

    @property
    def sqrt_k(self):
        return math.sqrt(-self.curvature)

    @property
    def base(self):
        return self

    @property
    def beta_sup(self):
        return 0.0

    def origin(self):
        return np.zeros(self.dim)

    def validate_point(self, x, name='x'):
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dim,):
            raise InvalidArgumentError('point has wrong dimension', {name: x.tolist(), 'dim': self.dim})
        if not np.all(np.isfinite(x)):
            raise InvalidArgumentError('point is not finite', {name: x.tolist()})
        if self.model == POINCARE_BALL and np.any(np.sum(x * x, axis=-1) >= 1.0 - CHART_MARGIN):
            raise InvalidArgumentError('point lies outside the Poincare ball', {name: x.tolist()})
        return x

    def distance(self, x, y):
        """Geodesic distance, vectorized over leading axes."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gap = np.linalg.norm(x - y, axis=-1)
        if self.model == EUCLIDEAN:
            return gap
        denominator = np.sqrt((1.0 - np.sum(x * x, axis=-1)) * (1.0 - np.sum(y * y, axis=-1)))
        return 2.0 / self.sqrt_k * np.arcsinh(gap / denominator)

    def radius_of(self, x):
        """Distance from the origin."""
        r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        if self.model == EUCLIDEAN:
            return r
        return 2.0 / self.sqrt_k * np.arctanh(r)

    def chart_radius(self, rho):
        """Chart norm of the points at distance rho from the origin."""
        rho = np.asarray(rho, dtype=float)
        if self.model == EUCLIDEAN:
            return rho
        return np.tanh(0.5 * self.sqrt_k * rho)

    def point_at(self, rho, direction=None):
        direction = self._unit(direction)
        return float(self.chart_radius(rho)) * direction

    def conformal_factor(self, x):
        """Ratio between the metric norm and the chart norm of tangent vectors at x."""
        if self.model == EUCLIDEAN:
            return np.ones(np.shape(x)[:-1])
        rr = np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)
        return 2.0 / (self.sqrt_k * (1.0 - rr))

    def exp(self, base, v):
        """Exponential map; v is given in an orthonormal frame at base."""
        base = np.asarray(base, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.model == EUCLIDEAN:
            return base + v
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
        safe = np.where(norm > 0, norm, 1.0)
        step = np.tanh(0.5 * self.sqrt_k * norm) * v / safe
        return mobius_add(base, step)

    def log(self, base, y):
        base = np.asarray(base, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.model == EUCLIDEAN:
            return y - base
        w = mobius_add(-base, y)
        norm = np.linalg.norm(w, axis=-1, keepdims=True)
        safe = np.where(norm > 0, norm, 1.0)
        return 2.0 / self.sqrt_k * np.arctanh(np.minimum(norm, 1.0 - 1e-16)) * w / safe

    def translate_to_origin(self, x, points):
        """Isometry sending x to the origin, applied to points."""
        if self.model == EUCLIDEAN:
            return np.asarray(points, dtype=float) - np.asarray(x, dtype=float)
        return mobius_add(-np.asarray(x, dtype=float), points)

    # radial structure shared with Randers structures and the Funk model

    def area_element(self, r):
        return sphere_area(self.dim) * np.asarray(s_c(self.curvature, r)) ** (self.dim - 1)

    def density(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def dual_radial(self, r):
        ones = np.ones_like(np.asarray(r, dtype=float))
        return ones, ones

    def riemann_radial(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def radial_distance(self, r):
        """Finsler distance from the centre at radial coordinate r (the metric distance here)."""
        return np.asarray(r, dtype=float)

    def _unit(self, direction):
        if direction is None:
            direction = np.eye(self.dim)[0]
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise InvalidArgumentError('direction must be non-zero', {'direction': direction.tolist()})
        return direction / norm


class MatrixCone(Base):
    """
    Unimodular positive-definite symmetric 2x2 matrices with the affine-invariant distance.
    """
    _fields = ('dim',)

    def __init__(self):
        self.dim = 2

    def origin(self):
        return np.eye(2)

    def point_at(self, s, direction=None):
        """Point at distance s from the identity along the diagonal flat."""
        t = float(s) / math.sqrt(2.0)
        return np.diag([math.exp(t), math.exp(-t)])

    def validate_point(self, x, name='x'):
        x = np.asarray(x, dtype=float)
        if x.shape[-2:] != (2, 2) or not np.allclose(x, np.swapaxes(x, -1, -2), atol=1e-12):
            raise InvalidArgumentError('matrix must be symmetric 2x2', {name: x.tolist()})
        if np.any(x[..., 0, 0] <= 0) or np.any(np.linalg.det(x) <= 0):
            raise InvalidArgumentError('matrix must be positive definite', {name: x.tolist()})
        return x

    def distance(self, x, y):
        """sqrt(ln^2 l1 + ln^2 l2) over the eigenvalues of x^-1 y, vectorized over stacks."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        inverse = np.linalg.inv(x)
        product = inverse @ y
        trace = product[..., 0, 0] + product[..., 1, 1]
        det = np.linalg.det(product)
        root = np.sqrt(np.maximum(trace * trace - 4.0 * det, 0.0))
        high = 0.5 * (trace + root)
        low = det / high
        return np.sqrt(np.log(high) ** 2 + np.log(low) ** 2)

    def radius_of(self, x):
        eigenvalues = np.linalg.eigvalsh(np.asarray(x, dtype=float))
        return np.sqrt(np.sum(np.log(eigenvalues) ** 2, axis=-1))
