import logging
import math
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from ._models import SpaceForm, EUCLIDEAN, s_c
from ..numerics import NumericsManager, gauss_legendre, unit_ball_volume, sphere_area
from ...errors import InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)

PANEL_ORDER = 32


class ModelSpaceManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()
        self._numerics = None  # type: Optional[NumericsManager]

    @property
    def numerics(self) -> NumericsManager:
        """Get numerics manager"""
        if self._numerics is None:
            self._numerics = NumericsManager(self._settings)

        return self._numerics

    def s_c(self, c, t):
        return s_c(c, t)

    def comparison_volume(self, c, d, rho):
        """
        Volume of the ball of radius rho in the d-dimensional space form of curvature c.
        rho may be an array.
        """
        if c > 0:
            raise InvalidArgumentError('only non-positive curvature is supported', {'c': c})
        if isinstance(d, bool) or int(d) != d or d < 2:
            raise InvalidArgumentError('dimension must be an integer >= 2', {'d': d})
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0):
            raise InvalidArgumentError('radius must be positive', {'rho': rho.tolist()})
        d = int(d)
        if c == 0:
            volume = unit_ball_volume(d) * rho ** d
        else:
            volume = sphere_area(d) * self._sinh_power_integral(c, d - 1, rho)
        return float(volume) if volume.ndim == 0 else volume

    def ball_volume(self, space: SpaceForm, rho):
        """Volume of a metric ball of radius rho in the model."""
        return self.comparison_volume(space.curvature, space.dim, rho)

    def area_element(self, space: SpaceForm, r):
        return space.area_element(r)

    def geodesic_distance(self, space: SpaceForm, x, y):
        """
        :raises: InvalidArgumentError
        """
        x = space.validate_point(x, 'x')
        y = space.validate_point(y, 'y')
        return float(space.distance(x, y))

    def pairwise_distances(self, space: SpaceForm, X, Y=None):
        """Distance matrix between two point sets."""
        X = np.atleast_2d(space.validate_point(X, 'X'))
        Y = X if Y is None else np.atleast_2d(space.validate_point(Y, 'Y'))
        gaps = cdist(X, Y)
        if space.model == EUCLIDEAN:
            return gaps
        scale = np.sqrt(np.outer(1.0 - np.sum(X * X, axis=1), 1.0 - np.sum(Y * Y, axis=1)))
        return 2.0 / space.sqrt_k * np.arcsinh(gaps / scale)

    def exp_log_maps(self, space: SpaceForm, base):
        """
        Exponential map at base and its inverse. Tangent vectors are expressed in an orthonormal
        frame, so |log(y)| is the distance from base to y.

        :return: tuple (exp, log) of callables
        """
        base = space.validate_point(base, 'base')

        def exp(v):
            v = np.asarray(v, dtype=float)
            if v.shape[-1:] != (space.dim,):
                raise InvalidArgumentError('tangent vector has wrong dimension', {'v': v.tolist()})
            return space.exp(base, v)

        def log(y):
            y = space.validate_point(y, 'y')
            return space.log(base, y)

        return exp, log

    def croke_constant(self, d):
        """
        Dimensional constant of the Polya-Szego inequality on Hadamard manifolds.

        :param d: int dimension >= 2
        :return: float
        """
        if isinstance(d, bool) or int(d) != d or d < 2:
            raise InvalidArgumentError('dimension must be an integer >= 2', {'d': d})
        d = int(d)
        if d == 2:
            return 1.0
        exponent = d / (d - 2.0)

        def integrand(t):
            return np.clip(np.cos(t), 0.0, None) ** exponent * np.sin(t) ** (d - 2)

        inner = self.numerics.adaptive_integrate(integrand, 0.0, math.pi / 2.0).value
        return ((d * unit_ball_volume(d)) ** (1.0 - 1.0 / d)
                * ((d - 1) * unit_ball_volume(d - 1) * inner) ** (2.0 / d - 1.0))

    def polya_szego_factor(self, d):
        """C(d) / (d * omega_d^{1/d})"""
        return self.croke_constant(d) / (d * unit_ball_volume(d) ** (1.0 / d))

    def bishop_gromov_ratio(self, space: SpaceForm, x, rho, reference_curvature=None):
        """
        Vol(B(x, rho)) / V_{c,d}(rho). The numerator is integrated in the conformal chart after
        moving x to the origin; c defaults to the curvature of the space.
        """
        x = space.validate_point(x, 'x')
        if not rho > 0:
            raise InvalidArgumentError('radius must be positive', {'rho': rho})
        c = space.curvature if reference_curvature is None else reference_curvature
        return self.chart_ball_volume(space, x, rho) / self.comparison_volume(c, space.dim, rho)

    def chart_ball_volume(self, space: SpaceForm, x, rho):
        """Volume of B(x, rho) as the chart integral of the Riemannian volume element."""
        x = space.validate_point(x, 'x')
        d = space.dim
        if space.model == EUCLIDEAN:
            return unit_ball_volume(d) * rho ** d
        # the Moebius translation x -> 0 is an isometry, so the ball becomes B(0, rho)
        radius = float(space.chart_radius(rho))
        factor = (2.0 / space.sqrt_k) ** d

        def integrand(r):
            return factor * r ** (d - 1) / (1.0 - r * r) ** d

        return sphere_area(d) * self.numerics.adaptive_integrate(integrand, 0.0, radius).value

    def volume_sandwich(self, space: SpaceForm, radii, c_lower, c_upper):
        """
        Compare Vol(B(x, rho)) with the space forms of curvature c_lower <= curvature <= c_upper.
        More negative curvature carries more volume, so V_{c_upper} <= Vol <= V_{c_lower}.

        :return: list of dict rows
        """
        if not c_lower <= space.curvature <= c_upper <= 0:
            raise InvalidArgumentError('need c_lower <= curvature <= c_upper <= 0',
                                       {'c_lower': c_lower, 'c_upper': c_upper})
        rows = []
        origin = space.origin()
        for rho in radii:
            volume = self.chart_ball_volume(space, origin, rho)
            small = self.comparison_volume(c_upper, space.dim, rho)
            large = self.comparison_volume(c_lower, space.dim, rho)
            slack = 1e-9 * large
            rows.append({
                'rho': float(rho),
                'lower': small,
                'volume': volume,
                'upper': large,
                'holds': small - slack <= volume <= large + slack,
            })
        return rows

    def _sinh_power_integral(self, c, power, rho):
        # integral of s_c(t)^power over [0, rho], panels sized to the growth rate
        root = math.sqrt(-c)
        rule = gauss_legendre(PANEL_ORDER)
        flat = np.atleast_1d(rho)
        result = np.empty_like(flat)
        for index, upper in enumerate(flat):
            panels = max(1, int(math.ceil(upper * root * power / 8.0)))
            edges = np.linspace(0.0, upper, panels + 1)
            nodes, weights = rule.mapped(edges[:-1], edges[1:])
            result[index] = np.sum(weights * (np.sinh(root * nodes) / root) ** power)
        return result.reshape(np.shape(rho))
