import logging
import math
from typing import Optional

import numpy as np

from ._models import FunkModel, RandersStructure
from ...errors import DegenerateMetricError, InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)


def _dual_parts(metric_data, alpha):
    _, inverse, beta = metric_data
    alpha = np.asarray(alpha, dtype=float)
    beta_sharp = inverse @ beta
    beta_sq = float(beta @ beta_sharp)
    mixed = float(alpha @ beta_sharp)
    alpha_sq = float(alpha @ inverse @ alpha)
    return inverse, beta_sharp, beta_sq, mixed, alpha_sq


class RandersManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()

    def finsler_norm(self, F, x, y):
        """
        F(x, y) for a tangent vector y in chart coordinates

        :raises: InvalidArgumentError
        """
        x = F.validate_point(x)
        y = np.asarray(y, dtype=float)
        if isinstance(F, FunkModel):
            return float(F.norm(x, y))
        metric, _, beta = F.metric_data(x)
        return float(math.sqrt(max(float(y @ metric @ y), 0.0)) + beta @ y)

    def co_norm(self, F, x, alpha):
        """Riemannian norm |alpha|_g of a covector."""
        x = F.validate_point(x)
        _, inverse, _ = F.metric_data(x)
        alpha = np.asarray(alpha, dtype=float)
        return math.sqrt(max(float(alpha @ inverse @ alpha), 0.0))

    def beta_norm(self, F, x):
        x = F.validate_point(x)
        return float(F.beta_norm(x))

    def polar_transform(self, F, x, alpha):
        """
        Co-metric F*(x, alpha) = sup_{y != 0} alpha(y) / F(x, y) in closed form

        :raises: DegenerateMetricError
        """
        x = F.validate_point(x)
        _, _, beta_sq, mixed, alpha_sq = _dual_parts(F.metric_data(x), alpha)
        gap = 1.0 - beta_sq
        if gap <= 0:
            raise DegenerateMetricError('|beta|_g must stay below 1', {'x': x.tolist(), 'beta_norm': math.sqrt(beta_sq)})
        return (math.sqrt(max(mixed * mixed + gap * alpha_sq, 0.0)) - mixed) / gap

    def finsler_gradient(self, F, x, du):
        """
        Legendre transform of du: the derivative of F*(x, .)^2 / 2 at du.

        :return: np.ndarray tangent vector in chart coordinates
        """
        x = F.validate_point(x)
        du = np.asarray(du, dtype=float)
        if not np.any(du):
            return np.zeros_like(du)
        inverse, beta_sharp, beta_sq, mixed, alpha_sq = _dual_parts(F.metric_data(x), du)
        gap = 1.0 - beta_sq
        if gap <= 0:
            raise DegenerateMetricError('|beta|_g must stay below 1', {'x': x.tolist()})
        root = math.sqrt(max(mixed * mixed + gap * alpha_sq, 0.0))
        dual = (root - mixed) / gap
        derivative = ((mixed * beta_sharp + gap * (inverse @ du)) / root - beta_sharp) / gap
        return dual * derivative

    def reversibility(self, F, x):
        b = self.beta_norm(F, x)
        if b >= 1.0:
            return math.inf
        return (1.0 + b) / (1.0 - b)

    def uniformity(self, F, x):
        b = self.beta_norm(F, x)
        return ((1.0 - b) / (1.0 + b)) ** 2

    def global_reversibility(self, F):
        """Supremum of r_F over the radial sample set, infinite for the Funk model."""
        if isinstance(F, FunkModel):
            return math.inf
        b = float(np.max(F.beta_profile.magnitude(self._sample_radii())))
        return (1.0 + b) / (1.0 - b)

    def global_uniformity(self, F):
        if isinstance(F, FunkModel):
            return 0.0
        b = float(np.max(F.beta_profile.magnitude(self._sample_radii())))
        return ((1.0 - b) / (1.0 + b)) ** 2

    def volume_density(self, F, x):
        """Factor (1 - |beta|^2)^{(d+1)/2} between the Hausdorff volume of F and dv_g."""
        b = self.beta_norm(F, x)
        return (1.0 - b * b) ** ((F.dim + 1) / 2.0)

    def funk_distance(self, d, x):
        """
        d_F(0, x) = -ln(1 - |x|) in the Funk model

        :raises: InvalidArgumentError
        """
        x = FunkModel(d).validate_point(x)
        return -math.log1p(-float(np.linalg.norm(x)))

    def finsler_distance(self, F, x, y):
        x = F.validate_point(x, 'x')
        y = F.validate_point(y, 'y')
        return float(F.distance(x, y))

    def eikonal_residual(self, F, base, x):
        """
        |F*(x, D d_F(base, x)) - 1| with the differential taken by central differences

        :raises: InvalidArgumentError
        """
        base = F.validate_point(base, 'base')
        x = F.validate_point(x, 'x')
        if np.array_equal(base, x):
            raise InvalidArgumentError('distance is not differentiable at its base point', {'x': x.tolist()})
        h = self._settings.fd_step * max(1.0, float(np.linalg.norm(x)))
        differential = np.empty(F.dim)
        for axis in range(F.dim):
            step = np.zeros(F.dim)
            step[axis] = h
            differential[axis] = (F.distance(base, x + step) - F.distance(base, x - step)) / (2.0 * h)
        return abs(self.polar_transform(F, x, differential) - 1.0)

    def to_json(self, F: RandersStructure):
        return F.to_json()

    def from_json(self, data):
        return RandersStructure.from_json(data)

    def _sample_radii(self):
        count = self._settings.reversibility_samples
        return np.concatenate(([0.0], np.geomspace(1e-3, 1e3, count - 1)))
