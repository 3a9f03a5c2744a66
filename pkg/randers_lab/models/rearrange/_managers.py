import logging
import math
from typing import Optional

import numpy as np

from ._models import (RadialProfile, LevelSetTable, NormCheck, PolyaSzegoCheck, TENT, BUMP, PLATEAU, TWO_PEAK,
                      PROFILE_KINDS)
from ..modelspace import ModelSpaceManager, SpaceForm
from ..numerics import gauss_legendre, unit_ball_volume
from ...errors import InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)


def _riemannian_space(ambient):
    if isinstance(ambient, SpaceForm):
        return ambient
    base = getattr(ambient, 'base', None)
    if isinstance(base, SpaceForm):
        return base
    raise InvalidArgumentError('rearrangement needs a space form or a Randers structure over one',
                               {'ambient': repr(ambient)})


class RearrangeManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()
        self._modelspace = None  # type: Optional[ModelSpaceManager]

    @property
    def modelspace(self) -> ModelSpaceManager:
        """Get model space manager"""
        if self._modelspace is None:
            self._modelspace = ModelSpaceManager(self._settings)

        return self._modelspace

    def tolerance(self, cells):
        """Grid tolerance, declared at the reference resolution and scaled as O(1/N)."""
        return (self._settings.rearrangement_tolerance
                * self._settings.rearrangement_reference_cells / float(cells))

    def sample_profile(self, kind, ambient, radius, cells, height=1.0):
        """
        Generated test profile on [0, radius] vanishing at the rim

        :param kind: str one of PROFILE_KINDS
        :return: RadialProfile
        """
        if kind not in PROFILE_KINDS:
            raise InvalidArgumentError("unknown profile kind '{}'".format(kind), {'kind': kind})
        if not radius > 0 or not height > 0 or int(cells) != cells or cells < 2:
            raise InvalidArgumentError('profile needs radius, height > 0 and at least 2 cells',
                                       {'radius': radius, 'height': height, 'cells': cells})
        grid = np.linspace(0.0, radius, int(cells) + 1)
        x = grid / radius
        if kind == TENT:
            values = 1.0 - x
        elif kind == BUMP:
            values = (1.0 - x * x) ** 2
        elif kind == PLATEAU:
            values = np.clip(2.0 - 2.0 * x, 0.0, 1.0)
        else:
            values = 0.6 * (1.0 - x) + 0.4 * np.clip(1.0 - np.abs(x - 0.6) / 0.2, 0.0, None)
        return RadialProfile(grid, height * values, ambient)

    def ball_volumes(self, ambient, radii):
        """Vol_g(B(0, r)) for an array of radii; zero at r <= 0."""
        space = _riemannian_space(ambient)
        radii = np.asarray(radii, dtype=float)
        volumes = np.zeros_like(radii)
        positive = radii > 0
        if np.any(positive):
            volumes[positive] = self.modelspace.ball_volume(space, radii[positive])
        return volumes

    def level_volumes(self, u: RadialProfile, levels, space=None, inclusive=False):
        """
        Vol_g({u > t}) for every level t, exact for piecewise-linear profiles

        :param levels: sequence of float
        :param space: ambient override, defaults to the profile's ambient
        :param inclusive: measure {u >= t} instead
        :return: LevelSetTable with decreasing levels
        """
        ambient = u.ambient if space is None else space
        levels = np.sort(np.unique(np.asarray(levels, dtype=float)))[::-1]
        node_volumes = self.ball_volumes(ambient, u.grid)
        cell_volumes = np.diff(node_volumes)
        left, right = u.values[:-1], u.values[1:]
        volumes = np.empty_like(levels)
        for index, t in enumerate(levels):
            if inclusive:
                left_in, right_in = left >= t, right >= t
            else:
                left_in, right_in = left > t, right > t
            total = float(np.sum(cell_volumes[left_in & right_in]))
            partial = np.flatnonzero(left_in != right_in)
            if partial.size:
                fraction = (t - left[partial]) / (right[partial] - left[partial])
                crossing = u.grid[partial] + fraction * (u.grid[partial + 1] - u.grid[partial])
                crossing_volumes = self.ball_volumes(ambient, crossing)
                total += float(np.sum(np.where(left_in[partial], crossing_volumes - node_volumes[partial],
                                               node_volumes[partial + 1] - crossing_volumes)))
            volumes[index] = total
        return LevelSetTable(levels, volumes)

    def euclidean_rearrangement(self, u: RadialProfile, cells=None):
        """
        Radially non-increasing u* on the Euclidean ball B(0, R) with omega_d R^d = Vol_g(Omega),
        equimeasurable with u.

        The distribution function is evaluated exactly at the node values and on a uniform level
        grid, once with strict and once with non-strict superlevel sets so that plateaus of u
        become plateaus of u*. Radii s(t) = (mu(t) / omega_d)^{1/d} are then inverted by monotone
        linear interpolation.

        :param cells: int cells of the output grid, defaults to the input's
        :return: RadialProfile over the Euclidean space of the same dimension

        :raises: InvalidArgumentError
        """
        if np.any(u.values < 0):
            raise InvalidArgumentError('rearrangement needs a non-negative profile',
                                       {'min': float(np.min(u.values))})
        space = _riemannian_space(u.ambient)
        d = space.dim
        omega = unit_ball_volume(d)
        cells = u.cells if cells is None else int(cells)
        total = float(self.ball_volumes(space, u.grid[-1:])[0])
        outer = (total / omega) ** (1.0 / d)
        grid = np.linspace(0.0, outer, cells + 1)
        top = float(np.max(u.values))
        target = SpaceForm(d, 0.0)
        if top == 0.0:
            return RadialProfile(grid, np.zeros_like(grid), target)

        levels = np.union1d(u.values, np.linspace(0.0, top, 2 * cells + 1))
        strict = self.level_volumes(u, levels)
        loose = self.level_volumes(u, levels, inclusive=True)
        radii = np.concatenate([strict.volumes, loose.volumes]) / omega
        radii = np.minimum(np.maximum(radii, 0.0) ** (1.0 / d), outer)
        heights = np.concatenate([strict.levels, loose.levels])
        order = np.lexsort((-heights, radii))
        radii = radii[order]
        heights = np.minimum.accumulate(heights[order])
        values = np.interp(grid, radii, heights)
        values = np.minimum.accumulate(values)
        logger.debug('rearranged %d cells onto B_e(0, %g)', u.cells, outer)
        return RadialProfile(grid, values, target)

    def profile_norm(self, u: RadialProfile, q):
        """
        L^q(Vol_g) norm; q = inf gives the sup norm

        :raises: InvalidArgumentError
        """
        if q == math.inf:
            return float(np.max(np.abs(u.values)))
        if not q > 0:
            raise InvalidArgumentError('exponent must lie in (0, inf]', {'q': q})
        space = _riemannian_space(u.ambient)
        rule = gauss_legendre(self._settings.profile_quadrature_order)
        nodes, weights = rule.mapped(u.grid[:-1], u.grid[1:])
        values = np.interp(nodes, u.grid, u.values)
        integral = float(np.sum(weights * np.abs(values) ** q * space.area_element(nodes)))
        return integral ** (1.0 / q)

    def gradient_norm(self, u: RadialProfile, p):
        """|grad_g u|_{L^p}, exact for piecewise-linear profiles."""
        if not p >= 1:
            raise InvalidArgumentError('exponent must be >= 1', {'p': p})
        volumes = np.diff(self.ball_volumes(u.ambient, u.grid))
        return float(np.sum(np.abs(u.slopes) ** p * volumes)) ** (1.0 / p)

    def norm_preservation_check(self, u: RadialProfile, rearranged: RadialProfile, q):
        """
        |(|u|_q - |u*|_q)| / |u|_q

        :return: NormCheck
        """
        norm = self.profile_norm(u, q)
        rearranged_norm = self.profile_norm(rearranged, q)
        discrepancy = 0.0 if norm == rearranged_norm else abs(norm - rearranged_norm) / norm
        return NormCheck(q, norm, rearranged_norm, discrepancy, self.tolerance(u.cells))

    def polya_szego_check(self, u: RadialProfile, rearranged: RadialProfile, p, d=None):
        """
        Compare |grad_g u|_p with C(d) / (d omega_d^{1/d}) |grad u*|_p

        :return: PolyaSzegoCheck
        """
        if not p > 1:
            raise InvalidArgumentError('Polya-Szego needs p > 1', {'p': p})
        d = _riemannian_space(u.ambient).dim if d is None else d
        factor = self.modelspace.polya_szego_factor(d)
        lhs = self.gradient_norm(u, p)
        rhs = factor * self.gradient_norm(rearranged, p)
        slack = self.tolerance(u.cells) * max(lhs, rhs)
        return PolyaSzegoCheck(p, lhs, rhs, factor, lhs >= rhs - slack)

    def equimeasurability_gap(self, u: RadialProfile, rearranged: RadialProfile, levels):
        """Largest |Vol_g({u > t}) - Vol_e({u* > t})| over the levels."""
        first = self.level_volumes(u, levels)
        second = self.level_volumes(rearranged, levels)
        return float(np.max(np.abs(first.volumes - second.volumes)))
