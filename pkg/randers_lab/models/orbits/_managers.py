import itertools
import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import special
from scipy.optimize import minimize
from scipy.spatial.distance import pdist, squareform
from scipy.stats import qmc

from ._models import (GroupAction, MatrixPoint, PackingReport, CoercivityVerdict, ProductHausdorffReport,
                      MatrixHausdorffReport, FULL_ROTATION, PRODUCT_ROTATION, MATRIX_CONJUGATION, GREEDY,
                      ANGULAR_EXACT)
from ..modelspace import ModelSpaceManager, SpaceForm, MatrixCone, EUCLIDEAN
from ..numerics import sphere_area
from ..sweep import ordered_map
from ...errors import InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)

BISECTION_STEPS = 200
FIXED_POINT_TOLERANCE = 1e-14
SIMPLEX_GRID_BUDGET = 50000
PROBE_RADII = 8
PROBE_SAMPLES = 512
CURVE_SAMPLES = 2 ** 15
CHORD_FRACTION = 1e-4
CANDIDATE_SATURATION = 0.5


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _householder(anchor):
    """Orthogonal matrix sending e1 to the unit vector anchor."""
    dim = anchor.size
    v = np.eye(dim)[0] - anchor
    norm_sq = float(v @ v)
    if norm_sq < 1e-30:
        return np.eye(dim)
    return np.eye(dim) - 2.0 * np.outer(v, v) / norm_sq


def sphere_points(dim, n, anchor=None):
    """
    Deterministic antipodally symmetric point set on S^{dim-1}: +-anchor first, then Halton
    points pushed through the normal quantile function.
    """
    anchor = np.eye(dim)[0] if anchor is None else anchor / np.linalg.norm(anchor)
    pairs = max(0, int(math.ceil((n - 2) / 2.0)))
    halton = qmc.Halton(d=dim, scramble=False).random(pairs + 1)[1:]
    gauss = special.ndtri(halton)
    norms = np.linalg.norm(gauss, axis=1)
    gauss = gauss[norms > 0] / norms[norms > 0, None]
    base = np.eye(dim)[0]
    points = [base, -base]
    for point in gauss:
        points.append(point)
        points.append(-point)
    points = np.array(points[:n])
    return points @ _householder(anchor).T


class OrbitManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()
        self._modelspace = None  # type: Optional[ModelSpaceManager]

    @property
    def modelspace(self) -> ModelSpaceManager:
        """Get model space manager"""
        if self._modelspace is None:
            self._modelspace = ModelSpaceManager(self._settings)

        return self._modelspace

    def orbit_sample(self, action: GroupAction, y, n):
        """
        n deterministic points of the orbit of y

        :return: np.ndarray of shape (n, d), or list of MatrixPoint for the matrix action
        """
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise InvalidArgumentError('sample size must be a positive integer', {'n': n})
        n = int(n)
        if action.kind == MATRIX_CONJUGATION:
            matrix = self._matrix(y)
            angles = math.pi * np.arange(n) / n
            return [MatrixPoint.from_matrix(self._conjugate(matrix, theta)) for theta in angles]
        y = np.asarray(y, dtype=float)
        if action.kind == FULL_ROTATION:
            return self._rotation_sample(y, n)
        self._check_blocks(action, y.size)
        per_block = int(math.ceil(n ** (1.0 / len(action.blocks))))
        parts = [self._rotation_sample(y[block], per_block) for block in action.block_slices()]
        points = [np.concatenate(choice) for choice in itertools.islice(itertools.product(*parts), n)]
        return np.array(points)

    def packing_count(self, action: GroupAction, space, y, rho, method=None):
        """
        Disjoint geodesic rho-balls centred on the orbit of y.

        :param method: None, GREEDY or ANGULAR_EXACT; None picks ANGULAR_EXACT where available
        :return: PackingReport

        :raises: InvalidArgumentError
        """
        if not rho > 0:
            raise InvalidArgumentError('ball radius must be positive', {'rho': rho})
        exact_available = (action.kind == FULL_ROTATION and isinstance(space, SpaceForm) and space.dim == 2)
        if method is None:
            method = ANGULAR_EXACT if exact_available else GREEDY
        if method not in (GREEDY, ANGULAR_EXACT):
            raise InvalidArgumentError("unknown packing method '{}'".format(method), {'method': method})
        if method == ANGULAR_EXACT and not exact_available:
            raise InvalidArgumentError('exact spacing exists only for rotations of the plane',
                                       {'kind': action.kind})

        if action.kind == MATRIX_CONJUGATION:
            self._check_space(space, MatrixCone)
            matrix = self._matrix(y)
            return self._circle_packing(space, matrix, lambda theta: self._conjugate(matrix, theta),
                                        math.pi, rho, GREEDY)

        self._check_space(space, SpaceForm)
        y = space.validate_point(y, 'y')
        if action.kind == PRODUCT_ROTATION:
            return self._product_packing(action, space, y, rho)
        if space.dim == 2:
            return self._circle_packing(space, y, lambda theta: rotation(theta) @ y, 2.0 * math.pi, rho, method)
        return self._sphere_packing(space, y, rho)

    def expansion_profile(self, action: GroupAction, space, rho, radii, direction=None):
        """
        Packing counts along a geodesic ray from the fixed point, one row per radius.

        :return: list of dict rows with keys distance, rho, count, method, disjoint, saturated
        """
        radii = [float(r) for r in radii]
        if not radii:
            raise InvalidArgumentError('radii list is empty', {'radii': radii})
        if any(r < 0 for r in radii) or any(b < a for a, b in zip(radii, radii[1:])):
            raise InvalidArgumentError('radii must be non-negative and increasing', {'radii': radii})
        point_direction = self._ray_direction(action, space, direction)

        def measure(radius):
            y = space.point_at(radius, point_direction)
            report = self.packing_count(action, space, y, rho)
            logger.debug('radius %g: %d balls (%s)', radius, report.count, report.method)
            return {'distance': radius, 'rho': float(rho), 'count': report.count, 'method': report.method,
                    'disjoint': report.disjoint, 'saturated': report.saturated}

        return ordered_map(measure, radii, self._settings.threads)

    def poincare_ratio(self, space: SpaceForm, report: PackingReport):
        """count * rho * (1 - |y|^2) / (pi |y|); tends to a constant as |y| -> 1."""
        r = float(np.linalg.norm(report.y))
        return report.count * report.rho * (1.0 - r * r) / (math.pi * r)

    def orbit_diameter(self, action: GroupAction, space, y, samples=None):
        """
        Largest distance between orbit points. Orbits are homogeneous, so the maximum of
        d(y, xi y) over the group sample equals the maximum over all sampled pairs.
        """
        samples = self._settings.orbit_samples if samples is None else int(samples)
        samples += samples % 2
        if action.kind == MATRIX_CONJUGATION:
            self._check_space(space, MatrixCone)
            matrix = self._matrix(y)
            angles = math.pi * np.arange(samples) / samples
            stack = np.array([self._conjugate(matrix, theta) for theta in angles])
            return float(np.max(space.distance(matrix, stack)))
        self._check_space(space, SpaceForm)
        y = space.validate_point(y, 'y')
        orbit = self.orbit_sample(action, y, samples)
        return float(np.max(space.distance(y, orbit)))

    def coercivity_probe(self, action: GroupAction, space, t, search_radius, probes=None):
        """
        Look for points x with d(x0, x) in [R/2, R] whose orbit diameter is at most t.

        :return: CoercivityVerdict
        """
        if not t > 0 or not search_radius > 0:
            raise InvalidArgumentError('t and search radius must be positive',
                                       {'t': t, 'search_radius': search_radius})
        radii = np.linspace(0.5 * search_radius, search_radius, PROBE_RADII)
        directions = self._probe_directions(action, space) if probes is None else list(probes)
        best = (math.inf, None)
        count = 0
        for radius in radii:
            for direction in directions:
                x = space.point_at(radius, direction)
                diameter = self.orbit_diameter(action, space, x, PROBE_SAMPLES)
                count += 1
                if diameter < best[0]:
                    best = (diameter, x)
        found = best[0] <= t
        logger.info('coercivity probe t=%g R=%g: min diameter %g over %d points', t, search_radius, best[0], count)
        return CoercivityVerdict(t, search_radius, found, best[0], best[1], count)

    def ray_angles(self, directions):
        """Pairwise angles between ray directions, in condensed form."""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        cosine_distance = pdist(directions, 'cosine')
        return np.arccos(np.clip(1.0 - cosine_distance, -1.0, 1.0))

    def tangent_packing_lower_bound(self, angles, rho, t):
        """
        Largest n with t >= t_n, where t_1 = 0 and t_n = max_{i<j<=n} rho / sin(alpha_ij / 2).

        :param angles: condensed or square array of pairwise ray angles in (0, pi]
        :return: int

        :raises: InvalidArgumentError
        """
        angles = np.asarray(angles, dtype=float)
        if angles.ndim == 2:
            angles = squareform(angles, checks=False)
        if angles.size == 0:
            raise InvalidArgumentError('angle data is empty', {'angles': []})
        if np.any(angles <= 0) or np.any(angles > math.pi + 1e-12):
            raise InvalidArgumentError('angles must lie in (0, pi]', {'angles': angles.tolist()[:10]})
        if not rho > 0 or not t > 0:
            raise InvalidArgumentError('rho and t must be positive', {'rho': rho, 't': t})
        rays = (1.0 + math.sqrt(1.0 + 8.0 * angles.size)) / 2.0
        if rays != int(rays):
            raise InvalidArgumentError('condensed angle data must hold n(n-1)/2 entries', {'size': angles.size})
        thresholds = squareform(rho / np.sin(0.5 * angles))
        t_n = np.zeros(int(rays))
        for n in range(1, int(rays)):
            t_n[n] = max(t_n[n - 1], float(np.max(thresholds[n, :n])))
        return int(np.count_nonzero(t_n <= t))

    def spherical_cap_count(self, d, rho, t):
        """
        |S^{d-1}| divided by the area of a cap of angular radius 2 rho / t

        :raises: InvalidArgumentError
        """
        if isinstance(d, bool) or int(d) != d or d < 2:
            raise InvalidArgumentError('dimension must be an integer >= 2', {'d': d})
        if not rho > 0 or not t > rho:
            raise InvalidArgumentError('need t > rho > 0', {'rho': rho, 't': t})
        phi = 2.0 * rho / t
        fraction = 0.5 * special.betainc((d - 1) / 2.0, 0.5, math.sin(phi) ** 2)
        if phi > math.pi / 2.0:
            fraction = 1.0 - fraction
        return 1.0 / fraction

    def orbit_hausdorff_product_spheres(self, blocks, y):
        """
        Orbit measure sum_i |S^{d_i - 1}| |y_i|^{d_i - 1} and the lower bound 2 pi m_G |y|, where m_G
        is the minimum of sum_i z_i^{d_i - 1} over the simplex sum_i z_i = 1. The sum follows the
        displayed formula of the worked example; the orbit is a product of spheres.

        :return: ProductHausdorffReport

        :raises: InvalidArgumentError
        """
        action = GroupAction(PRODUCT_ROTATION, blocks)
        y = np.asarray(y, dtype=float)
        self._check_blocks(action, y.size)
        radii = np.array([np.linalg.norm(y[block]) for block in action.block_slices()])
        if not np.any(radii > 0):
            raise InvalidArgumentError('y must have a non-zero block', {'y': y.tolist()})
        exponents = [b - 1 for b in action.blocks]
        measure = float(sum(sphere_area(b) * r ** e for b, r, e in zip(action.blocks, radii, exponents)))
        m_g = self._simplex_minimum(exponents)
        lower_bound = 2.0 * math.pi * m_g * float(np.linalg.norm(y))
        return ProductHausdorffReport(measure, lower_bound, m_g, measure >= lower_bound)

    def orbit_hausdorff_matrix(self, y):
        """
        Length 2 pi |X|_F of the curve theta -> X xi(theta), the distance d_P(I, X), and the
        comparison length >= pi d_P.

        :return: MatrixHausdorffReport

        :raises: InvalidArgumentError
        """
        matrix = self._matrix(y)
        eigenvalues = np.linalg.eigvalsh(matrix)
        if np.any(eigenvalues <= 0):
            raise InvalidArgumentError('matrix must be positive definite', {'y': matrix.tolist()})
        length = 2.0 * math.pi * float(np.linalg.norm(matrix, 'fro'))
        d_p = float(np.sqrt(np.sum(np.log(eigenvalues) ** 2)))
        return MatrixHausdorffReport(length, d_p, length >= math.pi * d_p)

    def matrix_curve_length(self, y, samples=CURVE_SAMPLES):
        """Polygonal length of the closed curve theta -> X xi(theta) in the Frobenius norm."""
        matrix = self._matrix(y)
        angles = np.linspace(0.0, 2.0 * math.pi, samples + 1)
        c, s = np.cos(angles), np.sin(angles)
        xi = np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)
        curve = matrix @ xi
        steps = np.diff(curve, axis=0)
        return float(np.sum(np.sqrt(np.sum(steps * steps, axis=(1, 2)))))

    def _rotation_sample(self, y, n):
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return np.tile(y, (n, 1))
        if y.size == 2:
            angles = 2.0 * math.pi * np.arange(n) / n
            c, s = np.cos(angles), np.sin(angles)
            return np.stack([c * y[0] - s * y[1], s * y[0] + c * y[1]], axis=1)
        return norm * sphere_points(y.size, n, y / norm)

    def _circle_packing(self, space, y, point, period, rho, method):
        origin = point(0.0)
        walk_step = None

        def gap(theta):
            return float(space.distance(origin, point(theta)))

        half = 0.5 * period
        if gap(half) < FIXED_POINT_TOLERANCE:
            return PackingReport(y, rho, 1, method, np.array([origin]), fixed_point=True)
        if gap(half) < 2.0 * rho:
            return PackingReport(y, rho, 1, method, np.array([origin]))

        if method == ANGULAR_EXACT:
            theta_min = self._exact_angle(space, y, rho)
            count = max(1, int(math.floor(period / theta_min)))
            spacing = period / count
        else:
            theta_min = self._bisect(gap, half, 2.0 * rho)
            # orbit speed in distance per radian, from a short chord
            chord = CHORD_FRACTION * theta_min
            arc_speed = gap(chord) / chord
            step = min(self._settings.greedy_step_fraction * rho / arc_speed, theta_min * theta_min / (2.0 * period))
            walk_step = step * arc_speed
            spacing = math.ceil(theta_min / step) * step
            count = int(math.floor((period - theta_min) / spacing)) + 1
            while count > 1 and gap(period - (count - 1) * spacing) < 2.0 * rho:
                count -= 1
            while count * spacing < period and gap(period - count * spacing) >= 2.0 * rho:
                count += 1
        centers = np.array([point(k * spacing) for k in range(count)])
        separation = math.inf
        if count > 1:
            separation = float(np.min(space.distance(centers[0], centers[1:])))
        return PackingReport(y, rho, count, method, centers, min_separation=separation, walk_step=walk_step)

    def _sphere_packing(self, space, y, rho):
        radius = float(np.linalg.norm(y))
        if radius == 0.0:
            return PackingReport(y, rho, 1, GREEDY, np.array([y]), fixed_point=True)
        candidates = radius * sphere_points(space.dim, self._settings.orbit_samples, y / radius)
        accepted = np.empty_like(candidates)
        accepted[0] = candidates[0]
        count = 1
        separation = math.inf
        for candidate in candidates[1:]:
            nearest = float(np.min(space.distance(accepted[:count], candidate)))
            if nearest >= 2.0 * rho:
                accepted[count] = candidate
                count += 1
                separation = min(separation, nearest)
        saturated = count >= CANDIDATE_SATURATION * len(candidates)
        if saturated:
            logger.warning('%d of %d candidates accepted at |y|=%g, rho=%g: the count is limited by orbit_samples',
                           count, len(candidates), radius, rho)
        return PackingReport(y, rho, count, GREEDY, accepted[:count].copy(), min_separation=separation,
                             saturated=saturated)

    def _product_packing(self, action, space, y, rho):
        if space.model != EUCLIDEAN:
            raise InvalidArgumentError('product rotations act on Euclidean space', {'space': repr(space)})
        self._check_blocks(action, space.dim)
        factors = []
        for size, block in zip(action.blocks, action.block_slices()):
            factor_space = SpaceForm(size, 0.0)
            if size == 2:
                part = y[block]
                factors.append(self._circle_packing(factor_space, part, lambda theta, part=part: rotation(theta) @ part,
                                                    2.0 * math.pi, rho, GREEDY))
            else:
                factors.append(self._sphere_packing(factor_space, y[block], rho))
        count = int(np.prod([factor.count for factor in factors]))
        fixed = all(factor.fixed_point for factor in factors)
        separation = min(factor.min_separation for factor in factors)
        return PackingReport(y, rho, count, GREEDY, factors=factors, fixed_point=fixed, min_separation=separation,
                             saturated=any(factor.saturated for factor in factors))

    @staticmethod
    def _exact_angle(space, y, rho):
        r = float(np.linalg.norm(y))
        if space.model == EUCLIDEAN:
            ratio = rho / r
        else:
            ratio = (1.0 - r * r) * math.sinh(space.sqrt_k * rho) / (2.0 * r)
        return 2.0 * math.asin(min(ratio, 1.0))

    @staticmethod
    def _bisect(gap, upper, target):
        low, high = 0.0, upper
        for _ in range(BISECTION_STEPS):
            middle = 0.5 * (low + high)
            if middle <= low or middle >= high:
                break
            if gap(middle) >= target:
                high = middle
            else:
                low = middle
        return high

    def _simplex_minimum(self, exponents):
        parts = len(exponents)
        if parts == 1:
            return 1.0
        resolution = 1
        while math.comb(resolution + 1 + parts - 1, parts - 1) <= SIMPLEX_GRID_BUDGET:
            resolution += 1
        bars = np.array(list(itertools.combinations(range(resolution + parts - 1), parts - 1)))
        edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), resolution + parts - 1)])
        counts = np.diff(edges, axis=1) - 1
        values = np.sum((counts / resolution) ** np.array(exponents, dtype=float), axis=1)
        best = counts[int(np.argmin(values))]
        exact = float(sum(Fraction(int(n), resolution) ** e for n, e in zip(best, exponents)))

        def objective(z):
            return float(np.sum(np.abs(z) ** np.array(exponents, dtype=float)))

        start = best / resolution
        result = minimize(objective, start, method='SLSQP', bounds=[(0.0, 1.0)] * parts,
                          constraints=[{'type': 'eq', 'fun': lambda z: np.sum(z) - 1.0}])
        if result.success:
            z = np.clip(result.x, 0.0, None)
            z = z / np.sum(z)
            refined = objective(z)
            if refined < exact - 1e-12:
                return refined
        return exact

    def _probe_directions(self, action, space):
        if action.kind == MATRIX_CONJUGATION:
            return [None]
        if action.kind == FULL_ROTATION:
            return [np.eye(space.dim)[0]]
        directions = [np.eye(space.dim)[block.start] for block in action.block_slices()]
        directions.append(self._ray_direction(action, space, None))
        directions.extend(sphere_points(space.dim, 16))
        return directions

    @staticmethod
    def _ray_direction(action, space, direction):
        if direction is not None or action.kind != PRODUCT_ROTATION:
            return direction
        ray = np.zeros(space.dim)
        for block in action.block_slices():
            ray[block.start] = 1.0
        return ray / np.linalg.norm(ray)

    @staticmethod
    def _conjugate(matrix, theta):
        sigma = rotation(theta)
        return sigma @ matrix @ sigma.T

    @staticmethod
    def _matrix(y):
        if isinstance(y, MatrixPoint):
            return y.matrix
        return MatrixPoint.from_matrix(y).matrix

    @staticmethod
    def _check_space(space, expected):
        if not isinstance(space, expected):
            raise InvalidArgumentError('action does not act on this space',
                                       {'space': repr(space), 'expected': expected.__name__})

    @staticmethod
    def _check_blocks(action, dim):
        if action.kind == PRODUCT_ROTATION and sum(action.blocks) != dim:
            raise InvalidArgumentError('block dimensions must add up to the ambient dimension',
                                       {'blocks': list(action.blocks), 'dim': dim})
