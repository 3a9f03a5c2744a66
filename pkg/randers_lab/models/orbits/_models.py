import itertools
import math

import numpy as np

from ..base import Base
from ...errors import InvalidArgumentError


FULL_ROTATION = 'full_rotation'
PRODUCT_ROTATION = 'product_rotation'
MATRIX_CONJUGATION = 'matrix_conjugation'

ACTION_KINDS = (FULL_ROTATION, PRODUCT_ROTATION, MATRIX_CONJUGATION)

GREEDY = 'GREEDY'
ANGULAR_EXACT = 'ANGULAR_EXACT'

DETERMINANT_TOLERANCE = 1e-10


class GroupAction(Base):
    _fields = ('kind', 'blocks')

    def __init__(self, kind, blocks=None):
        """

        :param kind: str one of ACTION_KINDS
        :param blocks: list of int block dimensions, PRODUCT_ROTATION only
        """
        if kind not in ACTION_KINDS:
            raise InvalidArgumentError("unknown group action '{}'".format(kind), {'kind': kind})
        if kind == PRODUCT_ROTATION:
            if not blocks:
                raise InvalidArgumentError('product rotations need block dimensions', {'blocks': blocks})
            if any(isinstance(b, bool) or int(b) != b or b < 2 for b in blocks):
                raise InvalidArgumentError('every block needs dimension >= 2', {'blocks': list(blocks)})
            blocks = tuple(int(b) for b in blocks)
        elif blocks:
            raise InvalidArgumentError('only product rotations take blocks', {'kind': kind, 'blocks': blocks})
        self.kind = kind
        self.blocks = blocks if kind == PRODUCT_ROTATION else None

    def block_slices(self):
        edges = np.cumsum((0,) + self.blocks)
        return [slice(int(start), int(stop)) for start, stop in zip(edges[:-1], edges[1:])]


class MatrixPoint(Base):
    """Element [[a, b], [b, c]] of the unimodular positive-definite cone P(2, R)_1."""
    _fields = ('a', 'b', 'c')

    def __init__(self, a, b, c):
        if not (a > 0 and c > 0):
            raise InvalidArgumentError('matrix must be positive definite', {'a': a, 'b': b, 'c': c})
        if abs(a * c - b * b - 1.0) > DETERMINANT_TOLERANCE:
            raise InvalidArgumentError('matrix must have determinant 1', {'a': a, 'b': b, 'c': c})
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.b, self.c]])

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (2, 2) or abs(matrix[0, 1] - matrix[1, 0]) > DETERMINANT_TOLERANCE:
            raise InvalidArgumentError('expected a symmetric 2x2 matrix', {'matrix': matrix.tolist()})
        return cls(matrix[0, 0], matrix[0, 1], matrix[1, 1])

    @classmethod
    def diagonal(cls, lam):
        return cls(lam, 0.0, 1.0 / lam)


class PackingReport(Base):
    _fields = ('rho', 'count', 'method', 'fixed_point')

    def __init__(self, y, rho, count, method, centers=None, factors=None, fixed_point=False,
                 min_separation=math.inf, walk_step=None, saturated=False):
        """

        :param y: point whose orbit is packed
        :param rho: float ball radius
        :param count: int number of disjoint balls
        :param method: str GREEDY or ANGULAR_EXACT
        :param centers: np.ndarray ball centres, None for product packings
        :param factors: list of per-block PackingReport for product packings
        :param fixed_point: bool the orbit is a single point
        :param min_separation: float smallest distance between reported centres
        :param walk_step: float distance the greedy walk advances per step, None for exact spacings
        :param saturated: bool the greedy count used up a large share of the candidate points
        """
        self.y = y
        self.rho = rho
        self.count = count
        self.method = method
        self._centers = centers
        self.factors = factors
        self.fixed_point = fixed_point
        self.min_separation = min_separation
        self.walk_step = walk_step
        self.saturated = saturated

    @property
    def centers(self):
        if self._centers is None and self.factors is not None:
            grids = [factor.centers for factor in self.factors]
            self._centers = np.array([np.concatenate(choice) for choice in itertools.product(*grids)])
        return self._centers

    @property
    def disjoint(self):
        return self.count == 1 or self.min_separation >= 2.0 * self.rho - 1e-12


class CoercivityVerdict(Base):
    _fields = ('t', 'search_radius', 'small_orbit_found', 'min_diameter')

    def __init__(self, t, search_radius, small_orbit_found, min_diameter, witness=None, probes=0):
        self.t = t
        self.search_radius = search_radius
        self.small_orbit_found = small_orbit_found
        self.min_diameter = min_diameter
        self.witness = witness
        self.probes = probes


class ProductHausdorffReport(Base):
    _fields = ('measure', 'lower_bound', 'm_g', 'holds')

    def __init__(self, measure, lower_bound, m_g, holds):
        self.measure = measure
        self.lower_bound = lower_bound
        self.m_g = m_g
        self.holds = holds


class MatrixHausdorffReport(Base):
    _fields = ('length', 'd_p', 'kappa_check')

    def __init__(self, length, d_p, kappa_check):
        self.length = length
        self.d_p = d_p
        self.kappa_check = kappa_check
