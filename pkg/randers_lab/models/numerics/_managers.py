import functools
import logging
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from ._models import QuadratureRule, IntegralResult
from ...errors import DIVERGENT, EvaluationError, InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)

PANEL_ORDER = 16
MIN_PANELS = 3
STALL_RATIO = 0.995
STALL_WINDOW = 4
STALL_DEPTH = 12
MAX_BISECTIONS = 16
RELATIVE_FLOOR = 1e-13


@functools.lru_cache(maxsize=None)
def _legendre(order):
    return leggauss(order)


def gauss_legendre(order):
    """
    Gauss-Legendre rule with ``order`` nodes on [-1, 1]

    :param order: int
    :return: QuadratureRule

    :raises: InvalidArgumentError
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 1:
        raise InvalidArgumentError('quadrature order must be a positive integer', {'order': order})
    nodes, weights = _legendre(int(order))
    return QuadratureRule(int(order), nodes, weights)


def unit_ball_volume(d):
    return math.pi ** (d / 2.0) / special.gamma(d / 2.0 + 1.0)


def sphere_area(d):
    """Surface measure of the unit sphere S^{d-1} in R^d."""
    return d * unit_ball_volume(d)


def beta_fn(x, y):
    """
    Euler Beta function B(x, y)

    :param x: float, must be positive
    :param y: float
    :return: float or DIVERGENT when y <= 0

    :raises: InvalidArgumentError
    """
    if not x > 0:
        raise InvalidArgumentError('first Beta argument must be positive', {'x': x, 'y': y})
    if y <= 0:
        return DIVERGENT
    low, high = sorted((float(x), float(y)))
    return float(special.beta(low, high))


def _evaluate(f, nodes):
    try:
        values = np.asarray(f(nodes), dtype=float)
    except TypeError:
        values = None
    if values is None or values.shape != nodes.shape:
        values = np.array([f(float(t)) for t in nodes.ravel()], dtype=float).reshape(nodes.shape)
    if not np.all(np.isfinite(values)):
        bad = nodes[~np.isfinite(values)]
        raise EvaluationError('integrand is not finite at an interior point', {'points': bad[:5].tolist()})
    return values


class NumericsManager:
    def __init__(self, settings=None):
        """

        :param settings: Settings shared tunables
        """
        self._settings = settings if settings is not None else Settings()
        self._panel_rule = gauss_legendre(PANEL_ORDER)

    @property
    def settings(self):
        return self._settings

    def gauss_legendre(self, order):
        return gauss_legendre(order)

    def beta_fn(self, x, y):
        return beta_fn(x, y)

    def unit_ball_volume(self, d):
        return unit_ball_volume(d)

    def sphere_area(self, d):
        return sphere_area(d)

    def fixed_quadrature(self, f, a, b, order=64):
        """
        Non-adaptive Gauss-Legendre quadrature. ``b`` may be an array of upper limits.

        :return: float or np.ndarray
        """
        return gauss_legendre(order).integrate(f, a, b)

    def adaptive_integrate(self, f, a, b, tol=None, cap=None):
        """
        Integrate f over (a, b), allowing integrable endpoint singularities.

        Each half of the interval is covered by dyadic panels that shrink toward its endpoint.
        Panel contributions are summed and the remaining tail is extrapolated from the ratio of
        consecutive contributions. Growing or non-shrinking contributions classify the integral
        as DIVERGENT.

        :param f: callable, vectorized over numpy arrays
        :param a: float lower limit
        :param b: float upper limit
        :param tol: float absolute tolerance, defaults to settings.tol
        :param cap: float partial-sum cap, defaults to settings.divergence_cap
        :return: IntegralResult

        :raises: InvalidArgumentError
        :raises: EvaluationError
        """
        tol = self._settings.tol if tol is None else tol
        cap = self._settings.divergence_cap if cap is None else cap
        if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
            raise InvalidArgumentError('integration limits must satisfy a < b', {'a': a, 'b': b})
        if not tol > 0:
            raise InvalidArgumentError('tolerance must be positive', {'tol': tol})

        middle = 0.5 * (a + b)
        scale = max(abs(a), abs(b), 1.0)
        value = 0.0
        error = 0.0
        evaluations = 0
        for end in (a, b):
            half, half_error, spent = self._graded_half(f, middle, end, 0.5 * tol, cap, scale)
            evaluations += spent
            if half is DIVERGENT:
                return IntegralResult(DIVERGENT, None, evaluations)
            value += half
            error += half_error
        return IntegralResult(value, error, evaluations)

    def _graded_half(self, f, start, end, tol, cap, scale):
        width = end - start
        floor = 64.0 * np.finfo(float).eps * scale
        total = 0.0
        previous_estimate = None
        contributions = []
        ratios = []
        evaluations = 0
        k = 0
        while True:
            left = start + width * (1.0 - 0.5 ** k)
            right = start + width * (1.0 - 0.5 ** (k + 1))
            if abs(right - left) < floor:
                break
            contribution, spent = self._panel(f, min(left, right), max(left, right), tol / 64.0)
            evaluations += spent
            contributions.append(contribution)
            total += contribution
            if abs(total) > cap:
                logger.warning('partial sums exceed cap %g near %g', cap, end)
                return DIVERGENT, None, evaluations

            tail = 0.0
            if len(contributions) >= 2 and contributions[-2] != 0.0:
                ratio = contributions[-1] / contributions[-2]
                ratios.append(abs(ratio))
                if abs(ratio) < 1.0:
                    tail = contribution * ratio / (1.0 - ratio)
            estimate = total + tail

            if (k >= STALL_DEPTH and len(ratios) >= STALL_WINDOW
                    and min(ratios[-STALL_WINDOW:]) >= STALL_RATIO):
                logger.debug('panel contributions near %g do not shrink', end)
                return DIVERGENT, None, evaluations
            if (previous_estimate is not None and k >= MIN_PANELS
                    and abs(estimate - previous_estimate) <= max(0.5 * tol, RELATIVE_FLOOR * abs(estimate))):
                return estimate, abs(estimate - previous_estimate), evaluations
            previous_estimate = estimate
            k += 1

        if ratios and ratios[-1] >= STALL_RATIO:
            return DIVERGENT, None, evaluations
        logger.debug('panel depth exhausted near %g', end)
        last_step = abs(contributions[-1]) if contributions else 0.0
        return previous_estimate if previous_estimate is not None else 0.0, last_step, evaluations

    def _panel(self, f, left, right, tol, depth=0):
        nodes, weights = self._panel_rule.mapped(left, right)
        whole = float(np.dot(weights, _evaluate(f, nodes)))
        middle = 0.5 * (left + right)
        nodes, weights = self._panel_rule.mapped(np.array([left, middle]), np.array([middle, right]))
        halves = float(np.sum(weights * _evaluate(f, nodes)))
        spent = 3 * PANEL_ORDER
        if abs(whole - halves) <= max(tol, RELATIVE_FLOOR * abs(halves)) or depth >= MAX_BISECTIONS:
            return halves, spent
        first, spent_first = self._panel(f, left, middle, 0.5 * tol, depth + 1)
        second, spent_second = self._panel(f, middle, right, 0.5 * tol, depth + 1)
        return first + second, spent + spent_first + spent_second
