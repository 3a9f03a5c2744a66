import numpy as np

from ..base import Base
from ...errors import DIVERGENT


class QuadratureRule(Base):
    _fields = ('order', 'nodes', 'weights')

    def __init__(self, order, nodes, weights):
        """

        :param order: int number of nodes
        :param nodes: np.ndarray abscissae in [-1, 1]
        :param weights: np.ndarray positive weights
        """
        self.order = order
        self.nodes = np.array(nodes, dtype=float)
        self.weights = np.array(weights, dtype=float)
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    def mapped(self, a, b):
        """
        Nodes and weights of the rule transplanted to [a, b]. ``a`` and ``b`` may be arrays of
        cell endpoints, in which case the result has one row per cell.

        :return: tuple (nodes, weights)
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        half = 0.5 * (b - a)
        centre = 0.5 * (b + a)
        nodes = centre[..., None] + half[..., None] * self.nodes
        weights = half[..., None] * self.weights
        return nodes, weights

    def integrate(self, f, a, b):
        nodes, weights = self.mapped(a, b)
        return np.sum(weights * f(nodes), axis=-1)


class IntegralResult(Base):
    _fields = ('value', 'abs_error_estimate', 'evaluations')

    def __init__(self, value, abs_error_estimate, evaluations):
        """

        :param value: float or DIVERGENT
        :param abs_error_estimate: float, None when value is DIVERGENT
        :param evaluations: int integrand evaluations spent
        """
        self.value = value
        self.abs_error_estimate = None if value is DIVERGENT else abs_error_estimate
        self.evaluations = evaluations

    @property
    def divergent(self):
        return self.value is DIVERGENT


class DescentResult(Base):
    _fields = ('x', 'value', 'gradient_norm', 'iterations', 'converged')

    def __init__(self, x, value, gradient_norm, iterations, converged, history=None):
        """

        :param x: np.ndarray final iterate
        :param value: float objective at x
        :param gradient_norm: float Euclidean norm of the (projected) gradient at x
        :param iterations: int accepted steps
        :param converged: bool stopping test met
        :param history: list of float objective values, one per accepted iterate
        """
        self.x = x
        self.value = value
        self.gradient_norm = gradient_norm
        self.iterations = iterations
        self.converged = converged
        self.history = history if history is not None else [value]

    @property
    def monotone(self):
        return all(later <= earlier for earlier, later in zip(self.history, self.history[1:]))
