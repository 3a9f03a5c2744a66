import logging

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from ._models import DescentResult


logger = logging.getLogger(__name__)

ARMIJO = 1e-4
SHRINK = 0.5
MAX_BACKTRACKS = 60


def backtracking_line_search(objective, x, value, direction, slope, rate=1.0, project=None,
                             c=ARMIJO, tau=SHRINK, max_steps=MAX_BACKTRACKS, difference=None):
    """
    Armijo backtracking along ``direction``. Only points that strictly decrease the objective
    are accepted, so a sequence of searches is monotone.

    :param objective: callable x -> float
    :param x: np.ndarray current point
    :param value: float objective at x
    :param direction: np.ndarray search direction
    :param slope: float directional derivative, negative for a descent direction
    :param rate: float initial step
    :param project: callable applied to trial points, optional
    :param difference: callable (x, trial) -> objective(trial) - objective(x), optional; used
        instead of subtracting two objective values when those are large compared to the change
    :return: tuple (x_new, value_new, rate) or None when no acceptable step exists
    """
    if not slope < 0:
        return None
    for _ in range(max_steps):
        trial = x + rate * direction
        if project is not None:
            trial = project(trial)
        if difference is not None:
            change = difference(x, trial)
            if np.isfinite(change) and change < 0 and change <= c * rate * slope:
                return trial, min(value + change, value), rate
        else:
            trial_value = objective(trial)
            if np.isfinite(trial_value) and trial_value < value and trial_value <= value + c * rate * slope:
                return trial, trial_value, rate
        rate *= tau
    return None


def projected_gradient_descent(objective, gradient, x0, project=None, max_iterations=500,
                               gtol=1e-8, scale=None, initial_rate=1.0):
    """
    Steepest descent with backtracking. ``scale`` is an optional positive diagonal preconditioner;
    ``project`` maps iterates back onto the feasible set.

    :return: DescentResult
    """
    x = project(np.array(x0, dtype=float)) if project is not None else np.array(x0, dtype=float)
    value = objective(x)
    history = [value]
    grad = gradient(x)
    rate = initial_rate
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        norm = float(np.linalg.norm(grad))
        if norm < gtol * (1.0 + abs(value)):
            converged = True
            iterations -= 1
            break
        direction = -grad if scale is None else -grad / scale
        step = backtracking_line_search(objective, x, value, direction, float(np.dot(grad, direction)),
                                        rate=min(1.0, 2.0 * rate) if iterations > 1 else rate,
                                        project=project)
        if step is None:
            iterations -= 1
            break
        x, value, rate = step
        history.append(value)
        grad = gradient(x)
    norm = float(np.linalg.norm(grad))
    converged = converged or norm < gtol * (1.0 + abs(value))
    return DescentResult(x, value, norm, iterations, converged, history)


def banded_newton_descent(objective, gradient, hessian, x0, weights, max_iterations=500, gtol=1e-8,
                          shift_floor=1e-12, difference=None):
    """
    Damped Newton descent for objectives with a symmetric tridiagonal Hessian.

    The model Hessian H + mu*diag(weights) is factorized by banded Cholesky; mu grows until the
    factorization succeeds, which makes every step a descent direction. Steps are accepted by
    the same Armijo backtracking as the gradient method.

    :param hessian: callable x -> (diagonal, off_diagonal)
    :param weights: np.ndarray positive diagonal used for the Levenberg shift
    :param difference: callable (x, trial) -> objective change, see backtracking_line_search
    :return: DescentResult
    """
    x = np.array(x0, dtype=float)
    value = objective(x)
    history = [value]
    grad = gradient(x)
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        norm = float(np.linalg.norm(grad))
        if norm < gtol * (1.0 + abs(value)):
            converged = True
            iterations -= 1
            break
        direction = _newton_direction(hessian(x), grad, weights, shift_floor)
        step = None
        if direction is not None:
            step = backtracking_line_search(objective, x, value, direction, float(np.dot(grad, direction)),
                                            difference=difference)
        if step is None:
            # scaled gradient step
            direction = -grad / weights
            step = backtracking_line_search(objective, x, value, direction, float(np.dot(grad, direction)),
                                            difference=difference)
        if step is None:
            logger.debug('line search stalled at |g|=%g after %d steps', norm, iterations - 1)
            iterations -= 1
            break
        x, value, _ = step
        history.append(value)
        grad = gradient(x)
    if difference is not None:
        value = objective(x)
    norm = float(np.linalg.norm(grad))
    converged = converged or norm < gtol * (1.0 + abs(value))
    return DescentResult(x, value, norm, iterations, converged, history)


def _newton_direction(bands, grad, weights, shift_floor):
    diagonal, off_diagonal = bands
    magnitude = float(np.max(np.abs(diagonal))) if diagonal.size else 0.0
    base = shift_floor * max(magnitude / float(np.max(weights)), 1e-300)
    shift = 0.0
    banded = np.zeros((2, diagonal.size))
    banded[0, 1:] = off_diagonal
    for _ in range(80):
        banded[1] = diagonal + shift * weights
        try:
            return -solveh_banded(banded, grad, check_finite=False)
        except (LinAlgError, ValueError):
            shift = base if shift == 0.0 else 10.0 * shift
    return None
