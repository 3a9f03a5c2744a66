from ._managers import NumericsManager, gauss_legendre, beta_fn, unit_ball_volume, sphere_area
from ._models import QuadratureRule, IntegralResult, DescentResult
from ._descent import backtracking_line_search, projected_gradient_descent, banded_newton_descent


__all__ = [
    "NumericsManager",
    "QuadratureRule",
    "IntegralResult",
    "DescentResult",
    "gauss_legendre",
    "beta_fn",
    "unit_ball_volume",
    "sphere_area",
    "backtracking_line_search",
    "projected_gradient_descent",
    "banded_newton_descent",
]
