import itertools
import logging
import math
from typing import Optional

import numpy as np

from ._models import (AdmissiblePair, Rejection, FunkVerdict, SobolevNorms, EmbeddingEstimate, SOBOLEV,
                      MOSER_TRUDINGER, MORREY)
from ..modelspace import ModelSpaceManager, SpaceForm
from ..numerics import NumericsManager, projected_gradient_descent, gauss_legendre, beta_fn, sphere_area
from ..rearrange import RadialProfile
from ..sweep import ordered_map
from ...errors import DIVERGENT, InvalidArgumentError
from ...settings import Settings


logger = logging.getLogger(__name__)


def _check_dimension(d):
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise InvalidArgumentError('dimension must be an integer >= 2', {'d': d})
    return int(d)


def _add(*terms):
    if any(term is DIVERGENT for term in terms):
        return DIVERGENT
    return float(sum(terms))


def _parse_exponent(q):
    if isinstance(q, str) and q.strip().lower() in ('inf', 'infinity'):
        return math.inf
    return float(q)


class SobolevManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()
        self._numerics = None  # type: Optional[NumericsManager]
        self._modelspace = None  # type: Optional[ModelSpaceManager]

    @property
    def numerics(self) -> NumericsManager:
        """Get numerics manager"""
        if self._numerics is None:
            self._numerics = NumericsManager(self._settings)

        return self._numerics

    @property
    def modelspace(self) -> ModelSpaceManager:
        """Get model space manager"""
        if self._modelspace is None:
            self._modelspace = ModelSpaceManager(self._settings)

        return self._modelspace

    def classify_pair(self, p, q, d):
        """
        Sort (p, q) into the Sobolev, Moser-Trudinger or Morrey regime of dimension d

        :param q: float or math.inf (the string 'inf' is accepted)
        :return: AdmissiblePair or Rejection
        """
        d = _check_dimension(d)
        q = _parse_exponent(q)
        p = float(p)
        if not p > 1:
            return Rejection(p, q, d, 'p must exceed 1')
        if not q > 1:
            return Rejection(p, q, d, 'q must exceed 1')
        if p < d:
            critical = p * d / (d - p)
            if p < q < critical:
                return AdmissiblePair(p, q, d, SOBOLEV)
            return Rejection(p, q, d, 'Sobolev regime needs p < q < p* = {!r}'.format(critical))
        if p == d:
            if p < q < math.inf:
                return AdmissiblePair(p, q, d, MOSER_TRUDINGER)
            return Rejection(p, q, d, 'Moser-Trudinger regime needs p < q < inf')
        if q == math.inf:
            return AdmissiblePair(p, q, d, MORREY)
        return Rejection(p, q, d, 'Morrey regime needs q = inf')

    def sandwich_constants(self, F, p):
        """
        Constants with lower |u|^p_g <= |u|^p_F <= upper |u|^p_g, a = sup |beta|_g

        :return: tuple (lower, upper)
        """
        a = float(F.beta_sup)
        if a >= 1.0:
            return 0.0, math.inf
        return (1.0 - a * a) ** ((F.dim + 1) / 2.0) / (1.0 + a) ** p, 1.0 / (1.0 - a) ** p

    def sobolev_norms(self, u: RadialProfile, F, p, qs=()):
        """
        Radial quadrature of int F*^p(Du) dV_F + int |u|^p dV_F, its Riemannian counterpart
        int |grad_g u|^p dv_g + int |u|^p dv_g, and the L^q(dV_F) norms.

        :param u: RadialProfile whose grid coordinate is the radial coordinate of F
        :param F: SpaceForm, RandersStructure or FunkModel
        :param p: float >= 1
        :param qs: iterable of exponents, math.inf allowed
        :return: SobolevNorms
        """
        if not p >= 1:
            raise InvalidArgumentError('exponent must be >= 1', {'p': p})
        nodes, weights = gauss_legendre(self._settings.profile_quadrature_order).mapped(u.grid[:-1], u.grid[1:])
        values = np.interp(nodes, u.grid, u.values)
        slopes = u.slopes[:, None]
        area = F.area_element(nodes)
        density = F.density(nodes)
        plus, minus = F.dual_radial(nodes)
        dual = np.abs(slopes) * np.where(slopes >= 0, plus, minus)
        riemann = np.abs(slopes) * F.riemann_radial(nodes)
        finsler_volume = weights * area * density
        riemann_volume = weights * area
        w1p_finsler = float(np.sum(finsler_volume * (dual ** p + np.abs(values) ** p)))
        w1p_riemann = float(np.sum(riemann_volume * (riemann ** p + np.abs(values) ** p)))
        lq = {}
        for q in qs:
            q = _parse_exponent(q)
            if q == math.inf:
                lq[q] = float(np.max(np.abs(u.values)))
            else:
                lq[q] = float(np.sum(finsler_volume * np.abs(values) ** q)) ** (1.0 / q)
        return SobolevNorms(p, w1p_finsler, w1p_riemann, lq, float(np.max(np.abs(u.values))))

    def embedding_constant(self, space: SpaceForm, y, rho, pair: AdmissiblePair):
        """
        Smallest Rayleigh quotient |u|_{W^{1,p}(B)} / |u|_{L^q(B)} over non-negative radial
        profiles on B = B(y, rho), minimized by projected descent from deterministic seeds.
        The ball is isometric to B(x0, rho), so the search runs on centred profiles and the result
        does not depend on y: the centre is only checked to lie in the space. For q = inf the
        profiles are normalized by u(y) = 1 and bounded by 1.

        :param y: point of space, validated but not used by the search
        :return: EmbeddingEstimate

        :raises: InvalidArgumentError
        """
        if not isinstance(space, SpaceForm):
            raise InvalidArgumentError('embedding constants are estimated on space forms', {'space': repr(space)})
        if not getattr(pair, 'admissible', False):
            raise InvalidArgumentError('exponent pair is not admissible', {'pair': repr(pair)})
        if not rho > 0:
            raise InvalidArgumentError('radius must be positive', {'rho': rho})
        space.validate_point(y, 'y')
        objective, gradient, project = self._rayleigh_problem(space, rho, pair)
        cells = self._settings.embedding_cells
        grid = np.linspace(0.0, rho, cells + 1)
        mass = self._nodal_mass(space, grid)
        scale = mass / np.sum(mass)

        best = (math.inf, -1)
        converged = 0
        for index, seed in enumerate(self._seeds(grid, self._settings.embedding_seeds)):
            result = projected_gradient_descent(objective, gradient, seed, project=project,
                                                max_iterations=self._settings.embedding_iterations,
                                                gtol=self._settings.pde_gradient_tol, scale=scale)
            converged += int(result.converged)
            if result.value < best[0]:
                best = (result.value, index)
        quotient = math.exp(best[0])
        logger.info('embedding quotient %g at rho=%g for %r (seed %d)', quotient, rho, pair, best[1])
        return EmbeddingEstimate(pair, float(rho), quotient, best[1], converged, self._settings.embedding_seeds)

    def embedding_sweep(self, space: SpaceForm, distances, rho, pair):
        """One embedding estimate per centre distance along the first axis."""

        def estimate(distance):
            y = space.point_at(distance)
            value = self.embedding_constant(space, y, rho, pair)
            return {'distance': float(distance), 'rho': float(rho), 'quotient': value.quotient}

        return ordered_map(estimate, list(distances), self._settings.threads)

    def funk_lq_norm(self, d, q, t):
        """|u_t|^q_{L^q} = |S^{d-1}| B(q + d, 1 - q/t); DIVERGENT for q = inf."""
        d = _check_dimension(d)
        q = _parse_exponent(q)
        if q == math.inf:
            return DIVERGENT
        value = beta_fn(q + d, 1.0 - q / t)
        return DIVERGENT if value is DIVERGENT else sphere_area(d) * value

    def funk_w_norm_bound(self, d, p, t):
        area = sphere_area(_check_dimension(d))
        bound = _add(beta_fn(d, 1.0 - p / t), beta_fn(p + d, 1.0 - p / t))
        return DIVERGENT if bound is DIVERGENT else area * bound

    def funk_w_norm_exact(self, d, p, t):
        """
        |u_t|^p_{W^{1,p}_F} for u_t(x) = |x| (1 - |x|)^{-1/t} on the Funk ball, by adaptive quadrature
        """
        d = _check_dimension(d)
        if not t > 0:
            raise InvalidArgumentError('t must be positive', {'t': t})
        if p / t >= 1.0:
            return DIVERGENT

        def integrand(s):
            singular = (1.0 - s) ** (-p / t) * s ** (d - 1)
            return singular * (((t - (t - 1.0) * s) / t) ** p + s ** p)

        result = self.numerics.adaptive_integrate(integrand, 0.0, 1.0)
        return DIVERGENT if result.divergent else sphere_area(d) * result.value

    def funk_verdict(self, d, p, q, t, exact=False):
        """
        Finiteness verdict of u_t in W^{1,p}_F and L^q over the Funk ball for a given t

        :return: FunkVerdict
        """
        d = _check_dimension(d)
        q = _parse_exponent(q)
        if not t > 0 or not p > 1:
            raise InvalidArgumentError('need p > 1 and t > 0', {'p': p, 't': t})
        regime = self.classify_pair(p, q, d).regime
        w_exact = self.funk_w_norm_exact(d, p, t) if exact else None
        return FunkVerdict(d, p, q, t, self.funk_w_norm_bound(d, p, t), self.funk_lq_norm(d, q, t),
                           regime, w_exact)

    def funk_counterexample(self, d, pair: AdmissiblePair, exact=False):
        """
        The function u_t showing W^{1,p}_F is not embedded in L^q on the Funk ball, with
        t = (p + q)/2 in the Sobolev and Moser-Trudinger regimes and t = p^2/d in the Morrey regime

        :return: FunkVerdict

        :raises: InvalidArgumentError
        """
        if not getattr(pair, 'admissible', False):
            raise InvalidArgumentError('exponent pair is not admissible', {'pair': repr(pair)})
        if pair.d != d:
            raise InvalidArgumentError('pair belongs to another dimension', {'d': d, 'pair_d': pair.d})
        t = pair.p * pair.p / d if pair.regime == MORREY else 0.5 * (pair.p + pair.q)
        return self.funk_verdict(d, pair.p, pair.q, t, exact)

    def funk_table(self, dims, ps, qs, exact=False):
        """
        Verdict rows over every (d, p, q) combination. Pairs outside the admissible regimes use
        t = (p + q)/2, or p^2/d when q = inf.

        :return: list of FunkVerdict
        """

        def verdict(combination):
            d, p, q = combination
            q = _parse_exponent(q)
            pair = self.classify_pair(p, q, d)
            if pair.admissible:
                return self.funk_counterexample(int(d), pair, exact)
            t = p * p / d if q == math.inf else 0.5 * (p + q)
            return self.funk_verdict(d, p, q, t, exact)

        return ordered_map(verdict, list(itertools.product(dims, ps, qs)), self._settings.threads)

    def _rayleigh_problem(self, space, rho, pair):
        p, q = pair.p, pair.q
        cells = self._settings.embedding_cells
        grid = np.linspace(0.0, rho, cells + 1)
        h = np.diff(grid)
        cell_volumes = np.diff(self._node_volumes(space, grid))
        nodes, weights = gauss_legendre(self._settings.profile_quadrature_order).mapped(grid[:-1], grid[1:])
        weights = weights * space.area_element(nodes)
        # linear hat functions of the left and right node of each cell, at the quadrature nodes
        right_hat = (nodes - grid[:-1, None]) / h[:, None]
        left_hat = 1.0 - right_hat

        def power_integral(u, exponent):
            values = left_hat * u[:-1, None] + right_hat * u[1:, None]
            magnitude = np.abs(values)
            total = float(np.sum(weights * magnitude ** exponent))
            local = weights * exponent * magnitude ** (exponent - 1.0) * np.sign(values)
            grad = np.zeros_like(u)
            grad[:-1] += np.sum(local * left_hat, axis=1)
            grad[1:] += np.sum(local * right_hat, axis=1)
            return total, grad

        def sobolev_power(u):
            slopes = np.diff(u) / h
            total = float(np.sum(np.abs(slopes) ** p * cell_volumes))
            local = p * np.abs(slopes) ** (p - 1.0) * np.sign(slopes) * cell_volumes / h
            grad = np.zeros_like(u)
            grad[:-1] -= local
            grad[1:] += local
            mass, mass_grad = power_integral(u, p)
            return total + mass, grad + mass_grad

        if q == math.inf:
            def objective(u):
                return math.log(sobolev_power(u)[0]) / p

            def gradient(u):
                value, grad = sobolev_power(u)
                grad = grad / (p * value)
                grad[0] = 0.0
                return grad

            def project(u):
                u = np.clip(u, 0.0, 1.0)
                u[0] = 1.0
                return u
        else:
            def objective(u):
                w_value = sobolev_power(u)[0]
                l_value = power_integral(u, q)[0]
                if not l_value > 0:
                    return math.inf
                return math.log(w_value) / p - math.log(l_value) / q

            def gradient(u):
                w_value, w_grad = sobolev_power(u)
                l_value, l_grad = power_integral(u, q)
                return w_grad / (p * w_value) - l_grad / (q * l_value)

            def project(u):
                u = np.clip(u, 0.0, None)
                top = float(np.max(u))
                return u / top if top > 0 else u

        return objective, gradient, project

    def _node_volumes(self, space, grid):
        volumes = np.zeros_like(grid)
        volumes[1:] = self.modelspace.ball_volume(space, grid[1:])
        return volumes

    def _nodal_mass(self, space, grid):
        volumes = np.diff(self._node_volumes(space, grid))
        mass = np.zeros_like(grid)
        mass[:-1] += 0.5 * volumes
        mass[1:] += 0.5 * volumes
        return mass

    @staticmethod
    def _seeds(grid, count):
        x = grid / grid[-1]
        seeds = [np.ones_like(x)]
        widths = np.linspace(0.3, 1.6, max(count - 1, 1))
        for index, width in enumerate(widths[:count - 1]):
            power = 1.0 + (index % 3)
            seeds.append(np.clip(1.0 - x / width, 0.0, None) ** power)
        return seeds[:count]
