import logging
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ._models import (PDEProblem, RadialDiscretization, EnergyValues, BonannoParameters, CriticalPointReport)
from ..numerics import NumericsManager, banded_newton_descent, projected_gradient_descent
from ..randers import RandersStructure
from ..rearrange import RadialProfile
from ..sweep import ordered_map
from ...errors import InvalidArgumentError, SweepFailureError
from ...settings import Settings


logger = logging.getLogger(__name__)

MIN_STARTS = 8
DOUBLING_TOLERANCE = 1e-6
COERCIVITY_SCALES = (1.0, 10.0, 100.0, 1000.0)
COERCIVITY_RAYS = 10
SWEEP_EXPONENTS = (-24.0, -0.3, 33)


class PDEManager:
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings if settings is not None else Settings()
        self._numerics = None  # type: Optional[NumericsManager]

    @property
    def numerics(self) -> NumericsManager:
        """Get numerics manager"""
        if self._numerics is None:
            self._numerics = NumericsManager(self._settings)

        return self._numerics

    def problem(self, structure, p, alpha, nonlinearity, lam=0.0, lambdas=()):
        """
        Problem on the grid configured in the settings

        :return: PDEProblem
        """
        return PDEProblem(structure, p, alpha, nonlinearity, lam, self._settings.pde_cells,
                          self._settings.pde_cutoff, lambdas)

    def problem_from_json(self, data):
        return PDEProblem.from_json(data, self._settings.pde_cells, self._settings.pde_cutoff)

    def refine(self, problem: PDEProblem):
        """Same problem on a grid with twice as many cells."""
        return problem.with_cells(2 * problem.cells)

    # energy

    def energy(self, problem: PDEProblem, u):
        """
        Phi = (1/p) int F*^p(Du) dV_F, J = int alpha H(u) dV_F and E = Phi - lambda J

        :param u: RadialProfile (resampled on the problem grid) or array of nodal values
        :return: EnergyValues
        """
        disc = problem.discretization
        u = self._unknowns(problem, u)
        phi = float(np.sum(self._phi_terms(disc, u)))
        j = float(np.sum(self._j_terms(problem, u)))
        return EnergyValues(phi, j, phi - problem.lam * j)

    def energy_gradient(self, problem: PDEProblem, u):
        """
        Gradient of the discrete E_lambda with respect to the nodal values u_0 .. u_{N-1}

        :return: np.ndarray
        """
        u = self._unknowns(problem, u)
        return self._phi_gradient(problem.discretization, u) - problem.lam * self._j_gradient(problem, u)

    def energy_hessian(self, problem: PDEProblem, u):
        """
        Tridiagonal Hessian of the discrete E_lambda

        :return: tuple (diagonal, off_diagonal)
        """
        disc = problem.discretization
        u = self._unknowns(problem, u)
        diagonal, off_diagonal = self._phi_hessian(disc, u)
        diagonal = diagonal - problem.lam * disc.alpha_mass * problem.nonlinearity.h_prime(u)
        return diagonal, off_diagonal

    def energy_difference(self, problem: PDEProblem, u, v):
        """E(v) - E(u) summed cell by cell."""
        disc = problem.discretization
        u = self._unknowns(problem, u)
        v = self._unknowns(problem, v)
        phi = float(np.sum(self._phi_terms(disc, v) - self._phi_terms(disc, u)))
        j = float(np.sum(disc.alpha_mass * (problem.nonlinearity.H(v) - problem.nonlinearity.H(u))))
        return phi - problem.lam * j

    # test functions and constants

    def test_function(self, s0, R, r, F, grid=None):
        """
        s0 on B_F(x0, r), the linear ramp s0 (R - d_F)/(R - r) on the annulus, 0 beyond B_F(x0, R)

        :param grid: radial grid of g-distances, defaults to [0, R] with pde_cells cells
        :return: RadialProfile

        :raises: InvalidArgumentError
        """
        a = float(F.beta_sup)
        if not s0 > 0 or not R > 0 or not 0 < r < R * (1.0 - a) / (1.0 + a):
            raise InvalidArgumentError('test function needs s0 > 0 and 0 < r < R(1 - a)/(1 + a)',
                                       {'s0': s0, 'R': R, 'r': r, 'a': a})
        if grid is None:
            grid = np.linspace(0.0, R, self._settings.pde_cells + 1)
        grid = np.asarray(grid, dtype=float)
        distance = F.radial_distance(grid)
        values = np.clip(s0 * (R - distance) / (R - r), 0.0, s0)
        return RadialProfile(grid, values, F)

    def default_radii(self, problem: PDEProblem):
        """(R, r) with R = 2/kappa and r halfway to the admissible bound R(1 - a)/(1 + a)."""
        a = problem.beta_sup
        R = 2.0 / problem.kappa
        return R, 0.5 * R * (1.0 - a) / (1.0 + a)

    def finsler_ball_volume(self, F: RandersStructure, R):
        """Vol_F(B_F(x0, R)) by adaptive quadrature of the radial density."""
        if not R > 0:
            raise InvalidArgumentError('radius must be positive', {'R': R})
        if float(F.radial_distance(R)) <= R:
            edge = float(R)
        else:
            edge = brentq(lambda rho: float(F.radial_distance(rho)) - R, 0.0, float(R), xtol=1e-15)
        result = self.numerics.adaptive_integrate(lambda rho: F.density(rho) * F.area_element(rho), 0.0, edge)
        return float(result.value)

    def mckean_bound(self, d, kappa, p):
        """Lower bound ((d - 1) kappa / p)^p of the first eigenvalue of the p-Laplacian."""
        self._check_constants(d, kappa, p)
        return ((d - 1.0) * kappa / p) ** p

    def coercivity_constant(self, d, a, p, kappa):
        """c(d, a, p, kappa) with Phi(u) >= (c/p) |u|^p_{W^{1,p}_g}."""
        self._check_constants(d, kappa, p)
        if not 0.0 <= a < 1.0:
            raise InvalidArgumentError('need 0 <= a < 1', {'a': a})
        spectral = ((d - 1.0) * kappa) ** p
        return (1.0 - a * a) ** ((d + 1) / 2.0) / (1.0 + a) ** p * spectral / (p ** p + spectral)

    def sup_constant(self, problem: PDEProblem):
        """
        Measured c_inf with |u|_inf <= c_inf |u|_{W^{1,p}_g}: G^{-1/p} for the least discrete
        W^{1,p}_g power among profiles with u(0) = 1.
        """
        disc = problem.discretization
        p = problem.p
        h = disc.h
        k = disc.k_riemann
        mass = disc.riemann_mass

        def full(x):
            return np.concatenate(([1.0], x))

        def objective(x):
            u = full(x)
            return float(np.sum(k * np.abs(disc.slopes(u)) ** p) + np.sum(mass * np.abs(u) ** p))

        def gradient(x):
            u = full(x)
            slopes = disc.slopes(u)
            flux = p * np.abs(slopes) ** (p - 1.0) * np.sign(slopes) * k
            grad = (np.concatenate(([0.0], flux[:-1])) - flux) / h
            grad = grad + p * mass * np.abs(u) ** (p - 1.0) * np.sign(u)
            return grad[1:]

        def hessian(x):
            u = full(x)
            stiffness = p * (p - 1.0) * np.abs(disc.slopes(u)) ** (p - 2.0) * k
            diagonal = (np.concatenate(([0.0], stiffness[:-1])) + stiffness) / (h * h)
            diagonal = diagonal + p * (p - 1.0) * mass * np.abs(u) ** (p - 2.0)
            return diagonal[1:], -stiffness[1:-1] / (h * h)

        x0 = np.exp(-problem.kappa * problem.grid[1:-1])
        result = banded_newton_descent(objective, gradient, hessian, x0, mass[1:],
                                       max_iterations=self._settings.pde_max_iterations,
                                       gtol=self._settings.pde_gradient_tol)
        logger.debug('sup constant: G=%g after %d Newton steps', result.value, result.iterations)
        return result.value ** (-1.0 / p)

    def w_norm(self, problem: PDEProblem, u):
        """Discrete |u|_{W^{1,p}_g}."""
        disc = problem.discretization
        u = self._unknowns(problem, u)
        p = problem.p
        power = np.sum(disc.k_riemann * np.abs(disc.slopes(u)) ** p) + np.sum(disc.riemann_mass * np.abs(u) ** p)
        return float(power) ** (1.0 / p)

    # Bonanno parameters

    def bonanno_parameters(self, problem: PDEProblem, s0=1.0, R=None, r=None, rho_sweep=None, measure=True):
        """
        Level rho0 and interval end a_bar of the three critical points theorem for E_lambda.

        The level is the largest swept rho with rho < Phi(u1) and S(rho)/rho < J(u1)/Phi(u1), u1
        the test function and S(rho) = C2 |alpha|_1 c_inf^q (p rho / c)^{q/p} the bound on
        sup {J(u) : Phi(u) <= rho}. With measure=True every level also carries the supremum
        found by projected ascent from ascent_seeds starts.

        :param rho_sweep: increasing levels, defaults to Phi(u1) 10^k on a logarithmic grid
        :return: BonannoParameters

        :raises: InvalidArgumentError
        :raises: SweepFailureError
        """
        if R is None or r is None:
            R, r = self.default_radii(problem)
        u1 = self.test_function(s0, R, r, problem.structure, problem.grid)
        values = self.energy(problem, u1)
        if not values.j > 0:
            raise InvalidArgumentError('the test function must have J > 0', {'J': values.j, 'R': R, 'r': r})
        phi1, j1 = values.phi, values.j
        if rho_sweep is None:
            low, high, count = SWEEP_EXPONENTS
            rho_sweep = phi1 * 10.0 ** np.linspace(low, high, int(count))
        rho_sweep = np.asarray(rho_sweep, dtype=float)
        if rho_sweep.size == 0 or np.any(rho_sweep <= 0):
            raise InvalidArgumentError('levels must be positive', {'rho_sweep': rho_sweep.tolist()})

        disc = problem.discretization
        q = problem.nonlinearity.q
        c2 = problem.nonlinearity.c2()
        coercivity = self.coercivity_constant(problem.dim, problem.beta_sup, problem.p, problem.kappa)
        c_inf = self.sup_constant(problem)
        measured = [None] * rho_sweep.size
        bound_respected = True
        if measure:
            results = ordered_map(lambda level: self._measured_sup(problem, level), list(rho_sweep),
                                  self._settings.threads)
            candidates = [candidate for _, level_candidates in results for candidate in level_candidates]
            c_inf = max([c_inf] + [float(np.max(np.abs(u))) / self.w_norm(problem, u) for u in candidates])
            for u in candidates:
                j = float(np.sum(self._j_terms(problem, u)))
                limit = c2 * disc.alpha_l1 * c_inf ** q * self.w_norm(problem, u) ** q
                bound_respected = bound_respected and j <= limit * (1.0 + 1e-12)
            measured = [value for value, _ in results]

        factor = c2 * disc.alpha_l1 * c_inf ** q
        target = j1 / phi1
        rows = []
        choice = None
        for level, sup in zip(rho_sweep, measured):
            analytic = factor * (problem.p * level / coercivity) ** (q / problem.p)
            admissible = bool(level < phi1 and analytic / level < target)
            rows.append({
                'rho': float(level),
                'analytic_sup': analytic,
                'analytic_ratio': analytic / level,
                'measured_sup': sup,
                'measured_ratio': None if sup is None else sup / level,
                'admissible': admissible,
            })
            if admissible:
                choice = (float(level), analytic)
        if choice is None:
            raise SweepFailureError('no level on the sweep satisfies both inequalities, enlarge the grid',
                                    {'phi_u1': phi1, 'j_u1': j1, 'levels': [row['rho'] for row in rows]})
        rho0, analytic = choice
        a_bar = (1.0 + rho0) / (target - analytic / rho0)
        logger.info('bonanno parameters: rho0=%g a_bar=%g (Phi(u1)=%g, J(u1)=%g)', rho0, a_bar, phi1, j1)
        return BonannoParameters(rho0, a_bar, phi1, j1, analytic, c_inf, coercivity, c2, disc.alpha_l1, rows,
                                 bound_respected)

    def _measured_sup(self, problem, level):
        """
        sup {J(u) : Phi(u) = level, u >= 0} by projected ascent on directions v, u = t(v) v with
        t(v) = (level / Phi(v))^{1/p}.

        :return: tuple (best J, list of candidate maximizers)
        """
        disc = problem.discretization
        p = problem.p

        def lift(v):
            phi = float(np.sum(self._phi_terms(disc, v)))
            return (level / phi) ** (1.0 / p), phi

        def value(v):
            t, _ = lift(v)
            return float(np.sum(self._j_terms(problem, t * v)))

        def project(v):
            v = np.maximum(v, 0.0)
            top = float(np.max(v))
            return v / top if top > 0 else np.ones_like(v)

        best = 0.0
        candidates = []
        for seed in self._ascent_seeds(problem):
            scale = max(value(seed), np.finfo(float).tiny)

            def objective(v):
                return -value(v) / scale

            def gradient(v):
                t, phi = lift(v)
                grad_j = self._j_gradient(problem, t * v)
                grad = t * grad_j - t / (p * phi) * float(np.dot(grad_j, v)) * self._phi_gradient(disc, v)
                return -grad / scale

            result = projected_gradient_descent(objective, gradient, seed, project=project,
                                                max_iterations=self._settings.ascent_iterations,
                                                gtol=self._settings.pde_gradient_tol, scale=disc.mass)
            t, _ = lift(result.x)
            candidate = t * result.x
            candidates.append(candidate)
            best = max(best, value(result.x))
        return best, candidates

    def _ascent_seeds(self, problem):
        rho = problem.grid[:-1] * problem.kappa
        seeds = []
        count = self._settings.ascent_seeds
        for index in range(count):
            width = 0.25 * 1.5 ** (index // 2)
            if index % 2 == 0:
                seeds.append(np.exp(-(rho / width) ** 2))
            else:
                seeds.append(np.clip(1.0 - rho / (2.0 * width), 0.0, None))
        return seeds

    # critical points

    def multi_start_solve(self, problem: PDEProblem, lambda_grid=None, starts=None, s0=1.0):
        """
        Critical points of E_lambda found by damped Newton descent from deterministic starts,
        clustered in the sup norm with threshold cluster_threshold * s0

        :param lambda_grid: iterable of lambda, defaults to the problem's lambdas or its lambda
        :param starts: list of nodal arrays or RadialProfile, at least eight deterministic ones by default
        :return: list of CriticalPointReport, one per lambda
        """
        if lambda_grid is None:
            lambda_grid = problem.lambdas or (problem.lam,)
        lambdas = [float(lam) for lam in lambda_grid]
        if any(not lam >= 0 for lam in lambdas):
            raise InvalidArgumentError('lambda values must be non-negative', {'lambdas': lambdas})
        if starts is None:
            starts = self.default_starts(problem, s0)
        starts = [self._unknowns(problem, start) for start in starts]
        tasks = [(lam, index) for lam in lambdas for index in range(len(starts))]
        problems = {lam: problem.with_lambda(lam) for lam in lambdas}
        # workers only read the discretizations
        discretizations = [value.discretization for value in problems.values()]
        logger.debug('solving %d lambdas x %d starts on %d cells', len(discretizations), len(starts),
                     problem.cells)

        def solve(task):
            lam, index = task
            return self._descend(problems[lam], starts[index])

        outcomes = ordered_map(solve, tasks, self._settings.threads)
        reports = []
        for position, lam in enumerate(lambdas):
            results = outcomes[position * len(starts):(position + 1) * len(starts)]
            reports.append(self._cluster(problems[lam], results, s0))
        return reports

    def default_starts(self, problem: PDEProblem, s0=1.0):
        """Multiples of the test function and Gaussian bumps of growing height and width."""
        R, r = self.default_radii(problem)
        u1 = self.test_function(s0, R, r, problem.structure, problem.grid).values[:-1]
        rho = problem.grid[:-1] * problem.kappa
        starts = []
        for index in range(max(MIN_STARTS, self._settings.pde_starts)):
            level = 2.0 ** (index // 2 - 1)
            if index % 2 == 0:
                starts.append(level * u1)
            else:
                width = 0.5 * (1 + index // 2)
                starts.append(level * s0 * np.exp(-(rho / width) ** 2))
        return starts

    def _descend(self, problem, start):
        result = banded_newton_descent(
            lambda u: self.energy(problem, u).energy,
            lambda u: self.energy_gradient(problem, u),
            lambda u: self.energy_hessian(problem, u),
            start,
            problem.discretization.mass,
            max_iterations=self._settings.pde_max_iterations,
            gtol=self._settings.pde_gradient_tol,
            difference=lambda u, v: self.energy_difference(problem, u, v),
        )
        if not result.converged:
            logger.warning('start did not converge at lambda=%g: |g|=%g after %d steps',
                           problem.lam, result.gradient_norm, result.iterations)
        return result

    def _cluster(self, problem, results, s0):
        threshold = self._settings.cluster_threshold * s0
        starts = []
        found = []
        for index, result in enumerate(results):
            starts.append({
                'start': index,
                'converged': bool(result.converged),
                'energy': float(result.value),
                'gradient_norm': float(result.gradient_norm),
                'iterations': int(result.iterations),
                'monotone': bool(result.monotone),
            })
            if result.converged:
                found.append((float(result.value), float(result.gradient_norm), result.x))

        zero = np.zeros(problem.cells)
        if float(problem.nonlinearity.h(0.0)) == 0.0:
            found.append((0.0, float(np.linalg.norm(self.energy_gradient(problem, zero))), zero))

        kept = []
        for energy, norm, u in sorted(found, key=lambda item: item[0]):
            if all(np.max(np.abs(u - other)) > threshold for _, _, other in kept):
                kept.append((energy, norm, u))
        profiles = [RadialProfile(problem.grid, np.append(u, 0.0), problem.structure) for _, _, u in kept]
        distinct = np.array([[bool(np.max(np.abs(first - second)) > threshold) for _, _, second in kept]
                             for _, _, first in kept], dtype=bool).reshape(len(kept), len(kept))
        logger.info('lambda=%g: %d distinct critical points from %d starts', problem.lam, len(kept), len(results))
        return CriticalPointReport(problem.lam, profiles, [energy for energy, _, _ in kept],
                                   [norm for _, norm, _ in kept], distinct, starts)

    def grid_doubling_check(self, problem: PDEProblem, report: CriticalPointReport):
        """
        Interpolate every critical point onto the doubled grid, re-solve from there and report
        the gradient norm reached

        :return: list of dict rows with 'stable' when the norm is below 1e-6
        """
        fine = self.refine(problem).with_lambda(report.lam)
        rows = []
        for index, profile in enumerate(report.profiles):
            result = self._descend(fine, profile.regrid(fine.grid).values[:-1])
            rows.append({
                'index': index,
                'energy': report.energies[index],
                'refined_energy': float(result.value),
                'gradient_norm': float(result.gradient_norm),
                'stable': bool(result.gradient_norm < DOUBLING_TOLERANCE),
            })
        return rows

    def coercivity_witness(self, problem: PDEProblem, rays=None, scales=COERCIVITY_SCALES):
        """
        E_lambda(t v) along rays next to the lower bound
        (c/p) |u|^p - lambda C |alpha|_1 (c_inf |u| + c_inf^w |u|^w), u = t v

        :return: list of dict rows, one per ray, with 'energies', 'lower_bounds' and 'grows'
        """
        if rays is None:
            R, r = self.default_radii(problem)
            u1 = self.test_function(1.0, R, r, problem.structure, problem.grid).values[:-1]
            rho = problem.grid[:-1] * problem.kappa
            rays = [u1] + [np.exp(-(rho / width) ** 2)
                           for width in np.geomspace(0.25, 4.0, COERCIVITY_RAYS - 1)]
        rays = [self._unknowns(problem, ray) for ray in rays]
        shape = problem.nonlinearity
        c = self.coercivity_constant(problem.dim, problem.beta_sup, problem.p, problem.kappa)
        c_inf = self.sup_constant(problem)
        alpha_l1 = problem.discretization.alpha_l1
        rows = []
        for index, ray in enumerate(rays):
            energies = []
            bounds = []
            for scale in scales:
                u = scale * ray
                norm = self.w_norm(problem, u)
                energies.append(self.energy(problem, u).energy)
                bounds.append(c / problem.p * norm ** problem.p
                              - problem.lam * shape.C * alpha_l1 * (c_inf * norm + (c_inf * norm) ** shape.w))
            rows.append({
                'ray': index,
                'scales': [float(scale) for scale in scales],
                'energies': energies,
                'lower_bounds': bounds,
                'grows': bool(energies[-1] > 0 and energies[-1] > max(energies[:-1])),
            })
        return rows

    # discrete pieces

    def _unknowns(self, problem, u):
        if isinstance(u, RadialProfile):
            values = u(problem.grid)
            return np.array(values[:-1], dtype=float)
        u = np.asarray(u, dtype=float)
        if u.shape == (problem.cells + 1,):
            if u[-1] != 0.0:
                raise InvalidArgumentError('profiles vanish at the cutoff', {'u_N': float(u[-1])})
            return u[:-1]
        if u.shape != (problem.cells,):
            raise InvalidArgumentError('nodal vector does not match the grid',
                                       {'shape': list(u.shape), 'cells': problem.cells})
        return u

    @staticmethod
    def _phi_terms(disc: RadialDiscretization, u):
        slopes = disc.slopes(u)
        return np.abs(slopes) ** disc.p * disc.dual_weights(slopes) / disc.p

    @staticmethod
    def _phi_gradient(disc: RadialDiscretization, u):
        slopes = disc.slopes(u)
        flux = np.abs(slopes) ** (disc.p - 1.0) * np.sign(slopes) * disc.dual_weights(slopes)
        return (np.concatenate(([0.0], flux[:-1])) - flux) / disc.h

    @staticmethod
    def _phi_hessian(disc: RadialDiscretization, u):
        slopes = disc.slopes(u)
        stiffness = (disc.p - 1.0) * np.abs(slopes) ** (disc.p - 2.0) * disc.dual_weights(slopes)
        h2 = disc.h * disc.h
        diagonal = (np.concatenate(([0.0], stiffness[:-1])) + stiffness) / h2
        return diagonal, -stiffness[:-1] / h2

    @staticmethod
    def _j_terms(problem, u):
        return problem.discretization.alpha_mass * problem.nonlinearity.H(u)

    @staticmethod
    def _j_gradient(problem, u):
        return problem.discretization.alpha_mass * problem.nonlinearity.h(u)

    @staticmethod
    def _check_constants(d, kappa, p):
        if not kappa > 0 or not p > 1 or int(d) != d or d < 2:
            raise InvalidArgumentError('need d >= 2, kappa > 0 and p > 1', {'d': d, 'kappa': kappa, 'p': p})
