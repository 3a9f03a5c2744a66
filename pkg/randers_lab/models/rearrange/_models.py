import csv
import io

import numpy as np

from ..base import Base
from ...errors import InvalidArgumentError


TENT = 'tent'
BUMP = 'bump'
PLATEAU = 'plateau'
TWO_PEAK = 'two_peak'

PROFILE_KINDS = (TENT, BUMP, PLATEAU, TWO_PEAK)


class RadialProfile(Base):
    """
    Piecewise-linear radial function u(r) on grid nodes r_0 = 0 < ... < r_N, r the metric
    distance from the centre of the ambient space.
    """
    _fields = ('grid', 'values', 'ambient')

    def __init__(self, grid, values, ambient):
        """

        :param grid: sequence of float strictly increasing radii starting at 0
        :param values: sequence of float u(r_i)
        :param ambient: SpaceForm or RandersStructure carrying the radial volume element
        """
        grid = np.array(grid, dtype=float)
        values = np.array(values, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or grid.shape != values.shape:
            raise InvalidArgumentError('grid and values must be matching 1-d arrays with at least 2 nodes',
                                       {'grid': grid.shape, 'values': values.shape})
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise InvalidArgumentError('grid must start at 0 and increase strictly', {'grid': grid[:5].tolist()})
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError('profile values must be finite', {'values': values[:5].tolist()})
        grid.flags.writeable = False
        values.flags.writeable = False
        self.grid = grid
        self.values = values
        self.ambient = ambient

    @property
    def cells(self):
        return self.grid.size - 1

    @property
    def radius(self):
        return float(self.grid[-1])

    @property
    def slopes(self):
        return np.diff(self.values) / np.diff(self.grid)

    def __call__(self, r):
        return np.interp(r, self.grid, self.values, right=0.0)

    def regrid(self, grid):
        return RadialProfile(grid, self(np.asarray(grid, dtype=float)), self.ambient)

    def with_values(self, values):
        return RadialProfile(self.grid, values, self.ambient)

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['r', 'u'])
        for r, u in zip(self.grid, self.values):
            writer.writerow(['%.17g' % r, '%.17g' % u])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text, ambient):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [cell.strip() for cell in rows[0]] != ['r', 'u']:
            raise InvalidArgumentError('profile CSV must start with the header r,u', {'header': rows[:1]})
        try:
            data = np.array([[float(cell) for cell in row] for row in rows[1:] if row], dtype=float)
        except ValueError as err:
            raise InvalidArgumentError('profile CSV holds a non-numeric cell: {}'.format(err), {})
        return cls(data[:, 0], data[:, 1], ambient)


class LevelSetTable(Base):
    _fields = ('levels', 'volumes')

    def __init__(self, levels, volumes):
        """

        :param levels: np.ndarray decreasing levels t_0 > ... > t_K
        :param volumes: np.ndarray Vol({u > t_k}), non-decreasing
        """
        self.levels = np.asarray(levels, dtype=float)
        self.volumes = np.asarray(volumes, dtype=float)

    def rows(self):
        return [{'level': float(t), 'volume': float(v)} for t, v in zip(self.levels, self.volumes)]


class NormCheck(Base):
    _fields = ('q', 'norm', 'rearranged_norm', 'discrepancy', 'tolerance')

    def __init__(self, q, norm, rearranged_norm, discrepancy, tolerance):
        self.q = q
        self.norm = norm
        self.rearranged_norm = rearranged_norm
        self.discrepancy = discrepancy
        self.tolerance = tolerance

    @property
    def holds(self):
        return self.discrepancy <= self.tolerance


class PolyaSzegoCheck(Base):
    _fields = ('p', 'lhs', 'rhs', 'holds')

    def __init__(self, p, lhs, rhs, factor, holds):
        """

        :param lhs: float |grad_g u|_{L^p}
        :param rhs: float factor * |grad u*|_{L^p}
        :param factor: float C(d) / (d omega_d^{1/d})
        :param holds: bool lhs >= rhs up to the grid tolerance
        """
        self.p = p
        self.lhs = lhs
        self.rhs = rhs
        self.factor = factor
        self.holds = holds
