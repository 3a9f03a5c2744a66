import os

from .errors import ValidationError


THREADS_ENV = 'RANDERS_LAB_THREADS'

DEFAULTS = {
    'tol': 1e-10,
    'divergence_cap': 1e12,
    'fd_step': 1e-5,
    'greedy_step_fraction': 0.05,
    'orbit_samples': 10000,
    'reversibility_samples': 257,
    'rearrangement_tolerance': 1e-3,
    'rearrangement_reference_cells': 10000,
    'profile_quadrature_order': 4,
    'embedding_seeds': 20,
    'embedding_cells': 64,
    'embedding_iterations': 400,
    'pde_cells': 2048,
    'pde_cutoff': 12.0,
    'pde_starts': 8,
    'pde_max_iterations': 500,
    'pde_gradient_tol': 1e-8,
    'cluster_threshold': 1e-4,
    'ascent_seeds': 20,
    'ascent_iterations': 60,
    'threads': None,
}

_INTEGER_KEYS = {
    'orbit_samples', 'reversibility_samples', 'rearrangement_reference_cells',
    'profile_quadrature_order', 'embedding_seeds', 'embedding_cells',
    'embedding_iterations', 'pde_cells', 'pde_starts', 'pde_max_iterations',
    'ascent_seeds', 'ascent_iterations', 'threads',
}


class Settings:
    """
    Tunables shared by every manager. Instances are frozen; use replace() to derive a copy.
    """

    def __init__(self, **overrides):
        values = dict(DEFAULTS)
        problems = []
        for key, value in overrides.items():
            if key not in DEFAULTS:
                problems.append("unknown setting '{}'".format(key))
                continue
            values[key] = value
        for key, value in values.items():
            problem = self._validate_value(key, value)
            if problem:
                problems.append(problem)
        if problems:
            raise ValidationError('invalid settings', overrides, problems)

        values['threads'] = self._resolve_threads(values['threads'])
        for key in _INTEGER_KEYS:
            if values[key] is not None:
                values[key] = int(values[key])
        object.__setattr__(self, '_values', values)

    def __getattr__(self, name):
        values = self.__dict__.get('_values')
        if values is not None and name in values:
            return values[name]
        raise AttributeError(name)

    def __setattr__(self, name, value):
        raise AttributeError('Settings are read-only, use replace()')

    def __eq__(self, other):
        return isinstance(other, Settings) and self._values == other._values

    def __repr__(self):
        return '(Settings {})'.format(self._values)

    @classmethod
    def from_mapping(cls, mapping):
        """
        Build settings from a decoded JSON object

        :param mapping: dict
        :return: Settings

        :raises: ValidationError
        """
        if not isinstance(mapping, dict):
            raise ValidationError('settings must be a JSON object', {'settings': mapping})
        return cls(**mapping)

    def as_dict(self):
        return dict(self._values)

    def replace(self, **overrides):
        values = self.as_dict()
        values.update(overrides)
        return Settings(**values)

    @staticmethod
    def _validate_value(key, value):
        if key == 'threads':
            if value is None:
                return None
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                return "'threads' must be a positive integer"
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return "'{}' must be a number".format(key)
        if key in _INTEGER_KEYS and int(value) != value:
            return "'{}' must be an integer".format(key)
        if value <= 0:
            return "'{}' must be positive".format(key)
        if key == 'greedy_step_fraction' and value > 0.05:
            return "'greedy_step_fraction' must not exceed 1/20"
        if key == 'profile_quadrature_order' and value < 2:
            return "'profile_quadrature_order' must be at least 2"
        return None

    @staticmethod
    def _resolve_threads(threads):
        env = os.environ.get(THREADS_ENV)
        cap = None
        if env is not None and env.strip():
            try:
                cap = int(env)
            except ValueError:
                cap = 0
            if cap < 1:
                raise ValidationError(
                    '{} must be a positive integer'.format(THREADS_ENV), {THREADS_ENV: env})
        if threads is None:
            threads = os.cpu_count() or 1
        if cap is not None:
            threads = min(threads, cap)
        return threads
