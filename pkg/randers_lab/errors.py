class LabError(Exception):
    def __init__(self, msg, content=None):
        """

        :param msg: str error message
        :param content: dict offending values
        """
        super().__init__(msg)
        self.msg = msg
        self.content = content if content is not None else {}

    def __str__(self):
        return self.msg


class InvalidArgumentError(LabError):
    pass


class EvaluationError(LabError):
    pass


class DegenerateMetricError(LabError):
    pass


class SweepFailureError(LabError):
    pass


class ValidationError(LabError):
    def __init__(self, msg, content=None, details=None):
        """

        :param msg: str error message
        :param content: dict offending values
        :param details: list of str per-field problems
        """
        super().__init__(msg, content)
        self.details = list(details) if details else []

    def record(self):
        """
        Machine-readable form written by the command line front-end

        :return: dict
        """
        return {
            'error': self.__class__.__name__,
            'message': self.msg,
            'details': self.details,
        }


class _Divergent:
    """Token for integrals and norms that are infinite."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'DIVERGENT'

    __str__ = __repr__

    def __reduce__(self):
        return (_Divergent, ())


DIVERGENT = _Divergent()


def is_divergent(value):
    return value is DIVERGENT
