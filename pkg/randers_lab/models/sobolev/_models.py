import math

from ..base import Base
from ...errors import DIVERGENT


SOBOLEV = 'S'
MOSER_TRUDINGER = 'MT'
MORREY = 'M'

REGIMES = (SOBOLEV, MOSER_TRUDINGER, MORREY)


def _format_exponent(q):
    return 'inf' if q == math.inf else q


class AdmissiblePair(Base):
    _fields = ('p', 'q', 'd', 'regime')

    admissible = True

    def __init__(self, p, q, d, regime):
        """

        :param p: float > 1
        :param q: float > p or math.inf
        :param d: int dimension
        :param regime: str one of REGIMES
        """
        self.p = float(p)
        self.q = float(q)
        self.d = int(d)
        self.regime = regime

    @property
    def critical_exponent(self):
        """p* = pd / (d - p), infinite outside the Sobolev regime."""
        if self.p < self.d:
            return self.p * self.d / (self.d - self.p)
        return math.inf

    def to_json(self):
        return {'p': self.p, 'q': _format_exponent(self.q), 'd': self.d, 'regime': self.regime}


class Rejection(Base):
    """Exponent pair outside every admissible regime."""
    _fields = ('p', 'q', 'd', 'reason')

    admissible = False
    regime = None

    def __init__(self, p, q, d, reason):
        self.p = float(p)
        self.q = float(q)
        self.d = int(d)
        self.reason = reason


class FunkVerdict(Base):
    _fields = ('d', 'p', 'q', 't', 'w_norm_bound', 'lq_norm', 'embedding_fails')

    def __init__(self, d, p, q, t, w_norm_bound, lq_norm, regime=None, w_norm_exact=None):
        """

        :param w_norm_bound: float or DIVERGENT, Beta bound on |u|^p_{W^{1,p}_F}
        :param lq_norm: float or DIVERGENT, |u|^q_{L^q}; DIVERGENT for q = inf
        :param regime: str regime of (p, q), None when the pair is not admissible
        :param w_norm_exact: float or DIVERGENT, the W-norm integral itself when computed
        """
        self.d = int(d)
        self.p = float(p)
        self.q = float(q)
        self.t = float(t)
        self.w_norm_bound = w_norm_bound
        self.lq_norm = lq_norm
        self.regime = regime
        self.w_norm_exact = w_norm_exact
        self.embedding_fails = w_norm_bound is not DIVERGENT and lq_norm is DIVERGENT

    def row(self):
        return {
            'd': self.d,
            'p': self.p,
            'q': self.q,
            'regime': self.regime if self.regime is not None else 'none',
            't': self.t,
            'w_bound': self.w_norm_bound,
            'lq_norm': self.lq_norm,
            'fails': self.embedding_fails,
        }


class SobolevNorms(Base):
    """
    p-th powers of the W^{1,p} norms and the requested Lebesgue norms of a radial profile.
    """
    _fields = ('p', 'w1p_finsler', 'w1p_riemann', 'lq', 'linf')

    def __init__(self, p, w1p_finsler, w1p_riemann, lq, linf):
        self.p = p
        self.w1p_finsler = w1p_finsler
        self.w1p_riemann = w1p_riemann
        self.lq = lq
        self.linf = linf


class EmbeddingEstimate(Base):
    _fields = ('pair', 'rho', 'quotient')

    def __init__(self, pair, rho, quotient, best_seed, converged_seeds, seeds):
        """

        :param pair: AdmissiblePair
        :param rho: float ball radius
        :param quotient: float smallest Rayleigh quotient found, an upper bound for S(y, rho)^-1
        :param best_seed: int index of the seed that reached it
        :param converged_seeds: int seeds whose descent met the gradient test
        :param seeds: int seeds tried
        """
        self.pair = pair
        self.rho = rho
        self.quotient = quotient
        self.best_seed = best_seed
        self.converged_seeds = converged_seeds
        self.seeds = seeds
