from ._managers import SobolevManager
from ._models import (AdmissiblePair, Rejection, FunkVerdict, SobolevNorms, EmbeddingEstimate, SOBOLEV,
                      MOSER_TRUDINGER, MORREY, REGIMES)


__all__ = [
    "SobolevManager",
    "AdmissiblePair",
    "Rejection",
    "FunkVerdict",
    "SobolevNorms",
    "EmbeddingEstimate",
    "SOBOLEV",
    "MOSER_TRUDINGER",
    "MORREY",
    "REGIMES",
]
