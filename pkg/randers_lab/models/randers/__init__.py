from ._managers import RandersManager
from ._models import (RandersStructure, FunkModel, BetaProfile, BETA_ZERO, BETA_CONSTANT, BETA_TANH,
                      BETA_KINDS)


__all__ = [
    "RandersManager",
    "RandersStructure",
    "FunkModel",
    "BetaProfile",
    "BETA_ZERO",
    "BETA_CONSTANT",
    "BETA_TANH",
    "BETA_KINDS",
]
