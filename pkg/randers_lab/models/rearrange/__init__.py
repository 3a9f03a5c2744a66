from ._managers import RearrangeManager
from ._models import (RadialProfile, LevelSetTable, NormCheck, PolyaSzegoCheck, TENT, BUMP, PLATEAU, TWO_PEAK,
                      PROFILE_KINDS)


__all__ = [
    "RearrangeManager",
    "RadialProfile",
    "LevelSetTable",
    "NormCheck",
    "PolyaSzegoCheck",
    "TENT",
    "BUMP",
    "PLATEAU",
    "TWO_PEAK",
    "PROFILE_KINDS",
]
