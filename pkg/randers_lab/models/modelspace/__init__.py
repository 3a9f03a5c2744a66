from ._managers import ModelSpaceManager
from ._models import SpaceForm, MatrixCone, EUCLIDEAN, POINCARE_BALL, s_c, mobius_add


__all__ = [
    "ModelSpaceManager",
    "SpaceForm",
    "MatrixCone",
    "EUCLIDEAN",
    "POINCARE_BALL",
    "s_c",
    "mobius_add",
]
