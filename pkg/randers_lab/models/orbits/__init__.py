from ._managers import OrbitManager, sphere_points, rotation
from ._models import (GroupAction, MatrixPoint, PackingReport, CoercivityVerdict, ProductHausdorffReport,
                      MatrixHausdorffReport, FULL_ROTATION, PRODUCT_ROTATION, MATRIX_CONJUGATION, ACTION_KINDS,
                      GREEDY, ANGULAR_EXACT)


__all__ = [
    "OrbitManager",
    "GroupAction",
    "MatrixPoint",
    "PackingReport",
    "CoercivityVerdict",
    "ProductHausdorffReport",
    "MatrixHausdorffReport",
    "FULL_ROTATION",
    "PRODUCT_ROTATION",
    "MATRIX_CONJUGATION",
    "ACTION_KINDS",
    "GREEDY",
    "ANGULAR_EXACT",
    "sphere_points",
    "rotation",
]
