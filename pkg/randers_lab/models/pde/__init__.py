from ._managers import PDEManager
from ._models import (Nonlinearity, AlphaProfile, PDEProblem, RadialDiscretization, EnergyValues,
                      BonannoParameters, CriticalPointReport, GAUSSIAN, INDICATOR, EXPONENTIAL, ALPHA_KINDS)


__all__ = [
    "PDEManager",
    "Nonlinearity",
    "AlphaProfile",
    "PDEProblem",
    "RadialDiscretization",
    "EnergyValues",
    "BonannoParameters",
    "CriticalPointReport",
    "GAUSSIAN",
    "INDICATOR",
    "EXPONENTIAL",
    "ALPHA_KINDS",
]
