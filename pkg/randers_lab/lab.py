from typing import Optional

from .models.modelspace import ModelSpaceManager
from .models.numerics import NumericsManager
from .models.orbits import OrbitManager
from .models.pde import PDEManager
from .models.randers import RandersManager
from .models.rearrange import RearrangeManager
from .models.sobolev import SobolevManager
from .settings import Settings


class Lab:
    def __init__(self, settings=None):
        """
        :param settings: Settings shared by every manager, defaults apply when omitted
        """
        self._settings = settings if settings is not None else Settings()

        self._numerics = None  # type: Optional[NumericsManager]
        self._modelspace = None  # type: Optional[ModelSpaceManager]
        self._randers = None  # type: Optional[RandersManager]
        self._orbits = None  # type: Optional[OrbitManager]
        self._rearrange = None  # type: Optional[RearrangeManager]
        self._sobolev = None  # type: Optional[SobolevManager]
        self._pde = None  # type: Optional[PDEManager]

    @property
    def settings(self):
        return self._settings

    @property
    def numerics(self):
        """
        Get numerics manager

        :return: NumericsManager
        """
        if not self._numerics:
            self._numerics = NumericsManager(self._settings)
        return self._numerics

    @property
    def modelspace(self):
        """
        Get model space manager

        :return: ModelSpaceManager
        """
        if not self._modelspace:
            self._modelspace = ModelSpaceManager(self._settings)
        return self._modelspace

    @property
    def randers(self):
        """
        Get Randers manager

        :return: RandersManager
        """
        if not self._randers:
            self._randers = RandersManager(self._settings)
        return self._randers

    @property
    def orbits(self):
        """
        Get orbit manager

        :return: OrbitManager
        """
        if not self._orbits:
            self._orbits = OrbitManager(self._settings)
        return self._orbits

    @property
    def rearrange(self):
        """
        Get rearrangement manager

        :return: RearrangeManager
        """
        if not self._rearrange:
            self._rearrange = RearrangeManager(self._settings)
        return self._rearrange

    @property
    def sobolev(self):
        """
        Get Sobolev manager

        :return: SobolevManager
        """
        if not self._sobolev:
            self._sobolev = SobolevManager(self._settings)
        return self._sobolev

    @property
    def pde(self):
        """
        Get PDE manager

        :return: PDEManager
        """
        if not self._pde:
            self._pde = PDEManager(self._settings)
        return self._pde
