import numpy as np
import pytest

from alphamod import (ScanConfig, admissibility_scan, gaussian_window)
from alphamod.grids import SampledGrid, Signal


@pytest.fixture(scope="session")
def gauss():
    return gaussian_window()


@pytest.fixture(scope="session")
def gauss_tab(gauss):
    """Shared symbol table for the Gaussian at alpha = 0.5.

    xi_max 80 is plenty: the Gaussian symbol settles onto its tail value
    well before that, and the table extends past xi_max by the constant
    tail anyway.
    """
    return admissibility_scan(gauss, 0.5, ScanConfig(xi_max=80, n_nodes=801))


@pytest.fixture()
def chirp_grid():
    return SampledGrid.centered(256, 1.0 / 16.0)


@pytest.fixture()
def chirp(chirp_grid):
    t = chirp_grid.coords
    v = np.exp(-np.pi * (t / 2.5) ** 2) * np.exp(
        2j * np.pi * (0.5 * t + 0.35 * t**2))
    return Signal(chirp_grid, v)
