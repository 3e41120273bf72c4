import numpy as np
import pytest

from nonlocal_nls import Potential, ScatteringData, compute_scattering


@pytest.fixture(scope="session")
def box_plus():
    return Potential(kind="box", amplitude=0.3, sigma=1,
                     params={"left": -1.0, "right": 1.0}, L=8.0, N=256)


@pytest.fixture(scope="session")
def box_minus():
    return Potential(kind="box", amplitude=0.3, sigma=-1,
                     params={"left": -1.0, "right": 1.0}, L=8.0, N=256)


@pytest.fixture(scope="session")
def gauss_small():
    return Potential(kind="gaussian", amplitude=0.1, sigma=1,
                     params={"width": 1.0}, L=16.0, N=1024)


@pytest.fixture(scope="session")
def zgrid_wide():
    return np.linspace(-16.0, 16.0, 2049)


@pytest.fixture(scope="session")
def box_data(box_plus, zgrid_wide):
    return compute_scattering(box_plus, zgrid_wide)


@pytest.fixture(scope="session")
def box_minus_data(box_minus, zgrid_wide):
    return compute_scattering(box_minus, zgrid_wide)


def synthetic_data(z, r_fn, rb_fn):
    """ScatteringData with prescribed reflection functions.

    a = abreve = (1 - r rbreve)^{-1/2} keeps a abreve - b bbreve = 1 exact.
    """
    z = np.asarray(z, dtype=float)
    r = np.asarray(r_fn(z), dtype=complex)
    rb = np.asarray(rb_fn(z), dtype=complex)
    w = 1.0 - r * rb
    a = w ** -0.5
    return ScatteringData(
        z_grid=z, a=a, a_breve=a.copy(), b=r * a, b_breve=rb * a,
        r=r, r_breve=rb, truncation_L=float("nan"), truncation_error=0.0,
    )


@pytest.fixture()
def make_synthetic():
    return synthetic_data
