import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from econclimb import (
    AtmosphereModel,
    ConstantAtmosphere,
    DegenerateSegmentError,
    DomainError,
    TROPOSPHERE,
    mean_density,
    mean_inverse_density,
)

# Frozen values computed once by direct evaluation of the power law
# rho = 4.1748e-11 * (288.14 - 0.00649 h)^4.256 at double precision.
RHO_TABLE = {
    0.0: 1.2266153393114863,
    250.0: 1.1974874823079392,
    500.0: 1.1688917671249483,
    750.0: 1.1408214196772363,
    1000.0: 1.1132697141618439,
    11000.0: 0.36515531852041967,
}


def test_density_frozen_values():
    for h, rho in RHO_TABLE.items():
        assert TROPOSPHERE.density(h) == pytest.approx(rho, rel=1e-14)


def test_density_sea_level_near_standard():
    # sanity anchor against the usual sea-level value
    assert TROPOSPHERE.density(0.0) == pytest.approx(1.225, rel=5e-3)


def test_density_vectorized_matches_scalar():
    hs = np.array([0.0, 250.0, 500.0, 750.0, 1000.0])
    rhos = TROPOSPHERE.density(hs)
    assert rhos.shape == hs.shape
    for h, rho in zip(hs, rhos):
        assert rho == TROPOSPHERE.density(float(h))


@given(st.floats(min_value=0.0, max_value=10999.0),
       st.floats(min_value=1e-6, max_value=1.0))
def test_density_strictly_decreasing(h, dh):
    assert TROPOSPHERE.density(h + dh) < TROPOSPHERE.density(h)


def test_density_domain_errors():
    with pytest.raises(DomainError):
        TROPOSPHERE.density(-1.0)
    with pytest.raises(DomainError):
        TROPOSPHERE.density(11000.1)
    with pytest.raises(DomainError):
        TROPOSPHERE.density(np.array([100.0, -5.0]))


# ---------------------------------------------------------------------------
# band means

def test_mean_density_two_point_band():
    # step equal to the span -> plain endpoint average
    expected = 0.5 * (TROPOSPHERE.density(0.0) + TROPOSPHERE.density(1000.0))
    assert mean_density(TROPOSPHERE, 0.0, 1000.0, step=1000.0) == \
        pytest.approx(expected, rel=1e-15)
    expected_inv = 0.5 * (1.0 / TROPOSPHERE.density(0.0)
                          + 1.0 / TROPOSPHERE.density(1000.0))
    assert mean_inverse_density(TROPOSPHERE, 0.0, 1000.0, step=1000.0) == \
        pytest.approx(expected_inv, rel=1e-15)


def test_mean_density_frozen_values():
    # reference climb band at the default 1 m grid
    assert mean_density(TROPOSPHERE, 0.0, 1000.0) == \
        pytest.approx(1.16924271654781, rel=1e-12)
    assert mean_inverse_density(TROPOSPHERE, 0.0, 1000.0) == \
        pytest.approx(0.855925952019917, rel=1e-12)
    # upper half of the climb
    assert mean_density(TROPOSPHERE, 500.0, 1000.0) == \
        pytest.approx(1.1409082054932758, rel=1e-12)
    assert mean_inverse_density(TROPOSPHERE, 500.0, 1000.0) == \
        pytest.approx(0.8766690319776704, rel=1e-12)
    # non-dividing step pins the top endpoint
    assert mean_density(TROPOSPHERE, 200.0, 800.0, step=2.0) == \
        pytest.approx(1.1690186958431767, rel=1e-12)
    assert mean_inverse_density(TROPOSPHERE, 200.0, 800.0, step=2.0) == \
        pytest.approx(0.8556611787613062, rel=1e-12)


def test_mean_density_step_refinement_converges():
    # halving the default step must not move the mean by more than 1e-6 rel
    coarse = mean_density(TROPOSPHERE, 0.0, 1000.0, step=1.0)
    fine = mean_density(TROPOSPHERE, 0.0, 1000.0, step=0.5)
    assert abs(fine - coarse) / coarse < 1e-6
    coarse_inv = mean_inverse_density(TROPOSPHERE, 0.0, 1000.0, step=1.0)
    fine_inv = mean_inverse_density(TROPOSPHERE, 0.0, 1000.0, step=0.5)
    assert abs(fine_inv - coarse_inv) / coarse_inv < 1e-6


def test_mean_density_matches_fine_grid_oracle():
    # 0.1 m grid values, frozen
    assert mean_density(TROPOSPHERE, 0.0, 1000.0, step=0.1) == \
        pytest.approx(1.169242086088158, rel=1e-12)
    assert mean_inverse_density(TROPOSPHERE, 0.0, 1000.0, step=0.1) == \
        pytest.approx(0.8559252067396129, rel=1e-12)
    # default grid agrees with the fine grid to well under 1e-4
    assert mean_density(TROPOSPHERE, 0.0, 1000.0) == \
        pytest.approx(1.169242086088158, rel=1e-4)


@given(st.floats(min_value=0.0, max_value=9000.0),
       st.floats(min_value=10.0, max_value=2000.0))
def test_mean_bounds_and_jensen(h0, span):
    hc = h0 + span
    rho_bar = mean_density(TROPOSPHERE, h0, hc)
    inv_bar = mean_inverse_density(TROPOSPHERE, h0, hc)
    # mean sits between the band's extreme densities (density decreases in h)
    assert TROPOSPHERE.density(hc) <= rho_bar <= TROPOSPHERE.density(h0)
    # Jensen: mean of reciprocals dominates reciprocal of mean
    assert inv_bar >= 1.0 / rho_bar


def test_mean_density_validation():
    with pytest.raises(DegenerateSegmentError):
        mean_density(TROPOSPHERE, 1000.0, 1000.0)
    with pytest.raises(DegenerateSegmentError):
        mean_density(TROPOSPHERE, 1000.0, 500.0)
    with pytest.raises(DomainError):
        mean_density(TROPOSPHERE, 0.0, 1000.0, step=0.0)
    with pytest.raises(DomainError):
        mean_density(TROPOSPHERE, 0.0, 12000.0)


def test_custom_model_parameters():
    model = AtmosphereModel(c0=1.0, t0=2.0, lapse=0.0, exponent=3.0,
                            h_max=100.0)
    assert model.density(50.0) == pytest.approx(8.0, rel=1e-15)


def test_constant_atmosphere_stub():
    atmo = ConstantAtmosphere(1.1)
    assert atmo.density(0.0) == 1.1
    assert atmo.density(123456.0) == 1.1
    assert mean_density(atmo, 0.0, 5000.0) == pytest.approx(1.1, rel=1e-15)
    assert mean_inverse_density(atmo, 0.0, 5000.0) == \
        pytest.approx(1.0 / 1.1, rel=1e-15)
    bounded = ConstantAtmosphere(1.1, h_max=100.0)
    with pytest.raises(DomainError):
        bounded.density(101.0)
