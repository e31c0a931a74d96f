"""Troposphere density model and segment-averaged density quantities.

Air density follows a single power law in altitude,

    rho(h) = c0 * (t0 - lapse * h) ** exponent

which is valid through the troposphere. Climb energy bookkeeping needs two
aggregates of the density along the climbed altitude band: the arithmetic
mean of rho and the arithmetic mean of 1/rho, both taken over a uniform
altitude grid that includes the band endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSegmentError, DomainError


@dataclass(frozen=True)
class AtmosphereModel:
    """Power-law density model for the troposphere.

    Attributes:
        c0: density coefficient  [kg m^-3 K^-4.256]
        t0: base temperature term  [K]
        lapse: temperature drop per meter of altitude  [K m^-1]
        exponent: power-law exponent  [-]
        h_max: validity ceiling  [m]
    """

    c0: float = 4.1748e-11
    t0: float = 288.14
    lapse: float = 0.00649
    exponent: float = 4.256
    h_max: float = 11000.0  # [m] troposphere ceiling

    def density(self, h):
        """Air density at altitude h.

        Args:
            h: geometric altitude in meters; scalar or array.
                Must satisfy 0 <= h <= h_max.

        Returns:
            Density in kg/m^3, same shape as h.
        """
        h_arr = np.asarray(h, dtype=float)
        if np.any(h_arr < 0.0) or np.any(h_arr > self.h_max):
            raise DomainError(
                f"altitude must lie in [0, {self.h_max:g}] m, got {h!r}"
            )
        rho = self.c0 * (self.t0 - self.lapse * h_arr) ** self.exponent
        if h_arr.ndim == 0:
            return float(rho)
        return rho


@dataclass(frozen=True)
class ConstantAtmosphere:
    """Stub model with uniform density, for closed-form cross-checks."""

    value: float  # [kg m^-3]
    h_max: float = float("inf")  # [m]

    def density(self, h):
        h_arr = np.asarray(h, dtype=float)
        if np.any(h_arr < 0.0) or np.any(h_arr > self.h_max):
            raise DomainError(
                f"altitude must lie in [0, {self.h_max:g}] m, got {h!r}"
            )
        if h_arr.ndim == 0:
            return self.value
        return np.full_like(h_arr, self.value)


#: Default troposphere model used throughout the package.
TROPOSPHERE = AtmosphereModel()


def _altitude_grid(h0, hc, step):
    """Uniform inclusive grid from h0 to hc.

    The last point is pinned to hc exactly so the band endpoints always
    participate in the average, regardless of whether step divides the span.
    """
    if hc <= h0:
        raise DegenerateSegmentError(
            f"altitude band must climb: h0={h0!r}, hc={hc!r}"
        )
    if step <= 0.0:
        raise DomainError(f"grid step must be positive, got {step!r}")
    n = int(np.ceil((hc - h0) / step - 1e-12))
    grid = h0 + step * np.arange(n + 1)
    grid[-1] = hc
    return grid


def mean_density(model, h0, hc, step=1.0):
    """Arithmetic mean of density over the inclusive grid h0, h0+step, ..., hc.

    The divisor is the number of grid samples, so a two-point grid returns
    the plain average of the endpoint densities.

    Args:
        model: object exposing ``density(h)``; normally :data:`TROPOSPHERE`.
        h0: band bottom  [m]
        hc: band top  [m]
        step: grid spacing  [m], default 1 m.

    Returns:
        Mean density in kg/m^3.
    """
    grid = _altitude_grid(h0, hc, step)
    return float(np.mean(model.density(grid)))


def mean_inverse_density(model, h0, hc, step=1.0):
    """Arithmetic mean of 1/density over the same inclusive grid.

    By Jensen's inequality this is always >= 1/mean_density for any band.
    """
    grid = _altitude_grid(h0, hc, step)
    return float(np.mean(1.0 / model.density(grid)))
