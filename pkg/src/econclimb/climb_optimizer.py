"""Optimal constant-airspeed climb planning.

The planning problem: fly a straight climb segment of slant length d at one
airspeed v, chosen to minimize direct operating cost

    J(v) = tau (ci0 - ci_in) (1 - exp(-d / (tau v)))   # time cost, filtered CI
           + ci_in d / v                               # time cost, steady CI
           + Q0 - Q_f(v)                               # battery charge spent

where the cost index relaxes from ci0 toward the commanded ci_in with time
constant tau (``math.inf`` = constant-CI mode, collapsing the first two terms
to ci0 d / v). Q_f comes from the closed-form segment discharge in
``vehicle``. J is scalar in v, so the optimum is found by bracketed
root-finding on dJ/dv with a positivity check on the second derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .atmosphere import TROPOSPHERE, mean_density, mean_inverse_density
from .errors import (
    DegenerateSegmentError,
    DomainError,
    EnvelopeError,
    NoInteriorOptimumError,
    SaddlePointError,
)
from .vehicle import final_charge, final_charge_sensitivity

#: Lower edge of the airspeed search bracket.  [m s^-1]
V_LO_DEFAULT = 5.0

#: Points in the gradient sign scan used for bracket discovery.
_SCAN_POINTS = 50


@dataclass(frozen=True)
class ClimbSegment:
    """One straight climb leg with its averaged atmosphere quantities.

    Attributes:
        start: (x, h) of the leg start  [m]
        end: (x, h) of the leg end  [m]
        h_dot_bar: mean climb rate over the leg  [m s^-1]
        rho_bar: mean air density over the climbed band  [kg m^-3]
        delta_rho_bar: mean inverse air density over the band  [m^3 kg^-1]
    """

    start: tuple[float, float]
    end: tuple[float, float]
    h_dot_bar: float
    rho_bar: float
    delta_rho_bar: float

    def __post_init__(self):
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(self, "end", (float(self.end[0]), float(self.end[1])))
        if self.end[1] < self.start[1]:
            raise DomainError(
                f"segment must not descend: start h {self.start[1]!r}, "
                f"end h {self.end[1]!r}"
            )
        if self.h_dot_bar < 0.0:
            raise DomainError(f"h_dot_bar must be >= 0, got {self.h_dot_bar!r}")
        if not self.rho_bar > 0.0 or not self.delta_rho_bar > 0.0:
            raise DomainError("mean density quantities must be positive")

    @property
    def d(self):
        """Slant distance between the leg endpoints.  [m]"""
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])


def segment_between(start, end, h_dot_bar, atmo=TROPOSPHERE, grid_step=1.0,
                    density_band=None):
    """Build a ClimbSegment with density means computed from an atmosphere.

    Args:
        start: (x, h) leg start  [m]
        end: (x, h) leg end  [m]
        h_dot_bar: mean climb rate  [m s^-1]
        atmo: density model, default the troposphere power law.
        grid_step: altitude grid spacing for the means  [m]
        density_band: optional (h_lo, h_hi) overriding the altitude band the
            means are taken over. A re-plan triggered mid-climb keeps the
            whole climb's band here, so its mean densities stay those of the
            flight the averages were calibrated for.
    """
    band = density_band if density_band is not None else (start[1], end[1])
    return ClimbSegment(
        start=tuple(start),
        end=tuple(end),
        h_dot_bar=h_dot_bar,
        rho_bar=mean_density(atmo, band[0], band[1], grid_step),
        delta_rho_bar=mean_inverse_density(atmo, band[0], band[1], grid_step),
    )


@dataclass(frozen=True)
class ClimbPlan:
    """Planner output for one segment."""

    v_star: float  # [m s^-1]
    t_c_star: float  # [s]
    j_star: float  # [C]
    q_f: float | None  # [C]; None when no initial charge was given
    sufficient_ok: bool
    iterations: int
    at_envelope_limit: bool = False
    battery_depleted: bool = False


def _check_speed_and_tau(v, tau):
    if np.any(np.asarray(v) <= 0.0):
        raise DomainError(f"airspeed must be positive, got {v!r}")
    if not tau > 0.0:
        raise DomainError(f"tau must be positive or inf, got {tau!r}")


def total_cost(v, seg, ci0, ci_in, tau, q0, params):
    """Total cost J of flying the segment at constant airspeed v.  [C]"""
    _check_speed_and_tau(v, tau)
    d = seg.d
    q_f = final_charge(q0, v, seg, params)
    if math.isinf(tau):
        return ci0 * d / v + q0 - q_f
    time_cost = tau * (ci0 - ci_in) * (-np.expm1(-d / (tau * v)))
    return time_cost + ci_in * d / v + q0 - q_f


def cost_gradient(v, seg, ci0, ci_in, tau, params):
    """dJ/dv; the root in v is the optimal climb airspeed."""
    _check_speed_and_tau(v, tau)
    d = seg.d
    return (-(ci0 - ci_in) * d * np.exp(-d / (tau * v)) / v**2
            - ci_in * d / v**2
            - final_charge_sensitivity(v, seg, params))


def cost_curvature(v, seg, ci0, ci_in, tau, params):
    """d2J/dv2; positive at a gradient root confirms a minimum.

    Second derivative of total_cost:

        (ci0 - ci_in) d e^(-d/(tau v)) (2v - d/tau) / v^4
        + 2 ci_in d / v^3
        + (d / (eta U)) (2 W h_dot_bar / v^3 + rho_bar S cd0
                         + 12 cd2 W^2 delta_rho_bar / (S v^4))
    """
    _check_speed_and_tau(v, tau)
    d = seg.d
    w = params.weight
    s = params.wing_area
    filtered = ((ci0 - ci_in) * d * np.exp(-d / (tau * v))
                * (2.0 * v - d / tau) / v**4)
    steady = 2.0 * ci_in * d / v**3
    discharge = (d / (params.efficiency * params.voltage)) * (
        2.0 * w * seg.h_dot_bar / v**3
        + seg.rho_bar * s * params.cd0
        + 12.0 * params.cd2 * w**2 * seg.delta_rho_bar / (s * v**4)
    )
    return filtered + steady + discharge


def climbing_time(v, seg):
    """Time to fly the whole segment at constant airspeed v.  [s]"""
    if np.any(np.asarray(v) <= 0.0):
        raise DomainError(f"airspeed must be positive, got {v!r}")
    if seg.d <= 0.0:
        raise DegenerateSegmentError("segment has zero length")
    return seg.d / v


def solve_optimal_speed(seg, ci0, ci_in, tau, params, q0=None,
                        v_lo=V_LO_DEFAULT, rtol=1e-10, maxiter=200):
    """Find the cost-minimizing constant airspeed for one segment.

    Scans gradient signs on a log-spaced grid over (v_lo, v_max], polishes
    each descending-to-ascending crossing with Brent's method, and keeps the
    candidate with the lowest cost. A gradient still negative at v_max means
    the unconstrained optimum sits outside the envelope; the plan then clips
    to v_max and flags it.

    Args:
        seg: ClimbSegment to fly.
        ci0: cost index at segment start  [C s^-1]
        ci_in: commanded cost index  [C s^-1]
        tau: filter time constant  [s], math.inf for constant CI.
        params: AircraftParams.
        q0: optional charge at segment start [C]; enables q_f and the
            depletion flag on the returned plan.
        v_lo: lower search bound  [m s^-1]
        rtol: relative tolerance on v for the root polish.
        maxiter: iteration cap for the root polish.

    Raises:
        NoInteriorOptimumError: gradient has no usable sign change and is not
            negative at v_max.
        SaddlePointError: a stationary point fails the curvature check.
    """
    if seg.d <= 0.0:
        raise DegenerateSegmentError("segment has zero length")
    if ci0 < 0.0 or ci_in < 0.0:
        raise DomainError("cost-index values must be >= 0")
    if not 0.0 < v_lo < params.v_max:
        raise DomainError(
            f"need 0 < v_lo < v_max, got v_lo={v_lo!r}, v_max={params.v_max!r}"
        )

    grid = np.geomspace(v_lo, params.v_max, _SCAN_POINTS)
    grad = cost_gradient(grid, seg, ci0, ci_in, tau, params)

    candidates = []
    for i in range(len(grid) - 1):
        if grad[i] <= 0.0 <= grad[i + 1]:
            root, info = brentq(
                lambda v: cost_gradient(v, seg, ci0, ci_in, tau, params),
                grid[i], grid[i + 1],
                rtol=rtol, maxiter=maxiter, full_output=True, disp=False,
            )
            if info.converged:
                candidates.append((float(root), info.iterations))

    if not candidates:
        if grad[-1] < 0.0:
            # Cost still falling at the envelope edge: clipped optimum.
            return _assemble_plan(params.v_max, seg, ci0, ci_in, tau, params,
                                  q0, iterations=0, at_envelope_limit=True,
                                  sufficient_ok=True)
        raise NoInteriorOptimumError(
            "cost gradient has no descending-to-ascending sign change in "
            f"({v_lo:g}, {params.v_max:g}] m/s",
            grad_lo=float(grad[0]), grad_hi=float(grad[-1]),
        )

    best_v, best_iters = min(
        candidates,
        key=lambda c: total_cost(c[0], seg, ci0, ci_in, tau, 0.0, params),
    )
    curvature = cost_curvature(best_v, seg, ci0, ci_in, tau, params)
    if not curvature > 0.0:
        raise SaddlePointError(
            f"stationary point at v={best_v:.6g} m/s has non-positive "
            f"curvature {curvature:.6g}"
        )
    return _assemble_plan(best_v, seg, ci0, ci_in, tau, params, q0,
                          iterations=best_iters, at_envelope_limit=False,
                          sufficient_ok=True)


def _assemble_plan(v_star, seg, ci0, ci_in, tau, params, q0, iterations,
                   at_envelope_limit, sufficient_ok):
    j_star = total_cost(v_star, seg, ci0, ci_in, tau, q0 if q0 is not None else 0.0,
                        params)
    q_f = None if q0 is None else final_charge(q0, v_star, seg, params)
    return ClimbPlan(
        v_star=v_star,
        t_c_star=seg.d / v_star,
        j_star=float(j_star),
        q_f=q_f,
        sufficient_ok=sufficient_ok,
        iterations=iterations,
        at_envelope_limit=at_envelope_limit,
        battery_depleted=bool(q_f is not None and q_f < 0.0),
    )


def fms_initial_speed(seg, ci0, params, q0=None, **kwargs):
    """Pre-departure speed choice: the constant-CI special case.

    Solves -ci0 d / v^2 - dQf/dv = 0, which is solve_optimal_speed with the
    infinite-tau cost (the commanded value never deviates from ci0).
    """
    return solve_optimal_speed(seg, ci0, ci0, math.inf, params, q0=q0, **kwargs)


def calibrate_ci_max(params, seg):
    """Cost-index ceiling implied by the airspeed envelope.

    Returns the constant CI whose optimal airspeed is exactly v_max, by
    inverting the constant-CI optimality condition at v_max:

        ci_max = v_max^2 * (-dQf/dv at v_max) / d
    """
    if seg.d <= 0.0:
        raise DegenerateSegmentError("segment has zero length")
    vm = params.v_max
    ci = vm**2 * (-final_charge_sensitivity(vm, seg, params)) / seg.d
    if not ci > 0.0:
        raise EnvelopeError(
            f"envelope calibration gave non-positive ci_max {ci:.6g}; "
            "v_max sits below the segment's best-economy speed"
        )
    return float(ci)


def calibrate_ci_max_to_speed(params, seg, v_ref, ci0_fraction):
    """Cost-index ceiling anchored to a known-good initial climb speed.

    Picks ci_max such that planning with ci0 = ci0_fraction * ci_max yields
    v_ref as the constant-CI optimum. Uses the closed-form inverse of the
    optimality condition at v_ref; the constant-CI optimal speed is strictly
    increasing in CI, so the anchoring is exact.

    Args:
        params: AircraftParams.
        seg: segment the reference speed belongs to.
        v_ref: reference optimal airspeed  [m s^-1]
        ci0_fraction: fraction of ci_max that reproduces v_ref, in (0, 1].
    """
    if seg.d <= 0.0:
        raise DegenerateSegmentError("segment has zero length")
    if not 0.0 < ci0_fraction <= 1.0:
        raise DomainError(
            f"ci0_fraction must lie in (0, 1], got {ci0_fraction!r}"
        )
    if not 0.0 < v_ref <= params.v_max:
        raise DomainError(
            f"v_ref must lie in (0, v_max={params.v_max:g}], got {v_ref!r}"
        )
    ci_ref = v_ref**2 * (-final_charge_sensitivity(v_ref, seg, params)) / seg.d
    ci = ci_ref / ci0_fraction
    if not ci > 0.0:
        raise EnvelopeError(
            f"reference calibration gave non-positive ci_max {ci:.6g}; "
            "the reference speed sits below the segment's best-economy speed"
        )
    return float(ci)
