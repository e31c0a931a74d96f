"""Time-varying cost-index dynamics.

ATC speed guidance enters the planner as a commanded cost index CI_in. The
aircraft does not adopt it instantly: the effective cost index follows a
first-order filter

    tau * dCI/dt = -CI + CI_in

whose analytic solution from a known start value is exponential relaxation.
An infinite time constant (``math.inf``) is the sentinel for constant-CI
operation: the commanded value is then never approached and CI stays at its
start value.

Cost-index values here are expressed in C/s, the same unit as the battery
charge rate they trade against (see ``vehicle`` for the kJ/s conversion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class CiEvent:
    """One ATC cost-index command.

    Exactly one trigger must be set: an elapsed climb time in seconds, or a
    waypoint (x, h) in meters that the aircraft will cross.
    """

    ci_in: float  # [C s^-1]
    at_time: float | None = None  # [s] elapsed since climb start
    at_waypoint: tuple[float, float] | None = None  # (x, h) [m]

    def __post_init__(self):
        if (self.at_time is None) == (self.at_waypoint is None):
            raise DomainError(
                "event needs exactly one trigger: at_time or at_waypoint"
            )
        if self.at_time is not None and self.at_time < 0.0:
            raise DomainError(f"event time must be >= 0, got {self.at_time!r}")
        if self.ci_in < 0.0:
            raise DomainError(f"ci_in must be >= 0, got {self.ci_in!r}")


@dataclass(frozen=True)
class CostIndexSchedule:
    """Initial cost index, filter time constant, envelope ceiling, events."""

    ci0: float  # [C s^-1]
    tau: float  # [s]; math.inf selects constant-CI mode
    ci_max: float  # [C s^-1]
    events: tuple[CiEvent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.ci_max > 0.0:
            raise DomainError(f"ci_max must be positive, got {self.ci_max!r}")
        if not 0.0 <= self.ci0 <= self.ci_max:
            raise DomainError(
                f"ci0 must lie in [0, ci_max={self.ci_max:g}], got {self.ci0!r}"
            )
        if not self.tau > 0.0:
            raise DomainError(f"tau must be positive or inf, got {self.tau!r}")
        for ev in self.events:
            if ev.ci_in > self.ci_max:
                raise DomainError(
                    f"event ci_in {ev.ci_in!r} exceeds ci_max {self.ci_max!r}"
                )
        times = [ev.at_time for ev in self.events if ev.at_time is not None]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("time-triggered events must be strictly increasing")
        xs = [ev.at_waypoint[0] for ev in self.events if ev.at_waypoint is not None]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError(
                "waypoint-triggered events must be strictly increasing in x"
            )


def ci_at(t, ci_start, ci_in, tau):
    """Filtered cost index t seconds after the forcing switched to ci_in.

    Returns exp(-t/tau) * (ci_start - ci_in) + ci_in; for infinite tau the
    start value is returned unchanged. Accepts scalar or array t.
    """
    if np.any(np.asarray(t) < 0.0):
        raise DomainError(f"time must be >= 0, got {t!r}")
    if not tau > 0.0:
        raise DomainError(f"tau must be positive or inf, got {tau!r}")
    if math.isinf(tau):
        if np.ndim(t) == 0:
            return ci_start
        return np.full(np.shape(t), ci_start, dtype=float)
    out = np.exp(-np.asarray(t, dtype=float) / tau) * (ci_start - ci_in) + ci_in
    if np.ndim(t) == 0:
        return float(out)
    return out


def ci_ode_check(ci_start, ci_in, tau, horizon):
    """Max deviation between the analytic filter response and an RK4 replay.

    Integrates tau * dCI/dt = -CI + CI_in with classical fourth-order
    Runge-Kutta at fixed step tau/100 over [0, horizon] and returns
    max |numeric - analytic| across the steps. Infinite tau is an exact
    constant in both views, so the deviation is zero by construction.
    """
    if not horizon > 0.0:
        raise DomainError(f"horizon must be positive, got {horizon!r}")
    if not tau > 0.0:
        raise DomainError(f"tau must be positive or inf, got {tau!r}")
    if math.isinf(tau):
        return 0.0

    def rhs(ci):
        return (-ci + ci_in) / tau

    step = tau / 100.0
    n_steps = int(math.ceil(horizon / step))
    ci_num = ci_start
    worst = 0.0
    t = 0.0
    for _ in range(n_steps):
        dt = min(step, horizon - t)
        k1 = rhs(ci_num)
        k2 = rhs(ci_num + 0.5 * dt * k1)
        k3 = rhs(ci_num + 0.5 * dt * k2)
        k4 = rhs(ci_num + dt * k3)
        ci_num += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        worst = max(worst, abs(ci_num - ci_at(t, ci_start, ci_in, tau)))
    return worst
