"""Schwarzschild geometry primitives.

Everything downstream (frequency shifts, wavepacket distortion, link
timing) reduces to a handful of functions of the metric factor
f(r) = 1 - r_s/r evaluated at the two stations.  All inputs are SI;
the only globals are the two physical constants below.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

G = 6.674_30e-11        # m^3 kg^-1 s^-2
C = 299_792_458.0       # m/s, exact

__all__ = [
    "G",
    "C",
    "Motion",
    "Sign",
    "Body",
    "Observer",
    "ShiftParameter",
    "HorizonError",
    "PhotonSphereError",
    "ConvergenceError",
    "metric_factor",
    "proper_time_ratio",
    "redshift_static",
    "redshift_total",
    "shift_parameter",
    "tortoise",
    "coordinate_travel_time",
    "radius_after",
]


class HorizonError(ValueError):
    """Radial coordinate at or below the Schwarzschild radius."""


class PhotonSphereError(ValueError):
    """Circular orbit requested at or below r = 1.5 r_s."""


class ConvergenceError(RuntimeError):
    """Root finder failed to reach its residual target."""


class Motion(enum.Enum):
    STATIC = "static"
    CIRCULAR_ORBIT = "orbit"


class Sign(enum.Enum):
    """Direction of a frequency shift: UP = redshift (receiver higher)."""

    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class Body:
    """A gravitating spherical mass.

    Parameters
    ----------
    mass : float
        Mass in kg.  Zero is allowed and gives exact flat-space behavior.
    radius : float
        Surface radius in m (stations cannot sit below it, but this
        module only enforces the horizon bound).
    """

    mass: float
    radius: float

    def __post_init__(self) -> None:
        if not (self.mass >= 0.0) or not math.isfinite(self.mass):
            raise ValueError(f"mass must be finite and >= 0, got {self.mass}")
        if not (self.radius > 0.0):
            raise ValueError(f"radius must be > 0, got {self.radius}")
        rs = self.schwarzschild_radius
        if 0.0 < self.radius < 1e3 * rs:
            warnings.warn(
                f"body radius {self.radius} m is within 1000 Schwarzschild"
                f" radii ({rs} m); weak-field assumptions degrade",
                stacklevel=2,
            )

    @property
    def schwarzschild_radius(self) -> float:
        # r_s = 2GM/c^2
        return 2.0 * G * self.mass / (C * C)

    @property
    def geometric_mass(self) -> float:
        # M in meters, GM/c^2
        return G * self.mass / (C * C)


@dataclass(frozen=True)
class Observer:
    """A station at fixed Schwarzschild radial coordinate."""

    radius: float
    motion: Motion = Motion.STATIC

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise ValueError(f"observer radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class ShiftParameter:
    """Magnitude and direction of the fractional frequency-rate shift.

    delta is |R^(1/4) - 1| where R is the ratio of the two stations'
    clock-rate factors; sign is UP when the link is a net redshift
    (frequency ratio below one) and DOWN for a net blueshift.
    """

    delta: float
    sign: Sign

    def __post_init__(self) -> None:
        if not (self.delta >= 0.0):
            raise ValueError(f"delta must be >= 0, got {self.delta}")


def _check_above_horizon(body: Body, r: float) -> None:
    rs = body.schwarzschild_radius
    if not (r > rs):
        raise HorizonError(f"r = {r} m is at or below the horizon r_s = {rs} m")


def metric_factor(body: Body, r: float) -> float:
    """Schwarzschild metric factor f(r) = 1 - r_s/r.

    Strictly inside (0, 1] for r above the horizon; equals 1 exactly for
    a massless body or r = inf.
    """
    _check_above_horizon(body, r)
    return 1.0 - body.schwarzschild_radius / r


def _log_rate_factor(body: Body, obs: Observer) -> float:
    """log of the clock-rate factor: 1 - 2M/r static, 1 - 3M/r on orbit."""
    _check_above_horizon(body, obs.radius)
    mu = body.geometric_mass
    if obs.motion is Motion.CIRCULAR_ORBIT:
        x = 3.0 * mu / obs.radius
        if x >= 1.0:
            raise PhotonSphereError(
                f"circular orbit needs r > 1.5 r_s; got r = {obs.radius} m"
                f" with r_s = {2.0 * mu} m"
            )
        return math.log1p(-x)
    return math.log1p(-2.0 * mu / obs.radius)


def proper_time_ratio(body: Body, r_a: float, r_b: float) -> float:
    """dtau_B/dtau_A = sqrt(f(r_B)/f(r_A)) for two static stations."""
    _check_above_horizon(body, r_a)
    _check_above_horizon(body, r_b)
    rs = body.schwarzschild_radius
    return math.exp(0.5 * (math.log1p(-rs / r_b) - math.log1p(-rs / r_a)))


def redshift_static(body: Body, r_a: float, r_b: float) -> float:
    """Frequency ratio Omega_B/Omega_A = sqrt(f(r_A)/f(r_B)), static stations.

    Below one when r_B > r_A (light climbing out is redshifted).  Exact
    reciprocal of proper_time_ratio.
    """
    _check_above_horizon(body, r_a)
    _check_above_horizon(body, r_b)
    rs = body.schwarzschild_radius
    return math.exp(0.5 * (math.log1p(-rs / r_a) - math.log1p(-rs / r_b)))


def _require_static_emitter(emitter: Observer) -> None:
    if emitter.motion is not Motion.STATIC:
        raise ValueError("orbiting emitters are not supported; emitter must be static")


def redshift_total(body: Body, emitter: Observer, receiver: Observer) -> float:
    """Frequency ratio Omega_B/Omega_A including receiver orbital motion.

    Static emitter at r_A, receiver either static (plain gravitational
    shift) or on a circular orbit, where time dilation replaces the
    receiver factor 1 - 2M/r_B by 1 - 3M/r_B:

        Omega_B/Omega_A = sqrt((1 - 2M/r_A) / (1 - 3M/r_B))

    A low-orbit receiver above a ground emitter can come out *blue*
    shifted: the orbital 3M term wins below r_B = 1.5 r_A.
    """
    _require_static_emitter(emitter)
    log_a = _log_rate_factor(body, emitter)
    log_b = _log_rate_factor(body, receiver)
    return math.exp(0.5 * (log_a - log_b))


def shift_parameter(body: Body, emitter: Observer, receiver: Observer) -> ShiftParameter:
    """Fourth-root shift delta = |((1-2M/r_A)/(1-3M/r_B))^(1/4) - 1|.

    Evaluated as expm1 of a quarter log difference so that delta ~ 1e-10
    keeps full relative precision.  sign is UP exactly when the
    frequency ratio is below one (net redshift); delta = 0 reports UP.
    """
    _require_static_emitter(emitter)
    log_a = _log_rate_factor(body, emitter)
    log_b = _log_rate_factor(body, receiver)
    x = math.expm1(0.25 * (log_a - log_b))
    return ShiftParameter(delta=abs(x), sign=Sign.UP if x <= 0.0 else Sign.DOWN)


def tortoise(body: Body, r: float) -> float:
    """Tortoise coordinate r_* = r + r_s ln(r/r_s - 1); radial light moves
    at unit coordinate speed in (t, r_*)."""
    _check_above_horizon(body, r)
    rs = body.schwarzschild_radius
    if rs == 0.0:
        return r
    return r + rs * math.log(r / rs - 1.0)


def coordinate_travel_time(body: Body, r_from: float, r_to: float) -> float:
    """Schwarzschild coordinate time |r_*(to) - r_*(from)|/c for a radial
    null ray between the two radii."""
    return abs(tortoise(body, r_to) - tortoise(body, r_from)) / C


def radius_after(body: Body, r_0: float, t: float) -> float:
    """Radius reached by an outgoing radial light ray after coordinate time t.

    Inverts r_*(r) = r_*(r_0) + c t with a bisection-safeguarded Newton
    iteration on the monotone tortoise map (dr_*/dr = r/(r - r_s)).

    Raises
    ------
    ConvergenceError
        If the residual target max(1e-9 m, 8 ulp) is not met within 100
        iterations.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    _check_above_horizon(body, r_0)
    rs = body.schwarzschild_radius
    if rs == 0.0 or math.isinf(r_0):
        return r_0 + C * t
    target = tortoise(body, r_0) + C * t
    tol = max(1e-9, 8.0 * math.ulp(abs(target)))
    lo = rs * (1.0 + 1e-12)
    hi = r_0 + C * t + 1e3 * rs
    x = min(max(r_0 + C * t, lo), hi)
    for _ in range(100):
        resid = tortoise(body, x) - target
        if abs(resid) <= tol:
            return x
        if resid > 0.0:
            hi = x
        else:
            lo = x
        # Newton step: x - resid / (dr_*/dr), with dr_*/dr = x/(x - rs)
        step = x - resid * (x - rs) / x
        x = step if lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(
        f"radius_after did not meet |residual| <= {tol} m in 100 iterations"
        f" (r_0 = {r_0}, t = {t})"
    )
