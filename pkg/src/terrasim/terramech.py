"""Bekker/Wong-Reece wheel-soil interaction.

Stress distributions over the contact arc, the force integrals, and the
sinkage solve against a prescribed normal load.  The simulation hot path
goes through :mod:`terrasim._kernels`; the functions here are the public,
type-checked surface and a reference implementation with a configurable
quadrature resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .soil import SoilParams, WheelGeom, WheelKinematics


class TerramechanicsError(Exception):
    """Base class for wheel-soil solver failures."""


class NonConvergenceError(TerramechanicsError):
    """Sinkage iteration cap hit without meeting the residual tolerance."""


class NoBracketError(TerramechanicsError):
    """Normal load exceeds the soil's vertical capacity at maximum sinkage."""


@dataclass(frozen=True)
class ContactGeometry:
    """Contact arc angles and maximum sinkage for one wheel."""

    theta_f: float
    theta_m: float
    theta_r: float
    h_f: float


@dataclass(frozen=True)
class WheelForces:
    """Wheel-frame force triple plus the solved sinkage."""

    F_l: float      # longitudinal, N
    F_c: float      # cornering, N
    F_z: float      # vertical, N
    h_f: float      # sinkage, m


def _soil_args(geom: WheelGeom, soil: SoilParams):
    k_sigma = soil.k_c / geom.b + soil.k_phi
    return (geom.r, geom.b, k_sigma, soil.n, soil.c, math.tan(soil.phi),
            soil.k_x, soil.k_y, soil.a0, soil.a1, soil.b0, soil.b1)


def contact_geometry(h_f: float, s: float, geom: WheelGeom,
                     soil: SoilParams) -> ContactGeometry:
    """Contact angles for sinkage ``h_f`` at slip ratio ``s``.

    theta_f = arccos(1 - h_f/r); theta_m and theta_r scale linearly with
    theta_f through the soil coefficients, with theta_m clamped into
    [theta_r, theta_f].
    """
    if h_f < 0.0:
        raise ValueError(f"sinkage must be nonnegative, got {h_f}")
    if h_f >= geom.r:
        raise ValueError(f"sinkage {h_f} exceeds wheel radius {geom.r} (wheel buried)")
    theta_f = math.acos(1.0 - h_f / geom.r)
    theta_r = min(max((soil.b0 + soil.b1 * s) * theta_f, 0.0), theta_f)
    theta_m = min(max((soil.a0 + soil.a1 * s) * theta_f, theta_r), theta_f)
    return ContactGeometry(theta_f=theta_f, theta_m=theta_m, theta_r=theta_r, h_f=h_f)


def sinkage_profile(theta: float, cg: ContactGeometry, geom: WheelGeom) -> float:
    """Sinkage h(theta) along the contact arc, piecewise about theta_m."""
    if theta < cg.theta_r - 1e-12 or theta > cg.theta_f + 1e-12:
        raise ValueError(
            f"contact angle {theta} outside [{cg.theta_r}, {cg.theta_f}]")
    cos_tf = math.cos(cg.theta_f)
    if theta >= cg.theta_m or cg.theta_m <= cg.theta_r:
        return max(geom.r * (math.cos(theta) - cos_tf), 0.0)
    theta_e = cg.theta_f - (theta - cg.theta_r) / (cg.theta_m - cg.theta_r) * (
        cg.theta_f - cg.theta_m)
    return max(geom.r * (math.cos(theta_e) - cos_tf), 0.0)


def stresses_at(theta: float, cg: ContactGeometry, kin: WheelKinematics,
                geom: WheelGeom, soil: SoilParams):
    """Normal and shear stresses (sigma, tau_x, tau_y) at contact angle theta."""
    h = sinkage_profile(theta, cg, geom)
    sigma = (soil.k_c / geom.b + soil.k_phi) * h ** soil.n
    j_x = geom.r * ((cg.theta_f - theta)
                    - (1.0 - kin.slip) * (math.sin(cg.theta_f) - math.sin(theta)))
    j_y = geom.r * (1.0 - kin.slip) * (cg.theta_f - theta) * math.tan(kin.beta)
    shear = soil.c + sigma * math.tan(soil.phi)
    tau_x = shear * (1.0 - math.exp(-j_x / soil.k_x))
    # odd in j_y: the one-sided form diverges for right-hand slip
    tau_y = math.copysign(shear * (1.0 - math.exp(-abs(j_y) / soil.k_y)), j_y)
    return sigma, tau_x, tau_y


def integrate_forces(h_f: float, kin: WheelKinematics, geom: WheelGeom,
                     soil: SoilParams, intervals: int = 64):
    """Composite-Simpson force integrals (F_x, F_y, F_z) over the contact arc.

    The integration is split at theta_m so the piecewise kink in h(theta)
    never falls inside a Simpson panel.  ``intervals`` is the per-branch
    panel count (must be even).
    """
    if h_f < 0.0 or h_f >= geom.r:
        raise ValueError(f"sinkage {h_f} out of [0, r)")
    if intervals % 2 != 0 or intervals <= 0:
        raise ValueError("Simpson interval count must be a positive even number")
    if h_f == 0.0:
        return (0.0, 0.0, 0.0)
    if intervals == 64:
        return _kernels.force_integrals(
            h_f, kin.slip, math.tan(kin.beta), *_soil_args(geom, soil))
    cg = contact_geometry(h_f, kin.slip, geom, soil)
    w = _kernels._simpson_weights(intervals)
    u = np.linspace(0.0, 1.0, intervals + 1)
    fx = fy = fz = 0.0
    # panels graded (cubic map) toward the endpoint where h -> 0, where
    # sigma ~ h^n is not smooth; matches the kernel quadrature
    for front, a, b in ((True, cg.theta_m, cg.theta_f),
                        (False, cg.theta_r, cg.theta_m)):
        if b - a <= 1e-15:
            continue
        span = b - a
        if front:
            th = b - span * (1.0 - u) ** 3
            jac = 3.0 * span * (1.0 - u) ** 2
        else:
            th = a + span * u ** 3
            jac = 3.0 * span * u ** 2
        vals = np.array([stresses_at(t, cg, kin, geom, soil) for t in th])
        sig, tau_x, tau_y = vals[:, 0], vals[:, 1], vals[:, 2]
        wj = w * jac
        scale = 1.0 / intervals / 3.0 * geom.r * geom.b
        fx += scale * float(np.dot(wj, tau_x * np.cos(th) - sig * np.sin(th)))
        fy += -scale * float(np.dot(wj, tau_y))
        fz += scale * float(np.dot(wj, tau_x * np.sin(th) + sig * np.cos(th)))
    return (fx, fy, fz)


def _raise_for_status(status: int, N: float):
    if status == _kernels.SOLVE_NO_BRACKET:
        raise NoBracketError(
            f"normal load {N:.3f} N exceeds soil capacity at maximum sinkage")
    if status == _kernels.SOLVE_MAXITER:
        raise NonConvergenceError(
            f"sinkage solve failed to converge for N = {N:.3f} N")


def solve_sinkage(N: float, kin: WheelKinematics, geom: WheelGeom,
                  soil: SoilParams, h_init: float = 0.0) -> float:
    """Sinkage h_f satisfying F_z(h_f) = N.

    Safeguarded secant iteration (bisection fallback on [0, 0.95 r])
    warm-started from ``h_init``.
    """
    if N < 0.0:
        raise ValueError(f"normal load must be nonnegative, got {N}")
    if h_init < 0.0 or h_init >= geom.r:
        raise ValueError(f"warm start {h_init} out of [0, r)")
    h, status = _kernels.solve_sinkage(
        N, kin.slip, math.tan(kin.beta), *_soil_args(geom, soil), h_init)
    _raise_for_status(status, N)
    return h


def wheel_interaction(N: float, kin: WheelKinematics, geom: WheelGeom,
                      soil: SoilParams, h_prev: float = 0.0) -> WheelForces:
    """Solve the sinkage for load ``N`` and return the resulting wheel forces."""
    if N < 0.0:
        raise ValueError(f"normal load must be nonnegative, got {N}")
    fx, fy, fz, h, status = _kernels.wheel_forces(
        N, kin.slip, math.tan(kin.beta), *_soil_args(geom, soil), h_prev)
    _raise_for_status(status, N)
    return WheelForces(F_l=fx, F_c=fy, F_z=fz, h_f=h)


def side_slip_angles(xdot: float, ydot: float, psidot: float, delta: float,
                     l_f: float, l_r: float):
    """Front and rear side-slip angles from the planar body velocities.

    Uses the two-argument arctangent; a vehicle essentially at rest
    (|xdot| < 1e-6 with a vanishing lateral numerator) reports zero slip.
    """
    num_f = (ydot + l_f * psidot) * math.cos(delta) - xdot * math.sin(delta)
    den_f = (ydot + l_f * psidot) * math.sin(delta) + xdot * math.cos(delta)
    num_r = ydot - l_r * psidot
    den_r = xdot
    at_rest = abs(xdot) < 1e-6
    beta_f = 0.0 if (at_rest and abs(num_f) < 1e-6) else math.atan2(num_f, den_f)
    beta_r = 0.0 if (at_rest and abs(num_r) < 1e-6) else math.atan2(num_r, den_r)
    return beta_f, beta_r
