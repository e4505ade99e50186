"""Hot numeric kernels for the wheel-soil contact model.

Two backends share this module:

* scalar-loop kernels compiled with numba ``@njit`` (default), and
* vectorized pure-numpy fallbacks, selected by setting the environment
  variable ``TERRASIM_NUMBA=0`` (or automatically if numba is missing).

Both families are always importable so they can be benchmarked against each
other; the module-level ``force_integrals`` / ``solve_sinkage`` /
``wheel_forces`` names point at whichever backend is active.

Solver status codes: 0 = converged, 1 = iteration cap hit,
2 = no bracket (load exceeds soil capacity at h = 0.95 r).
"""
from __future__ import annotations

import math
import os

import numpy as np

SOLVE_OK = 0
SOLVE_MAXITER = 1
SOLVE_NO_BRACKET = 2

_SIMPSON_INTERVALS = 64      # per branch, so the piecewise kink at theta_m
                             # always lands on a panel boundary
_H_MAX_FRACTION = 0.95       # sinkage search ceiling as a fraction of r

NUMBA_ENABLED = os.environ.get("TERRASIM_NUMBA", "1").lower() not in ("0", "false", "no")
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep by default
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):  # no-op decorator for the fallback path
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(f):
            return f

        return wrap


# ---------------------------------------------------------------------------
# scalar-loop family (numba target)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _branch_force_scalar(front, th_a, th_b, theta_f, theta_m, theta_r,
                         s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y):
    # 64 Simpson panels per branch, graded toward the branch end where the
    # sinkage vanishes (theta_f on the front branch, theta_r on the rear):
    # sigma ~ h^n has unbounded derivatives there for n < 1, so uniform
    # panels stall at ~1e-4 relative error.  The cubic map puts a zero of
    # the Jacobian on the singular endpoint; stronger grading starves the
    # interior of panels and loses accuracy again.
    if th_b - th_a <= 1e-15:
        return 0.0, 0.0, 0.0
    cos_tf = math.cos(theta_f)
    sin_tf = math.sin(theta_f)
    m = _SIMPSON_INTERVALS
    span = th_b - th_a
    hstep = 1.0 / m
    sfx = 0.0
    sfy = 0.0
    sfz = 0.0
    for i in range(m + 1):
        u = hstep * i
        if front:
            v = 1.0 - u
            th = theta_f - span * v * v * v
            jac = 3.0 * span * v * v
        else:
            th = theta_r + span * u * u * u
            jac = 3.0 * span * u * u
        if front:
            hh = r * (math.cos(th) - cos_tf)
        else:
            th_e = theta_f - (th - theta_r) / (theta_m - theta_r) * (theta_f - theta_m)
            hh = r * (math.cos(th_e) - cos_tf)
        if hh < 0.0:
            hh = 0.0
        sig = k_sigma * hh ** n
        j_x = r * ((theta_f - th) - (1.0 - s) * (sin_tf - math.sin(th)))
        j_y = r * (1.0 - s) * (theta_f - th) * tan_beta
        shear = c + sig * tan_phi
        tau_x = shear * (1.0 - math.exp(-j_x / k_x))
        # lateral stress is odd in the shear displacement so left and right
        # slip are symmetric; the one-sided form diverges for j_y < 0
        if j_y >= 0.0:
            tau_y = shear * (1.0 - math.exp(-j_y / k_y))
        else:
            tau_y = -shear * (1.0 - math.exp(j_y / k_y))
        if i == 0 or i == m:
            w = 1.0
        elif i % 2 == 1:
            w = 4.0
        else:
            w = 2.0
        ct = math.cos(th)
        st = math.sin(th)
        sfx += w * jac * (tau_x * ct - sig * st)
        sfy += w * jac * tau_y
        sfz += w * jac * (tau_x * st + sig * ct)
    scale = hstep / 3.0 * r * b
    return scale * sfx, -scale * sfy, scale * sfz


@njit(cache=True)
def force_integrals_scalar(h_f, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                           k_x, k_y, a0, a1, b0, b1):
    if h_f <= 0.0:
        return 0.0, 0.0, 0.0
    theta_f = math.acos(1.0 - h_f / r)
    theta_r = (b0 + b1 * s) * theta_f
    if theta_r < 0.0:
        theta_r = 0.0
    if theta_r > theta_f:
        theta_r = theta_f
    theta_m = (a0 + a1 * s) * theta_f
    if theta_m < theta_r:
        theta_m = theta_r
    if theta_m > theta_f:
        theta_m = theta_f
    fx1, fy1, fz1 = _branch_force_scalar(
        True, theta_m, theta_f, theta_f, theta_m, theta_r,
        s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y)
    fx2, fy2, fz2 = _branch_force_scalar(
        False, theta_r, theta_m, theta_f, theta_m, theta_r,
        s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y)
    return fx1 + fx2, fy1 + fy2, fz1 + fz2


@njit(cache=True)
def wheel_forces_damped_scalar(N, c_over_dt, h_ref, s, tan_beta, r, b,
                               k_sigma, n, c, tan_phi, k_x, k_y,
                               a0, a1, b0, b1, h_init):
    """Solve F_z(h) + c_over_dt * (h - h_ref) - N = 0 on [0, 0.95 r] and
    return (F_x, F_y, F_z, h, status) at the root.

    With c_over_dt = 0 this is the plain sinkage solve F_z(h) = N.  The
    linear term makes the suspension-damper / sinkage-rate coupling in the
    coupled vehicle step implicit (the explicit backward difference is
    unstable whenever c / (F_z' dt) exceeds one).  Safeguarded secant:
    every Newton/secant proposal is clipped into the live bracket and a
    non-improving step falls back to bisection.  The soil-capacity check at
    h = 0.95 r runs lazily, only once the bracket has collapsed against it.
    """
    h_cap = _H_MAX_FRACTION * r
    if c_over_dt * (0.0 - h_ref) - N >= 0.0:
        # load (net of the damper term) nonpositive: wheel unloaded
        return 0.0, 0.0, 0.0, 0.0, SOLVE_OK
    lo = 0.0
    hi = h_cap
    tol = max(1e-10 * abs(N), 1e-10)
    h = h_init
    if h <= 0.0 or h >= h_cap:
        h = 0.5 * h_cap
    fx, fy, fz = force_integrals_scalar(
        h, s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y, a0, a1, b0, b1)
    f = fz + c_over_dt * (h - h_ref) - N
    if abs(f) <= tol:
        return fx, fy, fz, h, SOLVE_OK
    # one-sided difference seeds the secant slope, step 1e-7 m
    step = 1e-7 if h + 1e-7 <= h_cap else -1e-7
    _, _, fz_s = force_integrals_scalar(
        h + step, s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y, a0, a1, b0, b1)
    deriv = (fz_s + c_over_dt * (h + step - h_ref) - N - f) / step
    cap_checked = False
    for _ in range(100):
        if f > 0.0:
            hi = h
        else:
            lo = h
        if not cap_checked and f < 0.0 and lo >= 0.99 * h_cap:
            cap_checked = True
            fxc, fyc, fzc = force_integrals_scalar(
                h_cap, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                k_x, k_y, a0, a1, b0, b1)
            if fzc + c_over_dt * (h_cap - h_ref) - N < 0.0:
                return fxc, fyc, fzc, h_cap, SOLVE_NO_BRACKET
        if deriv > 0.0:
            h_new = h - f / deriv
        else:
            h_new = 0.5 * (lo + hi)
        if not (lo < h_new < hi):
            h_new = 0.5 * (lo + hi)
        fxn, fyn, fzn = force_integrals_scalar(
            h_new, s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y, a0, a1, b0, b1)
        f_new = fzn + c_over_dt * (h_new - h_ref) - N
        if abs(f_new) > tol and abs(f_new) >= abs(f):
            h_new = 0.5 * (lo + hi)
            fxn, fyn, fzn = force_integrals_scalar(
                h_new, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                k_x, k_y, a0, a1, b0, b1)
            f_new = fzn + c_over_dt * (h_new - h_ref) - N
        if h_new != h:
            deriv = (f_new - f) / (h_new - h)
        h = h_new
        f = f_new
        fx = fxn
        fy = fyn
        fz = fzn
        if abs(f) <= tol:
            return fx, fy, fz, h, SOLVE_OK
    return fx, fy, fz, h, SOLVE_MAXITER


@njit(cache=True)
def wheel_forces_scalar(N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                        k_x, k_y, a0, a1, b0, b1, h_init):
    if N <= 0.0:
        return 0.0, 0.0, 0.0, 0.0, SOLVE_OK
    return wheel_forces_damped_scalar(
        N, 0.0, 0.0, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
        k_x, k_y, a0, a1, b0, b1, h_init)


@njit(cache=True)
def solve_sinkage_scalar(N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                         k_x, k_y, a0, a1, b0, b1, h_init):
    _, _, _, h, status = wheel_forces_scalar(
        N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
        k_x, k_y, a0, a1, b0, b1, h_init)
    return h, status


# ---------------------------------------------------------------------------
# pure-numpy fallback family
# ---------------------------------------------------------------------------

def _simpson_weights(m):
    w = np.full(m + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w


def _branch_force_numpy(front, th_a, th_b, theta_f, theta_m, theta_r,
                        s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y):
    # cubic panel grading toward the vanishing-sinkage endpoint; see the
    # scalar kernel for the rationale
    if th_b - th_a <= 1e-15:
        return 0.0, 0.0, 0.0
    cos_tf = math.cos(theta_f)
    sin_tf = math.sin(theta_f)
    m = _SIMPSON_INTERVALS
    span = th_b - th_a
    u = np.linspace(0.0, 1.0, m + 1)
    if front:
        th = theta_f - span * (1.0 - u) ** 3
        jac = 3.0 * span * (1.0 - u) ** 2
        hh = r * (np.cos(th) - cos_tf)
    else:
        th = theta_r + span * u ** 3
        jac = 3.0 * span * u ** 2
        th_e = theta_f - (th - theta_r) / (theta_m - theta_r) * (theta_f - theta_m)
        hh = r * (np.cos(th_e) - cos_tf)
    hh = np.maximum(hh, 0.0)
    sig = k_sigma * hh ** n
    j_x = r * ((theta_f - th) - (1.0 - s) * (sin_tf - np.sin(th)))
    j_y = r * (1.0 - s) * (theta_f - th) * tan_beta
    shear = c + sig * tan_phi
    tau_x = shear * (1.0 - np.exp(-j_x / k_x))
    # lateral stress is odd in the shear displacement so left and right
    # slip are symmetric; the one-sided form diverges for j_y < 0
    tau_y = np.where(j_y >= 0.0,
                     shear * (1.0 - np.exp(-np.abs(j_y) / k_y)),
                     -shear * (1.0 - np.exp(-np.abs(j_y) / k_y)))
    w = _simpson_weights(m) * jac
    scale = 1.0 / m / 3.0 * r * b
    fx = scale * np.dot(w, tau_x * np.cos(th) - sig * np.sin(th))
    fy = -scale * np.dot(w, tau_y)
    fz = scale * np.dot(w, tau_x * np.sin(th) + sig * np.cos(th))
    return float(fx), float(fy), float(fz)


def force_integrals_numpy(h_f, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                          k_x, k_y, a0, a1, b0, b1):
    if h_f <= 0.0:
        return 0.0, 0.0, 0.0
    theta_f = math.acos(1.0 - h_f / r)
    theta_r = min(max((b0 + b1 * s) * theta_f, 0.0), theta_f)
    theta_m = min(max((a0 + a1 * s) * theta_f, theta_r), theta_f)
    fx1, fy1, fz1 = _branch_force_numpy(
        True, theta_m, theta_f, theta_f, theta_m, theta_r,
        s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y)
    fx2, fy2, fz2 = _branch_force_numpy(
        False, theta_r, theta_m, theta_f, theta_m, theta_r,
        s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y)
    return fx1 + fx2, fy1 + fy2, fz1 + fz2


def wheel_forces_damped_numpy(N, c_over_dt, h_ref, s, tan_beta, r, b,
                              k_sigma, n, c, tan_phi, k_x, k_y,
                              a0, a1, b0, b1, h_init):
    """Pure-numpy mirror of :func:`wheel_forces_damped_scalar`."""
    def forces(h):
        return force_integrals_numpy(
            h, s, tan_beta, r, b, k_sigma, n, c, tan_phi, k_x, k_y, a0, a1, b0, b1)

    h_cap = _H_MAX_FRACTION * r
    if c_over_dt * (0.0 - h_ref) - N >= 0.0:
        return 0.0, 0.0, 0.0, 0.0, SOLVE_OK
    lo, hi = 0.0, h_cap
    tol = max(1e-10 * abs(N), 1e-10)
    h = h_init if 0.0 < h_init < h_cap else 0.5 * h_cap
    fx, fy, fz = forces(h)
    f = fz + c_over_dt * (h - h_ref) - N
    if abs(f) <= tol:
        return fx, fy, fz, h, SOLVE_OK
    step = 1e-7 if h + 1e-7 <= h_cap else -1e-7
    deriv = (forces(h + step)[2] + c_over_dt * (h + step - h_ref) - N - f) / step
    cap_checked = False
    for _ in range(100):
        if f > 0.0:
            hi = h
        else:
            lo = h
        if not cap_checked and f < 0.0 and lo >= 0.99 * h_cap:
            cap_checked = True
            fxc, fyc, fzc = forces(h_cap)
            if fzc + c_over_dt * (h_cap - h_ref) - N < 0.0:
                return fxc, fyc, fzc, h_cap, SOLVE_NO_BRACKET
        h_new = h - f / deriv if deriv > 0.0 else 0.5 * (lo + hi)
        if not (lo < h_new < hi):
            h_new = 0.5 * (lo + hi)
        fxn, fyn, fzn = forces(h_new)
        f_new = fzn + c_over_dt * (h_new - h_ref) - N
        if abs(f_new) > tol and abs(f_new) >= abs(f):
            h_new = 0.5 * (lo + hi)
            fxn, fyn, fzn = forces(h_new)
            f_new = fzn + c_over_dt * (h_new - h_ref) - N
        if h_new != h:
            deriv = (f_new - f) / (h_new - h)
        h, f = h_new, f_new
        fx, fy, fz = fxn, fyn, fzn
        if abs(f) <= tol:
            return fx, fy, fz, h, SOLVE_OK
    return fx, fy, fz, h, SOLVE_MAXITER


def wheel_forces_numpy(N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                       k_x, k_y, a0, a1, b0, b1, h_init):
    if N <= 0.0:
        return 0.0, 0.0, 0.0, 0.0, SOLVE_OK
    return wheel_forces_damped_numpy(
        N, 0.0, 0.0, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
        k_x, k_y, a0, a1, b0, b1, h_init)


def solve_sinkage_numpy(N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
                        k_x, k_y, a0, a1, b0, b1, h_init):
    _, _, _, h, status = wheel_forces_numpy(
        N, s, tan_beta, r, b, k_sigma, n, c, tan_phi,
        k_x, k_y, a0, a1, b0, b1, h_init)
    return h, status


# ---------------------------------------------------------------------------
# active backend
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    force_integrals = force_integrals_scalar
    solve_sinkage = solve_sinkage_scalar
    wheel_forces = wheel_forces_scalar
    wheel_forces_damped = wheel_forces_damped_scalar
else:
    force_integrals = force_integrals_numpy
    solve_sinkage = solve_sinkage_numpy
    wheel_forces = wheel_forces_numpy
    wheel_forces_damped = wheel_forces_damped_numpy
