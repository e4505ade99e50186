"""Packed-array dynamics kernels for the coupled and bicycle models.

These functions mirror the reference equations in :mod:`terrasim.vehicle`
and :mod:`terrasim.terrain` but operate on flat float64 arrays so the whole
integration loop can run under numba.  Layouts:

``y``   (10): X, Y, psi, xdot, ydot, psidot, z, theta, zdot, thetadot
``mem`` (6):  hf_front, hf_rear, dhf_dt_front, dhf_dt_rear, ax_prev, ay_prev
``veh`` (11): m, I_z, I_y, l_f, l_r, k_f, k_r, c_f, c_r, m_w, slip
``sa``  (12): r, b, k_sigma, n, c, tan_phi, k_x, k_y, a0, a1, b0, b1
``terr`` (2): kind (0 flat, 1 sinusoidal), amplitude
``fu_p`` (4): offset, amplitude, frequency, scale_by_mass
``dl_p`` (3): offset, amplitude, frequency
``diag`` (15): Nf, Nr, Flf, Fcf, Flr, Fcr, hf_f, hf_r,
               ax, ay, az, wy, wz, liftoff_count, status

Status codes extend the solver's: 0 ok, 1 non-convergence, 2 no bracket,
3 non-finite state.
"""
from __future__ import annotations

import math

import numpy as np

from ._kernels import njit, wheel_forces, wheel_forces_damped

GRAVITY = 9.81

STATUS_OK = 0.0
STATUS_NAN = 3.0

TERRAIN_FLAT = 0.0
TERRAIN_SINUSOIDAL = 1.0


@njit(cache=True)
def _terrain_eval(kind, H0, X, Y):
    """Elevation and spatial derivatives (H, H_X, H_Y, H_XX, H_XY, H_YY)."""
    if kind < 0.5:
        return 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    s = math.sin(0.5 * X)
    s2 = s * s
    sx = math.sin(X)
    cx = math.cos(X)
    cy = math.cos(1.5 * Y)
    sy = math.sin(1.5 * Y)
    H = H0 * s2 * cy
    return (H,
            0.5 * H0 * sx * cy,
            -1.5 * H0 * s2 * sy,
            0.5 * H0 * cx * cy,
            -0.75 * H0 * sx * sy,
            -2.25 * H0 * s2 * cy)


@njit(cache=True)
def _deriv(coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static):
    m = veh[0]
    I_z = veh[1]
    I_y = veh[2]
    l_f = veh[3]
    l_r = veh[4]
    k_f = veh[5]
    k_r = veh[6]
    c_f = veh[7]
    c_r = veh[8]
    m_w = veh[9]
    slip = veh[10]

    X = y[0]
    Y = y[1]
    psi = y[2]
    xdot = y[3]
    ydot = y[4]
    psidot = y[5]
    z = y[6]
    theta = y[7]
    zdot = y[8]
    thetadot = y[9]

    delta = dl_p[0] + dl_p[1] * math.sin(dl_p[2] * t)
    fu = fu_p[0] + fu_p[1] * math.sin(fu_p[2] * t)
    if fu_p[3] > 0.5:
        fu *= m

    cd = math.cos(delta)
    sd = math.sin(delta)
    num_f = (ydot + l_f * psidot) * cd - xdot * sd
    den_f = (ydot + l_f * psidot) * sd + xdot * cd
    num_r = ydot - l_r * psidot
    at_rest = abs(xdot) < 1e-6
    if at_rest and abs(num_f) < 1e-6:
        beta_f = 0.0
    else:
        beta_f = math.atan2(num_f, den_f)
    if at_rest and abs(num_r) < 1e-6:
        beta_r = 0.0
    else:
        beta_r = math.atan2(num_r, xdot)

    cp = math.cos(psi)
    sp = math.sin(psi)
    Xdot = xdot * cp - ydot * sp
    Ydot = xdot * sp + ydot * cp
    # global CG acceleration from the previous step's body accelerations
    ax_prev = mem[4]
    ay_prev = mem[5]
    Xddot = (ax_prev - ydot * psidot) * cp - (ay_prev + xdot * psidot) * sp
    Yddot = (ax_prev - ydot * psidot) * sp + (ay_prev + xdot * psidot) * cp

    st = math.sin(theta)
    ct = math.cos(theta)

    aux = np.zeros(11)
    F_w = np.zeros(4)  # Flf, Fcf, Flr, Fcr
    zg = np.zeros(2)
    zgdot = np.zeros(2)
    lift = 0.0
    status = 0.0
    for axle in range(2):
        if axle == 0:
            l = l_f
            k_s = k_f
            c_s = c_f
            beta = beta_f
        else:
            l = -l_r
            k_s = k_r
            c_s = c_r
            beta = beta_r
        Xc = X + l * cp
        Yc = Y + l * sp
        Xcdot = Xdot - l * sp * psidot
        Ycdot = Ydot + l * cp * psidot
        H, h_x, h_y, h_xx, h_xy, h_yy = _terrain_eval(terr[0], terr[1], Xc, Yc)
        Hdot = h_x * Xcdot + h_y * Ycdot
        Hddot = (h_xx * Xcdot * Xcdot + 2.0 * h_xy * Xcdot * Ycdot
                 + h_yy * Ycdot * Ycdot + h_x * Xddot + h_y * Yddot)
        # ground displacement from static equilibrium, step-start sinkage
        z_g = H - (mem[axle] - h_static[axle])
        zg[axle] = z_g
        if coupled:
            z_axle = z + l * st
            zdot_axle = zdot + l * thetadot * ct
            # damper / sinkage-rate coupling handled implicitly: solve
            # F_z(h) + (c_s/dt) (h - h_mem) = N0 so the transmitted load
            # and the suspension force stay consistent
            N0 = (0.5 * m * GRAVITY - k_s * (z_axle - z_g)
                  - c_s * (zdot_axle - Hdot) + m_w * Hddot)
            fx, fy, fz, h_new, st_code = wheel_forces_damped(
                N0, c_s / dt, mem[axle], slip, math.tan(beta),
                sa[0], sa[1], sa[2], sa[3], sa[4], sa[5],
                sa[6], sa[7], sa[8], sa[9], sa[10], sa[11],
                mem[axle])
            N = fz
            if h_new <= 0.0:
                lift += 1.0
            zgdot[axle] = Hdot - (h_new - mem[axle]) / dt
        else:
            N = 0.5 * m * GRAVITY
            fx, fy, fz, h_new, st_code = wheel_forces(
                N, slip, math.tan(beta),
                sa[0], sa[1], sa[2], sa[3], sa[4], sa[5],
                sa[6], sa[7], sa[8], sa[9], sa[10], sa[11],
                mem[axle])
            zgdot[axle] = Hdot - mem[2 + axle]
        if st_code > status:
            status = st_code
        aux[axle] = N
        aux[6 + axle] = h_new
        F_w[2 * axle] = fx
        F_w[2 * axle + 1] = fy

    F_lf = F_w[0]
    F_cf = F_w[1]
    F_lr = F_w[2]
    F_cr = F_w[3]

    if coupled:
        couple_x = ydot * psidot * ct + zdot * thetadot
        couple_y = zdot * psidot * st - xdot * psidot * ct
    else:
        couple_x = ydot * psidot
        couple_y = -xdot * psidot
    xddot = couple_x + (F_lf * cd - F_cf * sd + F_lr + fu) / m
    yddot = couple_y + (F_lf * sd + F_cf * cd + F_cr) / m
    psiddot = ((F_lf * sd + F_cf * cd) * l_f - F_cr * l_r) / I_z

    if coupled:
        z_f = z + l_f * st
        z_r = z - l_r * st
        zdot_f = zdot + l_f * thetadot * ct
        zdot_r = zdot - l_r * thetadot * ct
        df = k_f * (z_f - zg[0]) + c_f * (zdot_f - zgdot[0])
        dr = k_r * (z_r - zg[1]) + c_r * (zdot_r - zgdot[1])
        zddot = (-dr - df) / m
        thetaddot = (dr * l_r - df * l_f) * ct / I_y
    else:
        zddot = 0.0
        thetaddot = 0.0

    ydot_out = np.empty(10)
    ydot_out[0] = Xdot
    ydot_out[1] = Ydot
    ydot_out[2] = psidot
    ydot_out[3] = xddot
    ydot_out[4] = yddot
    ydot_out[5] = psiddot
    if coupled:
        ydot_out[6] = zdot
        ydot_out[7] = thetadot
        ydot_out[8] = zddot
        ydot_out[9] = thetaddot
    else:
        ydot_out[6] = 0.0
        ydot_out[7] = 0.0
        ydot_out[8] = 0.0
        ydot_out[9] = 0.0

    aux[2] = F_lf
    aux[3] = F_cf
    aux[4] = F_lr
    aux[5] = F_cr
    aux[8] = zddot
    aux[9] = lift
    aux[10] = status
    return ydot_out, aux


@njit(cache=True)
def _diag_from(y, k, aux):
    diag = np.empty(15)
    diag[0] = aux[0]
    diag[1] = aux[1]
    diag[2] = aux[2]
    diag[3] = aux[3]
    diag[4] = aux[4]
    diag[5] = aux[5]
    diag[6] = aux[6]
    diag[7] = aux[7]
    diag[8] = k[3]
    diag[9] = k[4]
    diag[10] = aux[8]
    diag[11] = y[9]
    diag[12] = y[5]
    diag[13] = aux[9]
    diag[14] = aux[10]
    return diag


@njit(cache=True)
def eval_diag(coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static):
    """Single derivative evaluation packaged as a diagnostics row."""
    k, aux = _deriv(coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static)
    return _diag_from(y, k, aux)


@njit(cache=True)
def rk4_step(coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static):
    """One classical RK4 step; memory is frozen across the four stages.

    Returns (y_new, mem_new, diag) where diag describes the step-start
    instant.  Sinkage memory and stored accelerations refresh from the
    final stage.
    """
    k1, a1 = _deriv(coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static)
    y2 = y + 0.5 * dt * k1
    k2, a2 = _deriv(coupled, t + 0.5 * dt, y2, mem, dt,
                    veh, sa, terr, fu_p, dl_p, h_static)
    y3 = y + 0.5 * dt * k2
    k3, a3 = _deriv(coupled, t + 0.5 * dt, y3, mem, dt,
                    veh, sa, terr, fu_p, dl_p, h_static)
    y4 = y + dt * k3
    k4, a4 = _deriv(coupled, t + dt, y4, mem, dt,
                    veh, sa, terr, fu_p, dl_p, h_static)
    y_new = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    mem_new = np.empty(6)
    mem_new[0] = a4[6]
    mem_new[1] = a4[7]
    mem_new[2] = (a4[6] - mem[0]) / dt
    mem_new[3] = (a4[7] - mem[1]) / dt
    mem_new[4] = k4[3]
    mem_new[5] = k4[4]

    diag = _diag_from(y, k1, a1)
    diag[13] = a1[9] + a2[9] + a3[9] + a4[9]
    status = a1[10]
    for a in (a2, a3, a4):
        if a[10] > status:
            status = a[10]
    for i in range(10):
        if not math.isfinite(y_new[i]):
            status = STATUS_NAN
    diag[14] = status
    return y_new, mem_new, diag


@njit(cache=True)
def run_sim(coupled, y0, mem0, t0, dt, n_steps, record_every,
            veh, sa, terr, fu_p, dl_p, h_static):
    """Fixed-step simulation loop with decimated recording.

    Records a row every ``record_every`` steps (which must divide
    ``n_steps``) plus a final row.  Returns
    (times, states, diags, n_recorded, status, fail_time, y_end, mem_end).
    """
    n_rec = n_steps // record_every + 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, 10))
    diags = np.empty((n_rec, 15))
    y = y0.copy()
    mem = mem0.copy()
    irec = 0
    for i in range(n_steps):
        t = t0 + i * dt
        y_new, mem_new, diag = rk4_step(
            coupled, t, y, mem, dt, veh, sa, terr, fu_p, dl_p, h_static)
        if i % record_every == 0:
            times[irec] = t
            states[irec] = y
            diags[irec] = diag
            irec += 1
        if diag[14] != STATUS_OK:
            return times, states, diags, irec, diag[14], t, y, mem
        y = y_new
        mem = mem_new
    t_end = t0 + n_steps * dt
    diag_end = eval_diag(coupled, t_end, y, mem, dt,
                         veh, sa, terr, fu_p, dl_p, h_static)
    times[irec] = t_end
    states[irec] = y
    diags[irec] = diag_end
    irec += 1
    return times, states, diags, irec, diag_end[14], t_end, y, mem


@njit(cache=True)
def propagate_imu(coupled, t, y, mem, dt, n_sub,
                  veh, sa, terr, fu_p, dl_p, h_static):
    """Advance ``n_sub`` RK4 steps of size ``dt`` and return the IMU at arrival.

    Returns (y_new, mem_new, imu[5], status) with imu = (ax, ay, az, wy, wz).
    """
    yk = y.copy()
    mk = mem.copy()
    status = 0.0
    for i in range(n_sub):
        yk, mk, diag = rk4_step(
            coupled, t + i * dt, yk, mk, dt, veh, sa, terr, fu_p, dl_p, h_static)
        if diag[14] > status:
            status = diag[14]
    d = eval_diag(coupled, t + n_sub * dt, yk, mk, dt,
                  veh, sa, terr, fu_p, dl_p, h_static)
    if d[14] > status:
        status = d[14]
    imu = np.empty(5)
    imu[0] = d[8]
    imu[1] = d[9]
    imu[2] = d[10]
    imu[3] = d[11]
    imu[4] = d[12]
    return yk, mk, imu, status
