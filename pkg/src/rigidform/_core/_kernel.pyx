# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration loop: mirror of ``fallback.py``.

Same stage arithmetic, same containment guard, same logging and sticky-flag
semantics; only the execution engine differs.  Keep the two in lockstep when
changing either.
"""

import numpy as np

cimport cython
from libc.math cimport cos, exp, fabs, log, sin, sqrt

DEF VARIANT_PPC = 0
DEF VARIANT_MANEUVER = 1
DEF VARIANT_CONVENTIONAL = 2
DEF VARIANT_ROBUST = 3
DEF INTEGRATOR_EULER = 1

cdef extern from "math.h":
    double tanh(double x)


@cython.final
cdef class _Sim:
    cdef int n, m, l, nm, variant, leader, integrator
    cdef double dt, guard, db_scale, k_conv, epsilon, theta
    cdef long n_steps
    cdef int[::1] ei, ej
    cdef double[::1] d, b_bar, b_under, bbbu, d2, rho0, rho_inf, decay, gains, r_s, r_c
    cdef double[::1] vd_amp, vd_omega
    cdef signed char[::1] vd_kind
    cdef int[::1] vd_off
    cdef double[::1] db_amp, db_omega
    cdef signed char[::1] db_kind
    cdef int[::1] db_off
    cdef double[::1] w_axis
    # state and work buffers
    cdef double[::1] q, dh, qs, dhs
    cdef double[::1] qd1, qd2, qd3, qd4, dd1, dd2, dd3, dd4
    cdef double[::1] rel, dist, e, eta, eta_hat, u, grad, vd_buf
    # sticky flags and breach diagnostics
    cdef bint f_ppb, f_col, f_dis, robust
    cdef int breach_edge
    cdef double breach_t, breach_val
    # outputs
    cdef double[::1] out_t
    cdef double[:, ::1] out_q, out_u, out_e, out_eta, out_elo, out_ehi
    cdef signed char[:, ::1] out_flags
    cdef long[::1] log_steps
    cdef int n_logged

    cdef int rhs(self, double[::1] q, double[::1] dh, double t,
                 double[::1] qdot, double[::1] dhdot):
        """Stage evaluation; fills u/e/eta/dist side buffers. 1 on breach."""
        cdef int k, i, j, ax, a, worst
        cdef double nrm2, diff, rho, sigma, gain, w, c, over, under, bad, worst_bad
        cdef double acc, ph
        for k in range(self.l):
            i = self.ei[k]
            j = self.ej[k]
            nrm2 = 0.0
            for ax in range(self.m):
                diff = q[i * self.m + ax] - q[j * self.m + ax]
                self.rel[k * self.m + ax] = diff
                nrm2 += diff * diff
            self.dist[k] = sqrt(nrm2)
            self.e[k] = self.dist[k] - self.d[k]
            self.eta[k] = self.e[k] * (self.e[k] + 2.0 * self.d[k])
        for a in range(self.nm):
            self.u[a] = 0.0
        if self.variant == VARIANT_PPC or self.variant == VARIANT_MANEUVER:
            worst = 0
            worst_bad = -1e300
            for k in range(self.l):
                rho = (self.rho0[k] - self.rho_inf[k]) * exp(-self.decay[k] * t) + self.rho_inf[k]
                self.eta_hat[k] = self.eta[k] / rho
                over = self.eta_hat[k] - self.b_bar[k] + self.guard
                under = -self.b_under[k] + self.guard - self.eta_hat[k]
                bad = over if over > under else under
                if bad > worst_bad:
                    worst_bad = bad
                    worst = k
            if worst_bad >= 0.0:
                self.breach_edge = worst
                self.breach_t = t
                self.breach_val = self.eta_hat[worst]
                return 1
            for k in range(self.l):
                rho = (self.rho0[k] - self.rho_inf[k]) * exp(-self.decay[k] * t) + self.rho_inf[k]
                sigma = 0.5 * log((self.b_bar[k] * self.eta_hat[k] + self.bbbu[k])
                                  / (self.bbbu[k] - self.b_under[k] * self.eta_hat[k]))
                gain = (1.0 / rho) * (1.0 / (self.eta_hat[k] + self.b_under[k])
                                      - 1.0 / (self.eta_hat[k] - self.b_bar[k]))
                w = self.gains[k] * gain * sigma
                i = self.ei[k]
                j = self.ej[k]
                for ax in range(self.m):
                    c = w * self.rel[k * self.m + ax]
                    self.u[i * self.m + ax] -= c
                    self.u[j * self.m + ax] += c
            if self.variant == VARIANT_MANEUVER:
                for ax in range(self.m):
                    acc = 0.0
                    for k in range(self.vd_off[ax], self.vd_off[ax + 1]):
                        ph = self.vd_omega[k] * t
                        acc += self.vd_amp[k] * (sin(ph) if self.vd_kind[k] == 0 else cos(ph))
                    self.u[self.leader * self.m + ax] += self.n * acc
        elif self.variant == VARIANT_CONVENTIONAL:
            for k in range(self.l):
                w = self.k_conv * self.eta[k]
                i = self.ei[k]
                j = self.ej[k]
                for ax in range(self.m):
                    c = w * self.rel[k * self.m + ax]
                    self.u[i * self.m + ax] -= c
                    self.u[j * self.m + ax] += c
        else:
            for a in range(self.nm):
                self.grad[a] = 0.0
            for k in range(self.l):
                w = self.k_conv * self.eta[k]
                i = self.ei[k]
                j = self.ej[k]
                for ax in range(self.m):
                    c = w * self.rel[k * self.m + ax]
                    self.grad[i * self.m + ax] += c
                    self.grad[j * self.m + ax] -= c
            for a in range(self.nm):
                self.u[a] = -self.grad[a] - dh[a] * tanh(dh[a] * self.grad[a] / self.epsilon)
                dhdot[a] = self.w_axis[a] * fabs(self.grad[a]) - self.theta * dh[a]
        for a in range(self.nm):
            acc = 0.0
            for k in range(self.db_off[a], self.db_off[a + 1]):
                ph = self.db_omega[k] * t
                acc += self.db_amp[k] * (sin(ph) if self.db_kind[k] == 0 else cos(ph))
            qdot[a] = self.u[a] + self.db_scale * acc
        return 0

    cdef void log_row(self, int idx, double t):
        cdef int k, a
        cdef double rho, arg
        cdef bint ppb = False, col = False, dis = False
        self.out_t[idx] = t
        for a in range(self.nm):
            self.out_q[idx, a] = self.q[a]
            self.out_u[idx, a] = self.u[a]
        for k in range(self.l):
            rho = (self.rho0[k] - self.rho_inf[k]) * exp(-self.decay[k] * t) + self.rho_inf[k]
            self.out_e[idx, k] = self.e[k]
            self.out_eta[idx, k] = self.eta[k]
            self.out_ehi[idx, k] = -self.d[k] + sqrt(self.d2[k] + self.b_bar[k] * rho)
            arg = self.d2[k] - self.b_under[k] * rho
            if arg < 0.0:
                arg = 0.0
            self.out_elo[idx, k] = -(self.d[k] - sqrt(arg))
            if self.eta[k] >= self.b_bar[k] * rho or self.eta[k] <= -self.b_under[k] * rho:
                ppb = True
            if self.dist[k] <= self.r_s[k]:
                col = True
            if self.dist[k] >= self.r_c[k]:
                dis = True
        self.f_ppb |= ppb
        self.f_col |= col
        self.f_dis |= dis
        self.out_flags[idx, 0] = 1 if self.f_ppb else 0
        self.out_flags[idx, 1] = 1 if self.f_col else 0
        self.out_flags[idx, 2] = 1 if self.f_dis else 0
        self.n_logged = idx + 1

    cdef int main_loop(self):
        cdef long s
        cdef int a, log_ptr = 0
        cdef double t, half = 0.5 * self.dt, sixth = self.dt / 6.0
        for s in range(self.n_steps):
            t = s * self.dt
            if self.rhs(self.q, self.dh, t, self.qd1, self.dd1):
                return 1
            if self.log_steps[log_ptr] == s:
                self.log_row(log_ptr, t)
                log_ptr += 1
            if self.integrator == INTEGRATOR_EULER:
                for a in range(self.nm):
                    self.q[a] = self.q[a] + self.dt * self.qd1[a]
                    if self.robust:
                        self.dh[a] = self.dh[a] + self.dt * self.dd1[a]
            else:
                for a in range(self.nm):
                    self.qs[a] = self.q[a] + half * self.qd1[a]
                    if self.robust:
                        self.dhs[a] = self.dh[a] + half * self.dd1[a]
                if self.rhs(self.qs, self.dhs if self.robust else self.dh,
                            t + half, self.qd2, self.dd2):
                    return 1
                for a in range(self.nm):
                    self.qs[a] = self.q[a] + half * self.qd2[a]
                    if self.robust:
                        self.dhs[a] = self.dh[a] + half * self.dd2[a]
                if self.rhs(self.qs, self.dhs if self.robust else self.dh,
                            t + half, self.qd3, self.dd3):
                    return 1
                for a in range(self.nm):
                    self.qs[a] = self.q[a] + self.dt * self.qd3[a]
                    if self.robust:
                        self.dhs[a] = self.dh[a] + self.dt * self.dd3[a]
                if self.rhs(self.qs, self.dhs if self.robust else self.dh,
                            t + self.dt, self.qd4, self.dd4):
                    return 1
                for a in range(self.nm):
                    self.q[a] = self.q[a] + sixth * (self.qd1[a] + 2.0 * self.qd2[a]
                                                     + 2.0 * self.qd3[a] + self.qd4[a])
                    if self.robust:
                        self.dh[a] = self.dh[a] + sixth * (self.dd1[a] + 2.0 * self.dd2[a]
                                                           + 2.0 * self.dd3[a] + self.dd4[a])
        t = self.n_steps * self.dt
        if self.rhs(self.q, self.dh, t, self.qd1, self.dd1):
            return 1
        self.log_row(log_ptr, t)
        return 0


def run(int n, int m,
        int[::1] ei, int[::1] ej,
        double[::1] d, double[::1] b_bar, double[::1] b_under,
        double[::1] rho0, double[::1] rho_inf, double[::1] decay,
        double[::1] gains,
        int variant, int leader,
        double[::1] vd_amp, double[::1] vd_omega, signed char[::1] vd_kind, int[::1] vd_off,
        double[::1] db_amp, double[::1] db_omega, signed char[::1] db_kind, int[::1] db_off,
        double db_scale,
        double k_conv, double epsilon, double theta,
        double[::1] w_axis, double[::1] dhat0,
        double[::1] r_s, double[::1] r_c,
        double[::1] q0,
        double dt, long n_steps, int integrator,
        long[::1] log_steps, double guard,
        double[::1] out_t, double[:, ::1] out_q, double[:, ::1] out_u,
        double[:, ::1] out_e, double[:, ::1] out_eta,
        double[:, ::1] out_elo, double[:, ::1] out_ehi,
        signed char[:, ::1] out_flags,
        double[::1] dhat_out):
    """Run one plan; returns (status, viol_edge, viol_time, viol_value, n_logged)."""
    cdef _Sim sim = _Sim()
    cdef int l = ei.shape[0], nm = n * m, a
    sim.n = n
    sim.m = m
    sim.l = l
    sim.nm = nm
    sim.variant = variant
    sim.leader = leader
    sim.integrator = integrator
    sim.robust = variant == VARIANT_ROBUST
    sim.dt = dt
    sim.n_steps = n_steps
    sim.guard = guard
    sim.db_scale = db_scale
    sim.k_conv = k_conv
    sim.epsilon = epsilon
    sim.theta = theta
    sim.ei = ei
    sim.ej = ej
    sim.d = d
    sim.b_bar = b_bar
    sim.b_under = b_under
    sim.bbbu = np.multiply(b_bar, b_under)
    sim.d2 = np.multiply(d, d)
    sim.rho0 = rho0
    sim.rho_inf = rho_inf
    sim.decay = decay
    sim.gains = gains
    sim.r_s = r_s
    sim.r_c = r_c
    sim.vd_amp = vd_amp
    sim.vd_omega = vd_omega
    sim.vd_kind = vd_kind
    sim.vd_off = vd_off
    sim.db_amp = db_amp
    sim.db_omega = db_omega
    sim.db_kind = db_kind
    sim.db_off = db_off
    sim.w_axis = w_axis
    sim.q = np.array(q0, dtype=np.float64)
    sim.dh = np.array(dhat0, dtype=np.float64)
    sim.qs = np.empty(nm)
    sim.dhs = np.empty(nm)
    sim.qd1 = np.empty(nm)
    sim.qd2 = np.empty(nm)
    sim.qd3 = np.empty(nm)
    sim.qd4 = np.empty(nm)
    sim.dd1 = np.zeros(nm)
    sim.dd2 = np.zeros(nm)
    sim.dd3 = np.zeros(nm)
    sim.dd4 = np.zeros(nm)
    sim.rel = np.empty(l * m)
    sim.dist = np.empty(l)
    sim.e = np.empty(l)
    sim.eta = np.empty(l)
    sim.eta_hat = np.empty(l)
    sim.u = np.empty(nm)
    sim.grad = np.empty(nm)
    sim.vd_buf = np.empty(m)
    sim.f_ppb = False
    sim.f_col = False
    sim.f_dis = False
    sim.breach_edge = -1
    sim.breach_t = float("nan")
    sim.breach_val = float("nan")
    sim.out_t = out_t
    sim.out_q = out_q
    sim.out_u = out_u
    sim.out_e = out_e
    sim.out_eta = out_eta
    sim.out_elo = out_elo
    sim.out_ehi = out_ehi
    sim.out_flags = out_flags
    sim.log_steps = log_steps
    sim.n_logged = 0

    cdef int status = sim.main_loop()
    for a in range(nm):
        dhat_out[a] = sim.dh[a]
    return status, sim.breach_edge, sim.breach_t, sim.breach_val, sim.n_logged
