# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend; mirrors ``_core_py`` exactly (same functions,
same status codes, same algorithms) with the hot loops in C."""

from libc.math cimport log, exp, tan, fabs, fmax, fmin, pow

import numpy as np

STATUS_OK = 0
STATUS_NO_CONVERGE = 1

cdef int C_OK = 0
cdef int C_NO_CONVERGE = 1

# Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's table, as
# used by GSL and Boost.Math); see the pure backend for provenance notes.
cdef double LANCZOS_G = 607.0 / 128.0
cdef double[15] LANCZOS
LANCZOS[0] = 0.99999999999999709182
LANCZOS[1] = 57.156235665862923517
LANCZOS[2] = -59.597960355475491248
LANCZOS[3] = 14.136097974741747174
LANCZOS[4] = -0.49191381609762019978
LANCZOS[5] = 0.33994649984811888699e-4
LANCZOS[6] = 0.46523628927048575665e-4
LANCZOS[7] = -0.98374475304879564677e-4
LANCZOS[8] = 0.15808870322491248884e-3
LANCZOS[9] = -0.21026444172410488319e-3
LANCZOS[10] = 0.21743961811521264320e-3
LANCZOS[11] = -0.16431810653676389022e-3
LANCZOS[12] = 0.84418223983852743293e-4
LANCZOS[13] = -0.26190838401581408670e-4
LANCZOS[14] = 0.36899182659531622704e-5

cdef double HALF_LOG_2PI = 0.91893853320467274178


cdef double c_ln_gamma(double x) noexcept:
    cdef double xm1, s, t
    cdef int k
    if x < 0.5:
        return c_ln_gamma(x + 1.0) - log(x)
    xm1 = x - 1.0
    s = LANCZOS[0]
    for k in range(1, 15):
        s += LANCZOS[k] / (xm1 + k)
    t = xm1 + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (xm1 + 0.5) * log(t) - t + log(s)


def ln_gamma(double x):
    """log Gamma(x) for x > 0 (caller guarantees positivity)."""
    return c_ln_gamma(x)


cdef double c_digamma(double x) noexcept:
    cdef double acc = 0.0
    cdef double inv2, ser
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    ser = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0
          - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))))
    return acc + log(x) - 0.5 / x - ser


def digamma(double x):
    """psi(x) for x > 0."""
    return c_digamma(x)


def hyp2f1_series(double a, double b, double c, double z, double tol, int max_terms):
    """Direct series sum.  Returns (value, n_terms, status)."""
    cdef double term = 1.0
    cdef double s = 1.0
    cdef int k
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        s += term
        if fabs(term) <= tol * fabs(s):
            return s, k + 1, C_OK
    return s, max_terms, C_NO_CONVERGE


def hyp2f1_series_arr(double a, double b, double c, z, double tol, int max_terms):
    """Element-wise direct series over a 1-D array; returns (values, statuses)."""
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t m = zv.shape[0]
    out = np.empty(m, dtype=np.float64)
    status = np.zeros(m, dtype=np.int32)
    cdef double[::1] ov = out
    cdef int[::1] sv = status
    cdef Py_ssize_t i
    cdef double term, s, zi
    cdef int k, ok
    for i in range(m):
        zi = zv[i]
        term = 1.0
        s = 1.0
        ok = C_NO_CONVERGE
        for k in range(max_terms):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * zi
            s += term
            if fabs(term) <= tol * fabs(s):
                ok = C_OK
                break
        ov[i] = s
        sv[i] = ok
    return out, status


def hyp2f1_lnseries(double a, double b, int m, double w, double tol, int max_terms):
    """Logarithmic building-block series for the integer c-a-b expansions;
    see the pure backend docstring for the exact sum."""
    cdef double ln_w = log(w)
    cdef double q = 1.0
    cdef int j, k
    for j in range(1, m + 1):
        q /= j
    cdef double br = ln_w - c_digamma(1.0) - c_digamma(m + 1.0) + c_digamma(a) + c_digamma(b)
    cdef double s = q * br
    cdef double wk = 1.0
    cdef double t
    for k in range(max_terms):
        q *= (a + k) * (b + k) / ((k + 1.0) * (k + m + 1.0))
        wk *= w
        br += -1.0 / (k + 1.0) - 1.0 / (k + m + 1.0) + 1.0 / (a + k) + 1.0 / (b + k)
        t = q * br * wk
        s += t
        if fabs(t) <= tol * fabs(s):
            return s, k + 1, C_OK
    return s, max_terms, C_NO_CONVERGE


def hyp2f1_lnseries_arr(double a, double b, int m, w, double tol, int max_terms):
    """Element-wise :func:`hyp2f1_lnseries` over a 1-D array of w."""
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t nw = wv.shape[0]
    out = np.empty(nw, dtype=np.float64)
    status = np.zeros(nw, dtype=np.int32)
    cdef double[::1] ov = out
    cdef int[::1] sv = status
    cdef double q0 = 1.0
    cdef int j, k, ok
    for j in range(1, m + 1):
        q0 /= j
    cdef double br0 = -c_digamma(1.0) - c_digamma(m + 1.0) + c_digamma(a) + c_digamma(b)
    cdef Py_ssize_t i
    cdef double q, br, s, wk, t, wi
    for i in range(nw):
        wi = wv[i]
        q = q0
        br = log(wi) + br0
        s = q * br
        wk = 1.0
        ok = C_NO_CONVERGE
        for k in range(max_terms):
            q *= (a + k) * (b + k) / ((k + 1.0) * (k + m + 1.0))
            wk *= wi
            br += -1.0 / (k + 1.0) - 1.0 / (k + m + 1.0) + 1.0 / (a + k) + 1.0 / (b + k)
            t = q * br * wk
            s += t
            if fabs(t) <= tol * fabs(s):
                ok = C_OK
                break
        ov[i] = s
        sv[i] = ok
    return out, status


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) for the angular profile IVP (coefficients: Dormand &
# Prince 1980; identical to the pure backend).
# ---------------------------------------------------------------------------

cdef double DP_C[7]
DP_C[0] = 0.0; DP_C[1] = 0.2; DP_C[2] = 0.3; DP_C[3] = 0.8
DP_C[4] = 8.0 / 9.0; DP_C[5] = 1.0; DP_C[6] = 1.0

cdef double DP_A[7][6]
DP_A[1][0] = 0.2
DP_A[2][0] = 3.0 / 40.0; DP_A[2][1] = 9.0 / 40.0
DP_A[3][0] = 44.0 / 45.0; DP_A[3][1] = -56.0 / 15.0; DP_A[3][2] = 32.0 / 9.0
DP_A[4][0] = 19372.0 / 6561.0; DP_A[4][1] = -25360.0 / 2187.0
DP_A[4][2] = 64448.0 / 6561.0; DP_A[4][3] = -212.0 / 729.0
DP_A[5][0] = 9017.0 / 3168.0; DP_A[5][1] = -355.0 / 33.0
DP_A[5][2] = 46732.0 / 5247.0; DP_A[5][3] = 49.0 / 176.0
DP_A[5][4] = -5103.0 / 18656.0
DP_A[6][0] = 35.0 / 384.0; DP_A[6][1] = 0.0; DP_A[6][2] = 500.0 / 1113.0
DP_A[6][3] = 125.0 / 192.0; DP_A[6][4] = -2187.0 / 6784.0; DP_A[6][5] = 11.0 / 84.0

cdef double DP_B5[7]
DP_B5[0] = 35.0 / 384.0; DP_B5[1] = 0.0; DP_B5[2] = 500.0 / 1113.0
DP_B5[3] = 125.0 / 192.0; DP_B5[4] = -2187.0 / 6784.0; DP_B5[5] = 11.0 / 84.0
DP_B5[6] = 0.0

cdef double DP_B4[7]
DP_B4[0] = 5179.0 / 57600.0; DP_B4[1] = 0.0; DP_B4[2] = 7571.0 / 16695.0
DP_B4[3] = 393.0 / 640.0; DP_B4[4] = -92097.0 / 339200.0; DP_B4[5] = 187.0 / 2100.0
DP_B4[6] = 1.0 / 40.0


cdef inline void dp_step(double lam, double kap, double th, double f, double fp,
                         double h, double* out) noexcept:
    cdef double ks_f[7]
    cdef double ks_p[7]
    cdef double yf, yp, ti
    cdef int i, j
    ks_f[0] = fp
    ks_p[0] = lam * tan(th) * fp + kap * f
    for i in range(1, 7):
        yf = f
        yp = fp
        for j in range(i):
            yf += h * DP_A[i][j] * ks_f[j]
            yp += h * DP_A[i][j] * ks_p[j]
        ti = th + DP_C[i] * h
        ks_f[i] = yp
        ks_p[i] = lam * tan(ti) * yp + kap * yf
    cdef double f5 = f, fp5 = fp, f4 = f, fp4 = fp
    for i in range(7):
        f5 += h * DP_B5[i] * ks_f[i]
        fp5 += h * DP_B5[i] * ks_p[i]
        f4 += h * DP_B4[i] * ks_f[i]
        fp4 += h * DP_B4[i] * ks_p[i]
    out[0] = f5
    out[1] = fp5
    out[2] = f4
    out[3] = fp4


def shoot_profile(double lam, double kap, double alpha, double theta_end,
                  double rtol, double atol, double f_cap, long max_steps):
    """Integrate the profile IVP; see the pure backend for the contract."""
    cdef double th = 0.0
    cdef double f = 1.0
    cdef double fp = alpha
    cdef double h = fmin(1e-3, theta_end)
    cdef long nsteps = 0
    cdef double res[4]
    cdef double sc_f, sc_p, errn
    while th < theta_end and nsteps < max_steps:
        if th + h > theta_end:
            h = theta_end - th
        dp_step(lam, kap, th, f, fp, h, res)
        sc_f = atol + rtol * fmax(fabs(f), fabs(res[0]))
        sc_p = atol + rtol * fmax(fabs(fp), fabs(res[1]))
        errn = fmax(fabs(res[0] - res[2]) / sc_f, fabs(res[1] - res[3]) / sc_p)
        if errn <= 1.0:
            th += h
            f = res[0]
            fp = res[1]
            nsteps += 1
            if fabs(f) > f_cap:
                return f, fp, th, C_NO_CONVERGE, nsteps
        h *= fmin(5.0, fmax(0.2, 0.9 * pow(errn + 1e-300, -0.2)))
        if h < 1e-15:
            return f, fp, th, C_NO_CONVERGE, nsteps
    return f, fp, th, (C_OK if th >= theta_end else C_NO_CONVERGE), nsteps


def shoot_profile_checkpoints(double lam, double kap, double alpha, thetas,
                              double rtol, double atol, double f_cap):
    """Integrate once, landing exactly on each ascending checkpoint."""
    cdef double[::1] tv = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef Py_ssize_t m = tv.shape[0]
    out_f = np.empty(m, dtype=np.float64)
    out_fp = np.empty(m, dtype=np.float64)
    cdef double[::1] of = out_f
    cdef double[::1] op = out_fp
    cdef double th = 0.0
    cdef double f = 1.0
    cdef double fp = alpha
    cdef double h = 1e-3
    cdef int status = C_OK
    cdef Py_ssize_t i
    cdef long guard
    cdef double target, hh, sc_f, sc_p, errn
    cdef double res[4]
    for i in range(m):
        target = tv[i]
        if status == C_OK:
            guard = 0
            while th < target:
                guard += 1
                if guard > 2000000:
                    status = C_NO_CONVERGE
                    break
                hh = fmin(h, target - th)
                dp_step(lam, kap, th, f, fp, hh, res)
                sc_f = atol + rtol * fmax(fabs(f), fabs(res[0]))
                sc_p = atol + rtol * fmax(fabs(fp), fabs(res[1]))
                errn = fmax(fabs(res[0] - res[2]) / sc_f, fabs(res[1] - res[3]) / sc_p)
                if errn <= 1.0:
                    th += hh
                    f = res[0]
                    fp = res[1]
                    if fabs(f) > f_cap:
                        status = C_NO_CONVERGE
                        break
                h = hh * fmin(5.0, fmax(0.2, 0.9 * pow(errn + 1e-300, -0.2)))
                if h < 1e-15:
                    status = C_NO_CONVERGE
                    break
        of[i] = f
        op[i] = fp
    return out_f, out_fp, status
