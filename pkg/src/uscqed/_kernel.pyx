# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled propagation kernel.

Same Dormand-Prince 5(4) tableau, step controller and dense output as the
pure-NumPy kernel in `_kernel_py.py`; matrix-vector products go through
BLAS zgemv and the stage arithmetic runs in typed loops, which removes the
per-step Python overhead that dominates at small Hilbert dimensions.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, sqrt
from scipy.linalg.cython_blas cimport zgemv

from .errors import StepSizeUnderflowError

BACKEND = "compiled"

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0
cdef double MIN_STEP_REL = 1e-14

# Dormand-Prince coefficients (flattened lower-triangular A, rows 1..5).
cdef double[7] C = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
cdef double[6][6] A = [
    [0, 0, 0, 0, 0, 0],
    [1.0 / 5, 0, 0, 0, 0, 0],
    [3.0 / 40, 9.0 / 40, 0, 0, 0, 0],
    [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0],
    [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0],
    [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0],
]
cdef double[7] B = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                    -2187.0 / 6784, 11.0 / 84, 0.0]
cdef double[7] E = [71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40]
cdef double[7][4] P = [
    [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608,
     -12715105075.0 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933,
     87487479700.0 / 32700410799],
    [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304,
     -10690763975.0 / 1880347072],
    [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408,
     701980252875.0 / 199316789632],
    [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883,
     -1453857185.0 / 822651844],
    [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423,
     69997945.0 / 29380423],
]


cdef inline void _matvec(double complex[:, ::1] m, double complex* x,
                         double complex* out, int n) noexcept nogil:
    # Row-major m viewed as column-major is m^T; trans='T' restores m @ x.
    cdef double complex one = 1.0, zero = 0.0
    cdef int inc = 1
    zgemv('T', &n, &n, &one, &m[0, 0], &n, x, &inc, &zero, out, &inc)


cdef void _rhs(double complex[:, ::1] L0, bint driven,
               double complex[:, ::1] Ld, double amp, double freq,
               double t, double complex* y, double complex* out,
               double complex* scratch, int n) noexcept nogil:
    cdef int i
    cdef double c
    _matvec(L0, y, out, n)
    if driven:
        _matvec(Ld, y, scratch, n)
        c = amp * cos(freq * t)
        for i in range(n):
            out[i] = out[i] + c * scratch[i]


def propagate(L0, y0, t_eval, double rtol, double atol,
              Ld=None, double amp=0.0, double freq=0.0):
    """Integrate from t = 0 to t_eval[-1], sampling at every t_eval point."""
    # plain copies: typed memoryviews reject read-only inputs
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] L0a = \
        np.array(L0, dtype=np.complex128, order="C")
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] y0a = \
        np.array(y0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_eval_a = \
        np.array(t_eval, dtype=np.float64)
    if t_eval_a.ndim != 1 or t_eval_a.shape[0] == 0:
        raise ValueError("t_eval must be a non-empty 1-D array")
    if t_eval_a[0] < 0 or np.any(np.diff(t_eval_a) < 0):
        raise ValueError("t_eval must be non-decreasing and non-negative")

    cdef bint driven = Ld is not None and amp != 0.0
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Lda
    if driven:
        Lda = np.array(Ld, dtype=np.complex128, order="C")
    else:
        Lda = np.zeros((1, 1), dtype=np.complex128)

    cdef int n = y0a.shape[0]
    cdef int n_eval = t_eval_a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = \
        np.empty((n_eval, n), dtype=np.complex128)

    cdef double complex[:, ::1] L0v = L0a
    cdef double complex[:, ::1] Ldv = Lda
    cdef double complex[:, ::1] outv = out
    cdef double[::1] tev = t_eval_a

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Kbuf = \
        np.empty((7, n), dtype=np.complex128)
    cdef double complex[:, ::1] K = Kbuf
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ybuf = y0a.copy()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ynewbuf = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] stagebuf = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] scratchbuf = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] y = ybuf
    cdef double complex[::1] ynew = ynewbuf
    cdef double complex[::1] stage = stagebuf
    cdef double complex[::1] scratch = scratchbuf

    cdef int pos = 0, i, s, j
    cdef double t = 0.0, t_end = tev[n_eval - 1]
    cdef double h, err, scale, acc, factor, t_new, theta, p1, p2, p3, p4
    cdef double complex accc
    cdef bint rejected = False

    while pos < n_eval and tev[pos] == 0.0:
        for i in range(n):
            outv[pos, i] = y[i]
        pos += 1
    if pos == n_eval:
        return out

    _rhs(L0v, driven, Ldv, amp, freq, t, &y[0], &K[0, 0], &scratch[0], n)
    h = _initial_step(L0v, driven, Ldv, amp, freq, y, K, stage, scratch,
                      rtol, atol, t_end, n)

    while pos < n_eval:
        if t_end - t < h:
            h = t_end - t
        if h < MIN_STEP_REL * max(1.0, fabs(t)):
            raise StepSizeUnderflowError(
                f"step size underflow at t={t:.6g} (h={h:.3e})")

        with nogil:
            for s in range(1, 6):
                for i in range(n):
                    accc = 0.0
                    for j in range(s):
                        if A[s][j] != 0.0:
                            accc = accc + A[s][j] * K[j, i]
                    stage[i] = y[i] + h * accc
                _rhs(L0v, driven, Ldv, amp, freq, t + C[s] * h,
                     &stage[0], &K[s, 0], &scratch[0], n)
            for i in range(n):
                accc = 0.0
                for j in range(6):
                    if B[j] != 0.0:
                        accc = accc + B[j] * K[j, i]
                ynew[i] = y[i] + h * accc
            _rhs(L0v, driven, Ldv, amp, freq, t + h,
                 &ynew[0], &K[6, 0], &scratch[0], n)

            acc = 0.0
            for i in range(n):
                accc = 0.0
                for j in range(7):
                    if E[j] != 0.0:
                        accc = accc + E[j] * K[j, i]
                scale = atol + rtol * max(abs(y[i]), abs(ynew[i]))
                acc += (h * abs(accc) / scale) ** 2
            err = sqrt(acc / n)

        if err <= 1.0:
            t_new = t + h
            while pos < n_eval and tev[pos] <= t_new + 1e-15 * max(1.0, t_new):
                theta = (tev[pos] - t) / h
                p1 = theta
                p2 = theta * theta
                p3 = p2 * theta
                p4 = p3 * theta
                for i in range(n):
                    accc = 0.0
                    for j in range(7):
                        accc = accc + K[j, i] * (P[j][0] * p1 + P[j][1] * p2
                                                 + P[j][2] * p3 + P[j][3] * p4)
                    outv[pos, i] = y[i] + h * accc
                pos += 1
            for i in range(n):
                y[i] = ynew[i]
                K[0, i] = K[6, i]
            t = t_new
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err ** (-0.2)
                if factor > MAX_FACTOR:
                    factor = MAX_FACTOR
            if rejected and factor > 1.0:
                factor = 1.0
            if factor < MIN_FACTOR:
                factor = MIN_FACTOR
            h *= factor
            rejected = False
            if t >= t_end:
                break
        else:
            factor = SAFETY * err ** (-0.2)
            if factor < MIN_FACTOR:
                factor = MIN_FACTOR
            h *= factor
            rejected = True
    return out


cdef double _initial_step(double complex[:, ::1] L0, bint driven,
                          double complex[:, ::1] Ld, double amp, double freq,
                          double complex[::1] y0, double complex[:, ::1] K,
                          double complex[::1] stage, double complex[::1] scratch,
                          double rtol, double atol, double t_end, int n):
    # Mirrors the heuristic in the NumPy kernel (K row 0 holds f0).
    cdef double d0 = 0.0, d1 = 0.0, d2 = 0.0, h0, h1, scale
    cdef int i
    for i in range(n):
        scale = atol + rtol * abs(y0[i])
        d0 += (abs(y0[i]) / scale) ** 2
        d1 += (abs(K[0, i]) / scale) ** 2
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > t_end:
        h0 = t_end
    for i in range(n):
        stage[i] = y0[i] + h0 * K[0, i]
    _rhs(L0, driven, Ld, amp, freq, h0, &stage[0], &K[1, 0], &scratch[0], n)
    for i in range(n):
        scale = atol + rtol * abs(y0[i])
        d2 += (abs(K[1, i] - K[0, i]) / scale) ** 2
    d2 = sqrt(d2 / n) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_end)
