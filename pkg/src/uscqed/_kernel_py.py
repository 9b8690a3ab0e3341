"""Pure-NumPy propagation kernel.

Adaptive Dormand-Prince 5(4) integration of the linear (optionally
cosine-driven) system

    dy/dt = L0 @ y + amp * cos(freq * t) * (Ld @ y)

with quartic dense output at the requested sample times.  The compiled
kernel in `_kernel.pyx` implements the identical tableau and step
controller; the two backends agree to rounding accuracy.
"""

from __future__ import annotations

import numpy as np

from .errors import StepSizeUnderflowError

BACKEND = "python"

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    ]
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: error estimator weights (includes the FSAL stage).
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# Quartic dense-output polynomial coefficients (Shampine interpolant).
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_MIN_STEP_REL = 1e-14


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(x) ** 2)))


def propagate(L0, y0, t_eval, rtol, atol, Ld=None, amp=0.0, freq=0.0):
    """Integrate from t = 0 to t_eval[-1], sampling at every t_eval point.

    t_eval must be non-decreasing and non-negative.  Returns an array of
    shape (len(t_eval), n).
    """
    L0 = np.ascontiguousarray(L0, dtype=complex)
    y = np.array(y0, dtype=complex)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.ndim != 1 or len(t_eval) == 0:
        raise ValueError("t_eval must be a non-empty 1-D array")
    if t_eval[0] < 0 or np.any(np.diff(t_eval) < 0):
        raise ValueError("t_eval must be non-decreasing and non-negative")
    driven = Ld is not None and amp != 0.0
    if driven:
        Ld = np.ascontiguousarray(Ld, dtype=complex)

    def rhs(t, v):
        out = L0 @ v
        if driven:
            out = out + (amp * np.cos(freq * t)) * (Ld @ v)
        return out

    n = y.shape[0]
    out = np.empty((len(t_eval), n), dtype=complex)
    pos = 0
    while pos < len(t_eval) and t_eval[pos] == 0.0:
        out[pos] = y
        pos += 1
    if pos == len(t_eval):
        return out

    t = 0.0
    t_end = float(t_eval[-1])
    f = rhs(t, y)
    h = _initial_step(rhs, t, y, f, rtol, atol, t_end)
    K = np.empty((7, n), dtype=complex)
    rejected = False

    while pos < len(t_eval):
        h = min(h, t_end - t)
        if h < _MIN_STEP_REL * max(1.0, abs(t)):
            raise StepSizeUnderflowError(
                f"step size underflow at t={t:.6g} (h={h:.3e})"
            )
        K[0] = f
        for s in range(1, 6):
            dy = h * (_A[s, :s] @ K[:s])
            K[s] = rhs(t + _C[s] * h, y + dy)
        y_new = y + h * (_B[:6] @ K[:6])
        K[6] = rhs(t + h, y_new)

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms((h * (_E @ K)) / scale)

        if err <= 1.0:
            t_new = t + h
            # dense output for sample points inside (t, t_new]
            while pos < len(t_eval) and t_eval[pos] <= t_new + 1e-15 * max(1.0, t_new):
                theta = (t_eval[pos] - t) / h
                powers = theta ** np.arange(1, 5)
                out[pos] = y + h * (K.T @ (_P @ powers))
                pos += 1
            y = y_new
            t = t_new
            f = K[6]
            factor = _MAX_FACTOR if err == 0 else min(
                _MAX_FACTOR, _SAFETY * err ** (-0.2)
            )
            if rejected:
                factor = min(1.0, factor)
            h *= max(factor, _MIN_FACTOR)
            rejected = False
            if t >= t_end:
                break
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            rejected = True
    return out


def _initial_step(rhs, t0, y0, f0, rtol, atol, t_end):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end - t0)
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = _rms((f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_end - t0)
