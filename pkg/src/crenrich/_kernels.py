"""Inner loops of the error computation, in numba and plain numpy.

The numba versions are used when numba imports and the environment
variable ``CRENRICH_DISABLE_NUMBA`` is unset (or ``0``/``false``). Both
variants are always importable so they can be compared directly.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None


def _disabled():
    flag = os.environ.get("CRENRICH_DISABLE_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


def af3_eval_numpy(coeffs, lam):
    """Values of AF3-coordinate quadratics ``coeffs (N, 6)`` at barycentric
    points ``lam (M, 3)``; returns ``(N, M)``."""
    l1, l2, l3 = lam[:, 0], lam[:, 1], lam[:, 2]
    basis = np.stack(
        [
            l1 * (3.0 * l1 - 2.0),
            l2 * (3.0 * l2 - 2.0),
            l3 * (3.0 * l3 - 2.0),
            6.0 * l2 * l3,
            6.0 * l3 * l1,
            6.0 * l1 * l2,
        ]
    )
    return coeffs @ basis


def abs_error_sums_numpy(coeffs, lam, weights, fvals):
    """Per-triangle ``sum_q w_q |f_q - p(lam_q)|``; ``fvals`` is ``(N, M)``."""
    return np.abs(fvals - af3_eval_numpy(coeffs, lam)) @ weights


if numba is not None:

    @numba.njit(cache=True)
    def af3_eval_numba(coeffs, lam):
        n = coeffs.shape[0]
        m = lam.shape[0]
        out = np.empty((n, m))
        for q in range(m):
            l1 = lam[q, 0]
            l2 = lam[q, 1]
            l3 = lam[q, 2]
            b0 = l1 * (3.0 * l1 - 2.0)
            b1 = l2 * (3.0 * l2 - 2.0)
            b2 = l3 * (3.0 * l3 - 2.0)
            b3 = 6.0 * l2 * l3
            b4 = 6.0 * l3 * l1
            b5 = 6.0 * l1 * l2
            for k in range(n):
                out[k, q] = (
                    coeffs[k, 0] * b0
                    + coeffs[k, 1] * b1
                    + coeffs[k, 2] * b2
                    + coeffs[k, 3] * b3
                    + coeffs[k, 4] * b4
                    + coeffs[k, 5] * b5
                )
        return out

    @numba.njit(cache=True)
    def abs_error_sums_numba(coeffs, lam, weights, fvals):
        n = coeffs.shape[0]
        m = lam.shape[0]
        basis = np.empty((m, 6))
        for q in range(m):
            l1 = lam[q, 0]
            l2 = lam[q, 1]
            l3 = lam[q, 2]
            basis[q, 0] = l1 * (3.0 * l1 - 2.0)
            basis[q, 1] = l2 * (3.0 * l2 - 2.0)
            basis[q, 2] = l3 * (3.0 * l3 - 2.0)
            basis[q, 3] = 6.0 * l2 * l3
            basis[q, 4] = 6.0 * l3 * l1
            basis[q, 5] = 6.0 * l1 * l2
        out = np.empty(n)
        for k in range(n):
            acc = 0.0
            for q in range(m):
                p = 0.0
                for i in range(6):
                    p += coeffs[k, i] * basis[q, i]
                acc += weights[q] * abs(fvals[k, q] - p)
            out[k] = acc
        return out

else:  # pragma: no cover
    af3_eval_numba = None
    abs_error_sums_numba = None


USE_NUMBA = numba is not None and not _disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    af3_eval = af3_eval_numba
    abs_error_sums = abs_error_sums_numba
else:
    af3_eval = af3_eval_numpy
    abs_error_sums = abs_error_sums_numpy
