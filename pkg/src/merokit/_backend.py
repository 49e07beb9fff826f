"""Hot numeric kernels: numba-jitted with a pure-numpy fallback.

Every grid verification in this package reduces to a handful of dense
inner loops: Horner evaluation of a coefficient array at many points,
Cauchy products and the exponential recurrence on truncated series, and
the min-|value| scan of the convolution non-vanishing check.  Those live
here, in two interchangeable implementations.

The backend is fixed once at import time from the MEROKIT_BACKEND
environment variable:

    auto   use numba when importable, else numpy (default)
    numba  require the jitted path, ImportError if numba is missing
    numpy  force the pure-numpy fallback

Both paths are exercised by the test suite and timed against each other
by benchmarks/bench_backends.py.
"""
from __future__ import annotations

import os
import warnings

import numpy as np

_CHOICE = os.environ.get("MEROKIT_BACKEND", "auto").strip().lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    warnings.warn(
        f"unknown MEROKIT_BACKEND={_CHOICE!r}; using 'auto'", stacklevel=1
    )
    _CHOICE = "auto"

_numba = None
if _CHOICE in ("auto", "numba"):
    try:
        import numba as _numba
    except ImportError:
        if _CHOICE == "numba":
            raise ImportError(
                "MEROKIT_BACKEND=numba but numba is not importable"
            ) from None
        _numba = None

USING_NUMBA = _numba is not None


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def _c128(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.complex128)


# ----------------------------------------------------------------- numpy

def _polyval_numpy(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    # Horner over ascending coefficients c[0] + c[1] z + ...
    acc = np.zeros_like(z)
    for j in range(len(c) - 1, -1, -1):
        acc = acc * z + c[j]
    return acc


def _cauchy_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = min(len(a), len(b))
    return np.convolve(a[:n], b[:n])[:n]


def _exp_numpy(a: np.ndarray) -> np.ndarray:
    # b = exp(a) with a[0] == 0:  n b_n = sum_{j=1..n} j a_j b_{n-j}
    n = len(a)
    out = np.zeros(n, dtype=np.complex128)
    out[0] = 1.0
    ja = np.arange(n) * a
    for k in range(1, n):
        out[k] = np.dot(ja[1 : k + 1], out[k - 1 :: -1][:k]) / k
    return out


def _min_abs_combo_numpy(u, v, beta, sigmas):
    vals = np.abs(u[None, :] - beta * sigmas[:, None] * v[None, :])
    flat = int(np.argmin(vals))
    return float(vals.flat[flat]), flat


# ----------------------------------------------------------------- numba

if USING_NUMBA:
    _njit = _numba.njit

    @_njit(cache=True)
    def _polyval_numba(c, z):  # pragma: no cover - numerically == numpy path
        out = np.empty(len(z), dtype=np.complex128)
        for i in range(len(z)):
            acc = 0.0 + 0.0j
            for j in range(len(c) - 1, -1, -1):
                acc = acc * z[i] + c[j]
            out[i] = acc
        return out

    @_njit(cache=True)
    def _cauchy_numba(a, b):  # pragma: no cover
        n = min(len(a), len(b))
        out = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            for j in range(n - i):
                out[i + j] += a[i] * b[j]
        return out

    @_njit(cache=True)
    def _exp_numba(a):  # pragma: no cover
        n = len(a)
        out = np.zeros(n, dtype=np.complex128)
        out[0] = 1.0
        for k in range(1, n):
            acc = 0.0 + 0.0j
            for j in range(1, k + 1):
                acc += j * a[j] * out[k - j]
            out[k] = acc / k
        return out

    @_njit(cache=True)
    def _min_abs_combo_numba(u, v, beta, sigmas):  # pragma: no cover
        best = np.inf
        flat = 0
        npt = len(u)
        for s in range(len(sigmas)):
            bs = beta * sigmas[s]
            for i in range(npt):
                val = abs(u[i] - bs * v[i])
                if val < best:
                    best = val
                    flat = s * npt + i
        return best, flat


# --------------------------------------------------------------- dispatch

def polyval(c, z) -> np.ndarray:
    """Evaluate sum_j c[j] * z**j at each point of z (ascending c)."""
    c = _c128(c)
    z = _c128(z)
    if len(c) == 0:
        return np.zeros_like(z)
    if USING_NUMBA:
        return _polyval_numba(c, z)
    return _polyval_numpy(c, z)


def cauchy_product(a, b) -> np.ndarray:
    """Truncated Cauchy product, cut to the shorter operand."""
    a = _c128(a)
    b = _c128(b)
    if USING_NUMBA:
        return _cauchy_numba(a, b)
    return _cauchy_numpy(a, b)


def exp_recurrence(a) -> np.ndarray:
    """Coefficients of exp of a series with zero constant term."""
    a = _c128(a)
    if USING_NUMBA:
        return _exp_numba(a)
    return _exp_numpy(a)


def min_abs_combo(u, v, beta: float, sigmas) -> tuple[float, int]:
    """min over (sigma, point) of |u - beta*sigma*v|, with flat argmin."""
    u = _c128(u)
    v = _c128(v)
    sigmas = _c128(sigmas)
    if USING_NUMBA:
        best, flat = _min_abs_combo_numba(u, v, float(beta), sigmas)
        return float(best), int(flat)
    return _min_abs_combo_numpy(u, v, float(beta), sigmas)
