"""Matrix-free matvec kernels with backend selection at import time.

The compiled Cython extension is used when available; a vectorized NumPy
fallback implements the identical contract.  Set ``MKBELL_PURE=1`` in the
environment to force the fallback (useful for testing and benchmarking).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _speedups
except ImportError:  # extension not built; fall back to NumPy
    _speedups = None

_FORCE_PURE = os.environ.get("MKBELL_PURE", "") == "1"


def backend() -> str:
    """Name of the backend in use: "compiled" or "pure"."""
    return "compiled" if (_speedups is not None and not _FORCE_PURE) else "pure"


def accumulate_terms(out, v, coeffs, labels, diag_vals, anti_vals, d, pure=None):
    """out += sum_t coeffs[t] * (O_{t,1} x ... x O_{t,n}) @ v.

    ``labels`` is a (T, n) uint8 array (0 = diagonal observable, 1 =
    anti-diagonal), ``diag_vals``/``anti_vals`` the length-d factor tables.
    Terms are accumulated in order, so the result is bit-reproducible.
    """
    if pure is None:
        use_pure = _FORCE_PURE or _speedups is None
    else:
        use_pure = pure or _speedups is None
    if not use_pure:
        _speedups.accumulate_terms(out, v, coeffs, labels, diag_vals, anti_vals, d)
    else:
        _accumulate_numpy(out, v, coeffs, labels, diag_vals, anti_vals, d)
    return out


def _accumulate_numpy(out, v, coeffs, labels, diag_vals, anti_vals, d):
    n = labels.shape[1]
    shape = (d,) * n
    w0 = v.reshape(shape)
    acc = out.reshape(shape)
    for t in range(len(coeffs)):
        w = w0
        for j in range(n):
            sel = [1] * n
            sel[j] = d
            if labels[t, j]:
                w = np.flip(w, axis=j) * anti_vals.reshape(sel)
            else:
                w = w * diag_vals.reshape(sel)
        acc += coeffs[t] * w
    return out
