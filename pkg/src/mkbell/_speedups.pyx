# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernel: accumulate a sum of Kronecker-product terms times a vector.

Each term operator factorizes over parties into either the diagonal observable
(scale amplitude by ``diag_vals[digit]``) or the anti-diagonal one (pair the
digit with its mirror and scale by ``anti_vals[digit]``), so a single matvec
is a loop over global indices with mixed-radix digit arithmetic and no
materialized matrix.  The digit decomposition of each global index is hoisted
out of the term loop.
"""




def accumulate_terms(double[::1] out, double[::1] v, double[::1] coeffs,
                     unsigned char[:, ::1] labels, double[::1] diag_vals,
                     double[::1] anti_vals, Py_ssize_t d):
    """out += sum_t coeffs[t] * (O_{t,1} x ... x O_{t,n}) @ v  (fixed term order)."""
    cdef Py_ssize_t D = out.shape[0]
    cdef Py_ssize_t T = coeffs.shape[0]
    cdef Py_ssize_t n = labels.shape[1]
    cdef Py_ssize_t t, k, j, dig, rem, partner, pw
    cdef double f, total
    cdef double fa[64]
    cdef double fb[64]
    cdef Py_ssize_t pa[64]
    cdef Py_ssize_t pb[64]
    if n > 64:
        raise ValueError(f"kernel supports at most 64 parties, got {n}")
    for k in range(D):
        rem = k
        pw = 1
        for j in range(n - 1, -1, -1):
            dig = rem % d
            rem = rem // d
            fa[j] = diag_vals[dig]
            fb[j] = anti_vals[dig]
            pa[j] = dig * pw
            pb[j] = (d - 1 - dig) * pw
            pw = pw * d
        total = 0.0
        for t in range(T):
            f = coeffs[t]
            partner = 0
            for j in range(n):
                if labels[t, j]:
                    f = f * fb[j]
                    partner = partner + pb[j]
                else:
                    f = f * fa[j]
                    partner = partner + pa[j]
            total = total + f * v[partner]
        out[k] += total
