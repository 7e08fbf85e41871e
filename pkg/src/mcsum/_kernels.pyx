# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; semantics identical to ``_kernels_py``."""
from libc.math cimport fabs, INFINITY, NAN


def cf_tails(const double[::1] a, const double[::1] b):
    cdef Py_ssize_t k, n = a.shape[0]
    cdef double t0 = 0.0, t1 = 0.0, t2 = 0.0, ak, bk, d
    for k in range(n - 1, -1, -1):
        ak = a[k]
        bk = b[k]
        d = bk + t0
        t0 = ak / d if d != 0.0 else INFINITY
        if k < n - 1:
            d = bk + t1
            t1 = ak / d if d != 0.0 else INFINITY
        if k < n - 2:
            d = bk + t2
            t2 = ak / d if d != 0.0 else INFINITY
    return t0, (t1 if n >= 1 else NAN), (t2 if n >= 2 else NAN), (1 if t0 != t0 else 0)


def rational_partial_sum(const double[::1] num, const double[::1] den,
                         long long n0, long long count, bint alternating):
    cdef Py_ssize_t dn = num.shape[0], dd = den.shape[0], j
    cdef long long k
    cdef double s = 0.0, comp = 0.0, s_abs = 0.0, term = 0.0, sign = 1.0
    cdef double x, p, q, t
    for k in range(count):
        x = <double>(n0 + k)
        p = 0.0
        for j in range(dn - 1, -1, -1):
            p = p * x + num[j]
        q = 0.0
        for j in range(dd - 1, -1, -1):
            q = q * x + den[j]
        term = sign * (p / q)
        t = s + term
        if fabs(s) >= fabs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        s_abs += fabs(term)
        if alternating:
            sign = -sign
    return s + comp, s_abs, term
