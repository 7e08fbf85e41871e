"""Pure-Python reference versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same return tuples; the
package picks one at import time (see ``mcsum.kernels``).
"""
import math


def cf_tails(a, b):
    """Backward evaluation of K_{k=1}^{N} a_k/b_k at depths N, N-1 and N-2.

    ``a`` and ``b`` hold the partial numerators and denominators (no zero
    numerators).  Returns ``(v0, v1, v2, status)``: the values at depth N,
    N-1, N-2 (NaN when the depth is negative), and status 1 if a value is
    NaN.  A vanishing denominator yields an infinite tail, which the next
    step maps to zero as in projective arithmetic.
    """
    a = a.tolist() if hasattr(a, "tolist") else list(a)
    b = b.tolist() if hasattr(b, "tolist") else list(b)
    n = len(a)
    inf = math.inf
    t0 = t1 = t2 = 0.0
    for k in range(n - 1, -1, -1):
        ak = a[k]
        bk = b[k]
        d = bk + t0
        t0 = ak / d if d != 0.0 else inf
        if k < n - 1:
            d = bk + t1
            t1 = ak / d if d != 0.0 else inf
        if k < n - 2:
            d = bk + t2
            t2 = ak / d if d != 0.0 else inf
    nan = math.nan
    v1 = t1 if n >= 1 else nan
    v2 = t2 if n >= 2 else nan
    status = 1 if t0 != t0 else 0
    return t0, v1, v2, status


def rational_partial_sum(num, den, n0, count, alternating):
    """Neumaier-compensated sum of u(n) = num(n)/den(n), n = n0 .. n0+count-1.

    ``num`` and ``den`` hold coefficients low to high.  With ``alternating``
    the term at n carries the sign (-1)^(n - n0).  Returns
    ``(total, total_abs, last_term)`` where ``last_term`` is the signed last
    summand.
    """
    num = num.tolist() if hasattr(num, "tolist") else list(num)
    den = den.tolist() if hasattr(den, "tolist") else list(den)
    num_r = num[::-1]
    den_r = den[::-1]
    s = 0.0
    comp = 0.0
    s_abs = 0.0
    term = 0.0
    sign = 1.0
    for k in range(count):
        x = float(n0 + k)
        p = 0.0
        for c in num_r:
            p = p * x + c
        q = 0.0
        for c in den_r:
            q = q * x + c
        term = sign * (p / q)
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        s_abs += abs(term)
        if alternating:
            sign = -sign
    return s + comp, s_abs, term
