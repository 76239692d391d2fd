"""Independent numerical oracles used to cross-check closed forms.

These stay deliberately dumb: golden-section line search, plain bisection,
and iterative local grid refinement.  None of them share code with the
package's own solvers.
"""

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min_log(f, lo, hi, iters=200):
    """Golden-section minimum of a unimodal f over [lo, hi], searched in log space."""
    a, b = math.log(lo), math.log(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(math.exp(d))
    x = math.exp(0.5 * (a + b))
    return x, f(x)


def bisect_root(f, lo, hi, iters=200):
    """Plain bisection for a sign change of f on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    assert flo * fhi < 0, "bisection bracket does not straddle a root"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def refine_min(f, start, rounds=70, span=4.0, n=9):
    """Coordinate-wise local log-grid refinement of a multivariate minimum.

    ``start`` maps parameter names to initial values; ``f`` takes such a
    dict and may return inf for out-of-domain points.  Each round scans a
    shrinking log-grid around the incumbent along every axis.
    """
    x = dict(start)
    half = math.log(span)
    for _ in range(rounds):
        for key in x:
            offsets = [half * (2.0 * i / (n - 1) - 1.0) for i in range(n)]
            candidates = [x[key] * math.exp(u) for u in offsets]
            values = [f({**x, key: c}) for c in candidates]
            x[key] = candidates[min(range(n), key=values.__getitem__)]
        half *= 0.7
    return x, f(x)
