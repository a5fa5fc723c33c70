# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled half-plane kernels; see ``_kernels_py`` for the reference code.

The integer routines work on ``long long`` and are only called by the
wrappers in ``region_core`` when every coefficient fits comfortably below
2**20, so the triple products used in feasibility tests cannot overflow.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport fabs
from math import gcd


cdef long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef long long* _as_ll(seq, Py_ssize_t m) except NULL:
    cdef long long* out = <long long*> malloc(m * sizeof(long long) + 1)
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = seq[i]
    return out


cdef double* _as_d(seq, Py_ssize_t m) except NULL:
    cdef double* out = <double*> malloc(m * sizeof(double) + 1)
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = seq[i]
    return out


def int_vertices(a1, a2, b):
    cdef Py_ssize_t m = len(b)
    cdef long long* p1 = _as_ll(a1, m)
    cdef long long* p2 = _as_ll(a2, m)
    cdef long long* pb = _as_ll(b, m)
    cdef Py_ssize_t i, j, k
    cdef long long det, xn, yn, g
    cdef bint ok
    found = set()
    try:
        for i in range(m):
            for j in range(i + 1, m):
                det = p1[i] * p2[j] - p1[j] * p2[i]
                if det == 0:
                    continue
                xn = pb[i] * p2[j] - pb[j] * p2[i]
                yn = p1[i] * pb[j] - p1[j] * pb[i]
                if det < 0:
                    det = -det
                    xn = -xn
                    yn = -yn
                ok = True
                for k in range(m):
                    if p1[k] * xn + p2[k] * yn > pb[k] * det:
                        ok = False
                        break
                if ok:
                    g = _gcd(_gcd(xn, yn), det)
                    found.add((xn // g, yn // g, det // g))
    finally:
        free(p1)
        free(p2)
        free(pb)
    return list(found)


def int_max_weighted(a1, a2, b, long long w1, long long w2):
    cdef Py_ssize_t m = len(b)
    cdef long long* p1 = _as_ll(a1, m)
    cdef long long* p2 = _as_ll(a2, m)
    cdef long long* pb = _as_ll(b, m)
    cdef Py_ssize_t i, j, k
    cdef long long det, xn, yn, g
    cdef bint ok
    best = None
    try:
        for i in range(m):
            for j in range(i + 1, m):
                det = p1[i] * p2[j] - p1[j] * p2[i]
                if det == 0:
                    continue
                xn = pb[i] * p2[j] - pb[j] * p2[i]
                yn = p1[i] * pb[j] - p1[j] * pb[i]
                if det < 0:
                    det = -det
                    xn = -xn
                    yn = -yn
                ok = True
                for k in range(m):
                    if p1[k] * xn + p2[k] * yn > pb[k] * det:
                        ok = False
                        break
                if not ok:
                    continue
                # candidate comparison in Python ints: cross products of two
                # fractions can exceed 64 bits
                num = w1 * <object> xn + w2 * <object> yn
                if best is None or num * best[1] > best[0] * <object> det:
                    best = (num, <object> det)
    finally:
        free(p1)
        free(p2)
        free(pb)
    if best is None:
        return None
    h = gcd(best[0], best[1])
    return (best[0] // h, best[1] // h)


def int_contains_all(a1, a2, b, points):
    cdef Py_ssize_t m = len(b)
    cdef long long* p1 = _as_ll(a1, m)
    cdef long long* p2 = _as_ll(a2, m)
    cdef long long* pb = _as_ll(b, m)
    cdef Py_ssize_t k
    cdef long long xn, yn, d
    try:
        for pt in points:
            xn = pt[0]
            yn = pt[1]
            d = pt[2]
            for k in range(m):
                if p1[k] * xn + p2[k] * yn > pb[k] * d:
                    return False
        return True
    finally:
        free(p1)
        free(p2)
        free(pb)


def float_vertices(a1, a2, b, double tol):
    cdef Py_ssize_t m = len(b)
    cdef double* p1 = _as_d(a1, m)
    cdef double* p2 = _as_d(a2, m)
    cdef double* pb = _as_d(b, m)
    cdef Py_ssize_t i, j, k
    cdef double det, x, y
    cdef bint ok, dup
    found = []
    try:
        for i in range(m):
            for j in range(i + 1, m):
                det = p1[i] * p2[j] - p1[j] * p2[i]
                if det == 0.0:
                    continue
                x = (pb[i] * p2[j] - pb[j] * p2[i]) / det
                y = (p1[i] * pb[j] - p1[j] * pb[i]) / det
                ok = True
                for k in range(m):
                    if p1[k] * x + p2[k] * y > pb[k] + tol:
                        ok = False
                        break
                if not ok:
                    continue
                dup = False
                for fx, fy in found:
                    if fabs(<double> fx - x) <= tol and fabs(<double> fy - y) <= tol:
                        dup = True
                        break
                if not dup:
                    found.append((x, y))
    finally:
        free(p1)
        free(p2)
        free(pb)
    return found
