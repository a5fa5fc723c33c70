"""Pure-Python versions of the half-plane kernels.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension. Constraints are passed as three parallel sequences
``a1, a2, b`` describing ``a1[k]*x + a2[k]*y <= b[k]``; the caller is
expected to include the axis constraints ``-x <= 0`` and ``-y <= 0``.

Integer kernels return vertices as ``(xn, yn, d)`` triples meaning the point
``(xn/d, yn/d)`` with ``d > 0`` and the triple reduced by its gcd.
"""

from math import gcd


def int_vertices(a1, a2, b):
    """Feasible pairwise intersections of integer lines, deduplicated."""
    m = len(b)
    found = set()
    for i in range(m):
        ai1, ai2, bi = a1[i], a2[i], b[i]
        for j in range(i + 1, m):
            det = ai1 * a2[j] - a1[j] * ai2
            if det == 0:
                continue
            xn = bi * a2[j] - b[j] * ai2
            yn = ai1 * b[j] - a1[j] * bi
            if det < 0:
                det, xn, yn = -det, -xn, -yn
            for k in range(m):
                if a1[k] * xn + a2[k] * yn > b[k] * det:
                    break
            else:
                g = gcd(gcd(xn, yn), det)
                found.add((xn // g, yn // g, det // g))
    return list(found)


def int_max_weighted(a1, a2, b, w1, w2):
    """Largest ``w1*x + w2*y`` over feasible vertices as ``(num, den)``.

    Returns ``None`` when no intersection is feasible.
    """
    best = None
    m = len(b)
    for i in range(m):
        for j in range(i + 1, m):
            det = a1[i] * a2[j] - a1[j] * a2[i]
            if det == 0:
                continue
            xn = b[i] * a2[j] - b[j] * a2[i]
            yn = a1[i] * b[j] - a1[j] * b[i]
            if det < 0:
                det, xn, yn = -det, -xn, -yn
            feasible = True
            for k in range(m):
                if a1[k] * xn + a2[k] * yn > b[k] * det:
                    feasible = False
                    break
            if not feasible:
                continue
            num = w1 * xn + w2 * yn
            if best is None or num * best[1] > best[0] * det:
                best = (num, det)
    if best is None:
        return None
    g = gcd(best[0], best[1])
    return (best[0] // g, best[1] // g)


def int_contains_all(a1, a2, b, points):
    """True when every ``(xn, yn, d)`` point satisfies all constraints."""
    m = len(b)
    for xn, yn, d in points:
        for k in range(m):
            if a1[k] * xn + a2[k] * yn > b[k] * d:
                return False
    return True


def float_vertices(a1, a2, b, tol):
    """Float version of :func:`int_vertices`; duplicates are merged by tol."""
    m = len(b)
    found = []
    for i in range(m):
        for j in range(i + 1, m):
            det = a1[i] * a2[j] - a1[j] * a2[i]
            if det == 0.0:
                continue
            x = (b[i] * a2[j] - b[j] * a2[i]) / det
            y = (a1[i] * b[j] - a1[j] * b[i]) / det
            ok = True
            for k in range(m):
                if a1[k] * x + a2[k] * y > b[k] + tol:
                    ok = False
                    break
            if not ok:
                continue
            for fx, fy in found:
                if abs(fx - x) <= tol and abs(fy - y) <= tol:
                    break
            else:
                found.append((x, y))
    return found
