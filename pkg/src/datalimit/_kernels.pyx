# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same algorithm and evaluation order as ``_kernels_py``."""
from libc.math cimport log1p, pow, fabs

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
WGK[:] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
WG[:] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]

cdef enum:
    MAX_DEPTH = 50
    STACK = 64

cdef double EPS = 2.220446049250313e-16


cdef inline void _two_sum(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def alternating_series(double S, double alpha, long max_terms, double target):
    cdef double r = 1.0 / S
    cdef double p = 1.0
    cdef double s = 0.0
    cdef double c = 0.0
    cdef double sign = 1.0
    cdef long n = 0
    cdef double nxt = r / (alpha + 1.0)
    with nogil:
        while n < max_terms:
            n += 1
            p *= r
            _two_sum(&s, &c, sign * (p / (alpha * n + 1.0)))
            sign = -sign
            nxt = p * r / (alpha * (n + 1) + 1.0)
            if nxt <= target:
                break
    return s + c, nxt, n


cdef inline double _f(double x, double S, double alpha, double d0, double z0) noexcept nogil:
    cdef double y
    if z0 == 0.0:
        y = S * pow(d0 / x, alpha)
    else:
        y = S * pow(d0 * d0 / (z0 * z0 + x * x), 0.5 * alpha)
    return log1p(y)


def shannon_integrand(double x, double S, double alpha, double d0, double z0):
    return _f(x, S, alpha, d0, z0)


cdef void _gk15(double a, double b, double S, double alpha, double d0, double z0,
                double* k, double* g) noexcept nogil:
    cdef double hl = 0.5 * (b - a)
    cdef double c = 0.5 * (a + b)
    cdef double fc = _f(c, S, alpha, d0, z0)
    cdef double resk = WGK[7] * fc
    cdef double resg = WG[3] * fc
    cdef double dx, fsum
    cdef int j
    for j in range(7):
        dx = hl * XGK[j]
        fsum = _f(c - dx, S, alpha, d0, z0) + _f(c + dx, S, alpha, d0, z0)
        resk += WGK[j] * fsum
        if j % 2 == 1:
            resg += WG[j // 2] * fsum
    k[0] = resk * hl
    g[0] = resg * hl


def integrate_span(double S, double alpha, double d0, double z0, double a, double b,
                   double abs_tol, double rel_tol, long max_subdiv):
    if not b > a:
        return 0.0, 0.0, 0, True
    cdef double st_lo[STACK]
    cdef double st_hi[STACK]
    cdef double st_tol[STACK]
    cdef int st_depth[STACK]
    cdef double st_k[STACK]
    cdef double st_g[STACK]
    cdef int top = 0
    cdef double k, g, kl, gl, kr, gr, err, lo, hi, tol_i, mid
    cdef int depth
    cdef double s = 0.0
    cdef double c = 0.0
    cdef double err_total = 0.0
    cdef long nsub = 0
    cdef bint converged = True
    with nogil:
        _gk15(a, b, S, alpha, d0, z0, &k, &g)
        st_lo[0] = a
        st_hi[0] = b
        st_tol[0] = abs_tol if abs_tol > rel_tol * fabs(k) else rel_tol * fabs(k)
        st_depth[0] = 0
        st_k[0] = k
        st_g[0] = g
        top = 1
        while top > 0:
            top -= 1
            lo = st_lo[top]
            hi = st_hi[top]
            tol_i = st_tol[top]
            depth = st_depth[top]
            k = st_k[top]
            g = st_g[top]
            err = fabs(k - g)
            if err <= tol_i or depth >= MAX_DEPTH or nsub >= max_subdiv:
                if err > tol_i:
                    converged = False
                _two_sum(&s, &c, k)
                err_total += err + 15.0 * EPS * fabs(k)
                continue
            mid = 0.5 * (lo + hi)
            _gk15(lo, mid, S, alpha, d0, z0, &kl, &gl)
            _gk15(mid, hi, S, alpha, d0, z0, &kr, &gr)
            nsub += 1
            st_lo[top] = mid
            st_hi[top] = hi
            st_tol[top] = 0.5 * tol_i
            st_depth[top] = depth + 1
            st_k[top] = kr
            st_g[top] = gr
            top += 1
            st_lo[top] = lo
            st_hi[top] = mid
            st_tol[top] = 0.5 * tol_i
            st_depth[top] = depth + 1
            st_k[top] = kl
            st_g[top] = gl
            top += 1
    return s + c, err_total, nsub, converged
