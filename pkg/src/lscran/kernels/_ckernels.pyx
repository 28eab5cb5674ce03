# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pathloss sums over planar point sets."""

from libc.math cimport pow, sqrt


cdef inline double _neg_pow(double d2, double half_alpha, int ialpha) nogil:
    # d2**(-half_alpha); integer alpha avoids pow(), odd alpha needs one sqrt
    cdef double r = 1.0
    cdef int i
    if ialpha > 0:
        for i in range(ialpha // 2):
            r *= d2
        if ialpha & 1:
            r *= sqrt(d2)
        return 1.0 / r
    return pow(d2, -half_alpha)


cdef int _int_alpha(double alpha):
    if alpha == <int>alpha and 0 < alpha < 32:
        return <int>alpha
    return 0


def pathloss_sum(const double[:, ::1] points, double x0, double y0, double alpha):
    cdef Py_ssize_t i, n = points.shape[0]
    cdef double dx, dy, acc = 0.0, ha = 0.5 * alpha
    cdef int ip = _int_alpha(alpha)
    with nogil:
        for i in range(n):
            dx = points[i, 0] - x0
            dy = points[i, 1] - y0
            acc += _neg_pow(dx * dx + dy * dy, ha, ip)
    return acc


def pair_pathloss_sums(const double[:, ::1] phi, const double[:, ::1] psi,
                       double x0, double y0, double alpha0, double alpha1,
                       double radius):
    cdef Py_ssize_t i, j, n = phi.shape[0], m = psi.shape[0]
    cdef double r2 = radius * radius, ha0 = 0.5 * alpha0, ha1 = 0.5 * alpha1
    cdef double dx, dy, d0, d1, w, outside = 0.0, inside = 0.0, acc_o, acc_i
    cdef int ip0 = _int_alpha(alpha0), ip1 = _int_alpha(alpha1)
    cdef double[:] w0 = memoryview(bytearray(8 * max(n, 1))).cast("d")
    cdef char[:] near = memoryview(bytearray(max(n, 1))).cast("b")
    with nogil:
        for i in range(n):
            dx = phi[i, 0] - x0
            dy = phi[i, 1] - y0
            d0 = dx * dx + dy * dy
            w0[i] = _neg_pow(d0, ha0, ip0)
            near[i] = d0 <= r2
        for j in range(m):
            acc_o = 0.0
            acc_i = 0.0
            for i in range(n):
                dx = phi[i, 0] - psi[j, 0]
                dy = phi[i, 1] - psi[j, 1]
                d1 = dx * dx + dy * dy
                if near[i]:
                    if d1 <= r2:
                        acc_i += w0[i] * _neg_pow(d1, ha1, ip1)
                elif d1 > r2:
                    acc_o += w0[i] * _neg_pow(d1, ha1, ip1)
            outside += acc_o
            inside += acc_i
    return outside, inside
