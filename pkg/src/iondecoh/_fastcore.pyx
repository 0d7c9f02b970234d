# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _purecore kernels. Same contracts, same numbers."""

import numpy as np

from libc.math cimport exp, expm1, fabs, sin

cdef double PI = 3.141592653589793238462643383279502884

cdef double[8] GL_X
cdef double[8] GL_W
GL_X[0] = -9.60289856497536176e-01
GL_X[1] = -7.96666477413626728e-01
GL_X[2] = -5.25532409916328991e-01
GL_X[3] = -1.83434642495649780e-01
GL_X[4] = 1.83434642495649780e-01
GL_X[5] = 5.25532409916328991e-01
GL_X[6] = 7.96666477413626728e-01
GL_X[7] = 9.60289856497536176e-01
GL_W[0] = 1.01228536290376689e-01
GL_W[1] = 2.22381034453374343e-01
GL_W[2] = 3.13706645877887047e-01
GL_W[3] = 3.62683783378361768e-01
GL_W[4] = 3.62683783378361768e-01
GL_W[5] = 3.13706645877887047e-01
GL_W[6] = 2.22381034453374343e-01
GL_W[7] = 1.01228536290376689e-01


cdef inline double _occupation(double w, double beta) nogil:
    cdef double x = beta * w
    if fabs(x) < 1e-4:
        return (1.0 - x / 2.0 + x * x / 12.0) / beta
    if x > 700.0:
        return 0.0
    if x < -700.0:
        x = -700.0
    return w / expm1(x)


def zeno_rate_pair(double t_c, double omega3p, double v0_sq,
                   double omega_c, double beta, double[::1] edges):
    cdef Py_ssize_t n_panels = edges.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double pref = v0_sq / (2.0 * PI)
    cdef double half_tc = t_c / 2.0
    cdef double total_d = 0.0, total_e = 0.0
    cdef double mid, hw, pd, pe, x, u, s, filt, cut
    with nogil:
        for i in range(n_panels):
            mid = 0.5 * (edges[i] + edges[i + 1])
            hw = 0.5 * (edges[i + 1] - edges[i])
            pd = 0.0
            pe = 0.0
            for j in range(8):
                x = mid + hw * GL_X[j]
                u = (x - omega3p) * half_tc
                if u == 0.0:
                    filt = 1.0
                else:
                    s = sin(u) / u
                    filt = s * s
                cut = exp(-fabs(x) / omega_c) * pref
                pd = pd + GL_W[j] * filt * _occupation(x, beta) * cut
                pe = pe + GL_W[j] * filt * _occupation(-x, beta) * cut
            total_d = total_d + pd * hw
            total_e = total_e + pe * hw
    return t_c * total_d, t_c * total_e


def rk4_path(double[:, ::1] a, double[::1] y0, long n_steps, double h,
             long sample_every):
    cdef Py_ssize_t dim = a.shape[0]
    if dim > 16:
        raise ValueError("state dimension above kernel limit")
    if n_steps % sample_every:
        raise ValueError("n_steps must be a multiple of sample_every")
    cdef Py_ssize_t n_samples = n_steps // sample_every
    out = np.empty((n_samples + 1, dim))
    cdef double[:, ::1] out_v = out
    cdef double[16] y, k1, k2, k3, k4, tmp
    cdef Py_ssize_t i, j, step, row = 1
    cdef double acc
    for i in range(dim):
        y[i] = y0[i]
        out_v[0, i] = y0[i]
    with nogil:
        for step in range(n_steps):
            for i in range(dim):
                acc = 0.0
                for j in range(dim):
                    acc = acc + a[i, j] * y[j]
                k1[i] = acc
            for i in range(dim):
                tmp[i] = y[i] + 0.5 * h * k1[i]
            for i in range(dim):
                acc = 0.0
                for j in range(dim):
                    acc = acc + a[i, j] * tmp[j]
                k2[i] = acc
            for i in range(dim):
                tmp[i] = y[i] + 0.5 * h * k2[i]
            for i in range(dim):
                acc = 0.0
                for j in range(dim):
                    acc = acc + a[i, j] * tmp[j]
                k3[i] = acc
            for i in range(dim):
                tmp[i] = y[i] + h * k3[i]
            for i in range(dim):
                acc = 0.0
                for j in range(dim):
                    acc = acc + a[i, j] * tmp[j]
                k4[i] = acc
            for i in range(dim):
                y[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if (step + 1) % sample_every == 0:
                for i in range(dim):
                    out_v[row, i] = y[i]
                row = row + 1
    return out
