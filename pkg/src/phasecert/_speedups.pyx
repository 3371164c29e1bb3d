# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot loops: exact-phase exponential-sum scans.

Per-frequency phases are advanced by integer add / conditional subtract
modulo the modulus, so there is no floating-point drift regardless of how
many frequencies are scanned.  The caller supplies the starting exponent
table (k0 * v mod m, computed in exact integer arithmetic).
"""

from libc.math cimport M_PI, cos, sin, sqrt


def scan_max(long long[::1] expo, const long long[::1] step,
             const double[::1] weight, long long modulus,
             long long k0, long long k1):
    """Max of |sum_j w_j e(expo_j / m)| over k in [k0, k1).

    expo must hold (k0 * step_j) mod m on entry; it is advanced in place.
    Returns (max magnitude, first argmax k).
    """
    cdef Py_ssize_t n = expo.shape[0]
    cdef Py_ssize_t j
    cdef long long k, bestk = k0
    cdef double re, im, mag, best = -1.0
    cdef double scale = 2.0 * M_PI / <double> modulus
    with nogil:
        for k in range(k0, k1):
            re = 0.0
            im = 0.0
            for j in range(n):
                re += weight[j] * cos(scale * expo[j])
                im += weight[j] * sin(scale * expo[j])
                expo[j] += step[j]
                if expo[j] >= modulus:
                    expo[j] -= modulus
            mag = re * re + im * im
            if mag > best:
                best = mag
                bestk = k
    return sqrt(best), bestk


def profile_fill(long long[::1] expo, const long long[::1] step,
                 const double[::1] weight, long long modulus,
                 long long k0, long long k1,
                 double[::1] out_re, double[::1] out_im):
    """Fill out_re/out_im with sum_j w_j e(k step_j / m) for k in [k0, k1)."""
    cdef Py_ssize_t n = expo.shape[0]
    cdef Py_ssize_t j, i
    cdef long long k
    cdef double re, im
    cdef double scale = 2.0 * M_PI / <double> modulus
    with nogil:
        i = 0
        for k in range(k0, k1):
            re = 0.0
            im = 0.0
            for j in range(n):
                re += weight[j] * cos(scale * expo[j])
                im += weight[j] * sin(scale * expo[j])
                expo[j] += step[j]
                if expo[j] >= modulus:
                    expo[j] -= modulus
            out_re[i] = re
            out_im[i] = im
            i += 1


def points_scan_max(long long[::1] expo, const long long[::1] step,
                    const long long[::1] mods, const double[::1] scale,
                    const double[::1] weight, long long k0, long long k1):
    """Same as scan_max but with a per-point modulus (unit-circle points
    e(s_j / q_j) raised to the k-th power)."""
    cdef Py_ssize_t n = expo.shape[0]
    cdef Py_ssize_t j
    cdef long long k, bestk = k0
    cdef double re, im, mag, best = -1.0
    with nogil:
        for k in range(k0, k1):
            re = 0.0
            im = 0.0
            for j in range(n):
                re += weight[j] * cos(scale[j] * expo[j])
                im += weight[j] * sin(scale[j] * expo[j])
                expo[j] += step[j]
                if expo[j] >= mods[j]:
                    expo[j] -= mods[j]
            mag = re * re + im * im
            if mag > best:
                best = mag
                bestk = k
    return sqrt(best), bestk
