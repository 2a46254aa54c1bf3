# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; mirrors _kernels_py exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

BACKEND = "cython"

cdef double TWO_PI = 6.283185307179586476925287


def mask_values(points, digits):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(
        np.atleast_2d(np.asarray(points, dtype=np.float64)))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] b = np.ascontiguousarray(
        np.atleast_2d(np.asarray(digits, dtype=np.float64)))
    cdef Py_ssize_t n = p.shape[0], m = b.shape[0], d = p.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i, j, k
    cdef double re, im, ph
    for i in range(n):
        re = 0.0
        im = 0.0
        for j in range(m):
            ph = 0.0
            for k in range(d):
                ph += b[j, k] * p[i, k]
            ph *= TWO_PI
            re += cos(ph)
            im += sin(ph)
        out[i] = (re + 1j * im) / m
    return out


def weight_values(points, digits):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] m = mask_values(points, digits)
    return (m * np.conj(m)).real


def mask_products(points, digits, s_inv, int depth):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(
        np.atleast_2d(np.asarray(points, dtype=np.float64)))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] b = np.ascontiguousarray(
        np.atleast_2d(np.asarray(digits, dtype=np.float64)))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] si = np.ascontiguousarray(
        np.asarray(s_inv, dtype=np.float64))
    cdef Py_ssize_t n = p.shape[0], m = b.shape[0], d = p.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] acc = np.ones(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] z = p.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zi = np.empty(d, dtype=np.float64)
    cdef Py_ssize_t i, j, k, step, r
    cdef double re, im, ph
    for step in range(depth):
        for i in range(n):
            for r in range(d):
                ph = 0.0
                for k in range(d):
                    ph += si[r, k] * z[i, k]
                zi[r] = ph
            for r in range(d):
                z[i, r] = zi[r]
            re = 0.0
            im = 0.0
            for j in range(m):
                ph = 0.0
                for k in range(d):
                    ph += b[j, k] * z[i, k]
                ph *= TWO_PI
                re += cos(ph)
                im += sin(ph)
            acc[i] = acc[i] * ((re + 1j * im) / m)
    return acc
