# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the pairwise-relation inner loops.

Semantics mirror mafrfs._kernels_np. Within this backend the fused scan_*
functions accumulate in the same order as the materialize-then-reduce path,
so both give bit-identical sums; min/max/abs are exact, so relation entries
are bit-identical across backends as well.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

name = "compiled"


def relation_from_column(values):
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t n = v.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            for j in range(n):
                o[i, j] = 1.0 - fabs(v[i] - v[j])
    return out


def conjoin_with_column(matrix, values, out=None):
    cdef double[:, ::1] m = matrix
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t n = m.shape[0]
    if out is None:
        out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double r
    with nogil:
        for i in range(n):
            for j in range(n):
                r = 1.0 - fabs(v[i] - v[j])
                o[i, j] = r if r < m[i, j] else m[i, j]
    return out


def conjoin_inplace(matrix, values):
    conjoin_with_column(matrix, values, out=matrix)


def cardinalities(matrix):
    cdef double[:, ::1] m = matrix
    cdef Py_ssize_t n = m.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += m[i, j]
            o[i] = acc
    return out


def joint_cardinalities(matrix, other):
    cdef double[:, ::1] a = matrix
    cdef double[:, ::1] b = other
    cdef Py_ssize_t n = a.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc, x
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                x = a[i, j] if a[i, j] < b[i, j] else b[i, j]
                acc += x
            o[i] = acc
    return out


def positive_memberships(matrix, label_memberships):
    cdef double[:, ::1] m = matrix
    fl_arr = np.ascontiguousarray(label_memberships, dtype=np.float64)
    cdef double[:, ::1] fl = fl_arr
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p = fl.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    lo_arr = np.empty(p, dtype=np.float64)
    cdef double[::1] lo = lo_arr
    cdef Py_ssize_t i, j, q
    cdef double comp, t, best
    with nogil:
        for i in range(n):
            for q in range(p):
                lo[q] = 2.0
            for j in range(n):
                comp = 1.0 - m[i, j]
                for q in range(p):
                    t = comp if comp > fl[j, q] else fl[j, q]
                    if t < lo[q]:
                        lo[q] = t
            best = lo[0]
            for q in range(1, p):
                if lo[q] > best:
                    best = lo[q]
            o[i] = best
    return out


def scan_cardinalities(matrix, values):
    cdef double[:, ::1] m = matrix
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t n = m.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc, r
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                r = 1.0 - fabs(v[i] - v[j])
                if m[i, j] < r:
                    r = m[i, j]
                acc += r
            o[i] = acc
    return out


def scan_joint_cardinalities(matrix, values, other):
    cdef double[:, ::1] m = matrix
    cdef double[:, ::1] b = other
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t n = m.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc, r
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                r = 1.0 - fabs(v[i] - v[j])
                if m[i, j] < r:
                    r = m[i, j]
                if b[i, j] < r:
                    r = b[i, j]
                acc += r
            o[i] = acc
    return out


def scan_positive_memberships(matrix, values, label_memberships):
    cdef double[:, ::1] m = matrix
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = v_arr
    fl_arr = np.ascontiguousarray(label_memberships, dtype=np.float64)
    cdef double[:, ::1] fl = fl_arr
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p = fl.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    lo_arr = np.empty(p, dtype=np.float64)
    cdef double[::1] lo = lo_arr
    cdef Py_ssize_t i, j, q
    cdef double comp, t, best, r
    with nogil:
        for i in range(n):
            for q in range(p):
                lo[q] = 2.0
            for j in range(n):
                r = 1.0 - fabs(v[i] - v[j])
                if m[i, j] < r:
                    r = m[i, j]
                comp = 1.0 - r
                for q in range(p):
                    t = comp if comp > fl[j, q] else fl[j, q]
                    if t < lo[q]:
                        lo[q] = t
            best = lo[0]
            for q in range(1, p):
                if lo[q] > best:
                    best = lo[q]
            o[i] = best
    return out
