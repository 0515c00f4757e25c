# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Eisner decoder. Same recurrences and tie-breaking as _eisner_py."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def eisner(scores, bint single_root):
    cdef double[:, ::1] s = np.ascontiguousarray(scores, dtype=np.float64)
    cdef Py_ssize_t N = s.shape[0]
    cdef Py_ssize_t n = N - 1
    if n < 1:
        return [], 0.0
    cdef Py_ssize_t lo = 1 if single_root else 0

    c_l_a = np.full((N, N), -INFINITY)
    c_r_a = np.full((N, N), -INFINITY)
    i_l_a = np.full((N, N), -INFINITY)
    i_r_a = np.full((N, N), -INFINITY)
    cdef double[:, ::1] c_l = c_l_a
    cdef double[:, ::1] c_r = c_r_a
    cdef double[:, ::1] i_l = i_l_a
    cdef double[:, ::1] i_r = i_r_a
    cdef Py_ssize_t[:, ::1] bc_l = np.zeros((N, N), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] bc_r = np.zeros((N, N), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] bi = np.zeros((N, N), dtype=np.intp)

    cdef Py_ssize_t k, width, a, b, r, arg, top
    cdef double best, v, total
    for k in range(N):
        c_l[k, k] = 0.0
        c_r[k, k] = 0.0

    for width in range(1, N - lo):
        for a in range(lo, N - width):
            b = a + width
            best = -INFINITY
            arg = a
            for r in range(a, b):
                v = c_r[a, r] + c_l[r + 1, b]
                if v > best:
                    best = v
                    arg = r
            bi[a, b] = arg
            i_r[a, b] = best + s[a, b]
            if a > 0:
                i_l[a, b] = best + s[b, a]

            best = -INFINITY
            arg = a
            for r in range(a, b):
                v = c_l[a, r] + i_l[r, b]
                if v > best:
                    best = v
                    arg = r
            c_l[a, b] = best
            bc_l[a, b] = arg

            best = -INFINITY
            arg = a + 1
            for r in range(a + 1, b + 1):
                v = i_r[a, r] + c_r[r, b]
                if v > best:
                    best = v
                    arg = r
            c_r[a, b] = best
            bc_r[a, b] = arg

    heads = [0] * n
    stack = []
    if single_root:
        best = -INFINITY
        top = 1
        for r in range(1, N):
            v = s[0, r] + c_l[1, r] + c_r[r, n]
            if v > best:
                best = v
                top = r
        total = best
        heads[top - 1] = 0
        stack.append((0, 1, top))
        stack.append((1, top, n))
    else:
        total = c_r[0, n]
        stack.append((1, 0, n))

    cdef int kind
    while stack:
        kind, a, b = stack.pop()
        if a == b:
            continue
        if kind == 0:
            r = bc_l[a, b]
            stack.append((0, a, r))
            stack.append((2, r, b))
        elif kind == 1:
            r = bc_r[a, b]
            stack.append((3, a, r))
            stack.append((1, r, b))
        else:
            r = bi[a, b]
            if kind == 2:
                heads[a - 1] = b
            else:
                heads[b - 1] = a
            stack.append((1, a, r))
            stack.append((0, r + 1, b))
    return heads, total
