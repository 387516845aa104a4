# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: dense tableau simplex iterations and LTI rollouts."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double RATIO_TIE = 1e-12

cdef void _pivot(double[:, ::1] T, Py_ssize_t r, Py_ssize_t j, double tol) nogil:
    cdef Py_ssize_t i, k
    cdef Py_ssize_t nrow = T.shape[0], ncol = T.shape[1]
    cdef double p = T[r, j], f
    for k in range(ncol):
        T[r, k] /= p
    T[r, j] = 1.0
    for i in range(nrow):
        if i == r:
            continue
        f = T[i, j]
        if f != 0.0:
            for k in range(ncol):
                T[i, k] -= f * T[r, k]
            T[i, j] = 0.0
    for i in range(nrow - 1):
        if T[i, ncol - 1] < 0.0 and T[i, ncol - 1] > -tol:
            T[i, ncol - 1] = 0.0


def pivot(double[:, ::1] T, Py_ssize_t r, Py_ssize_t j, double tol):
    _pivot(T, r, j, tol)


def run_simplex(double[:, ::1] T, cnp.int64_t[::1] basis, Py_ssize_t ncols,
                long max_iter, double tol, long bland_after):
    """Iterate to optimality on tableau *T* (objective in the last row).

    Returns ``(status, iterations)`` with status 0 optimal, 1 unbounded,
    2 iteration budget exhausted.
    """
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t i, j, best_j, best_r
    cdef double best_c, a, ratio, best_ratio = 0.0
    cdef long it = 0, degenerate = 0
    cdef bint bland = False
    cdef int status = -1
    with nogil:
        while True:
            best_j = -1
            best_c = -tol
            for j in range(ncols):
                if T[m, j] < best_c:
                    best_j = j
                    if bland:
                        break
                    best_c = T[m, j]
            if best_j < 0:
                status = 0
                break
            if it >= max_iter:
                status = 2
                break
            best_r = -1
            for i in range(m):
                a = T[i, best_j]
                if a > tol:
                    ratio = T[i, rhs] / a
                    if best_r < 0 or ratio < best_ratio - RATIO_TIE:
                        best_r = i
                        best_ratio = ratio
                    elif fabs(ratio - best_ratio) <= RATIO_TIE and basis[i] < basis[best_r]:
                        best_r = i
                        best_ratio = ratio
            if best_r < 0:
                status = 1
                break
            if best_ratio <= tol:
                degenerate += 1
                if degenerate >= bland_after:
                    bland = True
            else:
                degenerate = 0
            _pivot(T, best_r, best_j, tol)
            basis[best_r] = best_j
            it += 1
    return status, it


def rollout(double[:, ::1] A, double[:, ::1] B, double[:, ::1] C, double[:, ::1] D,
            double[::1] w, double[::1] v, double[::1] x0, double[:, ::1] inputs):
    """Return ``(states, outputs)``; states has one more row than inputs."""
    cdef Py_ssize_t K = inputs.shape[0], nx = A.shape[0], nd = B.shape[1], ny = C.shape[0]
    cdef Py_ssize_t k, i, j
    cdef double acc
    states_arr = np.empty((K + 1, nx))
    outputs_arr = np.empty((K, ny))
    cdef double[:, ::1] X = states_arr
    cdef double[:, ::1] Y = outputs_arr
    with nogil:
        for i in range(nx):
            X[0, i] = x0[i]
        for k in range(K):
            for i in range(ny):
                acc = v[i]
                for j in range(nx):
                    acc = acc + C[i, j] * X[k, j]
                for j in range(nd):
                    acc = acc + D[i, j] * inputs[k, j]
                Y[k, i] = acc
            for i in range(nx):
                acc = w[i]
                for j in range(nx):
                    acc = acc + A[i, j] * X[k, j]
                for j in range(nd):
                    acc = acc + B[i, j] * inputs[k, j]
                X[k + 1, i] = acc
    return states_arr, outputs_arr
