# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled query kernels.

Mirrors ``_kernels_py`` exactly: one PCG64 double per noisy reading, in
query order, so the two backends are stream-identical.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t

cnp.import_array()

BACKEND_NAME = "cython"

STATUS_DECIDED = 0
STATUS_RUN_CAP = 1
STATUS_BUDGET = 2

DEF _DECIDED = 0
DEF _RUN_CAP = 1
DEF _BUDGET = 2


cdef inline bitgen_t* _bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    return <bitgen_t*> PyCapsule_GetPointer(capsule, "BitGenerator")


def bsc_read_sum(object gen, double p, int bit, long r):
    """Number of 1-responses among ``r`` consecutive readings of one bit."""
    cdef bitgen_t* bg = _bitgen(gen)
    cdef long flips = 0
    cdef long t
    for t in range(r):
        if bg.next_double(bg.state) < p:
            flips += 1
    return r - flips if bit else flips


cdef inline int _walk(bitgen_t* bg, double p, int bit, long barrier,
                      long run_cap, long budget,
                      long* q_out, int* est_out) nogil:
    cdef long net = 0
    cdef long q = 0
    cdef int resp
    if budget == 0:
        q_out[0] = 0
        est_out[0] = -1
        return _BUDGET
    if barrier <= 0:
        resp = bit ^ (bg.next_double(bg.state) < p)
        q_out[0] = 1
        est_out[0] = resp
        return _DECIDED
    while -barrier < net < barrier:
        if run_cap > 0 and q >= run_cap:
            q_out[0] = q
            est_out[0] = -1
            return _RUN_CAP
        if budget >= 0 and q >= budget:
            q_out[0] = q
            est_out[0] = -1
            return _BUDGET
        resp = bit ^ (bg.next_double(bg.state) < p)
        q += 1
        net += 1 if resp else -1
    q_out[0] = q
    est_out[0] = 1 if net >= barrier else 0
    return _DECIDED


def checkbit_walk(object gen, double p, int bit, long barrier, long run_cap,
                  long budget):
    cdef bitgen_t* bg = _bitgen(gen)
    cdef long q = 0
    cdef int est = -1
    cdef int status = _walk(bg, p, bit, barrier, run_cap, budget, &q, &est)
    return est, q, status


cdef inline int _safe_walk(bitgen_t* bg, double p, int bit, long barrier,
                           long run_cap, long budget,
                           long* total_out, long* restarts_out,
                           long* max_run_out, int* est_out) nogil:
    cdef long total = 0
    cdef long restarts = 0
    cdef long max_run = 0
    cdef long rem, q
    cdef int est, status
    while True:
        rem = -1 if budget < 0 else budget - total
        status = _walk(bg, p, bit, barrier, run_cap, rem, &q, &est)
        total += q
        if q > max_run:
            max_run = q
        if status == _DECIDED or status == _BUDGET:
            total_out[0] = total
            restarts_out[0] = restarts
            max_run_out[0] = max_run
            est_out[0] = est if status == _DECIDED else -1
            return status
        restarts += 1


def safe_checkbit_walk(object gen, double p, int bit, long barrier,
                       long run_cap, long budget):
    cdef bitgen_t* bg = _bitgen(gen)
    cdef long total = 0, restarts = 0, max_run = 0
    cdef int est = -1
    cdef int status = _safe_walk(bg, p, bit, barrier, run_cap, budget,
                                 &total, &restarts, &max_run, &est)
    return est, total, restarts, max_run, status


def checkbit_phase(object gen, double p, cnp.int8_t[::1] hidden, int flipped,
                   long barrier, long run_cap, int safe, long budget,
                   cnp.int64_t[::1] per_bit, cnp.int8_t[::1] est_out):
    cdef bitgen_t* bg = _bitgen(gen)
    cdef long total = 0
    cdef long n = hidden.shape[0]
    cdef long i, rem, q, restarts, max_run
    cdef int bit, est, status
    for i in range(n):
        bit = hidden[i] ^ flipped
        rem = -1 if budget < 0 else budget - total
        if safe:
            status = _safe_walk(bg, p, bit, barrier, run_cap, rem,
                                &q, &restarts, &max_run, &est)
        else:
            status = _walk(bg, p, bit, barrier, 0, rem, &q, &est)
        per_bit[i] += q
        total += q
        if status == _BUDGET:
            return total, STATUS_BUDGET, i
        est_out[i] = est
    return total, STATUS_DECIDED, n
