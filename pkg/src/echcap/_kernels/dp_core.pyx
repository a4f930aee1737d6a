# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-class DP round; same contract as dp_python.dp_round."""


def dp_round(long long[::1] dp_in, long long[::1] dp_out,
             int[::1] choice, long long[::1] costs, long long[::1] vals):
    cdef Py_ssize_t n = dp_in.shape[0]
    cdef Py_ssize_t nopt = costs.shape[0]
    cdef Py_ssize_t b, opt
    cdef long long c, v, cand
    for b in range(n):
        dp_out[b] = dp_in[b]
        choice[b] = 0
    for opt in range(1, nopt):
        c = costs[opt]
        if c >= n:
            continue
        v = vals[opt]
        for b in range(c, n):
            cand = dp_in[b - c] + v
            if cand > dp_out[b]:
                dp_out[b] = cand
                choice[b] = opt
