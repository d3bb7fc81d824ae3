# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fuzzy matching kernel. Mirrors ``disco._pyfuzzy`` exactly."""

from libc.stdlib cimport malloc, free


cdef Py_ssize_t _levenshtein(str a, str b) except -1:
    cdef Py_ssize_t n, m, i, j, sub, best
    cdef Py_ssize_t* row
    cdef Py_UCS4* bb
    cdef Py_UCS4 ca
    cdef Py_ssize_t diag, up
    if len(a) < len(b):
        a, b = b, a
    n = len(a)
    m = len(b)
    if m == 0:
        return n
    row = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    bb = <Py_UCS4*> malloc(m * sizeof(Py_UCS4))
    if row == NULL or bb == NULL:
        free(row)
        free(bb)
        raise MemoryError()
    try:
        for j in range(m):
            bb[j] = b[j]
        for j in range(m + 1):
            row[j] = j
        for i in range(n):
            ca = a[i]
            diag = row[0]
            row[0] = i + 1
            for j in range(m):
                up = row[j + 1]
                sub = diag + (0 if ca == bb[j] else 1)
                best = up + 1
                if row[j] + 1 < best:
                    best = row[j] + 1
                if sub < best:
                    best = sub
                row[j + 1] = best
                diag = up
        return row[m]
    finally:
        free(row)
        free(bb)


def levenshtein(str a, str b):
    return _levenshtein(a, b)


def edit_similarity(str a, str b):
    a = a.lower()
    b = b.lower()
    cdef Py_ssize_t longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - <double> _levenshtein(a, b) / longest


cdef double _fuzzy(str a, str b) except -1.0:
    a = a.lower()
    b = b.lower()
    if a in b or b in a:
        return 1.0
    return 1.0 - <double> _levenshtein(a, b) / max(len(a), len(b))


def fuzzy_score(str a, str b):
    return _fuzzy(a, b)


def best_score(tokens, weights, fields):
    cdef double best = 0.0
    cdef double weight, s
    cdef str token, field
    for token, weight in zip(tokens, weights):
        if weight <= best:
            continue
        for field in fields:
            s = weight * _fuzzy(token, field)
            if s > best:
                best = s
                if s >= weight:
                    break
    return best
