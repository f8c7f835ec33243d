# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trigram similarity kernels.

Same semantics and arithmetic as ``kernels.pure`` (integer set sizes, one
float division), so scores are bit-identical across backends.  Grams are
encoded as exact int64 ids (three 21-bit code points), postings live in flat
C arrays.
"""

import array

from cpython cimport array
from libc.stdint cimport int32_t, int64_t
from libc.stdlib cimport calloc, free

BACKEND_NAME = "compiled"

cdef array.array _I64_TEMPLATE = array.array("q", [])
cdef array.array _I32_TEMPLATE = array.array("i", [])


cdef array.array _gram_ids(str s):
    """Sorted unique int64 gram ids for a normalized string."""
    cdef Py_ssize_t n = len(s)
    cdef set seen = set()
    cdef Py_ssize_t i
    cdef int64_t gid
    cdef array.array out
    cdef int64_t[:] mv
    if n == 0:
        return array.clone(_I64_TEMPLATE, 0, zero=False)
    if n < 3:
        # Short strings contribute themselves as a single gram; code points
        # stay below 2**21 so the packed id is injective across lengths.
        gid = 0
        for i in range(3):
            gid <<= 21
            if i < n:
                gid |= <int64_t> ord(s[i])
        seen.add(gid)
    else:
        for i in range(n - 2):
            gid = (
                ((<int64_t> ord(s[i])) << 42)
                | ((<int64_t> ord(s[i + 1])) << 21)
                | (<int64_t> ord(s[i + 2]))
            )
            seen.add(gid)
    ordered = sorted(seen)
    out = array.clone(_I64_TEMPLATE, len(ordered), zero=False)
    mv = out
    for i in range(len(ordered)):
        mv[i] = ordered[i]
    return out


cdef Py_ssize_t _intersect_sorted(int64_t[:] a, int64_t[:] b) nogil:
    cdef Py_ssize_t i = 0, j = 0, inter = 0
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0]
    while i < la and j < lb:
        if a[i] == b[j]:
            inter += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return inter


def trigram_count(str s):
    """Number of distinct grams (diagnostic parity with the pure backend)."""
    return len(_gram_ids(s))


def jaccard(str a, str b):
    cdef array.array ga = _gram_ids(a)
    cdef array.array gb = _gram_ids(b)
    cdef Py_ssize_t la = len(ga), lb = len(gb)
    cdef Py_ssize_t inter
    if la == 0 or lb == 0:
        return 0.0
    inter = _intersect_sorted(ga, gb)
    if inter == 0:
        return 0.0
    return <double> inter / <double> (la + lb - inter)


def score_many(str query, names):
    """Trigram Jaccard of ``query`` against every name, in order."""
    cdef array.array gq = _gram_ids(query)
    cdef Py_ssize_t lq = len(gq)
    cdef array.array gn
    cdef Py_ssize_t ln, inter
    cdef list out = []
    if lq == 0:
        return [0.0] * len(names)
    for name in names:
        gn = _gram_ids(<str> name)
        ln = len(gn)
        if ln == 0:
            out.append(0.0)
            continue
        inter = _intersect_sorted(gq, gn)
        if inter == 0:
            out.append(0.0)
        else:
            out.append(<double> inter / <double> (lq + ln - inter))
    return out


def pairs_above(names, double threshold, only_from=None):
    """All index pairs (i < j) with trigram Jaccard >= threshold.

    With ``only_from``, only pairs touching at least one of those indices
    are considered.  Mirrors ``pure.pairs_above`` exactly.
    """
    cdef Py_ssize_t n = len(names)
    cdef list grams = []
    cdef Py_ssize_t i, j, k, p, d, src
    for i in range(n):
        grams.append(_gram_ids(<str> names[i]))

    # Dense gram numbering so postings can live in flat C arrays.
    cdef dict dense = {}
    cdef list name_dense = []
    cdef Py_ssize_t n_dense = 0
    cdef array.array g, dl
    cdef int64_t[:] gmv
    for i in range(n):
        g = grams[i]
        gmv = g
        dl = array.clone(_I32_TEMPLATE, gmv.shape[0], zero=False)
        for k in range(gmv.shape[0]):
            obj = dense.get(gmv[k])
            if obj is None:
                dense[gmv[k]] = n_dense
                dl.data.as_ints[k] = <int32_t> n_dense
                n_dense += 1
            else:
                dl.data.as_ints[k] = <int32_t> (<Py_ssize_t> obj)
        name_dense.append(dl)

    cdef Py_ssize_t total = 0
    for i in range(n):
        total += len(<array.array> name_dense[i])

    cdef int32_t* post_count = <int32_t*> calloc(n_dense + 1, sizeof(int32_t))
    cdef int32_t* post_off = <int32_t*> calloc(n_dense + 2, sizeof(int32_t))
    cdef int32_t* post_items = <int32_t*> calloc(total + 1, sizeof(int32_t))
    cdef int32_t* fill = <int32_t*> calloc(n_dense + 1, sizeof(int32_t))
    cdef int32_t* lens = <int32_t*> calloc(n + 1, sizeof(int32_t))
    cdef int32_t* shared = <int32_t*> calloc(n + 1, sizeof(int32_t))
    cdef int32_t* touched = <int32_t*> calloc(n + 1, sizeof(int32_t))
    cdef char* is_source = <char*> calloc(n + 1, sizeof(char))
    if (post_count == NULL or post_off == NULL or post_items == NULL
            or fill == NULL or lens == NULL or shared == NULL
            or touched == NULL or is_source == NULL):
        raise MemoryError()

    cdef int32_t[:] dmv
    cdef Py_ssize_t acc, li, lj, inter, n_touched
    cdef double score
    cdef list sources
    cdef list out = []
    try:
        for i in range(n):
            dmv = <array.array> name_dense[i]
            lens[i] = <int32_t> dmv.shape[0]
            for k in range(dmv.shape[0]):
                post_count[dmv[k]] += 1
        acc = 0
        for k in range(n_dense):
            post_off[k] = <int32_t> acc
            acc += post_count[k]
        post_off[n_dense] = <int32_t> acc
        for i in range(n):
            dmv = <array.array> name_dense[i]
            for k in range(dmv.shape[0]):
                d = dmv[k]
                post_items[post_off[d] + fill[d]] = <int32_t> i
                fill[d] += 1

        if only_from is None:
            sources = list(range(n))
            for i in range(n):
                is_source[i] = 1
        else:
            sources = sorted(set(only_from))
            for obj in sources:
                is_source[<Py_ssize_t> obj] = 1

        for src_obj in sources:
            src = <Py_ssize_t> src_obj
            dmv = <array.array> name_dense[src]
            li = dmv.shape[0]
            n_touched = 0
            for k in range(li):
                d = dmv[k]
                for p in range(post_off[d], post_off[d] + post_count[d]):
                    j = post_items[p]
                    if j == src:
                        continue
                    if is_source[j] and j < src:
                        continue
                    if shared[j] == 0:
                        touched[n_touched] = <int32_t> j
                        n_touched += 1
                    shared[j] += 1
            for k in range(n_touched):
                j = touched[k]
                inter = shared[j]
                shared[j] = 0
                lj = lens[j]
                score = <double> inter / <double> (li + lj - inter)
                if score >= threshold:
                    if src < j:
                        out.append((src, j, score))
                    else:
                        out.append((j, src, score))
    finally:
        free(post_count)
        free(post_off)
        free(post_items)
        free(fill)
        free(lens)
        free(shared)
        free(touched)
        free(is_source)
    out.sort()
    return out
