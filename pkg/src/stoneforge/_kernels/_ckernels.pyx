# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels for the tree-kernel word problem.

Generators are indexed ``0..k-1``; ``comp[i]`` is the bitmask of generators
prefix-comparable to generator ``i`` (excluding ``i`` itself). A conjunct is a
pair of masks ``(pos, neg)``.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef enum:
    MAX_GENS = 62

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef int _load(object comp, int k, u64 *out) except -1:
    if k < 0 or k > MAX_GENS:
        raise ValueError(f"generator count {k} outside [0, {MAX_GENS}]")
    if len(comp) < k:
        raise ValueError("comparability table shorter than generator count")
    cdef int i
    for i in range(k):
        out[i] = <u64>comp[i]
    return 0


cdef inline bint _antichain(const u64 *comp, int k, u64 w) nogil:
    cdef int i
    cdef u64 rest = w
    while rest:
        i = __builtin_ctzll(rest)
        if comp[i] & w:
            return False
        rest &= rest - 1
    return True


def conjunct_nonzero(comp, u64 pos, u64 neg):
    """True iff the conjunct (pos, neg) survives the kernel ideal."""
    cdef u64 c[MAX_GENS]
    cdef int k = len(comp)
    _load(comp, k, c)
    if pos & neg:
        return False
    return bool(_antichain(c, k, pos))


def first_model(comp, int k, pos_masks, neg_masks):
    """Smallest antichain mask ``w`` satisfying some conjunct, or -1.

    Scans every subset of the ``k`` generators.
    """
    cdef u64 c[MAX_GENS]
    _load(comp, k, c)
    cdef Py_ssize_t m = len(pos_masks)
    if len(neg_masks) != m:
        raise ValueError("pos/neg mask lists differ in length")
    cdef u64 *ps = <u64 *>malloc((m + 1) * sizeof(u64))
    cdef u64 *ns = <u64 *>malloc((m + 1) * sizeof(u64))
    cdef Py_ssize_t j
    cdef u64 w, total
    cdef long long found = -1
    try:
        for j in range(m):
            ps[j] = <u64>pos_masks[j]
            ns[j] = <u64>neg_masks[j]
        total = (<u64>1) << k
        with nogil:
            w = 0
            while w < total:
                if _antichain(c, k, w):
                    for j in range(m):
                        if (ps[j] & ~w) == 0 and (ns[j] & w) == 0:
                            found = <long long>w
                            break
                    if found >= 0:
                        break
                w += 1
    finally:
        free(ps)
        free(ns)
    return found


def decide_all_conjuncts(comp, int k):
    """Decision value for every conjunct over ``k`` generators.

    Byte ``t`` of the result corresponds to the conjunct whose base-3 digits
    of ``t`` are 1 for positive and 2 for negative literals; it is 1 iff the
    conjunct is nonzero modulo the kernel.
    """
    cdef u64 c[MAX_GENS]
    _load(comp, k, c)
    if k > 20:
        raise ValueError("exhaustive conjunct table limited to 20 generators")
    cdef Py_ssize_t size = 1
    cdef int i
    for i in range(k):
        size *= 3
    out = bytearray(size)
    cdef unsigned char *buf = out
    cdef int digits[MAX_GENS]
    cdef u64 pos = 0, neg = 0
    cdef Py_ssize_t t
    for i in range(k):
        digits[i] = 0
    with nogil:
        for t in range(size):
            buf[t] = 1 if _antichain(c, k, pos) else 0
            # base-3 increment, keeping the masks in step with the digits
            i = 0
            while i < k:
                if digits[i] == 0:
                    digits[i] = 1
                    pos |= (<u64>1) << i
                    break
                elif digits[i] == 1:
                    digits[i] = 2
                    pos &= ~((<u64>1) << i)
                    neg |= (<u64>1) << i
                    break
                else:
                    digits[i] = 0
                    neg &= ~((<u64>1) << i)
                    i += 1
    return bytes(out)


def oracle_all_conjuncts(comp, int k):
    """Brute-force satisfiability for every conjunct over ``k`` generators.

    Enumerates all subsets of the generators, keeps the antichains, and marks
    every conjunct that some antichain satisfies. Same indexing as
    :func:`decide_all_conjuncts`.
    """
    cdef u64 c[MAX_GENS]
    _load(comp, k, c)
    if k > 20:
        raise ValueError("exhaustive conjunct table limited to 20 generators")
    cdef Py_ssize_t size = 1
    cdef int i
    for i in range(k):
        size *= 3
    out = bytearray(size)
    cdef unsigned char *buf = out
    cdef u64 full = ((<u64>1) << k) - 1
    cdef u64 nsub = (<u64>1) << k
    cdef long long *tern = <long long *>malloc(nsub * sizeof(long long))
    cdef u64 m, w, u, v, free_bits
    cdef long long pow3[MAX_GENS]
    pow3[0] = 1
    for i in range(1, k):
        pow3[i] = pow3[i - 1] * 3
    if tern == NULL:
        raise MemoryError()
    try:
        with nogil:
            tern[0] = 0
            for m in range(1, nsub):
                tern[m] = tern[m & (m - 1)] + pow3[__builtin_ctzll(m)]
            for w in range(nsub):
                if not _antichain(c, k, w):
                    continue
                free_bits = full & ~w
                u = w
                while True:
                    v = free_bits
                    while True:
                        buf[tern[u] + 2 * tern[v]] = 1
                        if v == 0:
                            break
                        v = (v - 1) & free_bits
                    if u == 0:
                        break
                    u = (u - 1) & w
    finally:
        free(tern)
    return bytes(out)
