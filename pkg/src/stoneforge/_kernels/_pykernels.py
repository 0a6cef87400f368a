"""Pure-Python twins of the compiled kernels (numpy for the table sweeps).

Signatures and results match ``_ckernels`` exactly; see that module for the
mask conventions.
"""

import numpy as np

MAX_GENS = 62
_TABLE_LIMIT = 20


def _check(comp, k):
    if k < 0 or k > MAX_GENS:
        raise ValueError(f"generator count {k} outside [0, {MAX_GENS}]")
    if len(comp) < k:
        raise ValueError("comparability table shorter than generator count")


def _antichain(comp, w):
    rest = w
    while rest:
        low = rest & -rest
        if comp[low.bit_length() - 1] & w:
            return False
        rest ^= low
    return True


def conjunct_nonzero(comp, pos, neg):
    _check(comp, len(comp))
    if pos & neg:
        return False
    return _antichain(comp, pos)


def first_model(comp, k, pos_masks, neg_masks):
    _check(comp, k)
    if len(pos_masks) != len(neg_masks):
        raise ValueError("pos/neg mask lists differ in length")
    conjuncts = list(zip(pos_masks, neg_masks))
    for w in range(1 << k):
        if not _antichain(comp, w):
            continue
        for pos, neg in conjuncts:
            if pos & ~w == 0 and neg & w == 0:
                return w
    return -1


def _antichain_flags(comp, k, masks):
    """Vectorised antichain test over an int64 array of masks."""
    bad = np.zeros(masks.shape, dtype=bool)
    for i in range(k):
        has_i = (masks >> i) & 1
        bad |= has_i.astype(bool) & ((masks & comp[i]) != 0)
    return ~bad


def _ternary_table(k):
    masks = np.arange(1 << k, dtype=np.int64)
    tern = np.zeros(1 << k, dtype=np.int64)
    for i in range(k):
        tern += ((masks >> i) & 1) * (3 ** i)
    return tern


def decide_all_conjuncts(comp, k):
    _check(comp, k)
    if k > _TABLE_LIMIT:
        raise ValueError("exhaustive conjunct table limited to 20 generators")
    size = 3 ** k
    out = np.zeros(size, dtype=np.uint8)
    chunk = 3 ** min(k, 11)
    comp_arr = [int(c) for c in comp[:k]]
    for lo in range(0, size, chunk):
        idx = np.arange(lo, min(lo + chunk, size), dtype=np.int64)
        pos = np.zeros(idx.shape, dtype=np.int64)
        rest = idx.copy()
        for i in range(k):
            pos |= (rest % 3 == 1).astype(np.int64) << i
            rest //= 3
        out[lo:lo + idx.size] = _antichain_flags(comp_arr, k, pos)
    return out.tobytes()


def _submasks(mask):
    subs = np.zeros(1, dtype=np.int64)
    rest = mask
    while rest:
        low = rest & -rest
        subs = np.concatenate([subs, subs | low])
        rest ^= low
    return subs


def oracle_all_conjuncts(comp, k):
    _check(comp, k)
    if k > _TABLE_LIMIT:
        raise ValueError("exhaustive conjunct table limited to 20 generators")
    out = np.zeros(3 ** k, dtype=np.uint8)
    comp_arr = [int(c) for c in comp[:k]]
    every = np.arange(1 << k, dtype=np.int64)
    antichains = every[_antichain_flags(comp_arr, k, every)]
    tern = _ternary_table(k)
    full = (1 << k) - 1
    for w in antichains.tolist():
        us = tern[_submasks(w)]
        vs = 2 * tern[_submasks(full & ~w)]
        out[(us[:, None] + vs[None, :]).ravel()] = 1
    return out.tobytes()
