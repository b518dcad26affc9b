# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled breadth-first marking exploration kernel.

Byte-for-byte mirror of :mod:`gmec._explore_py`: same node order, edge
order, status codes and witnesses.  Markings are stored as ``bytes`` with
one token count per place, so the dispatcher routes anything that could
exceed 255 tokens per place to the pure kernel instead.
"""

import array as _array

from cpython cimport array

STATUS_COMPLETE = 0
STATUS_MARKING_CAP = 1
STATUS_TOKEN_CAP = 2
STATUS_DOMINATION = 3


def explore(int n_places, tuple pre, tuple post, tuple allowed, tuple root,
            int max_markings, int max_tokens):
    """See gmec._explore_py.explore; identical contract and output."""
    cdef int n_allowed = len(allowed)
    cdef int slot, t, i, j, p, cursor, idx, anc, val
    cdef bint enabled, ge, ne

    # Flatten the arc index lists of the allowed transitions.
    pre_off_l = [0]
    post_off_l = [0]
    pre_dat_l = []
    post_dat_l = []
    t_of_slot_l = []
    for slot in range(n_allowed):
        t = allowed[slot]
        t_of_slot_l.append(t)
        pre_dat_l.extend(pre[t])
        post_dat_l.extend(post[t])
        pre_off_l.append(len(pre_dat_l))
        post_off_l.append(len(post_dat_l))

    cdef array.array pre_off_a = _array.array("l", pre_off_l)
    cdef array.array post_off_a = _array.array("l", post_off_l)
    cdef array.array pre_dat_a = _array.array("l", pre_dat_l or [0])
    cdef array.array post_dat_a = _array.array("l", post_dat_l or [0])
    cdef array.array t_of_slot_a = _array.array("l", t_of_slot_l or [0])
    cdef long[::1] pre_off = pre_off_a
    cdef long[::1] post_off = post_off_a
    cdef long[::1] pre_dat = pre_dat_a
    cdef long[::1] post_dat = post_dat_a
    cdef long[::1] t_of_slot = t_of_slot_a

    cdef array.array child_a = _array.array("l", [0] * max(n_places, 1))
    cdef long[::1] child = child_a
    cdef bytearray scratch = bytearray(n_places)

    cdef bytes root_b = bytes(bytearray(root))
    cdef dict index = {root_b: 0}
    cdef list nodes = [root_b]
    cdef list parents = [-1]
    cdef list edges = []
    cdef bytes m_b, child_b, anc_b
    cdef const unsigned char* mp
    cdef const unsigned char* ap
    cdef bint overflow, over_cap

    cursor = 0
    while cursor < len(nodes):
        m_b = <bytes> nodes[cursor]
        mp = <const unsigned char*> m_b
        for slot in range(n_allowed):
            enabled = True
            for i in range(pre_off[slot], pre_off[slot + 1]):
                if mp[pre_dat[i]] == 0:
                    enabled = False
                    break
            if not enabled:
                continue
            for i in range(n_places):
                child[i] = mp[i]
            for i in range(pre_off[slot], pre_off[slot + 1]):
                child[pre_dat[i]] -= 1
            overflow = False
            for i in range(post_off[slot], post_off[slot + 1]):
                p = post_dat[i]
                child[p] += 1
                if child[p] > 255:
                    overflow = True
            child_b = None
            if overflow:
                # Cannot be a stored node (stored entries are <= max_tokens
                # <= 255), so it is definitely new.
                idx = -1
            else:
                for i in range(n_places):
                    scratch[i] = <unsigned char> child[i]
                child_b = bytes(scratch)
                idx_obj = index.get(child_b)
                idx = -1 if idx_obj is None else <int> idx_obj
            if idx < 0:
                anc = cursor
                while anc != -1:
                    anc_b = <bytes> nodes[anc]
                    ap = <const unsigned char*> anc_b
                    ge = True
                    ne = False
                    for i in range(n_places):
                        val = ap[i]
                        if child[i] < val:
                            ge = False
                            break
                        if child[i] != val:
                            ne = True
                    if ge and ne:
                        witness = (
                            tuple(child[i] for i in range(n_places)),
                            tuple(anc_b),
                        )
                        return (
                            [tuple(b) for b in nodes],
                            edges,
                            STATUS_DOMINATION,
                            witness,
                        )
                    anc = <int> parents[anc]
                over_cap = False
                for i in range(n_places):
                    if child[i] > max_tokens:
                        over_cap = True
                        break
                if over_cap:
                    return [tuple(b) for b in nodes], edges, STATUS_TOKEN_CAP, None
                if len(nodes) >= max_markings:
                    return [tuple(b) for b in nodes], edges, STATUS_MARKING_CAP, None
                idx = len(nodes)
                index[child_b] = idx
                nodes.append(child_b)
                parents.append(cursor)
            edges.append((cursor, <int> t_of_slot[slot], idx))
        cursor += 1
    return [tuple(b) for b in nodes], edges, STATUS_COMPLETE, None
