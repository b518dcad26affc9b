"""Pure-Python breadth-first marking exploration kernel.

This is the reference semantics for the hot loop of the package: the
compiled twin in ``gmec._explore_c`` must reproduce it byte for byte
(node order, edge order, status, witness).  Keep the two in sync.
"""

from __future__ import annotations

STATUS_COMPLETE = 0
STATUS_MARKING_CAP = 1
STATUS_TOKEN_CAP = 2
STATUS_DOMINATION = 3


def explore(n_places, pre, post, allowed, root, max_markings, max_tokens):
    """Enumerate the markings reachable from ``root`` under ``allowed`` firings.

    ``pre``/``post`` give, per transition, the tuple of input/output place
    indices (unit arc weights).  ``allowed`` is the tuple of firable
    transition indices in declaration order; the frontier is FIFO, so the
    enumeration is deterministic.

    Returns ``(nodes, edges, status, witness)`` where ``nodes`` is the list
    of marking tuples in discovery order, ``edges`` the list of
    ``(source index, transition index, target index)`` triples, ``status``
    one of the STATUS_* codes, and ``witness`` the ``(marking, ancestor)``
    pair for STATUS_DOMINATION (``None`` otherwise).

    A marking that strictly dominates one of its breadth-first-tree
    ancestors proves the pumping of tokens, so exploration stops there
    rather than running to the marking cap.
    """
    index = {root: 0}
    nodes = [root]
    parents = [-1]
    edges = []
    cursor = 0
    while cursor < len(nodes):
        m = nodes[cursor]
        for t in allowed:
            enabled = True
            for p in pre[t]:
                if m[p] == 0:
                    enabled = False
                    break
            if not enabled:
                continue
            work = list(m)
            for p in pre[t]:
                work[p] -= 1
            for p in post[t]:
                work[p] += 1
            child = tuple(work)
            idx = index.get(child)
            if idx is None:
                anc = cursor
                while anc != -1:
                    a = nodes[anc]
                    if a != child and all(c >= x for c, x in zip(child, a)):
                        return nodes, edges, STATUS_DOMINATION, (child, a)
                    anc = parents[anc]
                if any(c > max_tokens for c in child):
                    return nodes, edges, STATUS_TOKEN_CAP, None
                if len(nodes) >= max_markings:
                    return nodes, edges, STATUS_MARKING_CAP, None
                idx = len(nodes)
                index[child] = idx
                nodes.append(child)
                parents.append(cursor)
            edges.append((cursor, t, idx))
        cursor += 1
    return nodes, edges, STATUS_COMPLETE, None
