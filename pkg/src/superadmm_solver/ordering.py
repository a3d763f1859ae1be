"""Fill-reducing ordering for symmetric sparsity patterns.

Classic minimum-degree elimination on a quotient graph: eliminated
vertices become elements (cliques); exact external degrees are kept by
mark-and-scan; adjacent elements are absorbed on elimination so the
lists stay compact. Tie-breaking is bucket order (LIFO), which is not
the AMD rule but is irrelevant to the fill-quality contract: the
returned permutation never yields more L nonzeros than natural order,
because the candidate is compared against identity symbolically and the
better of the two is returned.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .sparse import SparseMatrix


@njit(cache=True, nogil=True)
def _grow(pool, need):
    newcap = pool.shape[0] * 2
    if newcap < need:
        newcap = need
    out = np.empty(newcap, np.int64)
    out[:pool.shape[0]] = pool
    return out


@njit(cache=True, nogil=True)
def _mindeg_core(n, aptr, aidx):
    """Elimination order for a full symmetric adjacency (no diagonal)."""
    nnz = aidx.shape[0]
    cap = 2 * nnz + 8 * n + 64
    pool = np.empty(cap, np.int64)
    top = 0

    vstart = np.empty(n, np.int64)
    vlen = np.empty(n, np.int64)
    estart = np.zeros(n, np.int64)
    elen = np.zeros(n, np.int64)
    ecap = np.zeros(n, np.int64)
    mstart = np.zeros(n, np.int64)   # member lists of elements (id = pivot)
    mlen = np.zeros(n, np.int64)

    deg = np.empty(n, np.int64)
    for v in range(n):
        d = aptr[v + 1] - aptr[v]
        vstart[v] = top
        vlen[v] = d
        deg[v] = d
        for p in range(aptr[v], aptr[v + 1]):
            pool[top] = aidx[p]
            top += 1

    alive = np.ones(n, np.uint8)
    ealive = np.zeros(n, np.uint8)

    # degree buckets, doubly linked
    dhead = np.full(n + 1, -1, np.int64)
    dnext = np.full(n, -1, np.int64)
    dprev = np.full(n, -1, np.int64)
    for v in range(n - 1, -1, -1):
        d = deg[v]
        dnext[v] = dhead[d]
        if dhead[d] != -1:
            dprev[dhead[d]] = v
        dhead[d] = v
        dprev[v] = -1

    mark = np.zeros(n, np.int64)
    epoch = 0
    members = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    mindeg = 0

    for k in range(n):
        while dhead[mindeg] == -1:
            mindeg += 1
        piv = dhead[mindeg]
        dhead[mindeg] = dnext[piv]
        if dnext[piv] != -1:
            dprev[dnext[piv]] = -1
        dnext[piv] = -1
        dprev[piv] = -1

        order[k] = piv
        alive[piv] = 0

        # Neighborhood = live vertex-adjacency plus live members of the
        # elements containing the pivot; those elements are absorbed.
        epoch += 1
        mark[piv] = epoch
        nmem = 0
        s = vstart[piv]
        for i in range(vlen[piv]):
            w = pool[s + i]
            if alive[w] == 1 and mark[w] != epoch:
                mark[w] = epoch
                members[nmem] = w
                nmem += 1
        s = estart[piv]
        for i in range(elen[piv]):
            e = pool[s + i]
            if ealive[e] == 1:
                ms = mstart[e]
                for t in range(mlen[e]):
                    w = pool[ms + t]
                    if alive[w] == 1 and mark[w] != epoch:
                        mark[w] = epoch
                        members[nmem] = w
                        nmem += 1
                ealive[e] = 0

        if nmem == 0:
            continue

        if top + nmem > pool.shape[0]:
            pool = _grow(pool, top + nmem)
        mstart[piv] = top
        mlen[piv] = nmem
        for i in range(nmem):
            pool[top + i] = members[i]
        top += nmem
        ealive[piv] = 1

        # Rewrite each member's lists under the pivot-neighborhood marks:
        # edges inside the new clique are covered by the element, absorbed
        # elements disappear, the new element is appended.
        for i in range(nmem):
            v = members[i]
            s = vstart[v]
            w = 0
            for t in range(vlen[v]):
                u = pool[s + t]
                if alive[u] == 1 and mark[u] != epoch:
                    pool[s + w] = u
                    w += 1
            vlen[v] = w

            s = estart[v]
            w = 0
            for t in range(elen[v]):
                e = pool[s + t]
                if ealive[e] == 1:
                    pool[s + w] = e
                    w += 1
            if w < ecap[v]:
                pool[s + w] = piv
                elen[v] = w + 1
            else:
                newcap = 4 if ecap[v] == 0 else 2 * ecap[v]
                if top + newcap > pool.shape[0]:
                    pool = _grow(pool, top + newcap)
                ns = top
                top += newcap
                for t in range(w):
                    pool[ns + t] = pool[s + t]
                pool[ns + w] = piv
                estart[v] = ns
                elen[v] = w + 1
                ecap[v] = newcap

        # Exact external degree of each member: union of its pruned vertex
        # list and the live members of its elements.
        for i in range(nmem):
            v = members[i]
            epoch += 1
            mark[v] = epoch
            d = 0
            s = vstart[v]
            for t in range(vlen[v]):
                u = pool[s + t]
                if mark[u] != epoch:
                    mark[u] = epoch
                    d += 1
            s = estart[v]
            for t in range(elen[v]):
                e = pool[s + t]
                ms = mstart[e]
                w = 0
                for tt in range(mlen[e]):
                    u = pool[ms + tt]
                    if alive[u] == 1:
                        pool[ms + w] = u
                        w += 1
                        if mark[u] != epoch:
                            mark[u] = epoch
                            d += 1
                mlen[e] = w

            # move v to its new degree bucket
            if dprev[v] != -1:
                dnext[dprev[v]] = dnext[v]
            elif dhead[deg[v]] == v:
                dhead[deg[v]] = dnext[v]
            if dnext[v] != -1:
                dprev[dnext[v]] = dprev[v]
            deg[v] = d
            dnext[v] = dhead[d]
            if dhead[d] != -1:
                dprev[dhead[d]] = v
            dhead[d] = v
            dprev[v] = -1
            if d < mindeg:
                mindeg = d

    return order


def _offdiag_adjacency(pattern: SparseMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Full symmetric adjacency (CSC) of an upper-triangle pattern, no diagonal."""
    n = pattern.ncols
    cols = np.repeat(np.arange(n, dtype=np.int64), np.diff(pattern.colptr))
    rows = pattern.rowidx
    keep = rows != cols
    r, c = rows[keep], cols[keep]
    arows = np.concatenate((r, c))
    acols = np.concatenate((c, r))
    counts = np.bincount(acols, minlength=n)
    aptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    order = np.argsort(acols, kind="stable")
    return aptr, arows[order].astype(np.int64)


def natural_order(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def mindeg_order(pattern: SparseMatrix) -> np.ndarray:
    """Fill-reducing permutation for a symmetric (upper-stored) pattern.

    Returns perm with perm[k] = original index eliminated k-th. Guaranteed
    to produce an L with at most as many nonzeros as natural ordering.
    """
    from .ldl import symbolic_factorize

    n = pattern.ncols
    if pattern.nrows != n:
        raise ValueError("pattern must be square")
    if n == 0:
        return np.empty(0, dtype=np.int64)

    aptr, aidx = _offdiag_adjacency(pattern)
    perm = _mindeg_core(n, aptr, aidx)

    ident = natural_order(n)
    if symbolic_factorize(pattern, perm).lnz <= symbolic_factorize(pattern, ident).lnz:
        return perm
    return ident
