"""Subset-enumeration kernels.

Every kernel is written as plain Python over numpy int64 arrays.  When numba
is importable and ``BIPARTKIT_NUMBA`` is not ``"0"`` the kernels are compiled
with ``numba.njit``; otherwise the same functions run interpreted.  Compiled
dispatchers keep the interpreted version on ``.py_func``.

Counts are accumulated as int64.  Every coefficient of B is at most
B(1,1,1) <= 2**(n+m), so callers must keep n + m <= 62.

Outer loops over 2**n or 2**m masks are split into ``nchunks`` slices run
under ``prange``; each slice owns its own output plane.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

# numba probes TBB at first parallel launch; an old TBB is harmless here
warnings.filterwarnings("ignore", message="The TBB threading layer")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("BIPARTKIT_NUMBA", "1") != "0"

if USE_NUMBA:
    prange = numba.prange
else:
    prange = range

MAX_WORD_BITS = 62


def _jit(parallel=False):
    def wrap(fn):
        if USE_NUMBA:
            return numba.njit(cache=True, parallel=parallel)(fn)
        return fn
    return wrap


def thread_count() -> int:
    cap = os.environ.get("BIPARTKIT_THREADS")
    if USE_NUMBA:
        avail = numba.config.NUMBA_NUM_THREADS
        want = avail if not cap else max(1, min(int(cap), avail))
        numba.set_num_threads(want)
        return want
    return 1


@_jit()
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@_jit()
def binomial_table(k):
    t = np.zeros((k + 1, k + 1), np.int64)
    for i in range(k + 1):
        t[i, 0] = 1
        for j in range(1, i + 1):
            t[i, j] = t[i - 1, j - 1] + t[i - 1, j]
    return t


@_jit()
def _find_parity(parent, parity, a):
    p = 0
    r = a
    while parent[r] != r:
        p ^= parity[r]
        r = parent[r]
    # compress: point every node on the path at the root with its parity
    q = p
    b = a
    while parent[b] != b:
        nxt = parent[b]
        nq = q ^ parity[b]
        parent[b] = r
        parity[b] = q
        q = nq
        b = nxt
    return r, p


@_jit()
def _find(parent, a):
    r = a
    while parent[r] != r:
        r = parent[r]
    while parent[a] != r:
        nxt = parent[a]
        parent[a] = r
        a = nxt
    return r


@_jit(parallel=True)
def definition_counts(n, eu, ev, nchunks):
    """Direct double sum over W and F subset of the boundary of W."""
    m = eu.shape[0]
    out = np.zeros((nchunks, n + 1, n + 1, m + 1), np.int64)
    total = 1 << n
    for c in prange(nchunks):
        lo = total * c // nchunks
        hi = total * (c + 1) // nchunks
        outside = np.zeros(m + 1, np.int64)
        cnt = np.zeros(n + 1, np.int64)
        for w in range(lo, hi):
            wsize = popcount(w)
            b = 0
            for i in range(m):
                iu = (w >> eu[i]) & 1
                iv = (w >> ev[i]) & 1
                if iu != iv:
                    outside[b] = ev[i] if iu else eu[i]
                    b += 1
            out[c, wsize, 0, 0] += 1
            ny = 0
            f = 0
            gray = 0
            for g in range(1, 1 << b):
                bit = 0
                while not (g >> bit) & 1:
                    bit += 1
                o = outside[bit]
                if (gray >> bit) & 1:
                    f -= 1
                    cnt[o] -= 1
                    if cnt[o] == 0:
                        ny -= 1
                else:
                    f += 1
                    if cnt[o] == 0:
                        ny += 1
                    cnt[o] += 1
                gray ^= 1 << bit
                out[c, wsize, ny, f] += 1
            for k in range(b):
                cnt[outside[k]] = 0
    res = np.zeros((n + 1, n + 1, m + 1), np.int64)
    for c in range(nchunks):
        res += out[c]
    return res


@_jit(parallel=True)
def product_counts(n, eu, ev, nchunks):
    """Sum over W of x^|W| prod_{v in N(W)} [y((1+z)^{c_v} - 1) + 1], c_v = |dv & dW|."""
    m = eu.shape[0]
    binom = binomial_table(m)
    out = np.zeros((nchunks, n + 1, n + 1, m + 1), np.int64)
    total = 1 << n
    for c in prange(nchunks):
        lo = total * c // nchunks
        hi = total * (c + 1) // nchunks
        cv = np.zeros(n + 1, np.int64)
        poly = np.zeros((n + 1, m + 1), np.int64)
        nxt = np.zeros((n + 1, m + 1), np.int64)
        for w in range(lo, hi):
            wsize = popcount(w)
            for v in range(n):
                cv[v] = 0
            for i in range(m):
                iu = (w >> eu[i]) & 1
                iv = (w >> ev[i]) & 1
                if iu != iv:
                    if iu:
                        cv[ev[i]] += 1
                    else:
                        cv[eu[i]] += 1
            poly[:, :] = 0
            poly[0, 0] = 1
            dy = 0
            dz = 0
            for v in range(n):
                k = cv[v]
                if k == 0:
                    continue
                nxt[: dy + 2, : dz + k + 1] = 0
                for j in range(dy + 1):
                    for t in range(dz + 1):
                        a = poly[j, t]
                        if a == 0:
                            continue
                        nxt[j, t] += a
                        for s in range(1, k + 1):
                            nxt[j + 1, t + s] += a * binom[k, s]
                dy += 1
                dz += k
                for j in range(dy + 1):
                    for t in range(dz + 1):
                        poly[j, t] = nxt[j, t]
            for j in range(dy + 1):
                for t in range(dz + 1):
                    out[c, wsize, j, t] += poly[j, t]
    res = np.zeros((n + 1, n + 1, m + 1), np.int64)
    for c in range(nchunks):
        res += out[c]
    return res


@_jit()
def _expand_parts(ps, pt, ncomp, buf, tmp, n):
    """buf <- prod over components of (x^S y^T + x^T y^S); returns the x/y degree bound."""
    buf[: n + 1, : n + 1] = 0
    buf[0, 0] = 1
    d = 0
    for q in range(ncomp):
        s = ps[q]
        t = pt[q]
        hi = s if s > t else t
        tmp[: d + hi + 1, : d + hi + 1] = 0
        for i in range(d + 1):
            for j in range(d + 1):
                a = buf[i, j]
                if a == 0:
                    continue
                tmp[i + s, j + t] += a
                tmp[i + t, j + s] += a
        d += hi
        for i in range(d + 1):
            for j in range(d + 1):
                buf[i, j] = tmp[i, j]
    return d


@_jit(parallel=True)
def bipartite_counts(n, eu, ev, nchunks):
    """Sum over bipartite spanning (V,F): z^|F| (1+x)^iso prod (x^S y^T + x^T y^S)."""
    m = eu.shape[0]
    binom = binomial_table(n)
    out = np.zeros((nchunks, n + 1, n + 1, m + 1), np.int64)
    total = 1 << m
    for c in prange(nchunks):
        lo = total * c // nchunks
        hi = total * (c + 1) // nchunks
        parent = np.zeros(n + 1, np.int64)
        parity = np.zeros(n + 1, np.int64)
        degf = np.zeros(n + 1, np.int64)
        cs = np.zeros(n + 1, np.int64)
        ct = np.zeros(n + 1, np.int64)
        ps = np.zeros(n + 1, np.int64)
        pt = np.zeros(n + 1, np.int64)
        buf = np.zeros((2 * n + 2, 2 * n + 2), np.int64)
        tmp = np.zeros((2 * n + 2, 2 * n + 2), np.int64)
        for fmask in range(lo, hi):
            for v in range(n):
                parent[v] = v
                parity[v] = 0
                degf[v] = 0
                cs[v] = 0
                ct[v] = 0
            ok = True
            size = 0
            for i in range(m):
                if not (fmask >> i) & 1:
                    continue
                size += 1
                u = eu[i]
                v = ev[i]
                degf[u] += 1
                degf[v] += 1
                ru, pu = _find_parity(parent, parity, u)
                rv, pv = _find_parity(parent, parity, v)
                if ru == rv:
                    if pu == pv:
                        ok = False
                        break
                else:
                    parent[ru] = rv
                    parity[ru] = pu ^ pv ^ 1
            if not ok:
                continue
            iso = 0
            for v in range(n):
                if degf[v] == 0:
                    iso += 1
                    continue
                r, p = _find_parity(parent, parity, v)
                if p == 0:
                    cs[r] += 1
                else:
                    ct[r] += 1
            ncomp = 0
            for v in range(n):
                if cs[v] + ct[v] > 0:
                    ps[ncomp] = cs[v]
                    pt[ncomp] = ct[v]
                    ncomp += 1
            d = _expand_parts(ps, pt, ncomp, buf, tmp, n)
            for i in range(d + 1):
                for j in range(d + 1):
                    a = buf[i, j]
                    if a == 0:
                        continue
                    for k in range(iso + 1):
                        out[c, i + k, j, size] += a * binom[iso, k]
    res = np.zeros((n + 1, n + 1, m + 1), np.int64)
    for c in range(nchunks):
        res += out[c]
    return res


@_jit(parallel=True)
def forest_counts(n, eu, ev, nchunks):
    """Sum over spanning forests H: (1+x)^iso z^|F| (1+z)^ext(H) prod (x^S y^T + x^T y^S)."""
    m = eu.shape[0]
    binom = binomial_table(max(n, m))
    out = np.zeros((nchunks, n + 1, n + 1, m + 1), np.int64)
    total = 1 << m
    for c in prange(nchunks):
        lo = total * c // nchunks
        hi = total * (c + 1) // nchunks
        parent = np.zeros(n + 1, np.int64)
        root = np.zeros(n + 1, np.int64)
        depth = np.zeros(n + 1, np.int64)
        up = np.zeros(n + 1, np.int64)
        pedge = np.zeros(n + 1, np.int64)
        color = np.zeros(n + 1, np.int64)
        degf = np.zeros(n + 1, np.int64)
        queue = np.zeros(n + 1, np.int64)
        cs = np.zeros(n + 1, np.int64)
        ct = np.zeros(n + 1, np.int64)
        ps = np.zeros(n + 1, np.int64)
        pt = np.zeros(n + 1, np.int64)
        buf = np.zeros((2 * n + 2, 2 * n + 2), np.int64)
        tmp = np.zeros((2 * n + 2, 2 * n + 2), np.int64)
        for fmask in range(lo, hi):
            for v in range(n):
                parent[v] = v
                degf[v] = 0
            acyclic = True
            size = 0
            for i in range(m):
                if (fmask >> i) & 1:
                    size += 1
                    ru = _find(parent, eu[i])
                    rv = _find(parent, ev[i])
                    if ru == rv:
                        acyclic = False
                        break
                    parent[ru] = rv
                    degf[eu[i]] += 1
                    degf[ev[i]] += 1
            if not acyclic:
                continue
            for v in range(n):
                root[v] = -1
                cs[v] = 0
                ct[v] = 0
            for s in range(n):
                if root[s] >= 0:
                    continue
                root[s] = s
                depth[s] = 0
                up[s] = -1
                pedge[s] = -1
                color[s] = 0
                head = 0
                tail = 1
                queue[0] = s
                while head < tail:
                    a = queue[head]
                    head += 1
                    for i in range(m):
                        if not (fmask >> i) & 1:
                            continue
                        if eu[i] == a:
                            b = ev[i]
                        elif ev[i] == a:
                            b = eu[i]
                        else:
                            continue
                        if root[b] < 0:
                            root[b] = s
                            depth[b] = depth[a] + 1
                            up[b] = a
                            pedge[b] = i
                            color[b] = color[a] ^ 1
                            queue[tail] = b
                            tail += 1
            ext = 0
            for i in range(m):
                if (fmask >> i) & 1:
                    continue
                a = eu[i]
                b = ev[i]
                if root[a] != root[b] or color[a] == color[b]:
                    continue
                top = -1
                while a != b:
                    if depth[a] >= depth[b]:
                        if pedge[a] > top:
                            top = pedge[a]
                        a = up[a]
                    else:
                        if pedge[b] > top:
                            top = pedge[b]
                        b = up[b]
                if top < i:
                    ext += 1
            iso = 0
            for v in range(n):
                if degf[v] == 0:
                    iso += 1
                elif color[v] == 0:
                    cs[root[v]] += 1
                else:
                    ct[root[v]] += 1
            ncomp = 0
            for v in range(n):
                if cs[v] + ct[v] > 0:
                    ps[ncomp] = cs[v]
                    pt[ncomp] = ct[v]
                    ncomp += 1
            d = _expand_parts(ps, pt, ncomp, buf, tmp, n)
            for i in range(d + 1):
                for j in range(d + 1):
                    a = buf[i, j]
                    if a == 0:
                        continue
                    for k in range(iso + 1):
                        ak = a * binom[iso, k]
                        for e in range(ext + 1):
                            out[c, i + k, j, size + e] += ak * binom[ext, e]
    res = np.zeros((n + 1, n + 1, m + 1), np.int64)
    for c in range(nchunks):
        res += out[c]
    return res


@_jit()
def conn_bip_subsets(eu, ev, idx, anchor_edge, anchor_vertex):
    """Connected bipartite edge sets F inside ``idx`` that contain the anchor.

    Exactly one of ``anchor_edge`` (an edge index, must be in ``idx``) and
    ``anchor_vertex`` is >= 0.  Returns ``(S, T, F)`` mask arrays; ``S`` holds
    the least touched vertex.
    """
    k = idx.shape[0]
    nv = 0
    for q in range(k):
        if eu[idx[q]] + 1 > nv:
            nv = eu[idx[q]] + 1
        if ev[idx[q]] + 1 > nv:
            nv = ev[idx[q]] + 1
    if anchor_vertex + 1 > nv:
        nv = anchor_vertex + 1
    apos = -1
    for q in range(k):
        if idx[q] == anchor_edge:
            apos = q
    if anchor_edge >= 0 and apos < 0:
        raise ValueError("anchor edge not among the active edges")
    free = k - 1 if apos >= 0 else k
    cap = 1 << free
    out_s = np.zeros(cap, np.int64)
    out_t = np.zeros(cap, np.int64)
    out_f = np.zeros(cap, np.int64)
    parent = np.zeros(nv + 1, np.int64)
    parity = np.zeros(nv + 1, np.int64)
    count = 0
    for sub in range(cap):
        # map sub onto positions of idx, skipping the anchor position
        local = 0
        if apos >= 0:
            low = sub & ((1 << apos) - 1)
            local = low | ((sub >> apos) << (apos + 1)) | (1 << apos)
        else:
            local = sub
        if local == 0:
            continue
        touched = 0
        for q in range(k):
            if (local >> q) & 1:
                touched |= (1 << eu[idx[q]]) | (1 << ev[idx[q]])
        if anchor_vertex >= 0 and not (touched >> anchor_vertex) & 1:
            continue
        for v in range(nv):
            parent[v] = v
            parity[v] = 0
        ok = True
        ncomp = popcount(touched)
        fmask = 0
        for q in range(k):
            if not (local >> q) & 1:
                continue
            e = idx[q]
            fmask |= 1 << e
            ru, pu = _find_parity(parent, parity, eu[e])
            rv, pv = _find_parity(parent, parity, ev[e])
            if ru == rv:
                if pu == pv:
                    ok = False
                    break
            else:
                parent[ru] = rv
                parity[ru] = pu ^ pv ^ 1
                ncomp -= 1
        if not ok or ncomp != 1:
            continue
        least = 0
        while not (touched >> least) & 1:
            least += 1
        r0, p0 = _find_parity(parent, parity, least)
        smask = 0
        tmask = 0
        for v in range(nv):
            if (touched >> v) & 1:
                r, p = _find_parity(parent, parity, v)
                if p == p0:
                    smask |= 1 << v
                else:
                    tmask |= 1 << v
        out_s[count] = smask
        out_t[count] = tmask
        out_f[count] = fmask
        count += 1
    return out_s[:count], out_t[:count], out_f[:count]


@_jit()
def poly3_mul(a, b):
    """Dense product of two (X, Y, Z) coefficient cubes in a cube shaped like a; overflow raises."""
    nx, ny, nz = a.shape
    out = np.zeros((nx, ny, nz), np.int64)
    ai = np.nonzero(a)
    bi = np.nonzero(b)
    for p in range(ai[0].shape[0]):
        i1 = ai[0][p]
        j1 = ai[1][p]
        k1 = ai[2][p]
        va = a[i1, j1, k1]
        for q in range(bi[0].shape[0]):
            i = i1 + bi[0][q]
            j = j1 + bi[1][q]
            k = k1 + bi[2][q]
            if i >= nx or j >= ny or k >= nz:
                raise ValueError("dense product exceeds the degree bound")
            out[i, j, k] += va * b[bi[0][q], bi[1][q], bi[2][q]]
    return out
