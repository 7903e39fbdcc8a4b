# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chip-firing kernel.

Mirrors `_kernel_py.reduce_divisor` exactly; see that module for the
algorithm notes.  Chip counts and firing multiplicities use C int64 — ample
for lattice models reachable in practice, while the pure-Python fallback
stays arbitrary-precision.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memset

BACKEND = "compiled"

ctypedef long long i64


cdef inline void _fail_alloc(void *p) except *:
    if p == NULL:
        raise MemoryError()


def reduce_divisor(indptr, nbrs, div, q_in):
    cdef Py_ssize_t n = len(indptr) - 1
    cdef Py_ssize_t q = q_in
    if not (0 <= q < n):
        raise ValueError("q out of range")
    cdef Py_ssize_t m = len(nbrs)
    cdef Py_ssize_t *ip = <Py_ssize_t *> calloc(n + 1, sizeof(Py_ssize_t))
    cdef Py_ssize_t *nb = <Py_ssize_t *> calloc(m if m else 1, sizeof(Py_ssize_t))
    cdef i64 *d = <i64 *> calloc(n, sizeof(i64))
    cdef i64 *sigma = <i64 *> calloc(n, sizeof(i64))
    cdef i64 *cnt = <i64 *> calloc(n, sizeof(i64))
    cdef Py_ssize_t *queue = <Py_ssize_t *> calloc(n, sizeof(Py_ssize_t))
    cdef Py_ssize_t *lvl = <Py_ssize_t *> calloc(n, sizeof(Py_ssize_t))
    cdef char *burnt = <char *> calloc(n, sizeof(char))
    cdef char *seen = <char *> calloc(n, sizeof(char))
    cdef char *blocked = <char *> calloc(n, sizeof(char))
    cdef Py_ssize_t *chain = <Py_ssize_t *> calloc(n + 1, sizeof(Py_ssize_t))
    cdef Py_ssize_t *stack = <Py_ssize_t *> calloc(n, sizeof(Py_ssize_t))
    _fail_alloc(<void *> ip)
    _fail_alloc(<void *> nb)
    _fail_alloc(<void *> d)
    _fail_alloc(<void *> sigma)
    _fail_alloc(<void *> cnt)
    _fail_alloc(<void *> queue)
    _fail_alloc(<void *> lvl)
    _fail_alloc(<void *> burnt)
    _fail_alloc(<void *> seen)
    _fail_alloc(<void *> blocked)
    _fail_alloc(<void *> chain)
    _fail_alloc(<void *> stack)

    cdef Py_ssize_t i, u, v, w, head, tail, nburnt, x, nxt, prev, cur
    cdef Py_ssize_t a, b, s, end, sp, ci
    cdef i64 k, kv
    cdef bint negative, moved, wrapped

    try:
        for i in range(n + 1):
            ip[i] = indptr[i]
        for i in range(m):
            nb[i] = nbrs[i]
        for i in range(n):
            d[i] = div[i]

        # distance-to-q levels; burning diverges on a disconnected graph
        for i in range(n):
            lvl[i] = -1
        lvl[q] = 0
        queue[0] = q
        head, tail = 0, 1
        while head < tail:
            u = queue[head]; head += 1
            for i in range(ip[u], ip[u + 1]):
                v = nb[i]
                if lvl[v] < 0:
                    lvl[v] = lvl[u] + 1
                    queue[tail] = v; tail += 1
        if tail != n:
            raise ValueError("graph must be connected")

        # stage 1: clear debt outside q, firing balls around q outermost first
        negative = False
        for v in range(n):
            if v != q and d[v] < 0:
                negative = True
                break
        if negative:
            _clear_debt(ip, nb, d, sigma, lvl, n)

        # stage 2: Dhar burning with multi-fire and bridge slides
        while True:
            memset(burnt, 0, n)
            memset(<void *> cnt, 0, n * sizeof(i64))
            burnt[q] = 1
            queue[0] = q
            head, tail = 0, 1
            nburnt = 1
            while head < tail:
                u = queue[head]; head += 1
                for i in range(ip[u], ip[u + 1]):
                    v = nb[i]
                    if not burnt[v]:
                        cnt[v] += 1
                        if cnt[v] > d[v]:
                            burnt[v] = 1
                            nburnt += 1
                            queue[tail] = v; tail += 1
            if nburnt == n:
                break
            k = -1
            for v in range(n):
                if not burnt[v] and cnt[v] > 0:
                    kv = d[v] // cnt[v]
                    if k < 0 or kv < k:
                        k = kv
            if k < 1:
                k = 1
            for v in range(n):
                if not burnt[v]:
                    sigma[v] += k
                    d[v] -= k * cnt[v]
                    for i in range(ip[v], ip[v + 1]):
                        u = nb[i]
                        if burnt[u]:
                            d[u] += k

            # bridge slides: teleport chips across chip-free degree-2
            # corridors toward q when the corridor is a genuine bridge
            moved = True
            while moved:
                moved = False
                for v in range(n):
                    if v == q or d[v] <= 0:
                        continue
                    for i in range(ip[v], ip[v + 1]):
                        w = nb[i]
                        if lvl[w] >= lvl[v]:
                            continue
                        chain[0] = v
                        chain[1] = w
                        ci = 1
                        cur = w
                        prev = v
                        while (cur != q and d[cur] == 0
                               and ip[cur + 1] - ip[cur] == 2):
                            a = nb[ip[cur]]
                            b = nb[ip[cur] + 1]
                            nxt = b if a == prev else a
                            if nxt == prev:
                                break
                            ci += 1
                            chain[ci] = nxt
                            prev = cur
                            cur = nxt
                        s = ci
                        end = chain[s]
                        if s < 2 or lvl[end] >= lvl[v]:
                            continue
                        if (end != q and d[end] == 0
                                and ip[end + 1] - ip[end] == 2):
                            continue
                        memset(blocked, 0, n)
                        for x in range(1, s):
                            blocked[chain[x]] = 1
                        memset(seen, 0, n)
                        seen[v] = 1
                        stack[0] = v
                        sp = 1
                        wrapped = False
                        while sp > 0:
                            sp -= 1
                            u = stack[sp]
                            for x in range(ip[u], ip[u + 1]):
                                nxt = nb[x]
                                if nxt == end:
                                    wrapped = True
                                    break
                                if not seen[nxt] and not blocked[nxt]:
                                    seen[nxt] = 1
                                    stack[sp] = nxt; sp += 1
                            if wrapped:
                                break
                        if wrapped:
                            continue
                        for u in range(n):
                            if seen[u]:
                                sigma[u] += s
                        for x in range(1, s):
                            sigma[chain[x]] += s - x
                        d[v] -= 1
                        d[end] += 1
                        moved = True
                        break

        k = sigma[q]
        if k:
            for v in range(n):
                sigma[v] -= k
        out_d = [d[i] for i in range(n)]
        out_s = [sigma[i] for i in range(n)]
        return out_d, out_s
    finally:
        free(ip); free(nb); free(d); free(sigma); free(cnt); free(queue)
        free(lvl); free(burnt); free(seen); free(blocked); free(chain)
        free(stack)


cdef void _clear_debt(Py_ssize_t *ip, Py_ssize_t *nb, i64 *d, i64 *sigma,
                      Py_ssize_t *lvl, Py_ssize_t n) except *:
    """Fire balls around q, outermost level first, until no vertex off q is
    in debt.  `lvl` already holds BFS distances from q."""
    cdef Py_ssize_t maxlev = 0, v, u, i, j
    cdef i64 *down = <i64 *> calloc(n, sizeof(i64))
    cdef i64 *up = <i64 *> calloc(n, sizeof(i64))
    cdef i64 *ms
    cdef i64 mfire, need, cdeg, acc
    _fail_alloc(<void *> down)
    _fail_alloc(<void *> up)
    for v in range(n):
        if lvl[v] > maxlev:
            maxlev = lvl[v]
    ms = <i64 *> calloc(maxlev + 1, sizeof(i64))
    _fail_alloc(<void *> ms)
    try:
        for u in range(n):
            for i in range(ip[u], ip[u + 1]):
                v = nb[i]
                if lvl[v] == lvl[u] - 1:
                    down[u] += 1
                elif lvl[v] == lvl[u] + 1:
                    up[u] += 1
        for j in range(maxlev - 1, -1, -1):
            mfire = 0
            for v in range(n):
                if lvl[v] == j + 1 and d[v] < 0:
                    cdeg = down[v]
                    need = (-d[v] + cdeg - 1) // cdeg
                    if need > mfire:
                        mfire = need
            if mfire:
                ms[j] = mfire
                for v in range(n):
                    if lvl[v] == j + 1:
                        d[v] += mfire * down[v]
                    elif lvl[v] == j:
                        d[v] -= mfire * up[v]
        acc = 0
        for j in range(maxlev - 1, -1, -1):
            acc += ms[j]
            ms[j] = acc
        for v in range(n):
            sigma[v] += ms[lvl[v]]
    finally:
        free(down); free(up); free(ms)
