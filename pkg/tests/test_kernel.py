"""The chip-firing kernel: backend agreement and q-reduction invariants."""

import random

import pytest

from tropbn import _kernel_py
from tropbn import kernel

try:
    from tropbn import _kernel
except ImportError:
    _kernel = None


def random_csr(rng, max_v=12, max_extra=15):
    """Connected loopless multigraph in CSR form."""
    n = rng.randint(2, max_v)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    for _ in range(rng.randint(0, max_extra)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.append((u, v))
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    indptr = [0]
    nbrs = []
    for u in range(n):
        nbrs.extend(adj[u])
        indptr.append(len(nbrs))
    return n, indptr, nbrs


def laplacian_apply(indptr, nbrs, sigma):
    n = len(indptr) - 1
    out = [0] * n
    for u in range(n):
        for i in range(indptr[u], indptr[u + 1]):
            out[u] += sigma[u] - sigma[nbrs[i]]
    return out


def burns_completely(indptr, nbrs, d, q):
    """Dhar's criterion: the fire starting at q must consume the graph."""
    n = len(indptr) - 1
    burnt = [False] * n
    burnt[q] = True
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if burnt[v]:
                continue
            hot = sum(1 for i in range(indptr[v], indptr[v + 1])
                      if burnt[nbrs[i]])
            if hot > d[v]:
                burnt[v] = True
                changed = True
    return all(burnt)


def check_reduction(indptr, nbrs, div, q, red, sigma):
    n = len(indptr) - 1
    assert sigma[q] == 0
    assert sum(red) == sum(div)
    fired = laplacian_apply(indptr, nbrs, sigma)
    assert [div[v] - fired[v] for v in range(n)] == list(red)
    assert all(red[v] >= 0 for v in range(n) if v != q)
    assert burns_completely(indptr, nbrs, red, q)


def test_pure_kernel_invariants():
    rng = random.Random(100)
    for _ in range(150):
        n, indptr, nbrs = random_csr(rng)
        div = [rng.randint(-5, 6) for _ in range(n)]
        q = rng.randrange(n)
        red, sigma = _kernel_py.reduce_divisor(indptr, nbrs, div, q)
        check_reduction(indptr, nbrs, div, q, red, sigma)


def test_pure_kernel_idempotent():
    rng = random.Random(101)
    for _ in range(60):
        n, indptr, nbrs = random_csr(rng)
        div = [rng.randint(-4, 5) for _ in range(n)]
        q = rng.randrange(n)
        red, _ = _kernel_py.reduce_divisor(indptr, nbrs, div, q)
        again, sigma = _kernel_py.reduce_divisor(indptr, nbrs, red, q)
        assert list(again) == list(red)
        assert all(x == 0 for x in sigma)


@pytest.mark.skipif(_kernel is None, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(102)
    for _ in range(300):
        n, indptr, nbrs = random_csr(rng)
        div = [rng.randint(-6, 7) for _ in range(n)]
        q = rng.randrange(n)
        red_c, sig_c = _kernel.reduce_divisor(indptr, nbrs, div, q)
        red_p, sig_p = _kernel_py.reduce_divisor(indptr, nbrs, div, q)
        assert list(red_c) == list(red_p)
        assert list(sig_c) == list(sig_p)


@pytest.mark.skipif(_kernel is None, reason="compiled kernel not built")
def test_compiled_kernel_invariants_on_corridor():
    """Long degree-2 corridors exercise the bridge-sliding fast path."""
    rng = random.Random(103)
    for trial in range(12):
        seg = rng.randint(50, 400)
        # two cycles joined by a long path: loops force slide guards
        n = seg + 5
        edges = [(0, 1), (1, 2), (2, 0)]
        edges += [(i, i + 1) for i in range(2, 2 + seg)]
        far = 2 + seg
        edges += [(far, far + 1), (far + 1, far + 2), (far + 2, far)]
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        indptr = [0]
        nbrs = []
        for u in range(n):
            nbrs.extend(adj[u])
            indptr.append(len(nbrs))
        div = [0] * n
        div[far] = rng.randint(1, 5)
        div[1] = rng.randint(-2, 3)
        q = rng.choice([0, 2 + seg // 2, far + 1])
        red_c, sig_c = _kernel.reduce_divisor(indptr, nbrs, div, q)
        check_reduction(indptr, nbrs, div, q, red_c, sig_c)
        red_p, sig_p = _kernel_py.reduce_divisor(indptr, nbrs, div, q)
        assert list(red_c) == list(red_p)
        assert list(sig_c) == list(sig_p)


def test_backend_reports_identity():
    assert kernel.BACKEND in ("compiled", "python")
    assert kernel.reduce_divisor is not None


def test_q_out_of_range():
    with pytest.raises(ValueError):
        _kernel_py.reduce_divisor([0, 1, 2], [1, 0], [0, 0], 5)


def test_disconnected_rejected():
    # two vertices, no edges: burning from q can never finish
    indptr = [0, 0, 0]
    with pytest.raises(ValueError, match="connected"):
        _kernel_py.reduce_divisor(indptr, [], [1, 1], 0)
    if _kernel is not None:
        with pytest.raises(ValueError, match="connected"):
            _kernel.reduce_divisor(indptr, [], [1, 1], 0)
