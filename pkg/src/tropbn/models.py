"""Integer chip-firing models of tropical curves.

A curve with rational edge lengths is subdivided — after promoting any
required marked points to vertices and splitting loops — into a multigraph
whose edges all have the common length 1/λ.  Chip-firing on that graph
decides linear equivalence questions exactly, and firing vectors convert
back into piecewise-linear witnesses on the original curve.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from . import kernel
from .curve import Point, Subcurve, TropicalCurve, loopless_model, subdivide
from .divisor import Divisor, PLFunction


class IntegerModel:
    """Unit-length model of a curve with a distinguished lattice.

    marks: points of the curve that must become lattice vertices.
    scale: multiplies λ, refining the lattice (scale=2 gives the half-step
    lattice used for diameters).
    """

    def __init__(self, curve: TropicalCurve, marks=(), scale: int = 1):
        self.curve = curve
        mark_points = [curve.point(m) if not isinstance(m, Point) else m
                       for m in marks]
        c1, m1 = subdivide(curve, mark_points)
        c2, m2 = loopless_model(c1)
        dens = [c2.length(e).denominator for e in c2.edges()]
        self.lam = scale * (lcm(*dens) if dens else 1)
        lattice = []
        for e in c2.edges():
            k = c2.length(e) * self.lam
            assert k.denominator == 1
            for j in range(1, int(k)):
                lattice.append(Point(edge=e, offset=Fraction(j, self.lam)))
        unit, m3 = subdivide(c2, lattice)
        self.unit = unit
        self.to_unit = m1.then(m2).then(m3)
        self.order: List[str] = unit.vertices()
        self.index: Dict[str, int] = {v: i for i, v in enumerate(self.order)}
        self.split_indices: List[int] = [self.index[v] for v in c2.vertices()]
        n = len(self.order)
        self.n = n
        indptr = [0] * (n + 1)
        for v in self.order:
            indptr[self.index[v] + 1] = len(unit.incident(v))
        for i in range(n):
            indptr[i + 1] += indptr[i]
        nbrs = [0] * indptr[n]
        fill = list(indptr[:n])
        for v in self.order:
            i = self.index[v]
            for _, w in unit.incident(v):
                nbrs[fill[i]] = self.index[w]
                fill[i] += 1
        self.indptr = indptr
        self.nbrs = nbrs

    # -- conversions -------------------------------------------------------

    def vertex_index(self, p) -> int:
        """Lattice index of a curve point; the point must be on the lattice."""
        p = self.curve.point(p) if not isinstance(p, Point) else self.curve._canon(p)
        u = self.to_unit(p)
        if not u.is_vertex:
            raise ValueError(f"{p} is not a lattice point of this model")
        return self.index[u.vertex]

    def point_of_index(self, i: int) -> Point:
        return self.to_unit.inverse(Point(vertex=self.order[i]))

    def divisor_vector(self, D: Divisor) -> List[int]:
        vec = [0] * self.n
        for p, m in D.items():
            vec[self.vertex_index(p)] += m
        return vec

    def vector_divisor(self, vec: Sequence[int]) -> Divisor:
        chips = [(self.point_of_index(i), int(m)) for i, m in enumerate(vec) if m]
        return Divisor(self.curve, chips)

    def pl_from_unit_values(self, vals: Sequence[Fraction]) -> PLFunction:
        """PL function on the original curve from one value per lattice vertex."""
        inv = self.to_unit.inverse
        vv: Dict[str, Fraction] = {}
        knots: Dict[str, List[Tuple[Fraction, Fraction]]] = {}
        for i, uid in enumerate(self.order):
            p = inv(Point(vertex=uid))
            if p.is_vertex:
                vv[p.vertex] = vals[i]
            else:
                knots.setdefault(p.edge, []).append((p.offset, vals[i]))
        return PLFunction(self.curve, vv, knots)

    def sigma_to_pl(self, sigma: Sequence[int]) -> PLFunction:
        """f with div(f) = -L·σ, i.e. f = -σ/λ; reduction yields D + div(f)."""
        return self.pl_from_unit_values(
            [Fraction(-s, self.lam) for s in sigma])

    # -- reduction ---------------------------------------------------------

    def reduce_vector(self, vec: Sequence[int], qi: int) -> Tuple[List[int], List[int]]:
        return kernel.reduce_divisor(self.indptr, self.nbrs, list(vec), qi)

    def reduce(self, D: Divisor, q) -> Tuple[Divisor, PLFunction]:
        """q-reduced representative and witness f with result = D + div(f)."""
        qi = self.vertex_index(q)
        red, sigma = self.reduce_vector(self.divisor_vector(D), qi)
        return self.vector_divisor(red), self.sigma_to_pl(sigma)

    def effective_class(self, vec: Sequence[int], qi: int) -> bool:
        """Whether the class of vec contains an effective divisor."""
        red, _ = self.reduce_vector(vec, qi)
        return red[qi] >= 0

    def indices_in(self, sub: Subcurve) -> List[int]:
        return [i for i in range(self.n)
                if sub.contains_point(self.point_of_index(i))]


def equivalence_witness(D1: Divisor, D2: Divisor) -> Tuple[bool, Optional[PLFunction]]:
    """(True, f) with D1 - D2 = div(f), else (False, None)."""
    curve = D1.curve
    model = IntegerModel(curve, marks=D1.support() + D2.support())
    z = model.divisor_vector(D1 - D2)
    red, sigma = model.reduce_vector(z, 0)
    if any(red):
        return False, None
    f = model.pl_from_unit_values([Fraction(s, model.lam) for s in sigma])
    return True, f


def reduced_divisor(curve: TropicalCurve, D: Divisor, q,
                    extra_marks=()) -> Tuple[Divisor, PLFunction]:
    """q-reduced form of D and witness f with reduced = D + div(f)."""
    q = curve.point(q) if not isinstance(q, Point) else q
    model = IntegerModel(curve, marks=list(D.support()) + [q] + list(extra_marks))
    return model.reduce(D, q)


def subcurve_diameter(sub: Subcurve) -> Fraction:
    """Largest ambient distance between two points of the subcurve.

    The maximum of the (piecewise-affine, slope ±1) distance function over
    a product of segments is attained at half-lattice points, so an
    exhaustive scan of the scale-2 model lattice is exact.
    """
    curve = sub.parent
    marks = []
    for e, ivs in sub.segments.items():
        for a, b in ivs:
            marks.append(Point(edge=e, offset=a))
            if b != a:
                marks.append(Point(edge=e, offset=b))
    model = IntegerModel(curve, marks=marks, scale=2)
    cands = model.indices_in(sub)
    best = 0
    indptr, nbrs, n = model.indptr, model.nbrs, model.n
    for s in cands:
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                du = dist[u] + 1
                for i in range(indptr[u], indptr[u + 1]):
                    v = nbrs[i]
                    if dist[v] < 0:
                        dist[v] = du
                        nxt.append(v)
            frontier = nxt
        for t in cands:
            if dist[t] > best:
                best = dist[t]
    return Fraction(best, model.lam)
