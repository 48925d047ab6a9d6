"""
Lattices of full rank in Q^n.

N is kept as an integer combination of a canonical basis (the Hermite normal
form of any generating set), so superlattices of Z^n such as
Z^2 + Z(1/5, 1/5) and Z^n itself go through the same code.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, prod
from typing import Iterable, List, Optional, Sequence, Tuple

try:
    from sympy import igcdex
except ImportError:  # sympy >= 1.13 moved igcdex out of the top-level namespace
    from sympy.core.intfunc import igcdex

from config import get_config
from errors import EnumerationTooLarge, RayNotRational, UnboundedRegion, ZeroVector
from linalg import (
    ONE, ZERO, Vector, common_denominator, dot, integral_direction, inverse, is_zero,
    nullspace, rank, solve_lp, transpose, vector,
)

logger = logging.getLogger(__name__)


def hermite_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[List[int]]]:
    """
    Row Hermite normal form H of an integer matrix M together with a
    unimodular U such that U·M = H.

    Pivots are positive and entries above a pivot lie in [0, pivot).
    """
    rows = [[int(x) for x in r] for r in matrix]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= m:
            break
        for r in range(pivot_row + 1, m):
            b = rows[r][col]
            if b == 0:
                continue
            a = rows[pivot_row][col]
            x, y, g = igcdex(a, b)
            x, y, g = int(x), int(y), int(g)
            p, q = -b // g, a // g
            top, bottom = rows[pivot_row], rows[r]
            rows[pivot_row] = [x * s + y * t for s, t in zip(top, bottom)]
            rows[r] = [p * s + q * t for s, t in zip(top, bottom)]
            top, bottom = U[pivot_row], U[r]
            U[pivot_row] = [x * s + y * t for s, t in zip(top, bottom)]
            U[r] = [p * s + q * t for s, t in zip(top, bottom)]
        a = rows[pivot_row][col]
        if a == 0:
            continue
        if a < 0:
            rows[pivot_row] = [-s for s in rows[pivot_row]]
            U[pivot_row] = [-s for s in U[pivot_row]]
            a = -a
        for r in range(pivot_row):
            k = rows[r][col] // a
            if k:
                rows[r] = [s - k * t for s, t in zip(rows[r], rows[pivot_row])]
                U[r] = [s - k * t for s, t in zip(U[r], U[pivot_row])]
        pivot_row += 1
    return rows, U


class AmbientLattice:
    """
    A full-rank lattice N in Q^n.

    Built from any finite generating set; the stored basis is the Hermite
    normal form of the generators, so two equal lattices have equal bases.
    """

    def __init__(self, generators: Iterable[Sequence]):
        vectors = [vector(g) for g in generators]
        if not vectors:
            raise ValueError('a lattice needs at least one generator')
        n = len(vectors[0])
        if n == 0 or any(len(v) != n for v in vectors):
            raise ValueError('lattice generators must have one common length n >= 1')

        d = common_denominator(x for v in vectors for x in v)
        H, _ = hermite_normal_form([[int(x * d) for x in v] for v in vectors])
        rows = [r for r in H if any(r)]
        if len(rows) != n:
            raise ValueError(f'lattice generators span a rank-{len(rows)} subgroup of Q^{n}')

        self.dim = n
        self.basis: Tuple[Vector, ...] = tuple(tuple(Fraction(x, d) for x in r) for r in rows)
        # columns of the basis matrix are the basis vectors
        self._inverse = inverse(transpose(self.basis))

    @classmethod
    def standard(cls, n: int) -> 'AmbientLattice':
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """B⁻¹·v"""
        return tuple(dot(row, v) for row in self._inverse)

    def from_coordinates(self, z: Sequence) -> Vector:
        result = [ZERO] * self.dim
        for c, b in zip(z, self.basis):
            if c:
                for j in range(self.dim):
                    result[j] += c * b[j]
        return tuple(result)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(v))

    def is_standard(self) -> bool:
        return self == AmbientLattice.standard(self.dim)

    def __eq__(self, other) -> bool:
        return isinstance(other, AmbientLattice) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f'AmbientLattice({[[str(x) for x in b] for b in self.basis]})'


def primitive(v: Sequence, lattice: AmbientLattice) -> Vector:
    """The first lattice point of N on the ray through v"""
    try:
        v = vector(v)
    except (TypeError, ValueError) as e:
        raise RayNotRational(f'ray direction {v!r} is not rational: {e}')
    if len(v) != lattice.dim:
        raise ValueError(f'vector of length {len(v)} in a rank-{lattice.dim} lattice')
    if is_zero(v):
        raise ZeroVector('the zero vector spans no ray')
    return lattice.from_coordinates(integral_direction(lattice.coordinates(v)))


def is_primitive(v: Sequence[Fraction], lattice: AmbientLattice) -> bool:
    if is_zero(v) or not lattice.contains(v):
        return False
    return primitive(v, lattice) == tuple(v)


def saturate(generators: Iterable[Sequence], lattice: AmbientLattice) -> Tuple[Vector, ...]:
    """
    Basis of span_Q(generators) ∩ N, in Hermite normal form over N.

    Empty or zero input gives the zero lattice (empty basis).
    """
    vectors = [vector(g) for g in generators]
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return ()
    n = lattice.dim
    coords = [lattice.coordinates(v) for v in vectors]
    if rank(coords) == n:
        return lattice.basis

    # integer equations cutting out the span, then their integer kernel
    equations = [integral_direction(c) for c in nullspace(coords, n)]
    H, U = hermite_normal_form(transpose(equations))
    kernel = [U[i] for i in range(n) if not any(H[i])]
    canonical, _ = hermite_normal_form(kernel)
    return tuple(lattice.from_coordinates(row) for row in canonical if any(row))


def index_of(x: Sequence) -> int:
    """Smallest d >= 1 with d·x integral"""
    return common_denominator(vector(x))


@dataclass(frozen=True)
class Halfspace:
    """normal · x <= bound, or < bound when strict"""

    normal: Vector
    bound: Fraction = ZERO
    strict: bool = False

    def holds(self, x: Sequence[Fraction]) -> bool:
        value = dot(self.normal, x)
        return value < self.bound if self.strict else value <= self.bound

    def scaled(self, factor: Fraction) -> 'Halfspace':
        """The same inequality for factor·P (factor > 0)"""
        return Halfspace(self.normal, self.bound * factor, self.strict)


def _lp_box(constraints: List[Tuple[Vector, Fraction, bool]], n: int) -> Optional[List[Tuple[Fraction, Fraction]]]:
    A = [c for c, _, _ in constraints]
    b = [bound for _, bound, _ in constraints]
    box = []
    for j in range(n):
        cost = [ONE if i == j else ZERO for i in range(n)]
        low = solve_lp(cost, A, b)
        if low.status == 'infeasible':
            return None
        high = solve_lp([-c for c in cost], A, b)
        if low.status == 'unbounded' or high.status == 'unbounded':
            raise UnboundedRegion(f'the region is unbounded along lattice coordinate {j}')
        box.append((low.value, -high.value))
    return box


def enumerate_lattice_points(halfspaces: Sequence[Halfspace], lattice: AmbientLattice,
                             vertices: Optional[Sequence[Vector]] = None,
                             max_points: Optional[int] = None) -> List[Vector]:
    """
    All points of N satisfying every half-space, in lexicographic order of
    their lattice coordinates.

    The scan box comes from `vertices` when the caller knows a finite set
    whose convex hull contains the closed region; otherwise it is computed by
    one pair of LPs per coordinate, which also detects unboundedness.
    """
    n = lattice.dim
    constraints = [(tuple(dot(h.normal, b) for b in lattice.basis), h.bound, h.strict)
                   for h in halfspaces]

    if vertices is not None:
        coords = [lattice.coordinates(v) for v in vertices]
        box = [(min(c[j] for c in coords), max(c[j] for c in coords)) for j in range(n)]
    else:
        box = _lp_box(constraints, n)
        if box is None:
            return []
    ranges = [(ceil(lo), floor(hi)) for lo, hi in box]
    if any(lo > hi for lo, hi in ranges):
        return []

    size = prod(hi - lo + 1 for lo, hi in ranges)
    limit = max_points if max_points is not None else get_config().get_config_value(
        'compute', 'max_enumeration_points', 2_000_000)
    if size > limit:
        raise EnumerationTooLarge(f'enumeration box holds {size} candidates (limit {limit})')
    logger.debug(f'scanning {size} candidates in box {ranges}')

    points = []
    last_lo, last_hi = ranges[-1]
    for prefix in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges[:-1])):
        lo_n, hi_n = last_lo, last_hi
        for coeffs, bound, strict in constraints:
            rest = bound - sum((coeffs[j] * prefix[j] for j in range(n - 1)), ZERO)
            c = coeffs[-1]
            if c == 0:
                if rest < 0 or (strict and rest == 0):
                    lo_n, hi_n = 1, 0
                    break
                continue
            limit_value = rest / c
            if c > 0:
                hi_n = min(hi_n, ceil(limit_value) - 1 if strict else floor(limit_value))
            else:
                lo_n = max(lo_n, floor(limit_value) + 1 if strict else ceil(limit_value))
            if lo_n > hi_n:
                break
        for last in range(lo_n, hi_n + 1):
            points.append(lattice.from_coordinates(prefix + (last,)))
    return points


def convex_hull_halfspaces(points: Sequence[Vector], n: int) -> List[Halfspace]:
    """Facet inequalities a·x <= b of conv(points); the hull must be full-dimensional"""
    unique = sorted(set(tuple(p) for p in points))
    facets = {}
    for subset in itertools.combinations(range(len(unique)), n):
        rows = [list(unique[i]) + [-ONE] for i in subset]
        null = nullspace(rows, n + 1)
        if len(null) != 1:
            continue
        normal, bound = null[0][:n], null[0][n]
        values = [dot(normal, p) - bound for p in unique]
        if all(v >= 0 for v in values):
            normal, bound = tuple(-x for x in normal), -bound
        elif not all(v <= 0 for v in values):
            continue
        if all(v == 0 for v in values):
            continue
        facets[integral_direction(tuple(normal) + (bound,))] = Halfspace(tuple(normal), bound)
    if len(facets) <= n:
        raise ValueError('the convex hull is not full-dimensional')
    return [facets[key] for key in sorted(facets)]
