"""
Toric foliations F_W.

W ⊆ N_C is modelled by its rational part L = W ∩ N (saturated) and the
dimension g of a complement in general position: the complement holds no
nonzero rational vector and meets every rational subspace in the expected
dimension. Invariance, K_F and dicriticality only read L; the dimension of
W ∩ Cτ reads g through the generic-position formula.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import randMatrix

from config import get_config
from divisor import TorusDivisor, is_ample, support_function
from errors import ConsistencyError, PreconditionViolated, RequiresSimplicial
from fan import ConeKey, Fan, closures_intersect, cone_key, is_complete, is_simplicial, star_subdivision
from lattice import AmbientLattice, primitive, saturate
from linalg import ONE, ZERO, Vector, combine, dot, find_point, intersection_dim, is_zero, nullspace, rank

logger = logging.getLogger(__name__)

SUBSTITUTION_TRIALS = 20
SUBSTITUTION_RANGE = 9


@dataclass(frozen=True)
class FoliationSpace:
    """W given by L = W ∩ N (saturated basis) and a generic complement of dimension g"""

    lattice: AmbientLattice
    rational_part: Tuple[Vector, ...]
    generic_dim: int = 0

    def __post_init__(self):
        n = self.lattice.dim
        l = len(self.rational_part)
        if self.generic_dim < 0:
            raise PreconditionViolated('foliation', 'generic_dim must be non-negative')
        if l + self.generic_dim > n:
            raise PreconditionViolated('foliation', f'rank {l + self.generic_dim} exceeds the lattice rank {n}')
        if self.generic_dim > 0 and l + self.generic_dim == n:
            raise PreconditionViolated('foliation',
                                       'a generic part filling N_C would make W rational',
                                       'lower generic_dim or add the missing generators to L')

    @classmethod
    def from_generators(cls, lattice: AmbientLattice, generators: Sequence[Sequence],
                        generic_dim: int = 0) -> 'FoliationSpace':
        return cls(lattice, saturate(generators, lattice), int(generic_dim))

    @classmethod
    def tangent(cls, lattice: AmbientLattice) -> 'FoliationSpace':
        """W = N, the foliation T_X"""
        return cls(lattice, lattice.basis, 0)

    @property
    def rank(self) -> int:
        return len(self.rational_part) + self.generic_dim

    @property
    def is_algebraic(self) -> bool:
        return self.generic_dim == 0

    @property
    def is_tangent(self) -> bool:
        return len(self.rational_part) == self.lattice.dim

    def contains(self, v: Sequence) -> bool:
        """v ∈ W for a rational v, i.e. v ∈ L_Q"""
        return all(dot(equation, v) == 0 for equation in self._equations)

    def iota(self, v: Sequence) -> int:
        return 1 if self.contains(v) else 0

    @cached_property
    def _equations(self) -> List[Vector]:
        return nullspace(self.rational_part, self.lattice.dim)

    def equations(self) -> List[Vector]:
        """Covectors cutting out L_Q"""
        return list(self._equations)

    def to_dict(self) -> dict:
        return {
            'lattice_generators': [[str(x) for x in v] for v in self.rational_part],
            'generic_dim': self.generic_dim
        }


def ray_is_invariant(ray: Sequence, W: FoliationSpace) -> bool:
    """D_ρ is F_W-invariant iff ρ ⊄ W"""
    return not W.contains(ray)


def foliation_canonical_divisor(fan: Fan, W: FoliationSpace) -> TorusDivisor:
    """K_F = −Σ D_ρ over the rays contained in W"""
    return TorusDivisor(fan, tuple(ZERO if ray_is_invariant(r, W) else -ONE for r in fan.rays))


def is_dicritical_pair(fan: Fan, tau, W: FoliationSpace) -> bool:
    key = fan.index_set(tau)
    if not W.rational_part or not key:
        return False
    cone = fan.cone(key)
    if all(W.contains(r) for r in cone.rays):
        return False
    return cone.meets_subspace(W.rational_part, relint=True) is not None


def generic_intersection_dim(W: FoliationSpace, span: Sequence[Vector]) -> int:
    """dim(W ∩ V_C) for the rational subspace V = span_Q(span)"""
    n = W.lattice.dim
    k = rank(span)
    a = intersection_dim(W.rational_part, span) if span and W.rational_part else 0
    extra = max(0, W.generic_dim + (k - a) - (n - len(W.rational_part)))
    return a + extra


def substituted_intersection_dims(W: FoliationSpace, span: Sequence[Vector], trials: int = SUBSTITUTION_TRIALS,
                                  seed: int = 0) -> Iterator[int]:
    """
    dim((L_Q + G) ∩ V) for random integer subspaces G of dimension g drawn in
    place of the generic part. Draws where L_Q + G loses rank are skipped.
    """
    n = W.lattice.dim
    expected_rank = len(W.rational_part) + W.generic_dim
    for trial in range(trials):
        G = randMatrix(W.generic_dim, n, -SUBSTITUTION_RANGE, SUBSTITUTION_RANGE, seed=seed + trial)
        generators = list(W.rational_part) + [tuple(Fraction(int(x)) for x in G.row(i)) for i in range(G.rows)]
        if rank(generators) != expected_rank:
            continue
        yield intersection_dim(generators, span) if span else 0


def check_generic_intersection_dim(W: FoliationSpace, span: Sequence[Vector], expected: Optional[int] = None,
                                   trials: int = SUBSTITUTION_TRIALS, seed: int = 0) -> int:
    """
    Cross-checks dim(W ∩ V_C) against rational substitutions of the generic
    part: no draw may fall below it and some draw must reach it.
    """
    if expected is None:
        expected = generic_intersection_dim(W, span)
    if W.generic_dim == 0:
        return expected
    for observed in substituted_intersection_dims(W, span, trials, seed):
        if observed < expected:
            raise ConsistencyError(f'a substituted generic part meets V in dimension {observed} < {expected}')
        if observed == expected:
            return expected
    raise ConsistencyError(f'no substituted generic part out of {trials} meets V in dimension {expected}')


def is_singular_pair(fan: Fan, tau, W: FoliationSpace) -> bool:
    """W ∩ Cτ is not spanned by any subset of the rays of τ"""
    if not is_simplicial(fan):
        raise RequiresSimplicial('singular pairs are decided on simplicial fans')
    key = fan.index_set(tau)
    rays = fan.cone(key).rays
    if not rays:
        return False
    a = intersection_dim(W.rational_part, rays) if W.rational_part else 0
    d = generic_intersection_dim(W, rays)
    if W.generic_dim > 0 and get_config().get_config_value('compute', 'consistency_checks', True):
        check_generic_intersection_dim(W, rays, d)
    if d > a:
        # W ∩ Cτ is not defined over Q, so no span of rays matches it
        return True
    inside = sum(1 for r in rays if W.contains(r))
    return inside != a


@dataclass(frozen=True)
class JoinRecord:
    first: ConeKey
    second: ConeKey
    joined: Optional[ConeKey]
    flagged: bool


@dataclass
class LocusReport:
    """Cones flagged dicritical or singular, with their connectivity"""

    kind: str
    cones: List[ConeKey]
    stratum_kind: str
    components: List[List[ConeKey]]
    is_connected: bool
    is_closed: bool
    minimal_cones: List[ConeKey] = field(default_factory=list)
    joins: List[JoinRecord] = field(default_factory=list)
    model_dependent: bool = False

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'cones': [sorted(c) for c in self.cones],
            'stratum_kind': self.stratum_kind,
            'components': [[sorted(c) for c in comp] for comp in self.components],
            'is_connected': self.is_connected,
            'is_closed': self.is_closed,
            'minimal_cones': [sorted(c) for c in self.minimal_cones],
            'joins': [{'first': sorted(j.first), 'second': sorted(j.second),
                       'joined': sorted(j.joined) if j.joined is not None else None,
                       'flagged': j.flagged} for j in self.joins],
            'model_dependent': self.model_dependent
        }


def _components(fan: Fan, cones: List[ConeKey]) -> List[List[ConeKey]]:
    remaining = list(cones)
    components = []
    while remaining:
        component = [remaining.pop(0)]
        grown = True
        while grown:
            grown = False
            for other in list(remaining):
                if any(closures_intersect(fan, other, member) for member in component):
                    component.append(other)
                    remaining.remove(other)
                    grown = True
        components.append(sorted(component, key=cone_key))
    return components


def _build_locus(fan: Fan, W: FoliationSpace, kind: str, flagged: List[ConeKey], stratum_kind: str) -> LocusReport:
    flagged = sorted(flagged, key=cone_key)
    flagged_set = set(flagged)
    if stratum_kind == 'orbit':
        closed = all(above in flagged_set for c in flagged for above in fan.cones_containing(c))
    else:
        closed = True
    minimal = [c for c in flagged if not any(other < c for other in flagged_set)]
    joins = []
    for i, first in enumerate(minimal):
        for second in minimal[i + 1:]:
            joined = first | second
            present = joined in fan
            joins.append(JoinRecord(first, second, joined if present else None,
                                    present and joined in flagged_set))
    components = _components(fan, flagged)
    report = LocusReport(kind, flagged, stratum_kind, components, len(components) <= 1, closed,
                         minimal, joins, W.generic_dim > 0)
    logger.debug(f'{kind} locus: {len(flagged)} cones, {len(components)} components')
    return report


def dicritical_locus(fan: Fan, W: FoliationSpace) -> LocusReport:
    n = fan.dim
    stratum_kind = 'orbit' if W.rank >= n - 1 else 'orbit-closure'
    flagged = [c for c in fan.cones if is_dicritical_pair(fan, c, W)]
    return _build_locus(fan, W, 'dicritical', flagged, stratum_kind)


def singular_locus(fan: Fan, W: FoliationSpace) -> LocusReport:
    if not is_simplicial(fan):
        raise RequiresSimplicial('the singular locus is computed on simplicial fans')
    flagged = [c for c in fan.cones if is_singular_pair(fan, c, W)]
    # Sing(F) is the union of the closures V_tau
    return _build_locus(fan, W, 'singular', flagged, 'orbit-closure')


def is_fano(fan: Fan, W: FoliationSpace) -> bool:
    """−K_F ample"""
    return is_ample(-foliation_canonical_divisor(fan, W))


def verify_minimal_singular_cones(fan: Fan, W: FoliationSpace) -> Dict[ConeKey, bool]:
    """For each minimal singular cone τ, whether φ_{−K_F} vanishes on τ"""
    phi = support_function(-foliation_canonical_divisor(fan, W))
    report = singular_locus(fan, W)
    return {tau: all(phi.ray_values[i] == 0 for i in tau) for tau in report.minimal_cones}


def find_zero_ld_divisor(fan: Fan, W: FoliationSpace) -> Tuple[Vector, Fan]:
    """
    A primitive v0 ∈ W ∩ N, not a ray, with φ_{−K_F}(v0) = 0, and the star
    subdivision at v0: its exceptional divisor is non-invariant with foliated
    log discrepancy zero.
    """
    if not is_simplicial(fan) or not is_complete(fan):
        raise PreconditionViolated('complete-simplicial', 'the fan is not complete and simplicial')
    if W.is_tangent:
        raise PreconditionViolated('tangent', 'W = N gives the foliation T_X, which has no such divisor')
    if not is_fano(fan, W):
        raise PreconditionViolated('fano', '−K_F is not ample')

    n = fan.dim
    outside = [r for r in fan.rays if ray_is_invariant(r, W)]
    inside = [r for r in fan.rays if not ray_is_invariant(r, W)]
    k, p = len(outside), len(inside)
    # Σ a_i v_i − Σ μ_j w_j = 0 with a_i >= 1 on the invariant rays
    A_eq = [[r[j] for r in outside] + [-w[j] for w in inside] for j in range(n)]
    A_ub = []
    for i in range(k):
        row = [ZERO] * (k + p)
        row[i] = -ONE
        A_ub.append(row)
    point = find_point(k + p, A_ub, [-ONE] * k, A_eq, [ZERO] * n)
    if point is None:
        raise ConsistencyError('no positive combination of invariant rays projects to zero')
    total = combine(point[:k], outside, n)
    if is_zero(total):
        raise ConsistencyError('the positive combination of invariant rays vanishes')
    v0 = primitive(total, fan.lattice)

    phi = support_function(-foliation_canonical_divisor(fan, W))
    if not W.contains(v0):
        raise ConsistencyError('the constructed vector is not in W')
    if phi(v0) != 0:
        raise ConsistencyError(f'φ_{{−K_F}}(v0) = {phi(v0)} instead of 0')
    if fan.ray_index(v0) is not None:
        raise ConsistencyError('the constructed vector is already a ray')
    logger.info(f'zero-discrepancy divisor at v0 = {[str(x) for x in v0]}')
    return v0, star_subdivision(fan, v0)
