"""
Adjoint foliated structures (X, F_W, Δ, t).

K_t = t·K_F + (1−t)·K_X + Δ. A primitive v ∈ |Σ| has adjoint log
discrepancy φ_{K_t}(v) and threshold (1 − t + ι(v)·t)·δ; the structure is
δ-lc when no primitive point falls below its threshold. Failure regions
{φ < δ} are bounded simplices per maximal cone once every generator has a
positive value, which is what makes every decision here a finite scan.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from config import get_config
from divisor import SupportFunction, TorusDivisor, canonical_divisor, evaluate, is_ample, support_function
from errors import (
    ConsistencyError, HypothesisFailed, NotPrimitive, PreconditionViolated, RequiresCompleteSimplicial,
    RequiresSimplicial,
)
from fan import ConeKey, Fan, is_complete, is_simplicial, locate_indices
from foliation import FoliationSpace, foliation_canonical_divisor, is_fano
from lattice import Halfspace, convex_hull_halfspaces, enumerate_lattice_points, is_primitive, primitive
from linalg import ONE, ZERO, Vector, is_zero, scale, to_fraction, vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdjointStructure:
    fan: Fan
    foliation: FoliationSpace
    boundary: TorusDivisor
    t: Fraction

    def __post_init__(self):
        t = to_fraction(self.t)
        object.__setattr__(self, 't', t)
        if t < 0 or t > 1:
            raise PreconditionViolated('t-range', f't = {t} is outside [0, 1]')
        if not self.boundary.is_effective():
            raise PreconditionViolated('effective', 'the boundary Δ has a negative coefficient')

    @classmethod
    def build(cls, fan: Fan, W: FoliationSpace, t, boundary: Optional[TorusDivisor] = None) -> 'AdjointStructure':
        return cls(fan, W, boundary if boundary is not None else TorusDivisor.zero(fan), to_fraction(t))

    def at(self, t) -> 'AdjointStructure':
        return AdjointStructure(self.fan, self.foliation, self.boundary, to_fraction(t))

    @cached_property
    def canonical(self) -> TorusDivisor:
        K_F = foliation_canonical_divisor(self.fan, self.foliation)
        K_X = canonical_divisor(self.fan)
        return K_F.scaled(self.t) + K_X.scaled(1 - self.t) + self.boundary

    @cached_property
    def support(self) -> SupportFunction:
        return support_function(self.canonical)

    def threshold(self, v: Sequence, delta: Fraction) -> Fraction:
        return (1 - self.t + self.foliation.iota(v) * self.t) * delta


@dataclass(frozen=True)
class CounterexampleReport:
    """A primitive point below its threshold"""

    point: Vector
    cone: ConeKey
    value: Fraction
    threshold: Fraction
    invariant: bool

    def to_dict(self) -> dict:
        return {
            'point': [str(x) for x in self.point],
            'cone': sorted(self.cone),
            'value': str(self.value),
            'threshold': str(self.threshold),
            'invariant': self.invariant
        }


@dataclass(frozen=True)
class DeltaLcResult:
    holds: bool
    t: Fraction
    delta: Fraction
    witness: Optional[CounterexampleReport] = None

    def __bool__(self) -> bool:
        return self.holds


def adjoint_log_discrepancy(A: AdjointStructure, v: Sequence) -> Fraction:
    v = vector(v)
    if not is_primitive(v, A.fan.lattice):
        raise NotPrimitive(f'{[str(x) for x in v]} is not primitive in N')
    return evaluate(A.support, v)


def _failure_region(cone, covector: Vector, bound: Fraction,
                    values: Sequence[Fraction]) -> Tuple[List[Halfspace], List[Vector]]:
    """{x ∈ cone : m·x < bound} with the vertices of its closure; every generator value must be > 0"""
    halfspaces = cone.halfspaces() + [Halfspace(covector, bound, strict=True)]
    n = len(covector)
    vertices = [tuple(ZERO for _ in range(n))]
    vertices += [scale(bound / value, r) for r, value in zip(cone.rays, values)]
    return halfspaces, vertices


def _violators(A: AdjointStructure, delta: Fraction, rays_first: bool = True) -> List[CounterexampleReport]:
    """
    Primitive points below threshold. With rays_first, a failing ray ends the
    search and only the failing rays are returned.
    """
    fan = A.fan
    W = A.foliation
    phi = A.support
    found: Dict[Vector, CounterexampleReport] = {}

    def record(v: Vector, sigma: Optional[ConeKey] = None):
        value = evaluate(phi, v)
        limit = A.threshold(v, delta)
        if value < limit and v not in found:
            found[v] = CounterexampleReport(v, sigma if sigma is not None else locate_indices(fan, v),
                                            value, limit, not W.contains(v))

    for i, ray in enumerate(fan.rays):
        record(ray, frozenset([i]))
    if found and rays_first:
        return sorted(found.values(), key=lambda c: c.point)

    for sigma in fan.max_cones:
        cone = fan.cone(sigma)
        m = phi.covector(sigma)
        values = [phi.ray_values[i] for i in sorted(sigma)]
        zero_face = [r for r, value in zip(cone.rays, values) if value <= 0]
        if not zero_face:
            halfspaces, vertices = _failure_region(cone, m, delta, values)
            points = enumerate_lattice_points(halfspaces, fan.lattice, vertices=vertices)
        else:
            # only at t = 1 on invariant generators; off W the threshold is 0
            face = fan.cone(frozenset(i for i, value in zip(sorted(sigma), values) if value <= 0))
            hit = face.meets_subspace(W.rational_part) if W.rational_part else None
            if hit is not None:
                record(primitive(hit, fan.lattice))
                continue
            if not W.rational_part:
                continue
            halfspaces = cone.halfspaces() + [Halfspace(m, delta, strict=True)]
            for equation in W.equations():
                halfspaces.append(Halfspace(equation, ZERO))
                halfspaces.append(Halfspace(tuple(-x for x in equation), ZERO))
            points = enumerate_lattice_points(halfspaces, fan.lattice)
        for p in points:
            if not is_zero(p) and is_primitive(p, fan.lattice):
                record(p)
    return sorted(found.values(), key=lambda c: c.point)


def is_delta_lc(A: AdjointStructure, delta) -> DeltaLcResult:
    delta = to_fraction(delta)
    if delta <= 0:
        raise PreconditionViolated('delta-positive', f'δ = {delta} must be positive')
    violators = _violators(A, delta)
    witness = violators[0] if violators else None
    logger.debug(f'δ-lc at t = {A.t}, δ = {delta}: {witness is None}')
    return DeltaLcResult(witness is None, A.t, delta, witness)


@dataclass(frozen=True)
class TInterval:
    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_attained: bool
    hi_attained: bool

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def __contains__(self, t) -> bool:
        if self.is_empty:
            return False
        t = to_fraction(t)
        return self.lo <= t <= self.hi

    def to_dict(self) -> Optional[List[str]]:
        return None if self.is_empty else [str(self.lo), str(self.hi)]


TInterval.EMPTY = TInterval(None, None, False, False)


class _Constraint:
    """g_v(t) = (1−t)(B − δ) + t(A − ιδ) >= 0 for one primitive v"""

    def __init__(self, v: Vector, at_zero: Fraction, at_one: Fraction):
        self.v = v
        self.at_zero = at_zero
        self.at_one = at_one

    @property
    def root(self) -> Fraction:
        return self.at_zero / (self.at_zero - self.at_one)


def _constraint(v: Vector, start: AdjointStructure, end: AdjointStructure, delta: Fraction) -> _Constraint:
    at_zero = evaluate(start.support, v) - delta
    at_one = evaluate(end.support, v) - end.foliation.iota(v) * delta
    return _Constraint(v, at_zero, at_one)


def lct_interval(fan: Fan, W: FoliationSpace, boundary: Optional[TorusDivisor], delta) -> TInterval:
    """
    {t ∈ [0, 1] : (X, F_W, Δ, t) is δ-lc}.

    Each constraint g_v is linear in t, so it holds on [0, 1] iff it holds at
    both ends; only points violating at t = 0 bound t from below and only
    points violating at t = 1 bound it from above.
    """
    delta = to_fraction(delta)
    if delta <= 0:
        raise PreconditionViolated('delta-positive', f'δ = {delta} must be positive')
    if not is_simplicial(fan):
        raise RequiresSimplicial('the lct interval is computed on simplicial fans')
    start = AdjointStructure.build(fan, W, ZERO, boundary)
    end = start.at(ONE)
    lo, hi = ZERO, ONE

    def apply(c: _Constraint) -> bool:
        nonlocal lo, hi
        if c.at_zero < 0 and c.at_one < 0:
            return False
        if c.at_zero < 0:
            lo = max(lo, c.root)
        elif c.at_one < 0:
            hi = min(hi, c.root)
        return True

    for ray in fan.rays:
        if not apply(_constraint(ray, start, end, delta)):
            logger.debug(f'ray {[str(x) for x in ray]} fails at both ends')
            return TInterval.EMPTY
    if lo > hi:
        return TInterval.EMPTY

    # every generator is positive at t = 0 now, so {φ_0 < δ} is bounded
    for report in _violators(start, delta, rays_first=False):
        if not apply(_constraint(report.point, start, end, delta)):
            return TInterval.EMPTY

    if hi == ONE:
        at_one = is_delta_lc(end, delta)
        if not at_one:
            c = _constraint(at_one.witness.point, start, end, delta)
            if not apply(c):
                return TInterval.EMPTY
    if lo > hi:
        return TInterval.EMPTY
    if hi < ONE:
        # upper constraints with a smaller root all fail at the current hi
        for report in _violators(start.at(hi), delta, rays_first=False):
            if not apply(_constraint(report.point, start, end, delta)):
                return TInterval.EMPTY
    if lo > hi:
        return TInterval.EMPTY

    interval = TInterval(lo, hi, True, True)
    if get_config().get_config_value('compute', 'consistency_checks', True):
        for t in {lo, hi}:
            if not is_delta_lc(start.at(t), delta):
                raise ConsistencyError(f'the computed endpoint t = {t} is not δ-lc')
    logger.info(f'lct interval for δ = {delta}: [{lo}, {hi}]')
    return interval


@dataclass(frozen=True)
class ClosedFormLct:
    value: Fraction
    maximizer: Optional[Vector]
    cone: Optional[ConeKey]


def closed_form_lower_lct(fan: Fan, W: FoliationSpace, delta) -> ClosedFormLct:
    """
    max(0, max (δ − φ_{K_X}(v)) / (δ − φ_{K_X}(v) + φ_{K_F}(v))) over the
    primitive v ∉ W with φ_{K_X}(v) < δ, taken over all maximal cones (Δ = 0).
    """
    delta = to_fraction(delta)
    K_X = support_function(canonical_divisor(fan))
    K_F = support_function(foliation_canonical_divisor(fan, W))
    best, best_v, best_cone = ZERO, None, None
    for sigma in fan.max_cones:
        cone = fan.cone(sigma)
        values = [K_X.ray_values[i] for i in sorted(sigma)]
        halfspaces, vertices = _failure_region(cone, K_X.covector(sigma), delta, values)
        for v in enumerate_lattice_points(halfspaces, fan.lattice, vertices=vertices):
            if is_zero(v) or W.contains(v) or not is_primitive(v, fan.lattice):
                continue
            b = evaluate(K_X, v)
            a = evaluate(K_F, v)
            value = (delta - b) / (delta - b + a)
            if value > best or (value == best and best_v is not None and v < best_v):
                best, best_v, best_cone = value, v, sigma
    return ClosedFormLct(best, best_v, best_cone)


def check_t1_forces_tangent(fan: Fan, W: FoliationSpace, delta) -> bool:
    """δ-lc at t = 1 implies W = N, for a Fano foliation"""
    if not is_simplicial(fan) or not is_complete(fan):
        raise RequiresCompleteSimplicial('the fan is not complete and simplicial')
    if not is_fano(fan, W):
        raise PreconditionViolated('fano', '−K_F is not ample')
    result = is_delta_lc(AdjointStructure.build(fan, W, ONE), delta)
    return not result.holds or W.is_tangent


@dataclass(frozen=True)
class EpsilonAdjointForm:
    epsilon: Fraction
    boundary: TorusDivisor


def epsilon_adjoint_form(A: AdjointStructure) -> EpsilonAdjointForm:
    """(X, F, Δ, t) as an (ε = (1−t)/t)-adjoint pair with boundary B"""
    if A.t == 0:
        raise PreconditionViolated('t-range', 'the ε-adjoint form needs t > 0')
    W = A.foliation
    epsilon = (1 - A.t) / A.t
    coeffs = []
    for ray, a in zip(A.fan.rays, A.boundary.coeffs):
        if not W.contains(ray):
            coeffs.append(a / (1 - A.t) if A.t < 1 else ZERO)
        else:
            coeffs.append(a)
    return EpsilonAdjointForm(epsilon, TorusDivisor(A.fan, tuple(coeffs)))


@dataclass
class BoundednessCertificate:
    polytope: List[Halfspace]
    lam: Fraction
    scale: Fraction
    witness: Optional[Vector]
    boundary_shift: TorusDivisor
    shifted_delta_lc: DeltaLcResult
    scaled_points: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return self.witness is None


def boundedness_certificate(fan: Fan, W: FoliationSpace, boundary: Optional[TorusDivisor],
                            t1, t2, delta) -> BoundednessCertificate:
    t1, t2, delta = to_fraction(t1), to_fraction(t2), to_fraction(delta)
    for name, t in (('t1', t1), ('t2', t2)):
        if t < 0 or t >= 1:
            raise PreconditionViolated('t-range', f'{name} = {t} must lie in [0, 1)',
                                       'the boundedness statement needs t < 1: at t = 1 the scale '
                                       'λ(1 − t1)(1 − t2)δ vanishes and the polytope shrinks to the origin')
    if delta <= 0:
        raise PreconditionViolated('delta-positive', f'δ = {delta} must be positive')
    if not is_simplicial(fan) or not is_complete(fan):
        raise HypothesisFailed('complete-simplicial', 'the fan is not complete and simplicial')

    first = AdjointStructure.build(fan, W, t1, boundary)
    if not is_ample(-first.canonical):
        raise HypothesisFailed('ampleness', f'−K at t1 = {t1} is not ample')
    second = first.at(t2)
    lc = is_delta_lc(second, delta)
    if not lc:
        raise HypothesisFailed('delta-lc', f'the structure at t2 = {t2} is not {delta}-lc', lc.witness)

    lam = min((1 - t1) + (1 - t2) * delta, (1 - t2) * (1 + delta))
    factor = lam * (1 - t1) * (1 - t2) * delta
    n = fan.dim
    hull = convex_hull_halfspaces(fan.rays, n)
    scaled = [h.scaled(factor) for h in hull]
    points = enumerate_lattice_points(scaled, fan.lattice, vertices=[scale(factor, r) for r in fan.rays])
    nonzero = [p for p in points if not is_zero(p)]
    witness = nonzero[0] if nonzero else None

    K_F = foliation_canonical_divisor(fan, W)
    shift = (K_F - canonical_divisor(fan)).scaled(t2) + second.boundary
    classical = AdjointStructure.build(fan, FoliationSpace.tangent(fan.lattice), ZERO, shift)
    shifted = is_delta_lc(classical, (1 - t2) * delta)
    logger.info(f'certificate: scale {factor}, {len(points)} lattice points, witness {witness}')
    return BoundednessCertificate(hull, lam, factor, witness, shift, shifted, len(points))
