"""
Torus-invariant Q-divisors and their support functions.

Support functions follow φ_D(v_ρ) = −a_ρ for D = Σ a_ρ D_ρ, so
φ_{K_X}(v_ρ) = 1 on every ray and −K_X is ample exactly when
φ_{−K_X}(Σ u) > Σ φ_{−K_X}(u) on every primitive collection.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from errors import NotInSupport, NotRCartier, PreconditionViolated, RequiresCompleteSimplicial
from fan import ConeKey, Fan, is_complete, is_simplicial, primitive_collections
from linalg import ZERO, Vector, combine, dot, is_zero, solve, to_fraction, vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorusDivisor:
    """D = Σ a_ρ D_ρ with one coefficient per ray of the fan, in ray order"""

    fan: Fan
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.fan.rays):
            raise ValueError(f'{len(self.coeffs)} coefficients for {len(self.fan.rays)} rays')

    @classmethod
    def from_mapping(cls, fan: Fan, mapping: Mapping) -> 'TorusDivisor':
        """Divisor from {ray index: coefficient}; missing rays get 0"""
        coeffs = [ZERO] * len(fan.rays)
        for key, value in mapping.items():
            index = int(key)
            if index < 0 or index >= len(fan.rays):
                raise ValueError(f'ray index {index} is not a ray of the fan')
            coeffs[index] = to_fraction(value)
        return cls(fan, tuple(coeffs))

    @classmethod
    def zero(cls, fan: Fan) -> 'TorusDivisor':
        return cls(fan, tuple(ZERO for _ in fan.rays))

    def coefficient(self, index: int) -> Fraction:
        return self.coeffs[index]

    def __add__(self, other: 'TorusDivisor') -> 'TorusDivisor':
        return TorusDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'TorusDivisor') -> 'TorusDivisor':
        return TorusDivisor(self.fan, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> 'TorusDivisor':
        return TorusDivisor(self.fan, tuple(-a for a in self.coeffs))

    def scaled(self, k) -> 'TorusDivisor':
        k = to_fraction(k)
        return TorusDivisor(self.fan, tuple(k * a for a in self.coeffs))

    def is_effective(self) -> bool:
        return all(a >= 0 for a in self.coeffs)

    def to_dict(self) -> Dict[str, Dict[str, str]]:
        return {'coeffs': {str(i): str(a) for i, a in enumerate(self.coeffs) if a != 0}}


@dataclass
class SupportFunction:
    """Piecewise-linear φ_D: one covector m_σ per maximal cone"""

    fan: Fan
    linear_data: Dict[ConeKey, Vector] = field(default_factory=dict)
    ray_values: Tuple[Fraction, ...] = ()

    def __call__(self, v: Sequence) -> Fraction:
        return evaluate(self, v)

    def covector(self, sigma: ConeKey) -> Vector:
        return self.linear_data[sigma]


def support_function(D: TorusDivisor) -> SupportFunction:
    fan = D.fan
    n = fan.dim
    values = tuple(-a for a in D.coeffs)
    data = {}
    for sigma in fan.max_cones:
        cone = fan.cone(sigma)
        local = sorted(sigma)
        targets = [values[i] for i in local]
        if cone.is_simplicial:
            data[sigma] = combine(targets, cone.ray_functionals(), n)
            continue
        m = solve(cone.rays, targets, n)
        if m is None:
            raise NotRCartier(f'no linear function on cone {local} takes the values {[str(x) for x in targets]}')
        data[sigma] = m
    return SupportFunction(fan, data, values)


def evaluate(phi: SupportFunction, v: Sequence) -> Fraction:
    """m_σ(v) for the first maximal cone σ containing v"""
    v = vector(v)
    if is_zero(v):
        return ZERO
    sigma = phi.fan.containing_max_cone(v)
    if sigma is None:
        raise NotInSupport(f'{[str(x) for x in v]} lies outside the support')
    return dot(phi.linear_data[sigma], v)


def canonical_divisor(fan: Fan) -> TorusDivisor:
    """K_X = −Σ D_ρ"""
    return TorusDivisor(fan, tuple(Fraction(-1) for _ in fan.rays))


def _require_complete_simplicial(fan: Fan) -> None:
    if not is_simplicial(fan) or not is_complete(fan):
        raise RequiresCompleteSimplicial('the fan is not complete and simplicial')


@dataclass(frozen=True)
class AmplenessRow:
    """One row of the primitive-collection ampleness table"""

    collection: Tuple[int, ...]
    value_of_sum: Fraction
    sum_of_values: Fraction

    @property
    def strict(self) -> bool:
        return self.value_of_sum > self.sum_of_values


def _collection_rows(phi: SupportFunction) -> List[AmplenessRow]:
    fan = phi.fan
    rows = []
    for collection in primitive_collections(fan):
        indices = tuple(sorted(collection))
        total = combine([1] * len(indices), [fan.rays[i] for i in indices], fan.dim)
        rows.append(AmplenessRow(indices, evaluate(phi, total), sum((phi.ray_values[i] for i in indices), ZERO)))
    return rows


def ampleness_table(D: TorusDivisor) -> List[AmplenessRow]:
    """(φ_D(Σu), Σφ_D(u)) for every primitive collection"""
    _require_complete_simplicial(D.fan)
    return _collection_rows(support_function(D))


def is_ample(D: TorusDivisor) -> bool:
    rows = ampleness_table(D)
    ample = all(row.strict for row in rows)
    logger.debug(f'ampleness over {len(rows)} primitive collections: {ample}')
    return ample


def is_ample_pairwise(D: TorusDivisor, samples: Sequence[Sequence]) -> bool:
    """
    Direct definition on sample points: φ_D(u+v) > φ_D(u) + φ_D(v) whenever
    no cone holds both u and v.
    """
    fan = D.fan
    phi = support_function(D)
    points = [vector(p) for p in samples]
    holders = [frozenset(s for s in fan.max_cones if fan.cone(s).contains(p)) for p in points]
    for i, u in enumerate(points):
        for j in range(i + 1, len(points)):
            v = points[j]
            if holders[i] & holders[j]:
                continue
            total = tuple(a + b for a, b in zip(u, v))
            if not evaluate(phi, total) > evaluate(phi, u) + evaluate(phi, v):
                return False
    return True


def is_nonpositive(phi: SupportFunction) -> bool:
    _require_complete_simplicial(phi.fan)
    return all(value <= 0 for value in phi.ray_values)


def is_strictly_convex(phi: SupportFunction) -> bool:
    _require_complete_simplicial(phi.fan)
    return all(row.strict for row in _collection_rows(phi))


def zero_cone(phi: SupportFunction):
    """The cone τ0 of the fan with {φ = 0} = τ0"""
    fan = phi.fan
    if not is_simplicial(fan) or not is_complete(fan):
        raise PreconditionViolated('complete-simplicial', 'the fan is not complete and simplicial')
    if not is_nonpositive(phi):
        raise PreconditionViolated('non-positive', 'the function is positive on some ray')
    if not is_strictly_convex(phi):
        raise PreconditionViolated('strictly-convex', 'the function fails a primitive-collection inequality')
    zeros = frozenset(i for i, value in enumerate(phi.ray_values) if value == 0)
    if zeros not in fan:
        raise PreconditionViolated('zero-cone', f'rays {sorted(zeros)} do not span a cone of the fan')
    return fan.cone(zeros)
