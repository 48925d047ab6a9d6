"""
Arithmetic of the sets δ-V_{s,ℓ} and δ-L_{s,ℓ}: fractional-part sums, the
t-value formula, membership, and the lattice families whose lct endpoints
realise these values (ACC example, density family, correspondence).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from adjoint import closed_form_lower_lct, lct_interval
from config import get_config
from errors import DomainError, IndexOutOfRange, PreconditionViolated, ZeroDenominator
from fan import Fan
from foliation import FoliationSpace
from lattice import AmbientLattice, index_of, is_primitive
from linalg import ZERO, Vector, to_fraction, unit_vector, vector

logger = logging.getLogger(__name__)


def fractional_part(q: Fraction) -> Fraction:
    return q - floor(q)


def psi(x: Sequence, ell: int) -> Fraction:
    """ψ_ℓ(x) = Σ_{i ≤ ℓ} {x_i}"""
    x = vector(x)
    if ell < 0 or ell > len(x):
        raise IndexOutOfRange(f'ℓ = {ell} is outside 0..{len(x)}')
    return sum((fractional_part(v) for v in x[:ell]), ZERO)


def iota(y: Sequence, s: int, ell: int) -> int:
    """ι_{s,ℓ}(y) = 1 iff ψ_s(y) = ψ_ℓ(y)"""
    return 1 if psi(y, s) == psi(y, ell) else 0


def t_value(x: Sequence, s: int, ell: int, delta) -> Fraction:
    delta = to_fraction(delta)
    psi_s = psi(x, s)
    psi_l = psi(x, ell)
    if delta <= psi_s:
        raise DomainError(f'δ = {delta} does not exceed ψ_s(x) = {psi_s}')
    denominator = delta - (psi_s - psi_l)
    if denominator == 0:
        raise ZeroDenominator('δ − (ψ_s(x) − ψ_ℓ(x)) vanishes')
    return (delta - psi_s) / denominator


@dataclass(frozen=True)
class MembershipResult:
    """Membership in δ-V_{s,ℓ}; condition names the first violated condition"""

    member: bool
    condition: Optional[str] = None
    witness_m: Optional[int] = None
    detail: str = ''

    def __bool__(self) -> bool:
        return self.member

    def to_dict(self) -> dict:
        return {'member': self.member, 'condition': self.condition,
                'witness_m': self.witness_m, 'detail': self.detail}


def _condition_2c(x: Vector, s: int, ell: int, delta: Fraction, t: Fraction, m: int) -> bool:
    y = tuple(m * v for v in x)
    lhs = t * psi(y, ell) + (1 - t) * psi(y, s)
    rhs = (1 - t + iota(y, s, ell) * t) * delta
    return lhs >= rhs


def is_member_V(x: Sequence, s: int, ell: int, delta) -> MembershipResult:
    """
    Membership in δ-V_{s,ℓ}. The quantifier over m ∈ Z in the last
    condition reduces to m = 1..d−1 with d = index(x): d·x ∈ Z^s makes both
    sides d-periodic, and multiples of d land on Z^s itself.
    """
    x = vector(x)
    delta = to_fraction(delta)
    if len(x) != s or not all(0 < v < 1 for v in x):
        return MembershipResult(False, 'range', None, f'x must lie in (0,1)^{s}')
    if ell < 0 or ell > s:
        raise IndexOutOfRange(f'ℓ = {ell} is outside 0..{s}')
    for i in range(s):
        rest = x[:i] + x[i + 1:]
        if rest and index_of(rest) % index_of([x[i]]) != 0:
            return MembershipResult(False, '2a', None,
                                    f'index({x[i]}) = {index_of([x[i]])} does not divide {index_of(rest)}')
    if not delta > psi(x, s):
        return MembershipResult(False, '2b', None, f'δ = {delta} does not exceed ψ_s(x) = {psi(x, s)}')
    t = t_value(x, s, ell, delta)
    for m in range(1, index_of(x)):
        if not _condition_2c(x, s, ell, delta, t, m):
            return MembershipResult(False, '2c', m, f'the inequality fails at m = {m}')
    return MembershipResult(True)


def is_member_V_bruteforce(x: Sequence, s: int, ell: int, delta, reach: int) -> bool:
    """(2c) tested over 0 < |m| <= reach, skipping multiples of index(x)"""
    x = vector(x)
    delta = to_fraction(delta)
    first = is_member_V(x, s, ell, delta)
    if first.condition in ('range', '2a', '2b'):
        return False
    t = t_value(x, s, ell, delta)
    d = index_of(x)
    return all(_condition_2c(x, s, ell, delta, t, m)
               for m in range(-reach, reach + 1) if m % d != 0)


@dataclass
class FamilyInstance:
    """A family instance: fan, W and the expected endpoint"""

    fan: Fan
    foliation: FoliationSpace
    expected: Optional[Fraction] = None
    params: Dict[str, str] = field(default_factory=dict)


def _orthant_instance(generators: List[Sequence], n: int, rational_part: List[Sequence],
                      generic_dim: int) -> Tuple[Fan, FoliationSpace]:
    lattice = AmbientLattice(generators)
    fan = Fan(lattice, [unit_vector(n, i) for i in range(n)], [list(range(n))], validate=False)
    return fan, FoliationSpace.from_generators(lattice, rational_part, generic_dim)


def acc_family(n: int) -> FamilyInstance:
    """N = Z^2 + Z(1/n, 1/n), the first quadrant, W = Ce2"""
    if n < 3:
        raise PreconditionViolated('acc-n', f'n = {n} must be at least 3')
    fan, W = _orthant_instance([[1, 0], [0, 1], [Fraction(1, n), Fraction(1, n)]], 2, [[0, 1]], 0)
    expected = Fraction(n - 4, n - 2) if n > 4 else None
    return FamilyInstance(fan, W, expected, {'n': str(n)})


def _closed_form_b(delta: Fraction, s: int, k: int) -> Tuple[int, Fraction]:
    m = floor(1 / delta)
    c = ceil(Fraction(k * m, s)) - Fraction(k * m, s) + Fraction(k, s)
    return m, (c - delta) / c


def density_index_valid(s: int, m: int, k: int) -> bool:
    """
    w_k = (⌈km/s⌉ − km/s)e1 + (k/s)e2 is primitive in N = Z^n + Z((1 − m/s)e1 + (1/s)e2)
    iff gcd(k, ⌈km/s⌉) = 1; otherwise W ∩ N saturates to a shorter generator
    and b_s no longer describes the upper endpoint.
    """
    return 0 < k < s and gcd(k, ceil(Fraction(k * m, s))) == 1


def density_family(delta, s: int, k: int, n: int = 2, r: int = 1) -> FamilyInstance:
    """
    N = Z^n + Z((1 − m/s)e1 + (1/s)e2) on the first orthant, with
    W ∩ N = Z((⌈km/s⌉ − km/s)e1 + (k/s)e2) and generic part of dimension r − 1.
    Only k with w_k primitive in N are accepted.
    """
    delta = to_fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise PreconditionViolated('density', f'δ = {delta} must lie in (0, 1/2]')
    m = floor(1 / delta)
    if gcd(m, s) != 1:
        raise PreconditionViolated('density', f'gcd(m, s) = gcd({m}, {s}) must be 1')
    if not 0 < k < s:
        raise PreconditionViolated('density', f'k = {k} must lie in 1..{s - 1}')
    if n < 2 or not 1 <= r < n:
        raise PreconditionViolated('density', f'need n >= 2 and 1 <= r < n, got n = {n}, r = {r}')

    u = [ZERO] * n
    u[0] = 1 - Fraction(m, s)
    u[1] = Fraction(1, s)
    w = [ZERO] * n
    w[0] = ceil(Fraction(k * m, s)) - Fraction(k * m, s)
    w[1] = Fraction(k, s)
    generators = [unit_vector(n, i) for i in range(n)] + [u]
    if not is_primitive(tuple(w), AmbientLattice(generators)):
        raise PreconditionViolated('density', f'w_k is not primitive in N for s = {s}, k = {k}')
    fan, W = _orthant_instance(generators, n, [w], r - 1)
    _, b = _closed_form_b(delta, s, k)
    return FamilyInstance(fan, W, b, {'delta': str(delta), 's': str(s), 'k': str(k), 'n': str(n), 'r': str(r)})


def correspondence_instance(x: Sequence, ell: int, delta) -> FamilyInstance:
    """N = Z^s + Zx on the first orthant with W ∩ N = Ze1 + ... + Ze_ℓ"""
    x = vector(x)
    s = len(x)
    if ell < 0 or ell > s:
        raise IndexOutOfRange(f'ℓ = {ell} is outside 0..{s}')
    generators = [unit_vector(s, i) for i in range(s)] + [x]
    fan, W = _orthant_instance(generators, s, [unit_vector(s, i) for i in range(ell)], 0)
    expected = t_value(x, s, ell, delta) if delta > psi(x, s) else None
    return FamilyInstance(fan, W, expected, {'x': ','.join(str(v) for v in x), 'ell': str(ell)})


def tracking_index(s: int, m: int, q) -> int:
    """k in 1..s−1 with w_k primitive, minimising |⌈km/s⌉ − km/s + k/s − q|, smallest k on ties"""
    q = to_fraction(q)

    def distance(k: int) -> Fraction:
        return abs(ceil(Fraction(k * m, s)) - Fraction(k * m, s) + Fraction(k, s) - q)

    return min((k for k in range(1, s) if density_index_valid(s, m, k)), key=lambda k: (distance(k), k))


@dataclass(frozen=True)
class SweepRow:
    s: int
    k: int
    b_s: Fraction
    limit: Fraction
    bound: Fraction
    verified: Optional[bool] = None

    @property
    def abs_error(self) -> Fraction:
        return abs(self.b_s - self.limit)

    def as_csv(self) -> List[str]:
        return [str(self.s), str(self.k), str(self.b_s), f'{float(self.b_s):.10f}',
                str(self.limit), str(self.abs_error), str(self.bound)]


def _sweep_row(delta: Fraction, s: int, q: Fraction, verify: bool) -> SweepRow:
    m = floor(1 / delta)
    k = tracking_index(s, m, q)
    _, b = _closed_form_b(delta, s, k)
    verified = None
    if verify:
        family = density_family(delta, s, k)
        interval = lct_interval(family.fan, family.foliation, None, delta)
        verified = not interval.is_empty and interval.hi == b
    return SweepRow(s, k, b, (q - delta) / q, Fraction(2 * (m - 1), s), verified)


def density_sweep(delta, q, s_min: int, s_max: int, verify: bool = False,
                  threads: Optional[int] = None) -> List[SweepRow]:
    """Rows for every s in [s_min, s_max] with gcd(m, s) = 1, in s order"""
    delta, q = to_fraction(delta), to_fraction(q)
    if not 0 < delta <= Fraction(1, 2):
        raise PreconditionViolated('density', f'δ = {delta} must lie in (0, 1/2]')
    m = floor(1 / delta)
    values = [s for s in range(max(2, s_min), s_max + 1) if gcd(m, s) == 1]
    if threads is None:
        threads = get_config().get_config_value('compute', 'threads', 1)
    workers = max(1, min(int(threads), len(values) or 1))
    logger.info(f'density sweep over {len(values)} values of s with {workers} threads')
    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(lambda s: _sweep_row(delta, s, q, verify), values))
    return rows


@dataclass
class LctCertificate:
    """Certificate that a lower endpoint lies in δ-L_{s,ℓ}"""

    value: Fraction
    s: int = 0
    ell: int = 0
    x: Vector = ()
    permutation: Tuple[int, ...] = ()
    membership: Optional[MembershipResult] = None
    t_value: Optional[Fraction] = None

    @property
    def certified(self) -> bool:
        if self.value == 0:
            return True
        return bool(self.membership) and self.t_value == self.value

    def to_dict(self) -> dict:
        return {
            'value': str(self.value),
            's': self.s,
            'ell': self.ell,
            'x': [str(v) for v in self.x],
            'permutation': list(self.permutation),
            'membership': self.membership.to_dict() if self.membership is not None else None,
            't_value': str(self.t_value) if self.t_value is not None else None,
            'certified': self.certified
        }


def certify_lower_lct(fan: Fan, W: FoliationSpace, delta) -> LctCertificate:
    """
    Writes the maximiser ṽ of the closed-form lower endpoint as Σ x_i v_i
    over the rays of its cone, rays in W first, and checks x ∈ δ-V_{s,ℓ}.
    """
    delta = to_fraction(delta)
    closed = closed_form_lower_lct(fan, W, delta)
    if closed.value == 0 or closed.maximizer is None:
        return LctCertificate(closed.value)
    local = sorted(closed.cone)
    coeffs = fan.cone(closed.cone).coefficients(closed.maximizer)
    support = [(i, c) for i, c in zip(local, coeffs) if c != 0]
    inside = [(i, c) for i, c in support if W.contains(fan.rays[i])]
    outside = [(i, c) for i, c in support if not W.contains(fan.rays[i])]
    ordered = inside + outside
    x = tuple(c for _, c in ordered)
    s, ell = len(x), len(inside)
    membership = is_member_V(x, s, ell, delta)
    value = t_value(x, s, ell, delta) if delta > psi(x, s) else None
    return LctCertificate(closed.value, s, ell, x, tuple(i for i, _ in ordered), membership, value)


@dataclass(frozen=True)
class DccSpotCheck:
    longest_run: int
    limit: Optional[Fraction]
    bound: int

    @property
    def passed(self) -> bool:
        return self.longest_run <= self.bound


def dcc_spot_check(values: Sequence, bound: int) -> DccSpotCheck:
    """
    Longest strictly decreasing subsequence of produced values lying above
    some produced value; descriptive evidence only.
    """
    values = [to_fraction(v) for v in values]
    longest, limit = 0, None
    for floor_value in sorted(set(values)):
        above = [v for v in values if v > floor_value]
        best: List[int] = []
        for i, v in enumerate(above):
            length = 1 + max((best[j] for j in range(i) if above[j] > v), default=0)
            best.append(length)
        run = max(best, default=0)
        if run > longest:
            longest, limit = run, floor_value
    return DccSpotCheck(longest, limit, bound)
