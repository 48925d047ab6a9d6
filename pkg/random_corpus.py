"""
Seeded random instances for the property suites.

Complete simplicial fans come from projective spaces and their products
refined by star subdivisions at sums of cone generators, so every fan stays
smooth and complete. Affine instances are the first orthant in a
superlattice Z^n + Zx.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from divisor import TorusDivisor
from errors import TorfolError
from fan import Fan, star_subdivision
from foliation import FoliationSpace, is_fano
from lattice import AmbientLattice, primitive
from linalg import ZERO, combine, is_zero, rank, unit_vector

logger = logging.getLogger(__name__)

SMALL_DENOMINATORS = (2, 3, 4, 5, 6)
BOUNDARY_COEFFICIENTS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))


def projective_space_fan(n: int) -> Fan:
    lattice = AmbientLattice.standard(n)
    rays = [unit_vector(n, i) for i in range(n)] + [tuple(Fraction(-1) for _ in range(n))]
    cones = [[i for i in range(n + 1) if i != skip] for skip in range(n + 1)]
    return Fan(lattice, rays, cones, validate=False)


def product_fan(first: Fan, second: Fan) -> Fan:
    """Σ1 × Σ2 on N1 ⊕ N2 (standard lattices)"""
    a, b = first.dim, second.dim
    rays = [tuple(r) + tuple(ZERO for _ in range(b)) for r in first.rays]
    rays += [tuple(ZERO for _ in range(a)) + tuple(r) for r in second.rays]
    offset = len(first.rays)
    cones = [sorted(s) + [offset + i for i in sorted(t)] for s in first.max_cones for t in second.max_cones]
    return Fan(AmbientLattice.standard(a + b), rays, cones, validate=False)


def random_complete_fan(rng: random.Random, n: int, max_blowups: int = 2) -> Fan:
    """ℙ^n or ℙ^a × ℙ^b, then up to max_blowups star subdivisions at Σ of a cone's rays"""
    if n >= 2 and rng.random() < 0.4:
        a = rng.randint(1, n - 1)
        fan = product_fan(projective_space_fan(a), projective_space_fan(n - a))
    else:
        fan = projective_space_fan(n)
    for _ in range(rng.randint(0, max_blowups)):
        candidates = [c for c in fan.cones if len(c) >= 2]
        if not candidates:
            break
        tau = rng.choice(candidates)
        v = combine([1] * len(tau), [fan.rays[i] for i in sorted(tau)], n)
        fan = star_subdivision(fan, v)
    return fan


def random_foliation(rng: random.Random, fan: Fan, generic: bool = False) -> FoliationSpace:
    """W spanned by a few rays of the fan or by short random integer vectors; generic adds g >= 1 where it fits"""
    n = fan.dim
    rank_l = rng.randint(1, n)
    if rng.random() < 0.6:
        generators = rng.sample(list(fan.rays), min(rank_l, len(fan.rays)))
    else:
        generators = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)) for _ in range(rank_l)]
        generators = [g for g in generators if not is_zero(g)] or [unit_vector(n, 0)]
    generic_dim = 0
    span = rank(generators)
    if generic and span < n - 1:
        generic_dim = rng.randint(1, n - 1 - span)
    return FoliationSpace.from_generators(fan.lattice, generators, generic_dim)


@dataclass
class AffineInstance:
    """The positive orthant in a superlattice Z^n + Zx with a rational W"""

    fan: Fan
    foliation: FoliationSpace
    x: tuple


def random_superlattice_point(rng: random.Random, n: int) -> tuple:
    return tuple(Fraction(rng.randint(1, d - 1), d) for d in (rng.choice(SMALL_DENOMINATORS) for _ in range(n)))


def random_affine_instance(rng: random.Random, n: int = 2, x: Optional[tuple] = None,
                           generic: bool = False) -> AffineInstance:
    x = x if x is not None else random_superlattice_point(rng, n)
    lattice = AmbientLattice([unit_vector(n, i) for i in range(n)] + [x])
    rays = [primitive(unit_vector(n, i), lattice) for i in range(n)]
    fan = Fan(lattice, rays, [list(range(n))])
    if rng.random() < 0.5:
        ell = rng.randint(1, n - 1) if n > 1 else 1
        generators = [unit_vector(n, i) for i in sorted(rng.sample(range(n), ell))]
    else:
        generators = [tuple(Fraction(rng.randint(0, 3)) for _ in range(n))]
        if is_zero(generators[0]):
            generators = [unit_vector(n, n - 1)]
    span = rank(generators)
    generic_dim = rng.randint(1, n - 1 - span) if generic and span < n - 1 else 0
    return AffineInstance(fan, FoliationSpace.from_generators(lattice, generators, generic_dim), x)


def random_boundary(rng: random.Random, fan: Fan, density: float = 0.3) -> TorusDivisor:
    """Effective Δ with coefficients in {0, 1/4, 1/3, 1/2}"""
    coeffs = tuple(rng.choice(BOUNDARY_COEFFICIENTS) if rng.random() < density else ZERO for _ in fan.rays)
    return TorusDivisor(fan, coeffs)


def fano_corpus(seed: int, count: int, dims=(2, 3), proper: bool = False, generic: bool = False,
                attempts: int = 20000) -> List[tuple]:
    """
    count pairs (fan, W) with −K_F ample. With proper, W ≠ N; with generic,
    W gets a generic part wherever its rational part leaves room.
    """
    rng = random.Random(seed)
    found = []
    for _ in range(attempts):
        if len(found) >= count:
            break
        n = rng.choice(dims)
        fan = random_complete_fan(rng, n)
        W = random_foliation(rng, fan, generic)
        if proper and W.is_tangent:
            continue
        try:
            if is_fano(fan, W):
                found.append((fan, W))
        except TorfolError as e:
            logger.debug(f'skipping corpus candidate: {e.message}')
    logger.info(f'fano corpus (seed {seed}): {len(found)} instances')
    return found
