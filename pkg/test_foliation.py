#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Testes de folheações tóricas: invariância, K_F, pares dicríticos e
singulares, lugares e o divisor de discrepância zero.
"""

import logging
import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from catalog import build_example
from divisor import support_function
from errors import ConsistencyError, PreconditionViolated, RequiresSimplicial
from fan import Fan, is_complete
from foliation import (
    FoliationSpace, check_generic_intersection_dim, dicritical_locus, find_zero_ld_divisor,
    foliation_canonical_divisor, generic_intersection_dim, is_dicritical_pair, is_fano, is_singular_pair,
    ray_is_invariant, singular_locus, substituted_intersection_dims, verify_minimal_singular_cones,
)
from lattice import AmbientLattice
from validators import build_instance, load_instance_document

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Z3 = AmbientLattice.standard(3)


def catalog_instance(name, **overrides):
    return build_instance(load_instance_document(build_example(name, overrides)))


def keys(*cones):
    return [frozenset(c) for c in cones]


def test_foliation_space_basics():
    W = FoliationSpace.from_generators(Z3, [(2, 0, 1), (0, 2, 1)])
    assert W.rank == 2
    assert W.is_algebraic
    assert not W.is_tangent
    assert W.contains((1, -1, 0))
    assert W.contains((-1, -1, -1))
    assert not W.contains((1, 0, 0))
    assert W.iota((2, 0, 1)) == 1
    equations = W.equations()
    assert len(equations) == 1
    assert all(sum(a * b for a, b in zip(equations[0], g)) == 0 for g in W.rational_part)
    assert FoliationSpace.tangent(Z3).is_tangent


def test_foliation_space_rank_checks():
    with pytest.raises(PreconditionViolated):
        FoliationSpace(Z3, Z3.basis, 1)
    with pytest.raises(PreconditionViolated):
        FoliationSpace(Z3, ((F(1), F(0), F(0)),), 2)
    W = FoliationSpace(Z3, ((F(1), F(0), F(0)),), 1)
    assert W.rank == 2
    assert not W.is_algebraic


def test_canonical_divisor_counts_rays_in_w():
    instance = catalog_instance('p3-w2021')
    fan, W = instance.fan, instance.foliation
    assert [ray_is_invariant(r, W) for r in fan.rays] == [True, True, True, False]
    assert foliation_canonical_divisor(fan, W).coeffs == (0, 0, 0, -1)


def test_p3_wa_is_fano():
    instance = catalog_instance('p3-wa')
    assert instance.foliation.generic_dim == 1
    assert is_fano(instance.fan, instance.foliation)


@pytest.mark.parametrize('s', [1, 3])
def test_nonfano_threefold_foliation_is_fano(s):
    instance = catalog_instance('nonfano-s', s=s)
    assert is_fano(instance.fan, instance.foliation)


def test_p4_dicritical_locus_is_not_closed():
    instance = catalog_instance('p4-pi')
    fan, W = instance.fan, instance.foliation
    assert is_dicritical_pair(fan, [1, 2, 3], W)
    assert not is_dicritical_pair(fan, [0, 1, 2, 3], W)
    report = dicritical_locus(fan, W)
    assert report.stratum_kind == 'orbit'
    assert frozenset({1, 2, 3}) in report.cones
    assert not report.is_closed
    assert report.model_dependent


def test_p3_w2021_dicritical_locus():
    """Cinco cones dicríticos; o lugar é V_13 ∪ V_23"""
    instance = catalog_instance('p3-w2021')
    fan, W = instance.fan, instance.foliation
    report = dicritical_locus(fan, W)
    assert report.cones == keys({0, 2}, {1, 2}, {0, 1, 2}, {0, 2, 3}, {1, 2, 3})
    assert report.minimal_cones == keys({0, 2}, {1, 2})
    assert report.is_connected
    assert report.is_closed
    assert len(report.components) == 1
    assert report.joins[0].joined == frozenset({0, 1, 2})
    assert report.joins[0].flagged
    assert not report.model_dependent


def test_p3_w2021_singular_locus():
    instance = catalog_instance('p3-w2021')
    fan, W = instance.fan, instance.foliation
    report = singular_locus(fan, W)
    assert report.cones == keys({0, 1}, {0, 2}, {1, 2}, {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3})
    assert report.minimal_cones == keys({0, 1}, {0, 2}, {1, 2})
    assert report.is_connected
    assert is_singular_pair(fan, [0, 1], W)
    assert not is_singular_pair(fan, [0, 3], W)
    assert not is_singular_pair(fan, [3], W)


def test_minimal_singular_cones_vanish_for_fano_foliation():
    instance = catalog_instance('p3-w2021')
    checks = verify_minimal_singular_cones(instance.fan, instance.foliation)
    assert set(checks) == set(keys({0, 1}, {0, 2}, {1, 2}))
    assert all(checks.values())


def test_empty_locus_is_connected():
    instance = catalog_instance('p3-w2021')
    W = FoliationSpace.tangent(instance.fan.lattice)
    report = dicritical_locus(instance.fan, W)
    assert report.cones == []
    assert report.is_connected
    assert report.components == []


def test_singular_locus_needs_simplicial_fan():
    fan = Fan(Z3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [[0, 1, 2, 3]])
    W = FoliationSpace.from_generators(Z3, [(0, 0, 1)])
    with pytest.raises(RequiresSimplicial):
        singular_locus(fan, W)
    # dicritical pairs need no simpliciality
    assert is_dicritical_pair(fan, [0, 1, 2, 3], W)


def test_generic_intersection_dimension():
    W = FoliationSpace(Z3, ((F(1), F(0), F(0)),), 1)
    assert generic_intersection_dim(W, [(F(1), F(0), F(0))]) == 1
    assert generic_intersection_dim(W, [(F(0), F(1), F(0))]) == 0
    assert generic_intersection_dim(W, [(F(0), F(1), F(0)), (F(0), F(0), F(1))]) == 1
    assert generic_intersection_dim(W, list(Z3.basis)) == 2


@pytest.mark.parametrize('name', ['p3-wa', 'p4-pi'])
def test_generic_dimension_matches_substitution(name):
    """A fórmula de posição genérica é o mínimo sobre partes genéricas racionais sorteadas"""
    instance = catalog_instance(name)
    fan, W = instance.fan, instance.foliation
    assert W.generic_dim == 1
    for key in fan.cones:
        if not key:
            continue
        rays = fan.cone(key).rays
        expected = generic_intersection_dim(W, rays)
        observed = list(substituted_intersection_dims(W, rays))
        assert observed
        assert min(observed) == expected
        assert check_generic_intersection_dim(W, rays) == expected


def test_generic_dimension_mismatch_is_reported():
    instance = catalog_instance('p4-pi')
    W = instance.foliation
    hyperplane = [(F(0), F(1), F(0), F(0)), (F(0), F(0), F(1), F(0)), (F(0), F(0), F(0), F(1))]
    assert generic_intersection_dim(W, hyperplane) == 2
    with pytest.raises(ConsistencyError):
        check_generic_intersection_dim(W, hyperplane, expected=3)
    everything = list(instance.fan.lattice.basis)
    assert generic_intersection_dim(W, everything) == 3
    with pytest.raises(ConsistencyError):
        check_generic_intersection_dim(W, everything, expected=2)


def test_find_zero_ld_divisor_on_p3_w2021():
    instance = catalog_instance('p3-w2021')
    fan, W = instance.fan, instance.foliation
    v0, subdivided = find_zero_ld_divisor(fan, W)
    assert v0 == (F(1), F(1), F(1))
    assert W.contains(v0)
    assert support_function(-foliation_canonical_divisor(fan, W))(v0) == 0
    assert subdivided.ray_index(v0) == 4
    assert is_complete(subdivided)
    assert not ray_is_invariant(v0, W)


def test_find_zero_ld_divisor_preconditions():
    instance = catalog_instance('p3-w2021')
    with pytest.raises(PreconditionViolated) as info:
        find_zero_ld_divisor(instance.fan, FoliationSpace.tangent(instance.fan.lattice))
    assert info.value.hypothesis == 'tangent'

    # nenhum raio em W: K_F = 0 não é anti-amplo
    line = FoliationSpace.from_generators(instance.fan.lattice, [(1, 2, 3)])
    assert not is_fano(instance.fan, line)
    with pytest.raises(PreconditionViolated) as info:
        find_zero_ld_divisor(instance.fan, line)
    assert info.value.hypothesis == 'fano'


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
