#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Testes de cones e leques: axiomas, completude, subdivisão estrelar,
coleções primitivas e localização de vetores.
"""

import logging
import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ConeNotInFan, InvalidFan, NotInSupport, NotPrimitive
from fan import (
    Cone, Fan, closures_intersect, faces, is_complete, is_simplicial, locate, locate_indices,
    primitive_collections, star_subdivision, validate_fan,
)
from lattice import AmbientLattice
from random_corpus import product_fan, projective_space_fan

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Z2 = AmbientLattice.standard(2)
Z3 = AmbientLattice.standard(3)
SQUARE_RAYS = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]


def plane():
    return Fan(Z2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def test_projective_plane_is_complete_and_simplicial():
    fan = plane()
    assert is_simplicial(fan)
    assert is_complete(fan)
    assert len(fan.cones) == 7
    assert fan.cones[0] == frozenset()
    assert fan.max_cones == (frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2}))
    assert validate_fan(fan) == []


def test_orthant_is_not_complete():
    fan = Fan(Z2, [(1, 0), (0, 1)], [[0, 1]])
    assert is_simplicial(fan)
    assert not is_complete(fan)


def test_non_simplicial_cone_faces():
    """Cone sobre um quadrado: quatro facetas, diagonais não são faces"""
    fan = Fan(Z3, SQUARE_RAYS, [[0, 1, 2, 3]])
    assert not is_simplicial(fan)
    cone = fan.cone([0, 1, 2, 3])
    assert len(cone.facets()) == 4
    assert frozenset({0, 2}) not in fan
    assert frozenset({0, 1}) in fan
    assert cone.contains((0, 0, 1))
    assert cone.relint_contains((0, 0, 1))
    assert not cone.relint_contains((1, 0, 1))


def test_cone_membership_and_faces():
    cone = Cone(Z2, ((F(1), F(0)), (F(1), F(2))))
    assert cone.is_simplicial
    assert cone.contains((2, 1))
    assert not cone.contains((0, 1))
    assert cone.coefficients((2, 2)) == (F(1), F(1))
    assert len(faces(cone)) == 4
    assert all(h.holds((2, 1)) for h in cone.halfspaces())


@pytest.mark.parametrize('rays, cones, axiom', [
    ([(2, 0), (0, 1)], [[0, 1]], 'ray-primitive'),
    ([(1, 0), (1, 0)], [[0], [1]], 'rays-distinct'),
    ([(0, 0), (0, 1)], [[0, 1]], 'ray-nonzero'),
    ([(1, 0), (0, 1)], [[0, 5]], 'cone-index'),
    ([(1, 0), (0, 1), (-1, 0)], [[0, 1]], 'ray-in-cone'),
    ([(1, 0), (0, 1), (1, 2)], [[0, 1], [0, 2]], 'cone-intersection'),
])
def test_invalid_fans_name_the_axiom(rays, cones, axiom):
    with pytest.raises(InvalidFan) as info:
        Fan(Z2, rays, cones)
    assert info.value.axiom == axiom
    assert info.value.to_dict()['axiom'] == axiom


def test_line_is_not_strongly_convex():
    with pytest.raises(InvalidFan) as info:
        Fan(AmbientLattice.standard(1), [(1,), (-1,)], [[0, 1]])
    assert info.value.axiom == 'strong-convexity'


def test_diagonal_of_square_breaks_face_closure():
    """Tabela de faces corrompida: a diagonal listada não é face"""
    with pytest.raises(InvalidFan) as info:
        Fan(Z3, SQUARE_RAYS, [[0, 1, 2, 3], [0, 2]])
    assert info.value.axiom == 'face-closure'


def test_fan_in_superlattice():
    N = AmbientLattice([[1, 0], [0, 1], [F(1, 5), F(1, 5)]])
    fan = Fan(N, [(1, 0), (0, 1)], [[0, 1]])
    assert validate_fan(fan) == []
    with pytest.raises(InvalidFan) as info:
        Fan(N, [(1, 1), (0, 1)], [[0, 1]])
    assert info.value.axiom == 'ray-primitive'


def test_primitive_collections():
    assert primitive_collections(plane()) == [frozenset({0, 1, 2})]
    square = product_fan(projective_space_fan(1), projective_space_fan(1))
    assert sorted(sorted(c) for c in primitive_collections(square)) == [[0, 1], [2, 3]]


def test_star_subdivision_of_plane():
    fan = star_subdivision(plane(), (1, 1))
    assert len(fan.rays) == 4
    assert fan.rays[3] == (F(1), F(1))
    assert len(fan.max_cones) == 4
    assert is_complete(fan)
    assert is_simplicial(fan)
    assert validate_fan(fan) == []
    assert star_subdivision(fan, (1, 1)) is fan


def test_star_subdivision_errors():
    with pytest.raises(NotPrimitive):
        star_subdivision(plane(), (2, 2))
    orthant = Fan(Z2, [(1, 0), (0, 1)], [[0, 1]])
    with pytest.raises(NotInSupport):
        star_subdivision(orthant, (-1, 0))


def test_locate():
    fan = plane()
    assert locate_indices(fan, (1, 1)) == frozenset({0, 1})
    assert locate_indices(fan, (3, 0)) == frozenset({0})
    assert locate_indices(fan, (0, 0)) == frozenset()
    assert locate(fan, (-2, -1)).rays == ((F(0), F(1)), (F(-1), F(-1)))
    orthant = Fan(Z2, [(1, 0), (0, 1)], [[0, 1]])
    with pytest.raises(NotInSupport):
        locate_indices(orthant, (-1, 0))


def test_closures_intersect():
    square = product_fan(projective_space_fan(1), projective_space_fan(1))
    assert closures_intersect(square, [0], [2])
    assert not closures_intersect(square, [0], [1])
    assert closures_intersect(plane(), [0], [1])


def test_cone_lookup():
    fan = plane()
    assert fan.index_set([1, 0]) == frozenset({0, 1})
    assert fan.cones_containing([0]) == [frozenset({0}), frozenset({0, 1}), frozenset({0, 2})]
    assert fan.faces_of([0, 1]) == [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    with pytest.raises(ConeNotInFan):
        fan.index_set([0, 1, 2])
    assert fan.ray_index((0, 1)) == 1
    assert fan.ray_index((1, 1)) is None


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
