"""
Cones and fans.

A fan keeps its rays in file order and its maximal cones as sets of ray
indices; every face is generated once into a face table keyed by ray-index
sets, and all orbit combinatorics are set operations on those keys.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from errors import ConeNotInFan, InvalidFan, NotInSupport, NotPrimitive
from lattice import AmbientLattice, Halfspace, is_primitive
from linalg import (
    ONE, ZERO, Vector, completing_basis, dot, find_point, inverse, is_zero, maximize,
    nullspace, rank, transpose, unit_vector, vector,
)

logger = logging.getLogger(__name__)

ConeKey = FrozenSet[int]


def cone_key(indices: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    """Canonical cone order: by number of rays, then lexicographic"""
    items = tuple(sorted(indices))
    return len(items), items


@dataclass(frozen=True)
class Cone:
    """Cone generated by primitive lattice points of N"""

    lattice: AmbientLattice
    rays: Tuple[Vector, ...]

    @cached_property
    def dim(self) -> int:
        return rank(self.rays)

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @cached_property
    def _dual_frame(self) -> List[Vector]:
        # rows i < k are the coefficient functionals of the rays; the rest
        # vanish exactly on the span of the cone
        n = self.lattice.dim
        columns = list(self.rays) + completing_basis(self.rays, n)
        return inverse(transpose(columns))

    def ray_functionals(self) -> List[Vector]:
        """f_i with f_i(r_j) = [i == j], vanishing off span(rays); simplicial cones only"""
        return self._dual_frame[:len(self.rays)]

    def coefficients(self, v: Sequence) -> Optional[Vector]:
        """Coefficients of v in the rays of a simplicial cone, None off its span"""
        if not self.rays:
            return () if is_zero(v) else None
        frame = self._dual_frame
        k = len(self.rays)
        if any(dot(row, v) != 0 for row in frame[k:]):
            return None
        return tuple(dot(row, v) for row in frame[:k])

    def contains(self, v: Sequence) -> bool:
        v = vector(v)
        if self.is_simplicial:
            coeffs = self.coefficients(v)
            return coeffs is not None and all(c >= 0 for c in coeffs)
        return self._combination(v, relint=False) is not None

    def relint_contains(self, v: Sequence) -> bool:
        v = vector(v)
        if self.is_simplicial:
            coeffs = self.coefficients(v)
            return coeffs is not None and all(c > 0 for c in coeffs)
        return self._combination(v, relint=True) is not None

    def _combination(self, v: Vector, relint: bool) -> Optional[Vector]:
        k = len(self.rays)
        if k == 0:
            return () if is_zero(v) else None
        n = self.lattice.dim
        # variables: lambda_1..lambda_k, epsilon
        A_eq = [[r[j] for r in self.rays] + [ZERO] for j in range(n)]
        A_ub = []
        b_ub = []
        for i in range(k):
            row = [ZERO] * (k + 1)
            row[i] = -ONE
            row[k] = ONE
            A_ub.append(row)
            b_ub.append(ZERO)
        A_ub.append([ZERO] * k + [ONE])
        b_ub.append(ONE)
        if not relint:
            A_ub.append([ZERO] * k + [-ONE])
            b_ub.append(ZERO)
        result = maximize([ZERO] * k + [ONE], A_ub, b_ub, A_eq, list(v))
        if result.status != 'optimal':
            return None
        if relint and result.value <= 0:
            return None
        return result.point[:k]

    def is_strongly_convex(self) -> bool:
        if self.is_simplicial:
            return True
        n = self.lattice.dim
        return find_point(n, [[-x for x in r] for r in self.rays], [-ONE] * len(self.rays)) is not None

    @cached_property
    def _face_functionals(self) -> Dict[ConeKey, Vector]:
        """Faces as local index sets, each with a functional >= 0 on the cone vanishing on it"""
        k = len(self.rays)
        n = self.lattice.dim
        faces = {}
        if self.is_simplicial:
            frame = self._dual_frame
            for size in range(k + 1):
                for subset in itertools.combinations(range(k), size):
                    outside = [i for i in range(k) if i not in subset]
                    functional = tuple(sum((frame[i][j] for i in outside), ZERO) for j in range(n))
                    faces[frozenset(subset)] = functional
            return faces
        for size in range(k + 1):
            for subset in itertools.combinations(range(k), size):
                A_eq = [self.rays[i] for i in subset]
                outside = [self.rays[i] for i in range(k) if i not in subset]
                point = find_point(n, [[-x for x in r] for r in outside], [-ONE] * len(outside),
                                   A_eq, [ZERO] * len(A_eq))
                if point is not None:
                    faces[frozenset(subset)] = point
        return faces

    def face_index_sets(self) -> List[ConeKey]:
        return sorted(self._face_functionals, key=cone_key)

    def face(self, subset: Iterable[int]) -> 'Cone':
        return Cone(self.lattice, tuple(self.rays[i] for i in sorted(subset)))

    def facets(self) -> List[ConeKey]:
        return [f for f in self.face_index_sets() if rank([self.rays[i] for i in f]) == self.dim - 1]

    def halfspaces(self) -> List[Halfspace]:
        """Inequalities cutting out the cone in Q^n"""
        n = self.lattice.dim
        result = []
        equations = nullspace(self.rays, n) if self.rays else [unit_vector(n, i) for i in range(n)]
        for equation in equations:
            result.append(Halfspace(equation, ZERO))
            result.append(Halfspace(tuple(-x for x in equation), ZERO))
        for facet in self.facets():
            functional = self._face_functionals[facet]
            result.append(Halfspace(tuple(-x for x in functional), ZERO))
        return result

    def meets_subspace(self, basis: Sequence[Vector], relint: bool = False) -> Optional[Vector]:
        """
        A nonzero point of the cone (of its relative interior when relint)
        lying in span_Q(basis), or None.
        """
        if not basis or not self.rays:
            return None
        k = len(self.rays)
        if len(basis) == 1 and self.is_simplicial:
            coeffs = self.coefficients(basis[0])
            if coeffs is None:
                return None
            for sign in (1, -1):
                signed = [sign * c for c in coeffs]
                if relint and all(c > 0 for c in signed):
                    return tuple(sign * x for x in basis[0])
                if not relint and all(c >= 0 for c in signed) and any(c > 0 for c in signed):
                    return tuple(sign * x for x in basis[0])
            return None
        n = self.lattice.dim
        p = len(basis)
        # variables: lambda (k), mu (p); sum lambda r - sum mu w = 0
        A_eq = [[r[j] for r in self.rays] + [-w[j] for w in basis] for j in range(n)]
        A_ub = []
        b_ub = []
        if relint:
            for i in range(k):
                row = [ZERO] * (k + p)
                row[i] = -ONE
                A_ub.append(row)
                b_ub.append(-ONE)
        else:
            for i in range(k):
                row = [ZERO] * (k + p)
                row[i] = -ONE
                A_ub.append(row)
                b_ub.append(ZERO)
            A_ub.append([-ONE] * k + [ZERO] * p)
            b_ub.append(-ONE)
        point = find_point(k + p, A_ub, b_ub, A_eq, [ZERO] * n)
        if point is None:
            return None
        result = [ZERO] * n
        for c, r in zip(point[:k], self.rays):
            for j in range(n):
                result[j] += c * r[j]
        return tuple(result)


def faces(sigma: Cone) -> List[Cone]:
    """All faces of a cone, {0} and the cone itself included"""
    return [sigma.face(f) for f in sigma.face_index_sets()]


class Fan:
    """
    Fan given by rays (in file order) and maximal cones as ray-index sets.

    Faces of the maximal cones are generated into a face table; validation
    checks the fan axioms and raises InvalidFan naming the violated one.
    """

    def __init__(self, lattice: AmbientLattice, rays: Sequence[Sequence],
                 max_cones: Sequence[Iterable[int]], validate: bool = True):
        self.lattice = lattice
        self.rays: Tuple[Vector, ...] = tuple(vector(r) for r in rays)
        listed = [frozenset(int(i) for i in c) for c in max_cones]
        if not listed:
            listed = [frozenset()]
        self._listed = listed
        self._cone_cache: Dict[ConeKey, Cone] = {}
        self._ray_index = {r: i for i, r in enumerate(self.rays)}

        if validate:
            _check_rays(self)
        self.max_cones: Tuple[ConeKey, ...] = tuple(sorted(
            {c for c in listed if not any(c < other for other in listed)}, key=cone_key))
        if validate:
            _check_cones(self)

        self._table: Dict[ConeKey, int] = {}
        for sigma in self.max_cones:
            cone = self.cone(sigma)
            local = sorted(sigma)
            for face in cone.face_index_sets():
                key = frozenset(local[i] for i in face)
                if key not in self._table:
                    self._table[key] = rank([self.rays[i] for i in key])
        if validate:
            _check_face_closure(self)
            _check_intersections(self)
        logger.debug(f'fan with {len(self.rays)} rays, {len(self.max_cones)} maximal cones, '
                     f'{len(self._table)} cones')

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def cones(self) -> List[ConeKey]:
        return sorted(self._table, key=cone_key)

    def cone(self, indices: Iterable[int]) -> Cone:
        key = frozenset(indices)
        if key not in self._cone_cache:
            self._cone_cache[key] = Cone(self.lattice, tuple(self.rays[i] for i in sorted(key)))
        return self._cone_cache[key]

    def cone_dim(self, indices: Iterable[int]) -> int:
        key = frozenset(indices)
        if key in self._table:
            return self._table[key]
        return rank([self.rays[i] for i in key])

    def __contains__(self, indices) -> bool:
        return frozenset(indices) in self._table

    def index_set(self, cone: Union[Cone, Iterable[int]]) -> ConeKey:
        """Ray-index set of a cone of the fan; ConeNotInFan otherwise"""
        if isinstance(cone, Cone):
            try:
                key = frozenset(self._ray_index[r] for r in cone.rays)
            except KeyError:
                raise ConeNotInFan('the cone uses a vector that is not a ray of the fan')
        else:
            key = frozenset(int(i) for i in cone)
        if key not in self._table:
            raise ConeNotInFan(f'cone {sorted(key)} is not in the fan')
        return key

    def ray_index(self, v: Sequence) -> Optional[int]:
        return self._ray_index.get(vector(v))

    def faces_of(self, indices: Iterable[int]) -> List[ConeKey]:
        key = frozenset(indices)
        return [c for c in self.cones if c <= key]

    def cones_containing(self, indices: Iterable[int]) -> List[ConeKey]:
        key = frozenset(indices)
        return [c for c in self.cones if key <= c]

    def containing_max_cone(self, v: Sequence) -> Optional[ConeKey]:
        v = vector(v)
        for sigma in self.max_cones:
            if self.cone(sigma).contains(v):
                return sigma
        return None

    def __repr__(self) -> str:
        return f'Fan(rays={len(self.rays)}, max_cones={[sorted(c) for c in self.max_cones]})'


def _check_rays(fan: Fan) -> None:
    n = fan.dim
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise InvalidFan('ray-dimension', f'ray {i} has length {len(r)}, expected {n}')
        if is_zero(r):
            raise InvalidFan('ray-nonzero', f'ray {i} is the zero vector')
        if not fan.lattice.contains(r):
            raise InvalidFan('ray-in-lattice', f'ray {i} is not a point of N')
        if not is_primitive(r, fan.lattice):
            raise InvalidFan('ray-primitive', f'ray {i} is not primitive in N')
    seen = {}
    for i, r in enumerate(fan.rays):
        if r in seen:
            raise InvalidFan('rays-distinct', f'rays {seen[r]} and {i} coincide', [{seen[r], i}])
        seen[r] = i


def _check_cones(fan: Fan) -> None:
    used = set()
    for c in fan._listed:
        bad = [i for i in c if i < 0 or i >= len(fan.rays)]
        if bad:
            raise InvalidFan('cone-index', f'cone {sorted(c)} uses unknown ray indices {bad}', [c])
        used |= c
    unused = sorted(set(range(len(fan.rays))) - used)
    if unused:
        raise InvalidFan('ray-in-cone', f'rays {unused} belong to no cone')
    for sigma in fan.max_cones:
        cone = fan.cone(sigma)
        if not cone.is_strongly_convex():
            raise InvalidFan('strong-convexity', f'cone {sorted(sigma)} contains a line', [sigma])
        if not cone.is_simplicial:
            extremal = {next(iter(f)) for f in cone.face_index_sets() if len(f) == 1}
            if len(extremal) != len(cone.rays):
                raise InvalidFan('ray-extremal',
                                 f'cone {sorted(sigma)} lists a generator that is not an extremal ray',
                                 [sigma])


def _check_face_closure(fan: Fan) -> None:
    for c in fan._listed:
        if c not in fan._table:
            raise InvalidFan('face-closure', f'cone {sorted(c)} is not a face of a maximal cone', [c])


def _separated(fan: Fan, first: ConeKey, second: ConeKey) -> bool:
    common = first & second
    only_first = sorted(first - common)
    only_second = sorted(second - common)
    rays = fan.rays
    # try the coefficient functionals of a simplicial side before solving an LP
    for a, b in ((first, only_second), (second, only_first)):
        cone = fan.cone(a)
        if cone.is_simplicial and b:
            local = sorted(a)
            frame = cone.ray_functionals()
            outside = [local.index(i) for i in a - common]
            functional = [sum((frame[i][j] for i in outside), ZERO) for j in range(fan.dim)]
            if all(dot(functional, rays[i]) < 0 for i in b):
                return True
    n = fan.dim
    A_ub = [[-x for x in rays[i]] for i in only_first] + [list(rays[i]) for i in only_second]
    b_ub = [-ONE] * (len(only_first) + len(only_second))
    A_eq = [rays[i] for i in common]
    return find_point(n, A_ub, b_ub, A_eq, [ZERO] * len(A_eq)) is not None


def _check_intersections(fan: Fan) -> None:
    for first, second in itertools.combinations(fan.max_cones, 2):
        if not _separated(fan, first, second):
            raise InvalidFan('cone-intersection',
                             f'cones {sorted(first)} and {sorted(second)} do not meet in a common face',
                             [first, second])


def validate_fan(fan: Fan) -> List[str]:
    """Runs every axiom check; returns the diagnostics, empty when valid"""
    diagnostics = []
    for check in (_check_rays, _check_cones, _check_face_closure, _check_intersections):
        try:
            check(fan)
        except InvalidFan as e:
            diagnostics.append(e.message)
            break
    return diagnostics


def is_simplicial(fan: Fan) -> bool:
    return all(len(c) == d for c, d in fan._table.items())


def is_complete(fan: Fan) -> bool:
    """Facet pairing: every (n-1)-cone lies on exactly two n-cones, and the n-cones are connected"""
    n = fan.dim
    if any(fan.cone_dim(sigma) != n for sigma in fan.max_cones):
        return False
    full = list(fan.max_cones)
    if not full or full == [frozenset()]:
        return False
    owners: Dict[ConeKey, List[ConeKey]] = {}
    for sigma in full:
        for facet in fan.cone(sigma).facets():
            local = sorted(sigma)
            owners.setdefault(frozenset(local[i] for i in facet), []).append(sigma)
    if any(len(v) != 2 for v in owners.values()):
        return False
    neighbours: Dict[ConeKey, List[ConeKey]] = {sigma: [] for sigma in full}
    for first, second in owners.values():
        neighbours[first].append(second)
        neighbours[second].append(first)
    seen = {full[0]}
    queue = deque([full[0]])
    while queue:
        current = queue.popleft()
        for other in neighbours[current]:
            if other not in seen:
                seen.add(other)
                queue.append(other)
    return len(seen) == len(full)


def star_subdivision(fan: Fan, v: Sequence) -> Fan:
    """Star subdivision of the fan at the primitive vector v"""
    try:
        v = vector(v)
    except (TypeError, ValueError):
        raise NotPrimitive(f'{v!r} is not a rational vector')
    if len(v) != fan.dim:
        raise NotPrimitive(f'{v!r} has the wrong length')
    if is_zero(v) or not is_primitive(v, fan.lattice):
        raise NotPrimitive(f'{[str(x) for x in v]} is not primitive in N')
    if fan.ray_index(v) is not None:
        return fan
    if fan.containing_max_cone(v) is None:
        raise NotInSupport(f'{[str(x) for x in v]} lies outside the support')

    new_index = len(fan.rays)
    new_cones = set()
    for sigma in fan.max_cones:
        cone = fan.cone(sigma)
        if not cone.contains(v):
            new_cones.add(sigma)
            continue
        local = sorted(sigma)
        for facet in cone.facets():
            key = frozenset(local[i] for i in facet)
            if not fan.cone(key).contains(v):
                new_cones.add(key | {new_index})
    logger.debug(f'star subdivision at {[str(x) for x in v]}: {len(new_cones)} maximal cones')
    return Fan(fan.lattice, fan.rays + (v,), sorted(new_cones, key=cone_key), validate=False)


def primitive_collections(fan: Fan) -> List[ConeKey]:
    """Subsets of rays outside every cone whose proper subsets all lie in some cone"""
    def in_some_cone(subset: ConeKey) -> bool:
        return any(subset <= sigma for sigma in fan.max_cones)

    largest = max(len(sigma) for sigma in fan.max_cones) + 1
    result = []
    indices = range(len(fan.rays))
    for size in range(1, min(largest, len(fan.rays)) + 1):
        for subset in itertools.combinations(indices, size):
            key = frozenset(subset)
            if in_some_cone(key):
                continue
            if all(in_some_cone(key - {i}) for i in key):
                result.append(key)
    return result


def locate_indices(fan: Fan, v: Sequence) -> ConeKey:
    v = vector(v)
    sigma = fan.containing_max_cone(v)
    if sigma is None:
        raise NotInSupport(f'{[str(x) for x in v]} lies outside the support')
    cone = fan.cone(sigma)
    local = sorted(sigma)
    if cone.is_simplicial:
        coeffs = cone.coefficients(v)
        return frozenset(local[i] for i, c in enumerate(coeffs) if c > 0)
    for face in fan.faces_of(sigma):
        if fan.cone(face).contains(v):
            return face
    raise NotInSupport('no face of the containing cone holds the vector')


def locate(fan: Fan, v: Sequence) -> Cone:
    """The cone of the fan containing v in its relative interior"""
    return fan.cone(locate_indices(fan, v))


def closures_intersect(fan: Fan, first: Union[Cone, Iterable[int]], second: Union[Cone, Iterable[int]]) -> bool:
    """V_first ∩ V_second is nonempty iff both cones are faces of one cone"""
    a = fan.index_set(first)
    b = fan.index_set(second)
    joined = a | b
    return any(joined <= sigma for sigma in fan.max_cones)
