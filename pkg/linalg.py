"""
Álgebra linear racional exata.

Posto, forma escalonada reduzida, núcleos e inversas passam pelo sympy; o
simplex trabalha direto em tableaux de Fraction.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """Converte int, str "p/q", Fraction ou Rational do sympy para Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError('booleans are not rational numbers')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f'cannot use {type(value).__name__} as an exact rational')


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return tuple(ZERO for _ in range(n))


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(k, a: Vector) -> Vector:
    k = to_fraction(k)
    return tuple(k * x for x in a)


def combine(coefficients: Sequence[Fraction], vectors: Sequence[Vector], n: int) -> Vector:
    """Soma dos coeficientes vezes os vetores"""
    result = [ZERO] * n
    for c, v in zip(coefficients, vectors):
        if c:
            for j in range(n):
                result[j] += c * v[j]
    return tuple(result)


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d


def integral_direction(a: Sequence[Fraction]) -> Tuple[int, ...]:
    """Menor vetor inteiro positivamente proporcional a a (a != 0)"""
    d = common_denominator(a)
    ints = [int(x * d) for x in a]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError('zero vector has no direction')
    return tuple(x // g for x in ints)


def transpose(rows: Sequence[Sequence]) -> List[Tuple]:
    return [tuple(col) for col in zip(*rows)]


def mat_vec(rows: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in rows)


def _matrix(rows: Sequence[Sequence], ncols: int) -> Matrix:
    if not rows:
        return Matrix(0, ncols, [])
    return Matrix([list(r) for r in rows])


def _from_sympy(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _matrix(rows, len(rows[0])).rank()


def row_reduce(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Forma escalonada reduzida; devolve apenas as linhas não nulas e os pivôs"""
    if not rows:
        return [], ()
    reduced, pivots = _matrix(rows, ncols).rref()
    basis = []
    for i in range(len(pivots)):
        basis.append(tuple(_from_sympy(reduced[i, j]) for j in range(ncols)))
    return basis, tuple(pivots)


def span_basis(vectors: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Base canônica (escalonada reduzida) do espaço gerado"""
    return row_reduce(vectors, ncols)[0]


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Base de {x : rows · x = 0}"""
    if not rows:
        return [unit_vector(ncols, i) for i in range(ncols)]
    return [tuple(_from_sympy(x) for x in v) for v in _matrix(rows, ncols).nullspace()]


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int) -> Optional[Vector]:
    """Uma solução particular de rows · x = rhs (variáveis livres em zero), ou None"""
    if not rows:
        return zero_vector(ncols)
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = _matrix(augmented, ncols + 1).rref()
    if ncols in pivots:
        return None
    solution = [ZERO] * ncols
    for i, col in enumerate(pivots):
        solution[col] = _from_sympy(reduced[i, ncols])
    return tuple(solution)


def inverse(rows: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """Inversa de uma matriz quadrada; ValueError se singular"""
    n = len(rows)
    inv = _matrix(rows, n).inv()
    return [tuple(_from_sympy(inv[i, j]) for j in range(n)) for i in range(n)]


def in_span(v: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> bool:
    if is_zero(v):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [v]) == rank(vectors)


def intersection_dim(first: Sequence[Vector], second: Sequence[Vector]) -> int:
    """Dimensão de span(first) ∩ span(second)"""
    return rank(first) + rank(second) - rank(list(first) + list(second))


def completing_basis(vectors: Sequence[Vector], n: int) -> List[Vector]:
    """Vetores canônicos que completam vetores independentes a uma base"""
    current = list(vectors)
    extra = []
    for i in range(n):
        if len(current) == n:
            break
        e = unit_vector(n, i)
        if not in_span(e, current):
            current.append(e)
            extra.append(e)
    return extra


@dataclass(frozen=True)
class LPResult:
    status: str
    point: Optional[Vector] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != 'infeasible'


def _pivot(tableau: List[List[Fraction]], basis: List[int], r: int, c: int) -> None:
    pivot_row = tableau[r]
    p = pivot_row[c]
    if p != 1:
        pivot_row = [v / p for v in pivot_row]
        tableau[r] = pivot_row
    for i, row in enumerate(tableau):
        if i != r:
            factor = row[c]
            if factor:
                tableau[i] = [a - factor * b for a, b in zip(row, pivot_row)]
    basis[r] = c


def _run_simplex(tableau: List[List[Fraction]], basis: List[int],
                 cost: Sequence[Fraction], allowed: int) -> str:
    # regra de Bland: menor índice que entra, menor índice básico que sai
    while True:
        basic = set(basis)
        entering = None
        for j in range(allowed):
            if j in basic:
                continue
            reduced = cost[j]
            for i, row in enumerate(tableau):
                cb = cost[basis[i]]
                if cb and row[j]:
                    reduced -= cb * row[j]
            if reduced < 0:
                entering = j
                break
        if entering is None:
            return 'optimal'
        leaving = None
        best = None
        for i, row in enumerate(tableau):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            return 'unbounded'
        _pivot(tableau, basis, leaving, entering)


def solve_lp(cost: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """
    Minimiza cost·x sobre x livre com A_ub·x <= b_ub e A_eq·x = b_eq.

    Simplex em duas fases com aritmética exata; x = p - q com p, q >= 0.
    """
    n = len(cost)
    c = [to_fraction(v) for v in cost]
    rows = [([to_fraction(v) for v in a], to_fraction(b)) for a, b in zip(A_ub, b_ub)]
    m_ub = len(rows)
    rows += [([to_fraction(v) for v in a], to_fraction(b)) for a, b in zip(A_eq, b_eq)]
    m = len(rows)

    slack_start = 2 * n
    art_start = slack_start + m_ub
    width = art_start + m

    tableau: List[List[Fraction]] = []
    for i, (a, b) in enumerate(rows):
        row = [ZERO] * (width + 1)
        for j, value in enumerate(a):
            row[j] = value
            row[n + j] = -value
        if i < m_ub:
            row[slack_start + i] = ONE
        row[width] = b
        if b < 0:
            row = [-value for value in row]
        row[art_start + i] = ONE
        tableau.append(row)
    basis = [art_start + i for i in range(m)]

    phase_one = [ZERO] * art_start + [ONE] * m
    _run_simplex(tableau, basis, phase_one, width)
    infeasibility = sum((tableau[i][width] for i, j in enumerate(basis) if j >= art_start), ZERO)
    if infeasibility > 0:
        return LPResult('infeasible')

    keep = []
    for i in range(len(tableau)):
        if basis[i] >= art_start:
            column = next((j for j in range(art_start) if tableau[i][j] != 0), None)
            if column is None:
                continue
            _pivot(tableau, basis, i, column)
        keep.append(i)
    tableau = [tableau[i] for i in keep]
    basis = [basis[i] for i in keep]

    phase_two = c + [-v for v in c] + [ZERO] * (width - 2 * n)
    if _run_simplex(tableau, basis, phase_two, art_start) == 'unbounded':
        return LPResult('unbounded')

    values = [ZERO] * width
    for i, j in enumerate(basis):
        values[j] = tableau[i][width]
    x = tuple(values[j] - values[n + j] for j in range(n))
    return LPResult('optimal', x, dot(c, x))


def find_point(num_vars: int, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
               A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> Optional[Vector]:
    """Um ponto viável do sistema, ou None"""
    result = solve_lp([ZERO] * num_vars, A_ub, b_ub, A_eq, b_eq)
    return result.point if result.status == 'optimal' else None


def maximize(cost: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    result = solve_lp([-to_fraction(v) for v in cost], A_ub, b_ub, A_eq, b_eq)
    if result.status != 'optimal':
        return result
    return LPResult('optimal', result.point, -result.value)
