"""
Catálogo de instâncias embutidas.

Cada família monta o documento da instância a partir de poucos parâmetros
inteiros ou racionais; os documentos são os mesmos arquivos que os testes
carregam.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from divisor import TorusDivisor
from errors import UnknownExample
from fan import Fan
from foliation import FoliationSpace
from lctset import acc_family, density_family
from linalg import to_fraction

logger = logging.getLogger(__name__)


def _text(vectors) -> List[List[str]]:
    return [[str(x) for x in v] for v in vectors]


def instance_document(fan: Fan, W: Optional[FoliationSpace], boundary: Optional[TorusDivisor] = None,
                      params: Optional[Dict[str, str]] = None, name: Optional[str] = None,
                      description: Optional[str] = None, family: Optional[str] = None,
                      family_params: Optional[Dict[str, str]] = None) -> dict:
    """Serializa leque, W e Δ no formato do arquivo de instância"""
    document = {
        'name': name,
        'description': description,
        'family': family,
        'family_params': dict(family_params or {}),
        'lattice_basis': None if fan.lattice.is_standard() else _text(fan.lattice.basis),
        'rays': _text(fan.rays),
        'max_cones': [sorted(c) for c in fan.max_cones],
        'foliation': W.to_dict() if W is not None else None,
        'delta': boundary.to_dict() if boundary is not None else {'coeffs': {}},
        'params': dict(params or {})
    }
    return {key: value for key, value in document.items() if value is not None}


def _projective_space(n: int) -> Dict[str, list]:
    rays = [[1 if i == j else 0 for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [[i for i in range(n + 1) if i != skip] for skip in range(n, -1, -1)]
    return {'rays': [[str(x) for x in r] for r in rays], 'max_cones': sorted(cones)}


def _p3_wa(params: Dict[str, Fraction]) -> dict:
    return {
        'name': 'p3-wa',
        'description': ('P^3 with W_a = C(e1 + a e2 + a^2 e3) + C e1, a irrational: '
                        'W ∩ N = Z e1, one generic direction'),
        **_projective_space(3),
        'foliation': {'lattice_generators': [['1', '0', '0']], 'generic_dim': 1},
        'params': {'t': '1', 'delta_lc': '1/10', 't1': '1/2', 't2': '1/2'}
    }


def _nonfano_s(params: Dict[str, Fraction]) -> dict:
    s = int(params.get('s', 1))
    if s < 1:
        raise UnknownExample(f'nonfano-s needs s >= 1, got {s}', 'pass --s 1 or larger')
    rays = [[0, s, 1], [0, s, -1], [-1, 1, 0], [1, 0, 0], [0, -1, 0]]
    return {
        'name': f'nonfano-s{s}',
        'description': 'smooth projective threefold, not Fano, carrying a Fano foliation with W = C e2 + C e3',
        'family': 'nonfano-s',
        'family_params': {'s': str(s)},
        'rays': [[str(x) for x in r] for r in rays],
        'max_cones': [[0, 2, 3], [1, 2, 3], [0, 2, 4], [0, 3, 4], [1, 2, 4], [1, 3, 4]],
        'foliation': {'lattice_generators': [['0', '1', '0'], ['0', '0', '1']], 'generic_dim': 0},
        'params': {'t': '1', 'delta_lc': '1/10', 't1': '1/2', 't2': '1/2'}
    }


def _p4_pi(params: Dict[str, Fraction]) -> dict:
    return {
        'name': 'p4-pi',
        'description': ('P^4 with W ∩ N spanned by e2 and e3 + e4 plus one generic direction; '
                        'dicritical locus not closed'),
        **_projective_space(4),
        'foliation': {'lattice_generators': [['0', '1', '0', '0'], ['0', '0', '1', '1']], 'generic_dim': 1},
        'params': {'t': '1', 'delta_lc': '1/10', 't1': '1/2', 't2': '1/2'}
    }


def _p3_w2021(params: Dict[str, Fraction]) -> dict:
    return {
        'name': 'p3-w2021',
        'description': 'P^3 with W = span((2,0,1), (0,2,1)); dicritical locus is two curves',
        **_projective_space(3),
        'foliation': {'lattice_generators': [['2', '0', '1'], ['0', '2', '1']], 'generic_dim': 0},
        'params': {'t': '1', 'delta_lc': '1/10', 't1': '1/2', 't2': '1/2'}
    }


def _acc_n(params: Dict[str, Fraction]) -> dict:
    n = int(params.get('n', 6))
    family = acc_family(n)
    return instance_document(
        family.fan, family.foliation,
        params={'t': '1/2', 'delta_lc': '1/2'},
        name=f'acc-{n}',
        description='N = Z^2 + Z(1/n, 1/n), first quadrant, W = C e2',
        family='acc-n', family_params={'n': str(n)})


def _density(params: Dict[str, Fraction]) -> dict:
    delta = to_fraction(params.get('delta', Fraction(1, 2)))
    s = int(params.get('s', 5))
    k = int(params.get('k', 2))
    dim = int(params.get('dim', 2))
    r = int(params.get('r', 1))
    family = density_family(delta, s, k, dim, r)
    return instance_document(
        family.fan, family.foliation,
        params={'t': '0', 'delta_lc': str(delta)},
        name=f'density-s{s}-k{k}',
        description=f'density family: δ-lc exactly for t in [0, {family.expected}]',
        family='density',
        family_params={'delta': str(delta), 's': str(s), 'k': str(k), 'dim': str(dim), 'r': str(r)})


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    parameters: Dict[str, str]
    builder: Callable[[Dict[str, Fraction]], dict]


CATALOG: Dict[str, CatalogEntry] = {
    entry.name: entry for entry in [
        CatalogEntry('p3-wa', 'P^3 with a non-algebraic rank-2 Fano foliation', {}, _p3_wa),
        CatalogEntry('nonfano-s', 'non-Fano threefold with ample −K_F', {'s': '1'}, _nonfano_s),
        CatalogEntry('p4-pi', 'P^4 with a dicritical locus that is not closed', {}, _p4_pi),
        CatalogEntry('p3-w2021', 'P^3 with dicritical locus two meeting curves', {}, _p3_w2021),
        CatalogEntry('acc-n', 'affine ACC example with interval [(n−4)/(n−2), 1]', {'n': '6'}, _acc_n),
        CatalogEntry('density', 'affine density family with upper endpoint b_s',
                     {'delta': '1/2', 's': '5', 'k': '2', 'dim': '2', 'r': '1'}, _density),
    ]
}


def list_examples() -> List[Dict[str, object]]:
    return [{'name': e.name, 'summary': e.summary, 'parameters': dict(e.parameters)} for e in CATALOG.values()]


def build_example(name: str, overrides: Optional[Dict[str, object]] = None) -> dict:
    """Documento da instância do catálogo com os parâmetros informados"""
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownExample(f'no builtin example named "{name}"')
    params = {key: to_fraction(value) for key, value in entry.parameters.items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in entry.parameters:
            logger.warning(f'parameter {key} does not apply to {name}; ignored')
            continue
        params[key] = to_fraction(value)
    logger.debug(f'building example {name} with {params}')
    return entry.builder(params)
