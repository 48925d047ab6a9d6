#!/usr/bin/env python3
"""
Linha de comando do torfol.

Cada comando lê uma instância (arquivo JSON ou nome do catálogo), roda a
operação correspondente e escreve um relatório JSON em stdout. Códigos de
saída: 0 a propriedade vale, 1 refutada com testemunha, 2 não computável.
"""

import csv
import io
import json
import logging
from fractions import Fraction
from typing import Optional

import click
from dotenv import find_dotenv, load_dotenv

# .env do diretório atual antes de config ler o ambiente
load_dotenv(find_dotenv(usecwd=True))

from adjoint import AdjointStructure, boundedness_certificate, closed_form_lower_lct, is_delta_lc, lct_interval
from catalog import build_example, list_examples
from config import get_config, validate_and_setup_config
from divisor import ampleness_table, canonical_divisor, support_function, zero_cone
from errors import InvalidFan, PreconditionViolated, RequiresSimplicial, TorfolError
from fan import is_complete, is_simplicial
from foliation import dicritical_locus, foliation_canonical_divisor, singular_locus, verify_minimal_singular_cones
from lctset import certify_lower_lct, density_sweep
from schemas import rational_text
from validators import CommandOutcome, Instance, emit_report, validate_instance

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['s', 'k', 'b_s', 'b_s_decimal', 'limit', 'abs_error', 'bound']


class RationalParamType(click.ParamType):
    """Racional exato "p/q" ou inteiro; decimais são recusados"""

    name = 'rational'

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(rational_text(value))
        except ValueError as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalParamType()


def family_options(f):
    """Flags que regeneram a instância a partir da família do catálogo"""
    options = [
        click.option('--n', 'n', type=int, default=None, help='acc-n: denominador n'),
        click.option('--s', 's', type=int, default=None, help='nonfano-s / density: parâmetro s'),
        click.option('--k', 'k', type=int, default=None, help='density: índice k'),
        click.option('--r', 'r', type=int, default=None, help='density: posto de W'),
        click.option('--dim', 'dim', type=int, default=None, help='density: dimensão n do reticulado'),
        click.option('--family-delta', 'family_delta', type=RATIONAL, default=None, help='density: δ da família'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _require(name: str, value: Optional[Fraction], flag: str) -> Fraction:
    if value is None:
        raise PreconditionViolated(name, f'no value for {name} in the flags or the instance params',
                                   f'pass {flag} 1/2 or set params.{name} in the instance file')
    return value


def _table(rows) -> list:
    return [{'collection': list(row.collection), 'value_of_sum': row.value_of_sum,
             'sum_of_values': row.sum_of_values, 'strict': row.strict} for row in rows]


@click.group()
@click.option('--log-level', default=None, help='Nível de log (DEBUG, INFO, WARNING, ERROR)')
def cli(log_level):
    """torfol: foliações tóricas, adjuntas e limiares δ-lc em aritmética exata"""
    validate_and_setup_config(level=log_level)


@cli.command()
@click.argument('instance')
@family_options
@validate_instance('validate', refutes=(InvalidFan,))
def validate(instance: Instance) -> CommandOutcome:
    """Axiomas de leque, simplicialidade e completude"""
    fan, W = instance.fan, instance.foliation
    result = {
        'valid': True,
        'dim': fan.dim,
        'rays': len(fan.rays),
        'max_cones': [sorted(c) for c in fan.max_cones],
        'simplicial': is_simplicial(fan),
        'complete': is_complete(fan),
        'standard_lattice': fan.lattice.is_standard(),
        'foliation': {'rank': W.rank, 'algebraic': W.is_algebraic, 'tangent': W.is_tangent}
    }
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('instance')
@family_options
@validate_instance('fano')
def fano(instance: Instance) -> CommandOutcome:
    """−K_F e −K_X amplos pelo critério das coleções primitivas"""
    fan, W = instance.fan, instance.foliation
    minus_K_F = -foliation_canonical_divisor(fan, W)
    foliation_rows = ampleness_table(minus_K_F)
    variety_rows = ampleness_table(-canonical_divisor(fan))
    foliation_fano = all(row.strict for row in foliation_rows)
    result = {
        'foliation_fano': foliation_fano,
        'variety_fano': all(row.strict for row in variety_rows),
        'foliation_table': _table(foliation_rows),
        'variety_table': _table(variety_rows)
    }
    if not foliation_fano:
        failing = [row for row in foliation_rows if not row.strict]
        return CommandOutcome.refuted(result, _table(failing[:1]))
    result['zero_cone'] = sorted(fan.index_set(zero_cone(support_function(minus_K_F))))
    result['minimal_singular_cones'] = [
        {'cone': sorted(tau), 'vanishes': vanishes}
        for tau, vanishes in verify_minimal_singular_cones(fan, W).items()
    ]
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('instance')
@family_options
@click.option('--t', 't', type=RATIONAL, default=None, help='Parâmetro t em [0, 1]')
@click.option('--delta', 'delta', type=RATIONAL, default=None, help='δ > 0')
@validate_instance('dlc')
def dlc(instance: Instance, t: Optional[Fraction], delta: Optional[Fraction]) -> CommandOutcome:
    """Decide se (X, F, Δ, t) é δ-lc"""
    t = _require('t', instance.param('t', t), '--t')
    delta = _require('delta_lc', instance.param('delta_lc', delta), '--delta')
    structure = AdjointStructure.build(instance.fan, instance.foliation, t, instance.boundary)
    outcome = is_delta_lc(structure, delta)
    result = {'delta_lc': outcome.holds, 't': t, 'delta': delta}
    if not outcome:
        return CommandOutcome.refuted(result, [outcome.witness.to_dict()])
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('instance')
@family_options
@click.option('--delta', 'delta', type=RATIONAL, default=None, help='δ > 0')
@validate_instance('lct')
def lct(instance: Instance, delta: Optional[Fraction]) -> CommandOutcome:
    """Intervalo dos t em [0, 1] com (X, F, Δ, t) δ-lc"""
    delta = _require('delta_lc', instance.param('delta_lc', delta), '--delta')
    interval = lct_interval(instance.fan, instance.foliation, instance.boundary, delta)
    result = {'delta': delta, 'interval': interval.to_dict(), 'empty': interval.is_empty}
    if not any(instance.boundary.coeffs):
        closed = closed_form_lower_lct(instance.fan, instance.foliation, delta)
        result['closed_form_lower'] = {
            'value': closed.value,
            'maximizer': list(closed.maximizer) if closed.maximizer is not None else None,
            'cone': sorted(closed.cone) if closed.cone is not None else None
        }
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('instance')
@family_options
@validate_instance('loci')
def loci(instance: Instance) -> CommandOutcome:
    """Lugares dicrítico e singular com suas componentes conexas"""
    fan, W = instance.fan, instance.foliation
    dicritical = dicritical_locus(fan, W)
    result = {'dicritical': dicritical.to_dict()}
    try:
        singular = singular_locus(fan, W)
    except RequiresSimplicial as e:
        logger.warning(f'singular locus skipped: {e.message}')
        result['singular'] = None
        return CommandOutcome(True, 0, result, model_dependent=dicritical.model_dependent)
    result['singular'] = singular.to_dict()
    result['dicritical_equals_singular'] = set(dicritical.minimal_cones) == set(singular.minimal_cones)
    model_dependent = dicritical.model_dependent or singular.model_dependent
    if model_dependent:
        logger.warning('loci depend on the model chosen for the generic part of W')
    return CommandOutcome(True, 0, result, model_dependent=model_dependent)


@cli.command()
@click.argument('instance')
@family_options
@click.option('--t1', 't1', type=RATIONAL, default=None, help='t1 da hipótese de amplitude')
@click.option('--t2', 't2', type=RATIONAL, default=None, help='t2 da hipótese δ-lc')
@click.option('--delta', 'delta', type=RATIONAL, default=None, help='δ > 0')
@validate_instance('certificate')
def certificate(instance: Instance, t1: Optional[Fraction], t2: Optional[Fraction],
                delta: Optional[Fraction]) -> CommandOutcome:
    """Certificado de limitação: politopo escalado sem pontos do reticulado além da origem"""
    t1 = _require('t1', instance.param('t1', t1), '--t1')
    t2 = _require('t2', instance.param('t2', t2), '--t2')
    delta = _require('delta_lc', instance.param('delta_lc', delta), '--delta')
    cert = boundedness_certificate(instance.fan, instance.foliation, instance.boundary, t1, t2, delta)
    result = {
        't1': t1, 't2': t2, 'delta': delta,
        'lambda': cert.lam,
        'scale': cert.scale,
        'lattice_points': cert.scaled_points,
        'valid': cert.is_valid,
        'boundary_shift': cert.boundary_shift.to_dict()['coeffs'],
        'shifted_delta_lc': cert.shifted_delta_lc.holds,
        'notes': list(cert.notes)
    }
    if not cert.is_valid:
        return CommandOutcome.refuted(result, [list(cert.witness)])
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('instance')
@family_options
@click.option('--delta', 'delta', type=RATIONAL, default=None, help='δ > 0')
@validate_instance('lctset')
def lctset(instance: Instance, delta: Optional[Fraction]) -> CommandOutcome:
    """Certifica o extremo inferior do lct em δ-L_{s,ℓ}"""
    delta = _require('delta_lc', instance.param('delta_lc', delta), '--delta')
    cert = certify_lower_lct(instance.fan, instance.foliation, delta)
    result = {'delta': delta, **cert.to_dict()}
    if not cert.certified:
        return CommandOutcome.refuted(result, [cert.to_dict()])
    return CommandOutcome(True, 0, result)


@cli.command()
@click.argument('name', required=False)
@family_options
@click.option('--out', 'out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Arquivo de saída da instância')
def examples(name: Optional[str], out: Optional[str], **family_flags):
    """Lista o catálogo ou emite a instância NAME"""
    if name is None:
        click.echo(json.dumps(list_examples(), sort_keys=True, indent=2, ensure_ascii=False))
        return
    overrides = {('delta' if key == 'family_delta' else key): value for key, value in family_flags.items()}
    try:
        document = build_example(name, overrides)
    except TorfolError as e:
        emit_report('examples', CommandOutcome.from_error(e), name)
        return
    text = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)
    if out:
        with open(out, 'w', encoding='utf-8') as handle:
            handle.write(text + '\n')
        logger.info(f'wrote {name} to {out}')
    else:
        click.echo(text)


@cli.command()
@click.option('--delta', 'delta', type=RATIONAL, default=Fraction(1, 2), help='δ em (0, 1/2]')
@click.option('--q', 'q', type=RATIONAL, default=None, help='Alvo q em (δ, 1 + δ)')
@click.option('--s-min', 's_min', type=int, default=None, help='Menor s')
@click.option('--s-max', 's_max', type=int, default=None, help='Maior s')
@click.option('--verify', is_flag=True, default=False, help='Confere cada b_s com lct_interval')
@click.option('--out', 'out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Arquivo CSV de saída')
def sweep(delta: Fraction, q: Optional[Fraction], s_min: Optional[int], s_max: Optional[int],
          verify: bool, out: Optional[str]):
    """Varredura da família de densidade em s, em CSV"""
    config = get_config()
    q = q if q is not None else Fraction(rational_text(config.get_config_value('sweep', 'q', '3/4')))
    s_min = s_min if s_min is not None else config.get_config_value('sweep', 's_min', 3)
    s_max = s_max if s_max is not None else config.get_config_value('sweep', 's_max', 41)
    try:
        rows = density_sweep(delta, q, s_min, s_max, verify)
    except TorfolError as e:
        emit_report('sweep', CommandOutcome.from_error(e))
        return

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    columns = SWEEP_COLUMNS + (['verified'] if verify else [])
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row.as_csv() + ([str(row.verified).lower()] if verify else []))
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(buffer.getvalue())
        logger.info(f'sweep: {len(rows)} rows written to {out}')
    else:
        click.echo(buffer.getvalue(), nl=False)
    if verify and not all(row.verified for row in rows):
        click.get_current_context().exit(1)


if __name__ == '__main__':
    cli()
