import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, Tuple, Type

import click
from pydantic import ValidationError

from catalog import CATALOG, build_example
from config import get_config
from divisor import TorusDivisor
from errors import InvalidInstance, TorfolError
from fan import Fan
from foliation import FoliationSpace
from lattice import AmbientLattice
from schemas import DECIMAL_HINT, InstanceSchema, ReportSchema, rational_text

logger = logging.getLogger(__name__)

FAMILY_FLAGS = ('n', 's', 'k', 'r', 'dim', 'family_delta')


def parse_rational(text: Any) -> Fraction:
    """Converte "p/q" ou inteiro para Fraction; decimais são rejeitados"""
    try:
        return Fraction(rational_text(text))
    except ValueError as e:
        raise InvalidInstance(str(e), [str(e)], DECIMAL_HINT)


def format_validation_errors(error: ValidationError) -> List[str]:
    """Formata os erros do pydantic como "campo -> subcampo: mensagem" """
    errors = []
    for item in error.errors():
        location = ' -> '.join(str(loc) for loc in item['loc'])
        errors.append(f"{location}: {item['msg']}")
    return errors


def load_instance_document(document: Any, source: str = '<document>') -> InstanceSchema:
    if not isinstance(document, dict):
        raise InvalidInstance(f'{source}: the instance must be a JSON object',
                              [f'top level: expected an object, got {type(document).__name__}'])
    try:
        return InstanceSchema(**document)
    except ValidationError as e:
        diagnostics = format_validation_errors(e)
        logger.warning(f'invalid instance {source}: {diagnostics}')
        raise InvalidInstance(f'{source}: the instance failed validation', diagnostics)


def load_instance_text(text: str, source: str = '<text>') -> InstanceSchema:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        diagnostic = f'line {e.lineno}, column {e.colno}: {e.msg}'
        raise InvalidInstance(f'{source}: not valid JSON', [diagnostic],
                              'check the file with a JSON linter; numbers go in quotes as "p/q"')
    return load_instance_document(document, source)


def load_instance_file(path: str) -> InstanceSchema:
    try:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise InvalidInstance(f'cannot read {path}: {e.strerror}', [str(e)])
    return load_instance_text(text, path)


@dataclass
class Instance:
    """Instância validada: leque, W, Δ e os parâmetros padrão"""

    schema: InstanceSchema
    fan: Fan
    foliation: FoliationSpace
    boundary: TorusDivisor
    source: str = '<document>'

    def param(self, name: str, override: Optional[Fraction] = None,
              default: Optional[Fraction] = None) -> Optional[Fraction]:
        """Flag da CLI, senão o valor do arquivo, senão o padrão"""
        if override is not None:
            return override
        value = getattr(self.schema.params, name)
        if value is not None:
            return Fraction(value)
        return default


def build_instance(schema: InstanceSchema, source: str = '<document>') -> Instance:
    """Constrói Fan, FoliationSpace e TorusDivisor; InvalidFan sobe com o axioma violado"""
    n = schema.dim
    try:
        lattice = AmbientLattice(schema.lattice_basis) if schema.lattice_basis else AmbientLattice.standard(n)
    except ValueError as e:
        raise InvalidInstance(f'{source}: bad lattice basis', [f'lattice_basis: {e}'])
    fan = Fan(lattice, schema.rays, schema.max_cones)
    if schema.foliation is None:
        W = FoliationSpace.tangent(lattice)
    else:
        W = FoliationSpace.from_generators(lattice, schema.foliation.lattice_generators,
                                           schema.foliation.generic_dim)
    try:
        boundary = TorusDivisor.from_mapping(fan, schema.delta.coeffs)
    except ValueError as e:
        raise InvalidInstance(f'{source}: bad boundary divisor', [f'delta -> coeffs: {e}'])
    if W.generic_dim > 0:
        logger.warning(f'{source}: W has a generic part of dimension {W.generic_dim}; '
                       f'results depending on it are model-dependent')
    return Instance(schema, fan, W, boundary, source)


def resolve_instance(reference: str, family_flags: Optional[Dict[str, Any]] = None) -> Instance:
    """
    INSTANCE é um caminho de arquivo ou um nome do catálogo. As flags de
    família regeneram a instância a partir do catálogo, partindo dos
    parâmetros de família do arquivo.
    """
    overrides = {}
    for key, value in (family_flags or {}).items():
        if value is not None:
            overrides['delta' if key == 'family_delta' else key] = value

    if os.path.isfile(reference):
        schema = load_instance_file(reference)
        if overrides:
            if not schema.family:
                logger.warning(f'{reference} names no family; family flags ignored')
            else:
                merged = {**schema.family_params, **overrides}
                schema = load_instance_document(build_example(schema.family, merged), reference)
        return build_instance(schema, reference)

    if reference in CATALOG:
        return build_instance(load_instance_document(build_example(reference, overrides), reference), reference)
    raise InvalidInstance(f'{reference} is neither a readable file nor a builtin example',
                          [f'no such file: {reference}'], 'run "torfol examples" to list the catalog')


def instance_hash(schema: InstanceSchema) -> str:
    """md5 da forma canônica da instância"""
    canonical = json.dumps(schema.model_dump(), sort_keys=True, ensure_ascii=False)
    return hashlib.md5(canonical.encode('utf-8')).hexdigest()


@dataclass
class CommandOutcome:
    """Resultado de um comando antes de virar relatório"""

    success: bool
    exit_code: int = 0
    result: Dict[str, Any] = field(default_factory=dict)
    witnesses: List[Any] = field(default_factory=list)
    errors: List[Any] = field(default_factory=list)
    hint: Optional[str] = None
    model_dependent: bool = False

    @classmethod
    def refuted(cls, result: Dict[str, Any], witnesses: List[Any], **kwargs) -> 'CommandOutcome':
        return cls(False, 1, result, witnesses, **kwargs)

    @classmethod
    def from_error(cls, error: TorfolError, exit_code: Optional[int] = None) -> 'CommandOutcome':
        witness = getattr(error, 'witness', None)
        witnesses = [witness.to_dict() if hasattr(witness, 'to_dict') else witness] if witness is not None else []
        code = exit_code if exit_code is not None else error.exit_code
        return cls(False, code, {}, witnesses, [error.to_dict()], error.hint or None)


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def build_report(command: str, outcome: CommandOutcome, instance: Optional[str] = None,
                 digest: Optional[str] = None, elapsed: Optional[float] = None) -> ReportSchema:
    include_timing = get_config().get_config_value('report', 'include_timing', True)
    return ReportSchema(
        command=command,
        instance=instance,
        instance_hash=digest,
        success=outcome.success,
        exit_code=outcome.exit_code,
        result=_plain(outcome.result),
        witnesses=_plain(outcome.witnesses),
        errors=_plain(outcome.errors),
        hint=outcome.hint,
        model_dependent=outcome.model_dependent,
        timing={'seconds': round(elapsed, 6)} if include_timing and elapsed is not None else None
    )


def encode_report(report: ReportSchema) -> str:
    """JSON com chaves ordenadas; timing omitido quando desabilitado"""
    data = report.model_dump()
    if data.get('timing') is None:
        data.pop('timing', None)
    indent = get_config().get_config_value('report', 'indent', 2)
    return json.dumps(data, sort_keys=True, indent=indent or None, ensure_ascii=False)


def emit_report(command: str, outcome: CommandOutcome, instance: Optional[str] = None,
                digest: Optional[str] = None, elapsed: Optional[float] = None) -> None:
    """Escreve o relatório em stdout e encerra com o código de saída"""
    click.echo(encode_report(build_report(command, outcome, instance, digest, elapsed)))
    logger.info(f'{command} on {instance}: exit code {outcome.exit_code}')
    click.get_current_context().exit(outcome.exit_code)


def validate_instance(command: str, refutes: Tuple[Type[TorfolError], ...] = ()) -> Callable:
    """
    Decorator dos comandos que recebem INSTANCE: resolve e valida a instância,
    executa o comando e emite o relatório JSON com o código de saída.
    Erros listados em refutes saem com código 1 em vez de 2.
    """
    def decorator(f: Callable[..., CommandOutcome]):
        @wraps(f)
        def decorated_function(instance: str, **kwargs):
            family_flags = {key: kwargs.pop(key, None) for key in FAMILY_FLAGS}
            started = time.perf_counter()
            digest = None
            try:
                resolved = resolve_instance(instance, family_flags)
                digest = instance_hash(resolved.schema)
                outcome = f(resolved, **kwargs)
            except TorfolError as e:
                logger.info(f'{command} on {instance}: {type(e).__name__}: {e.message}')
                outcome = CommandOutcome.from_error(e, 1 if isinstance(e, refutes) else None)
            except Exception:
                logger.exception(f'unexpected failure in {command} on {instance}')
                raise
            emit_report(command, outcome, instance, digest, time.perf_counter() - started)
        return decorated_function
    return decorator
