from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator

DECIMAL_HINT = 'write 1/2 instead of 0.5'


def rational_text(value: Any) -> str:
    """Normaliza um racional exato para a forma "p/q" (ou "k"); rejeita decimais"""
    if isinstance(value, bool):
        raise ValueError('booleans are not rational numbers')
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        raise ValueError(f'decimal {value!r} is not exact; {DECIMAL_HINT}')
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in '.eE'):
            raise ValueError(f'decimal "{text}" is not exact; {DECIMAL_HINT}')
        try:
            return str(Fraction(text))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f'"{text}" is not a rational number p/q')
    raise ValueError(f'{type(value).__name__} is not a rational number')


Rational = Annotated[str, BeforeValidator(rational_text)]
RationalVector = List[Rational]


class FoliationSchema(BaseModel):
    """Schema do subespaço W: geradores de W ∩ N e dimensão da parte genérica"""
    model_config = ConfigDict(extra='forbid')

    lattice_generators: List[RationalVector] = Field(default_factory=list, description="Geradores de W ∩ N")
    generic_dim: int = Field(0, ge=0, description="Dimensão do complemento genérico")


class DivisorSchema(BaseModel):
    """Schema de um divisor invariante: coeficientes por índice de raio"""
    model_config = ConfigDict(extra='forbid')

    coeffs: Dict[str, Rational] = Field(default_factory=dict, description="Coeficientes por índice de raio")

    @field_validator('coeffs')
    @classmethod
    def validate_keys(cls, v):
        """Chaves devem ser índices de raio não negativos"""
        for key in v:
            if not key.isdigit():
                raise ValueError(f'coefficient key "{key}" is not a ray index')
        return v


class ParamsSchema(BaseModel):
    """Parâmetros padrão dos comandos (t, δ, t1, t2)"""
    model_config = ConfigDict(extra='forbid')

    t: Optional[Rational] = Field(None, description="Parâmetro de interpolação t")
    delta_lc: Optional[Rational] = Field(None, description="δ do teste δ-lc")
    t1: Optional[Rational] = Field(None, description="t1 do certificado de limitação")
    t2: Optional[Rational] = Field(None, description="t2 do certificado de limitação")


class InstanceSchema(BaseModel):
    """Schema de validação do arquivo de instância"""
    model_config = ConfigDict(extra='forbid')

    name: Optional[str] = Field(None, description="Nome da instância")
    description: Optional[str] = Field(None, description="Descrição")
    family: Optional[str] = Field(None, description="Família do catálogo que gerou a instância")
    family_params: Dict[str, Rational] = Field(default_factory=dict, description="Parâmetros da família")
    lattice_basis: Optional[List[RationalVector]] = Field(None, description="Geradores de N (padrão: Z^n)")
    rays: List[RationalVector] = Field(..., description="Raios em ordem; a ordem fixa os índices")
    max_cones: List[List[int]] = Field(..., description="Cones maximais como listas de índices de raios")
    foliation: Optional[FoliationSchema] = Field(None, description="W; ausente significa W = N")
    delta: DivisorSchema = Field(default_factory=DivisorSchema, description="Divisor de fronteira Δ")
    params: ParamsSchema = Field(default_factory=ParamsSchema, description="Parâmetros padrão")

    @field_validator('max_cones')
    @classmethod
    def validate_cone_indices(cls, v):
        """Índices de raio não podem ser negativos nem repetidos no mesmo cone"""
        for cone in v:
            if any(i < 0 for i in cone):
                raise ValueError('ray indices must be non-negative')
            if len(set(cone)) != len(cone):
                raise ValueError(f'cone {cone} repeats a ray index')
        return v

    @model_validator(mode='after')
    def validate_dimensions(self):
        """Todos os vetores devem ter o mesmo comprimento n"""
        lengths = {len(r) for r in self.rays}
        if self.lattice_basis:
            lengths |= {len(b) for b in self.lattice_basis}
        if self.foliation is not None:
            lengths |= {len(g) for g in self.foliation.lattice_generators}
        if len(lengths) > 1:
            raise ValueError(f'vectors have mixed lengths {sorted(lengths)}')
        if not self.rays and not self.lattice_basis:
            raise ValueError('an instance needs rays or a lattice basis to fix the dimension')
        if lengths == {0}:
            raise ValueError('vectors must have length at least 1')
        return self

    @property
    def dim(self) -> int:
        if self.rays:
            return len(self.rays[0])
        return len(self.lattice_basis[0])


class ReportSchema(BaseModel):
    """Schema do relatório JSON emitido pela CLI"""

    command: str = Field(..., description="Comando executado")
    instance: Optional[str] = Field(None, description="Caminho ou nome da instância")
    instance_hash: Optional[str] = Field(None, description="Hash canônico da instância")
    success: bool = Field(..., description="Computação concluída e propriedade válida")
    exit_code: int = Field(..., ge=0, le=2, description="0 vale, 1 refutado, 2 não computável")
    result: Dict[str, Any] = Field(default_factory=dict, description="Resultado do comando")
    witnesses: List[Any] = Field(default_factory=list, description="Testemunhas em ordem lexicográfica")
    errors: List[Any] = Field(default_factory=list, description="Erros e diagnósticos")
    hint: Optional[str] = Field(None, description="Dica de correção")
    model_dependent: bool = Field(False, description="Resultado depende do modelo da parte genérica de W")
    timing: Optional[Dict[str, float]] = Field(None, description="Tempos de execução")
