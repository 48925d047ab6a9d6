"""
Exceções do torfol.

Todas derivam de TorfolError, que carrega uma dica de correção (hint) e o
código de saída usado pela CLI.
"""

from typing import Any, List, Optional


class TorfolError(ValueError):
    """Erro base: a computação não pode prosseguir com esta entrada"""

    exit_code = 2
    default_hint = ''

    def __init__(self, message: str, hint: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.hint = hint if hint is not None else self.default_hint

    def to_dict(self) -> dict:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'hint': self.hint
        }


class ZeroVector(TorfolError):
    default_hint = 'a ray direction must be a nonzero vector'


class RayNotRational(TorfolError):
    default_hint = 'give vectors with rational entries such as "1/2"'


class UnboundedRegion(TorfolError):
    default_hint = 'the half-spaces must cut out a bounded polytope'


class EnumerationTooLarge(TorfolError):
    default_hint = 'raise TORFOL_MAX_POINTS or use a smaller instance'


class NotInSupport(TorfolError):
    default_hint = 'the vector lies outside the support of the fan'


class NotPrimitive(TorfolError):
    default_hint = 'use the primitive lattice point on the ray'


class ConeNotInFan(TorfolError):
    default_hint = 'refer to cones by ray index sets that appear in the fan'


class InvalidFan(TorfolError):
    """Um axioma de leque foi violado"""

    default_hint = 'fix the listed cones in "max_cones" or "rays"'

    def __init__(self, axiom: str, message: str, cones: Optional[List[Any]] = None,
                 hint: Optional[str] = None):
        super().__init__(f'{axiom}: {message}', hint)
        self.axiom = axiom
        self.cones = cones or []

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['axiom'] = self.axiom
        data['cones'] = [sorted(c) for c in self.cones]
        return data


class NotRCartier(TorfolError):
    default_hint = 'the divisor has no linear representative on some cone'


class RequiresSimplicial(TorfolError):
    default_hint = 'this operation needs a simplicial fan'


class RequiresCompleteSimplicial(RequiresSimplicial):
    default_hint = 'this operation needs a complete simplicial fan'


class PreconditionViolated(TorfolError):
    """Uma hipótese da operação não vale"""

    def __init__(self, hypothesis: str, message: str, hint: Optional[str] = None):
        super().__init__(f'{hypothesis}: {message}', hint)
        self.hypothesis = hypothesis

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['hypothesis'] = self.hypothesis
        return data


class HypothesisFailed(TorfolError):
    """Hipótese do certificado de limitação falhou (amplitude ou delta-lc)"""

    def __init__(self, hypothesis: str, message: str, witness: Any = None,
                 hint: Optional[str] = None):
        super().__init__(f'{hypothesis}: {message}', hint)
        self.hypothesis = hypothesis
        self.witness = witness

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['hypothesis'] = self.hypothesis
        return data


class DomainError(TorfolError):
    default_hint = 'delta must exceed the sum of the fractional parts'


class ZeroDenominator(TorfolError):
    pass


class IndexOutOfRange(TorfolError):
    default_hint = 'the index must lie between 0 and the tuple length'


class UnknownExample(TorfolError):
    default_hint = 'run "torfol examples" to list the catalog'


class InvalidInstance(TorfolError):
    """Arquivo de instância inválido; guarda a lista de diagnósticos"""

    default_hint = 'numbers are exact rationals written as strings like "1/2"'

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None,
                 hint: Optional[str] = None):
        super().__init__(message, hint)
        self.diagnostics = diagnostics or []

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['diagnostics'] = list(self.diagnostics)
        return data


class ConsistencyError(TorfolError):
    default_hint = 'internal cross-check failed; please report the instance'
