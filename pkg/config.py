import os
import sys
from typing import Dict, Any, Optional
import logging


def _env_flag(name: str, default: str) -> bool:
    return os.environ.get(name, default).lower() == 'true'


class Config:
    """Configuração base do torfol"""

    # Configurações de Logging
    LOGGING_CONFIG = {
        'level': os.environ.get('LOG_LEVEL', 'WARNING').upper(),
        'format': os.environ.get('LOG_FORMAT', '%(asctime)s - %(name)s - %(levelname)s - %(message)s'),
        'file_path': os.environ.get('LOG_FILE_PATH', 'logs/torfol.log'),
        'max_file_size': int(os.environ.get('LOG_MAX_SIZE', 10485760)),  # 10MB
        'backup_count': int(os.environ.get('LOG_BACKUP_COUNT', 5)),
        'enable_file_logging': _env_flag('LOG_TO_FILE', 'false')
    }

    # Configurações de computação
    COMPUTE_CONFIG = {
        'threads': int(os.environ.get('TORFOL_THREADS', 1)),
        'max_enumeration_points': int(os.environ.get('TORFOL_MAX_POINTS', 2000000)),
        'consistency_checks': _env_flag('TORFOL_CONSISTENCY_CHECKS', 'true')
    }

    # Configurações dos relatórios JSON
    REPORT_CONFIG = {
        'indent': int(os.environ.get('TORFOL_REPORT_INDENT', 2)),
        'include_timing': _env_flag('TORFOL_REPORT_TIMING', 'true')
    }

    # Configurações padrão do comando sweep
    SWEEP_CONFIG = {
        's_min': int(os.environ.get('TORFOL_SWEEP_S_MIN', 3)),
        's_max': int(os.environ.get('TORFOL_SWEEP_S_MAX', 41)),
        'q': os.environ.get('TORFOL_SWEEP_Q', '3/4')
    }

    @classmethod
    def get_config_value(cls, section: str, key: str, default: Any = None) -> Any:
        """Obtém um valor de configuração específico"""
        section_config = getattr(cls, section.upper() + '_CONFIG', {})
        return section_config.get(key, default)

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        """Valida todas as configurações e retorna erros encontrados"""
        errors = []
        warnings = []

        if cls.COMPUTE_CONFIG['threads'] < 1:
            errors.append('TORFOL_THREADS deve ser >= 1')
        elif cls.COMPUTE_CONFIG['threads'] > (os.cpu_count() or 1):
            warnings.append('TORFOL_THREADS maior que o número de CPUs disponíveis')

        if cls.COMPUTE_CONFIG['max_enumeration_points'] <= 0:
            errors.append('TORFOL_MAX_POINTS deve ser > 0')

        if not cls.COMPUTE_CONFIG['consistency_checks']:
            warnings.append('Verificação cruzada dos extremos do lct desabilitada')

        if cls.REPORT_CONFIG['indent'] < 0:
            errors.append('TORFOL_REPORT_INDENT deve ser >= 0')

        if cls.SWEEP_CONFIG['s_min'] < 2 or cls.SWEEP_CONFIG['s_min'] > cls.SWEEP_CONFIG['s_max']:
            errors.append('Intervalo de s inválido para o sweep (2 <= s_min <= s_max)')

        if getattr(logging, cls.LOGGING_CONFIG['level'], None) is None:
            errors.append(f"LOG_LEVEL desconhecido: {cls.LOGGING_CONFIG['level']}")

        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'warnings': warnings
        }

    @classmethod
    def get_environment_info(cls) -> Dict[str, Any]:
        """Retorna informações sobre o ambiente atual"""
        return {
            'environment': os.environ.get('TORFOL_ENV', 'development'),
            'threads': cls.COMPUTE_CONFIG['threads'],
            'python_version': sys.version,
            'config_source': ('environment_variables'
                              if any(key.startswith(('TORFOL_', 'LOG_')) for key in os.environ) else 'defaults')
        }


class DevelopmentConfig(Config):
    """Configuração para desenvolvimento"""
    DEBUG = True


class ProductionConfig(Config):
    """Configuração para produção"""
    DEBUG = False

    LOGGING_CONFIG = {
        **Config.LOGGING_CONFIG,
        'level': os.environ.get('LOG_LEVEL', 'ERROR').upper()
    }


class TestingConfig(Config):
    """Configuração para testes"""
    TESTING = True

    COMPUTE_CONFIG = {
        **Config.COMPUTE_CONFIG,
        'threads': 1,
        'consistency_checks': True
    }

    # Relatórios sem tempo de execução, comparáveis byte a byte
    REPORT_CONFIG = {
        **Config.REPORT_CONFIG,
        'include_timing': False
    }


# Mapeamento de configurações por ambiente
config_by_name = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(environment: Optional[str] = None) -> Config:
    """Retorna a configuração apropriada para o ambiente"""
    if environment is None:
        environment = os.environ.get('TORFOL_ENV', 'development')

    config_class = config_by_name.get(environment, DevelopmentConfig)
    return config_class()


def setup_logging(config: Config, level: Optional[str] = None) -> None:
    """Configura o sistema de logging baseado na configuração"""
    log_config = config.LOGGING_CONFIG

    # Nível explícito (flag da CLI) tem precedência
    log_level = getattr(logging, (level or log_config['level']).upper(), logging.WARNING)

    formatter = logging.Formatter(log_config['format'])

    # Relatórios vão para stdout; logs sempre para stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(log_level)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for handler in list(root_logger.handlers):
        if getattr(handler, '_torfol', False):
            root_logger.removeHandler(handler)
    console_handler._torfol = True
    root_logger.addHandler(console_handler)

    if log_config['enable_file_logging']:
        try:
            from logging.handlers import RotatingFileHandler

            log_dir = os.path.dirname(log_config['file_path'])
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir)

            file_handler = RotatingFileHandler(
                log_config['file_path'],
                maxBytes=log_config['max_file_size'],
                backupCount=log_config['backup_count'],
                encoding='utf-8'
            )
            file_handler.setFormatter(formatter)
            file_handler.setLevel(log_level)
            file_handler._torfol = True
            root_logger.addHandler(file_handler)

        except Exception as e:
            logging.warning(f"Não foi possível configurar logging para arquivo: {e}")


def validate_and_setup_config(environment: Optional[str] = None, level: Optional[str] = None) -> Config:
    """Valida e configura o sistema baseado no ambiente"""
    config = get_config(environment)

    validation_result = config.validate_config()

    if not validation_result['valid']:
        for error in validation_result['errors']:
            logging.error(f"Configuração inválida: {error}")
        raise ValueError("Configuração inválida: " + '; '.join(validation_result['errors']))

    setup_logging(config, level)

    for warning in validation_result['warnings']:
        logging.warning(f"Configuração: {warning}")

    env_info = config.get_environment_info()
    logging.debug(f"torfol iniciado - Ambiente: {env_info['environment']}, Threads: {env_info['threads']}")

    return config
