from .settings import Config, configure_logging

__all__ = ['Config', 'configure_logging']
