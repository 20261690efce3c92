"""
Validation module for option chains and pricing errors
"""

from .chain_validator import ChainValidator, validate_chain
from .error_metrics import error_report, format_sig, render_error_row, render_error_table

__all__ = [
    'ChainValidator',
    'validate_chain',
    'error_report',
    'format_sig',
    'render_error_row',
    'render_error_table'
]
