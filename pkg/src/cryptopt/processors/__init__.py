"""
File processors module
Option chain CSV ingestion, result persistence and synthetic chain generation
"""

from .csv_chain_processor import CsvChainProcessor, parse_chain_csv, write_chain_csv
from .fixture_generator import FixtureSpec, expiry_date, generate_chain, preset, year_fraction
from .result_writers import (
    read_calibration_json,
    read_priced_chain_csv,
    write_calibration_json,
    write_error_csv,
    write_parameter_evolution_csv,
    write_priced_chain_csv,
)

__all__ = [
    'CsvChainProcessor',
    'parse_chain_csv',
    'write_chain_csv',
    'FixtureSpec',
    'expiry_date',
    'generate_chain',
    'preset',
    'year_fraction',
    'read_calibration_json',
    'read_priced_chain_csv',
    'write_calibration_json',
    'write_error_csv',
    'write_parameter_evolution_csv',
    'write_priced_chain_csv'
]
