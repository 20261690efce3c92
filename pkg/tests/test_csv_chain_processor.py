from datetime import date

import pytest

from cryptopt.core.exceptions import (
    EmptyFileError,
    InconsistentContextError,
    MissingColumnError,
    RowParseError,
    ValidationError,
)
from cryptopt.core.models import OptionStyle
from cryptopt.core.parameters import BSParams
from cryptopt.processors.csv_chain_processor import CsvChainProcessor, parse_chain_csv, write_chain_csv
from cryptopt.processors.fixture_generator import fixture_spec, generate_chain

HEADER = "expiry_label,maturity_years,strike,style,mid_price,futures_price,rate\n"
TRADE_DATE = date(2024, 3, 11)


def _write(tmp_path, body, header=HEADER):
    path = tmp_path / "chain.csv"
    path.write_text(header + body, encoding="utf-8")
    return path


def test_happy_path(tmp_path):
    path = _write(tmp_path, (
        "Jun24,0.2986,60000,call,14000.5,71000,0.05\n"
        "Jun24,0.2986,80000,C,3500.25,71000,0.05\n"
        "Jun24,0.2986,60000,put,900,71000,0.05\n"
    ))
    chain = parse_chain_csv(path, trade_date=TRADE_DATE)
    assert chain.context.spot == 71000.0
    assert chain.context.rate == 0.05
    assert chain.context.trade_date == TRADE_DATE
    assert len(chain) == 3
    assert [q.style for q in chain.quotes] == [OptionStyle.CALL, OptionStyle.CALL, OptionStyle.PUT]
    assert chain.quotes[1].price == 3500.25


def test_inconsistent_context_names_the_row(tmp_path):
    path = _write(tmp_path, (
        "Jun24,0.3,60000,call,14000,71000,0.05\n"
        "Jun24,0.3,80000,call,3500,70000,0.05\n"
    ))
    with pytest.raises(InconsistentContextError) as err:
        parse_chain_csv(path)
    assert err.value.line == 2


def test_unparsable_number(tmp_path):
    path = _write(tmp_path, (
        "Jun24,0.3,60000,call,14000,71000,0.05\n"
        "Jun24,0.3,80000,call,abc,71000,0.05\n"
    ))
    with pytest.raises(RowParseError) as err:
        parse_chain_csv(path)
    assert err.value.line == 2


def test_unknown_style(tmp_path):
    path = _write(tmp_path, "Jun24,0.3,60000,straddle,14000,71000,0.05\n")
    with pytest.raises(RowParseError):
        parse_chain_csv(path)


def test_missing_column(tmp_path):
    path = _write(tmp_path, "Jun24,0.3,60000,call,14000,71000\n",
                  header="expiry_label,maturity_years,strike,style,mid_price,futures_price\n")
    with pytest.raises(MissingColumnError):
        parse_chain_csv(path)


def test_empty_files(tmp_path):
    with pytest.raises(EmptyFileError):
        parse_chain_csv(_write(tmp_path, ""))
    blank = tmp_path / "blank.csv"
    blank.write_text("", encoding="utf-8")
    with pytest.raises(EmptyFileError):
        parse_chain_csv(blank)


def test_extra_columns_are_ignored(tmp_path):
    path = _write(tmp_path, "Jun24,0.3,60000,call,14000,71000,0.05,deribit\n",
                  header=HEADER.strip() + ",venue\n")
    assert len(parse_chain_csv(path)) == 1


def test_strict_mode_rejects_violations(tmp_path):
    path = _write(tmp_path, (
        "Jun24,0.3,80000,call,3500,71000,0.05\n"
        "Jun24,0.3,60000,call,14000,71000,0.05\n"
    ))
    assert len(parse_chain_csv(path)) == 2
    with pytest.raises(ValidationError):
        parse_chain_csv(path, strict=True)


def test_expiry_groups_in_file_order(tmp_path):
    spec = fixture_spec(BSParams(sigma=0.8), spot=60000.0, rate=0.05, expiries=("Jun24", "Dec24", "Dec25"),
                        trade_date=TRADE_DATE)
    path = tmp_path / "fixture.csv"
    write_chain_csv(generate_chain(spec, seed=1), path)
    chain = parse_chain_csv(path, trade_date=TRADE_DATE)
    assert chain.expiry_labels() == ["Jun24", "Dec24", "Dec25"]
    assert all(len(group) == 13 for group in chain.expiry_groups().values())


def test_write_then_parse_is_identity(tmp_path):
    spec = fixture_spec(BSParams(sigma=0.8), spot=60000.0, rate=0.05, expiries=("Jun24", "Dec24"),
                        noise=0.02, trade_date=TRADE_DATE)
    chain = generate_chain(spec, seed=4)
    processor = CsvChainProcessor(trade_date=TRADE_DATE)
    path = tmp_path / "out" / "chain.csv"
    processor.write_chain(chain, path)
    assert processor.load_chain(path) == chain


def test_processor_extensions():
    processor = CsvChainProcessor()
    assert processor.can_process(".CSV")
    assert not processor.can_process(".xlsx")
