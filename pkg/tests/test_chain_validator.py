import math

from cryptopt.core.models import MarketContext, OptionChain, OptionQuote, OptionStyle
from cryptopt.validation.chain_validator import ChainValidator, validate_chain


def _chain(quotes, spot=100.0, rate=0.02):
    return OptionChain(context=MarketContext(spot=spot, rate=rate), quotes=quotes)


def _quote(strike, price=5.0, maturity=0.5, style=OptionStyle.CALL, label="Jun24"):
    return OptionQuote(strike=strike, maturity=maturity, price=price, style=style, expiry_label=label)


def _rules(violations):
    return [v.rule for v in violations]


def test_well_formed_chain_has_no_violations():
    chain = _chain([
        _quote(90.0, 14.0), _quote(110.0, 3.0),
        _quote(80.0, 0.5, style=OptionStyle.PUT), _quote(95.0, 2.0, style=OptionStyle.PUT),
        _quote(100.0, 9.0, maturity=1.0, label="Dec24"),
    ])
    assert validate_chain(chain) == []


def test_context_violations():
    chain = _chain([_quote(100.0)], spot=-1.0, rate=math.inf)
    assert _rules(validate_chain(chain)) == ["spot_positive", "rate_finite"]


def test_quote_violations_are_indexed():
    chain = _chain([_quote(100.0), _quote(-5.0), _quote(120.0, price=-1.0), _quote(130.0, maturity=0.0)])
    found = validate_chain(chain)
    assert [(v.rule, v.quote_index) for v in found if v.rule != "expiry_maturity"] == [
        ("strike_positive", 1), ("price_nonnegative", 2), ("maturity_positive", 3), ("strike_order", 1),
    ]


def test_call_above_spot():
    found = validate_chain(_chain([_quote(50.0, price=101.0)]))
    assert _rules(found) == ["call_upper_bound"]


def test_strike_order_is_per_expiry_and_style():
    chain = _chain([
        _quote(90.0), _quote(110.0),
        _quote(80.0, style=OptionStyle.PUT),
        _quote(100.0, maturity=1.0, label="Dec24"),
        _quote(110.0),
    ])
    found = validate_chain(chain)
    assert [(v.rule, v.quote_index) for v in found] == [("strike_order", 4)]


def test_expiry_with_two_maturities():
    chain = _chain([_quote(90.0), _quote(110.0, maturity=0.6)])
    assert _rules(validate_chain(chain)) == ["expiry_maturity"]


def test_validation_metrics_name_every_rule():
    assert "strike_order" in ChainValidator().get_validation_metrics()
    assert len(ChainValidator().get_validation_metrics()) == 8
