"""
Chain Validator
Implements IValidator by checking every quote and context invariant of an option chain
"""

import math
from typing import Dict, List, Tuple

from ..core.interfaces import IValidator
from ..core.models import OptionChain, OptionStyle, Violation


class ChainValidator(IValidator):
    """Collects invariant violations; never raises on malformed data"""

    RULES = (
        'spot_positive',
        'rate_finite',
        'strike_positive',
        'maturity_positive',
        'price_nonnegative',
        'call_upper_bound',
        'strike_order',
        'expiry_maturity',
    )

    def validate(self, chain: OptionChain) -> List[Violation]:
        violations = self._check_context(chain)
        spot = chain.context.spot
        spot_known = math.isfinite(spot) and spot > 0

        for index, quote in enumerate(chain.quotes):
            label = quote.expiry_label
            if not (math.isfinite(quote.strike) and quote.strike > 0):
                violations.append(Violation(
                    'strike_positive', f"quote {index}: strike {quote.strike!r} must be positive", index, label))
            if not (math.isfinite(quote.maturity) and quote.maturity > 0):
                violations.append(Violation(
                    'maturity_positive', f"quote {index}: maturity {quote.maturity!r} must be positive", index, label))
            if not (math.isfinite(quote.price) and quote.price >= 0):
                violations.append(Violation(
                    'price_nonnegative', f"quote {index}: price {quote.price!r} must be nonnegative", index, label))
            elif quote.style is OptionStyle.CALL and spot_known and quote.price > spot:
                violations.append(Violation(
                    'call_upper_bound',
                    f"quote {index}: call price {quote.price!r} exceeds spot {spot!r}", index, label))

        violations.extend(self._check_groups(chain))
        return violations

    def get_validation_metrics(self) -> List[str]:
        return list(self.RULES)

    def _check_context(self, chain: OptionChain) -> List[Violation]:
        found = []
        spot, rate = chain.context.spot, chain.context.rate
        if not (math.isfinite(spot) and spot > 0):
            found.append(Violation('spot_positive', f"spot {spot!r} must be positive"))
        if not math.isfinite(rate):
            found.append(Violation('rate_finite', f"rate {rate!r} must be finite"))
        return found

    def _check_groups(self, chain: OptionChain) -> List[Violation]:
        found = []
        last_strike: Dict[Tuple[str, OptionStyle], float] = {}
        maturity: Dict[str, float] = {}
        for index, quote in enumerate(chain.quotes):
            label = quote.expiry_label
            key = (label, quote.style)
            if key in last_strike and not quote.strike > last_strike[key]:
                found.append(Violation(
                    'strike_order',
                    f"quote {index}: {quote.style.value} strike {quote.strike!r} in {label!r} "
                    f"does not exceed previous {last_strike[key]!r}",
                    index, label,
                ))
            last_strike[key] = quote.strike

            if label not in maturity:
                maturity[label] = quote.maturity
            elif quote.maturity != maturity[label]:
                found.append(Violation(
                    'expiry_maturity',
                    f"quote {index}: maturity {quote.maturity!r} differs from {maturity[label]!r} for {label!r}",
                    index, label,
                ))
        return found


def validate_chain(chain: OptionChain) -> List[Violation]:
    """Every broken invariant of the chain; empty when well formed"""
    return ChainValidator().validate(chain)
