"""
Interface definitions for the crypto option pricing system
Defines contracts for pricers, validators and chain file processors
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .models import OptionChain, OptionStyle, Violation
from .parameters import ModelKind


class IOptionPricer(ABC):
    """Interface for European option pricers bound to one parameter set and market"""

    @abstractmethod
    def price(self, strike: float, tau: float, style: OptionStyle = OptionStyle.CALL) -> float:
        """Price a single European option"""
        pass

    @abstractmethod
    def price_many(self, strikes: Sequence[float], tau: float, style: OptionStyle = OptionStyle.CALL) -> np.ndarray:
        """Price several strikes sharing one maturity and style"""
        pass

    @abstractmethod
    def supports_model(self, kind: ModelKind) -> bool:
        """Check if the pricer handles the model"""
        pass


class IValidator(ABC):
    """Interface for option chain validation"""

    @abstractmethod
    def validate(self, chain: OptionChain) -> List[Violation]:
        """Return every broken invariant; empty when the chain is well formed"""
        pass

    @abstractmethod
    def get_validation_metrics(self) -> List[str]:
        """Return the names of the rules checked"""
        pass


class IChainProcessor(ABC):
    """Interface for option chain file formats"""

    @abstractmethod
    def can_process(self, file_extension: str) -> bool:
        """Check if processor can handle the file type"""
        pass

    @abstractmethod
    def load_chain(self, path: Path) -> OptionChain:
        """Parse a file into a validated option chain"""
        pass

    @abstractmethod
    def write_chain(self, chain: OptionChain, path: Path) -> None:
        """Serialize a chain in the format load_chain reads"""
        pass
