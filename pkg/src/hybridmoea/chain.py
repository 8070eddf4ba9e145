"""Algorithm composition strings such as ``IMGA+HGS+NSGAII``."""

from __future__ import annotations

from dataclasses import dataclass

from hybridmoea.core import ConfigurationError

ALIASES: dict[str, str] = {"NSGAI": "NSGAII"}


def normalize_token(token: str) -> str:
    tok = token.strip().upper()
    if not tok:
        raise ConfigurationError("empty algorithm token")
    return ALIASES.get(tok, tok)


@dataclass(frozen=True)
class AlgorithmChain:
    """Parsed ``NAME ( "+" NAME )*``; leftmost is the outermost meta-model."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ConfigurationError("empty algorithm chain")

    @classmethod
    def parse(cls, text: str | AlgorithmChain) -> AlgorithmChain:
        if isinstance(text, AlgorithmChain):
            return text
        return cls(tuple(normalize_token(tok) for tok in str(text).split("+")))

    def suffix(self, start: int) -> AlgorithmChain:
        return AlgorithmChain(self.elements[start:])

    def segment(self, start: int, stop: int) -> str:
        return "+".join(self.elements[start:stop])

    @property
    def head(self) -> str:
        return self.elements[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return "+".join(self.elements)
