"""Run configuration: JSON sections keyed by algorithm or chain.

A configuration file is a JSON object whose keys are single tokens
(``"NSGAI"``) or chains (``"HGS + NSGAI"``) and whose values are parameter
maps. Section keys are normalized by removing whitespace, upper-casing and
applying the token aliases, so ``"HGS + NSGAI"`` and ``"hgs+nsgaii"`` name the
same section.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from hybridmoea.chain import AlgorithmChain
from hybridmoea.core import ConfigurationError

log = logging.getLogger(__name__)


def normalize_section_key(key: str) -> str:
    return str(AlgorithmChain.parse("".join(key.split())))


@dataclass(frozen=True)
class RunConfig:
    sections: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Mapping[str, Any]]) -> RunConfig:
        sections: dict[str, dict[str, Any]] = {}
        for key, params in raw.items():
            norm = normalize_section_key(key)
            if norm in sections:
                raise ConfigurationError(f"duplicate config section {key!r} (normalizes to {norm!r})")
            if not isinstance(params, Mapping):
                raise ConfigurationError(f"config section {key!r} must be an object")
            sections[norm] = dict(params)
        return cls(sections)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        """Parse a JSON object; a bare list of ``"key": {...}`` members is also accepted."""
        body = text.strip()
        if body.startswith('"'):
            body = "{" + body + "}"
        try:
            raw = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigurationError("config must be a JSON object of sections")
        return cls.from_mapping(raw)

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def get(self, key: str) -> Mapping[str, Any] | None:
        return self.sections.get(key)


def _own_sections(config: RunConfig | None, chain: AlgorithmChain, index: int) -> dict[str, Any]:
    """Merge every section keyed by a chain segment starting at ``index``.

    Shorter segments are applied first so the longest matching segment wins.
    """
    merged: dict[str, Any] = {}
    if config is None:
        return merged
    for stop in range(index + 1, len(chain) + 1):
        section = config.get(chain.segment(index, stop))
        if section:
            merged.update(section)
    return merged


def _registered_keys(token: str) -> set[str] | None:
    from hybridmoea.hybrid import REGISTRY

    cls = REGISTRY.get(token)
    return None if cls is None else set(cls.defaults)


def resolve_params(
    config: RunConfig | None,
    chain: AlgorithmChain | str,
    component_index: int = 0,
    defaults: Mapping[str, Any] | None = None,
    accepted: Callable[[str], set[str] | None] = _registered_keys,
) -> dict[str, Any]:
    """Parameters for the component at ``component_index`` of ``chain``.

    Precedence, lowest to highest: ``defaults``, the section named by the bare
    token, sections named by longer chain segments starting at this component,
    and finally keys forwarded from outer components that did not recognize
    them.
    """
    chain = AlgorithmChain.parse(chain)
    if not 0 <= component_index < len(chain):
        raise IndexError(f"component {component_index} outside chain {chain}")
    forwarded: dict[str, Any] = {}
    for i in range(component_index):
        own = {**_own_sections(config, chain, i), **forwarded}
        keys = accepted(chain.elements[i])
        forwarded = {k: v for k, v in own.items() if keys is not None and k not in keys}
    return {**(defaults or {}), **_own_sections(config, chain, component_index), **forwarded}


def warn_unused_sections(config: RunConfig | None, chains: list[AlgorithmChain]) -> list[str]:
    """Section keys that no chain in ``chains`` will ever read."""
    if config is None:
        return []
    used = {c.segment(i, j) for c in chains for i in range(len(c)) for j in range(i + 1, len(c) + 1)}
    unused = sorted(set(config.sections) - used)
    for key in unused:
        log.warning("config section %r does not apply to any requested chain", key)
    return unused
