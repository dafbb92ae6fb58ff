from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LanguageSpec:
    """Per-language facts the language-neutral passes need."""

    name: str
    primitive_types: frozenset[str]
    wrapper_prefix: str
    wrapper_suffix: str
    comment_kinds: frozenset[str]

    def is_primitive(self, type_text: str | None) -> bool:
        return type_text is not None and type_text in self.primitive_types
