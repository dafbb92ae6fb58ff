"""Language registry. Only Java is implemented; other grammars plug in here."""

from __future__ import annotations

from .base import LanguageSpec
from .java import JAVA

_LANGUAGES = {"java": JAVA}


def get_language(name: str) -> LanguageSpec:
    try:
        return _LANGUAGES[name.lower()]
    except KeyError:
        raise ValueError(f"unsupported language: {name!r}") from None


def supported_languages() -> list[str]:
    return sorted(_LANGUAGES)


def grammar_for(name: str):
    if get_language(name).name == "java":
        from .java import grammar

        return grammar()
    raise ValueError(f"no grammar bound for {name!r}")


__all__ = ["LanguageSpec", "JAVA", "get_language", "supported_languages", "grammar_for"]
