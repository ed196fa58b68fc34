"""Supported target languages.

The default set is the eight grammatically gendered languages the evaluation
ships morphology rules for.  Translation backends accept any registered code,
so additional languages can be wired in without touching this module's users;
morphological gender extraction remains limited to the rule-equipped set.
"""

from __future__ import annotations

DEFAULT_LANGUAGES = ("es", "fr", "it", "ru", "uk", "he", "ar", "de")

_registered: set[str] = set(DEFAULT_LANGUAGES)


class UnsupportedLanguageError(ValueError):
    """Raised for a language code outside the registered set."""


def registered_languages() -> frozenset[str]:
    return frozenset(_registered)


def register_language(code: str) -> None:
    """Allow an extra ISO-639-1 code through backend-facing validation."""
    if not code or not code.isalpha() or len(code) != 2:
        raise ValueError(f"not an ISO-639-1 code: {code!r}")
    _registered.add(code.lower())


def require_language(code: str) -> str:
    """Validate ``code`` against the registry and return it lowercased."""
    lowered = code.lower()
    if lowered not in _registered:
        known = ", ".join(sorted(_registered))
        raise UnsupportedLanguageError(
            f"unsupported language {code!r} (registered: {known})"
        )
    return lowered
