"""Parsers for model responses: translation prefix and rating markers.

Ratings are read from the LAST `Rating:` occurrence because the
chain-of-thought protocols ask the model to end with it and explanations
may mention candidate ratings earlier. Anything that does not normalize to
the expected vocabulary stays Unparsed; it is never coerced to a verdict.
"""

from __future__ import annotations

import re

TRANSLATION_PREFIX = "English:"
_RATING_MARKER = re.compile(r"rating\s*:", re.IGNORECASE)

CORRECT = "Correct"
INCORRECT = "Incorrect"
UNPARSED = "Unparsed"

SCALE_RATINGS = ("Poor", "Fair", "Good", "VeryGood", "Excellent")

_BINARY = {"correct": CORRECT, "incorrect": INCORRECT}
_SCALE = {rating.lower(): rating for rating in SCALE_RATINGS}


def parse_translation(raw: str) -> str | None:
    """Extract the translation after the `English:` prefix, or None.

    The prefix must open the response (leading whitespace aside); the
    remainder is whitespace-trimmed. Empty translations count as missing.
    """
    stripped = raw.lstrip()
    if not stripped.startswith(TRANSLATION_PREFIX):
        return None
    translation = stripped[len(TRANSLATION_PREFIX) :].strip()
    return translation or None


def _last_rating_token(raw: str) -> str | None:
    last = None
    for match in _RATING_MARKER.finditer(raw):
        last = match
    if last is None:
        return None
    rest = raw[last.end() :].splitlines()[0] if raw[last.end() :] else ""
    # tolerate decoration around the word itself: backticks, bold, a full stop
    return rest.strip().strip("`*_.!").strip()


def parse_binary(raw: str) -> str:
    """CORRECT/INCORRECT from the final rating marker; else Unparsed."""
    token = _last_rating_token(raw)
    if token is None:
        return UNPARSED
    return _BINARY.get(token.lower(), UNPARSED)


def parse_scale(raw: str) -> str:
    """Five-point rating from the final marker, space/case-insensitive."""
    token = _last_rating_token(raw)
    if token is None:
        return UNPARSED
    return _SCALE.get(token.replace(" ", "").lower(), UNPARSED)
