"""Shared exception hierarchy.

Every error raised by this package derives from ToolkitError. The CLI maps
the three branches onto process exit codes, so raising the right branch is
part of each module's contract:

    ValidationError -> exit 2 (malformed or inconsistent input)
    DataGapError    -> exit 3 (input is well formed but a required value is absent)
    TransportError  -> exit 4 (network or remote-API failure)
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DATA_GAP = 3
EXIT_TRANSPORT = 4


class ToolkitError(Exception):
    """Base class for all package errors."""

    exit_code = EXIT_VALIDATION


class ValidationError(ToolkitError):
    """Input violates a structural rule (bad file, bad value, bad argument)."""

    exit_code = EXIT_VALIDATION


class DataGapError(ToolkitError):
    """A computation needs a datum the inputs do not contain.

    Examples: a growth rate missing for a year inside a compounding range,
    a language with no country carrying GDP data. Distinct from
    ValidationError because the inputs are well formed, just incomplete.
    """

    exit_code = EXIT_DATA_GAP


class TransportError(ToolkitError):
    """A remote call failed after retries (network, HTTP 5xx, auth)."""

    exit_code = EXIT_TRANSPORT
