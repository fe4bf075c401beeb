"""Shared error base class.

Every domain error carries a stable ``code`` string (its machine-readable
name) so the HTTP layer and CLI can map failures without string matching on
messages.
"""

from __future__ import annotations


class OntolingError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "Error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
