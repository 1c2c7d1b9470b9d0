"""Error taxonomy shared by all modules; codes map 1:1 to API errors."""

from __future__ import annotations


class SemUnitError(Exception):
    code = "validation"

    def __init__(self, message: str, details: list | None = None):
        super().__init__(message)
        self.details = details or []


class NotFoundError(SemUnitError):
    code = "not_found"


class ValidationError(SemUnitError):
    code = "validation"


class ConflictError(SemUnitError):
    code = "conflict"


class FormatError(SemUnitError):
    code = "format"


class UnitTypeError(SemUnitError):
    code = "type_error"


class IntegrityError(SemUnitError):
    code = "integrity"
