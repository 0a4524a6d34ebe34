"""Exception types shared across the workbench."""


class ContactLfdError(Exception):
    """Base class for all workbench errors."""


class WorkspaceError(ContactLfdError):
    """Target pose lies outside the manipulator workspace."""


class GainDefinitionError(ContactLfdError):
    """Control gains cannot be derived from the given impedance spec.

    Carries the name of the offending matrix in ``matrix_name``.
    """

    def __init__(self, matrix_name: str, message: str):
        super().__init__(message)
        self.matrix_name = matrix_name


class DegenerateSectorError(ContactLfdError):
    """Direction-set generators do not span a usable sector."""


class NoConsistentDirectionError(ContactLfdError):
    """No direction survives intersection of the demonstrated sectors."""


class OutOfModelError(ContactLfdError):
    """A mean motion direction deviates 90 degrees or more from the
    desired direction, outside what the compliance model can express."""


class ParseError(ContactLfdError):
    """A persisted file is malformed; carries the 1-based line number."""

    def __init__(self, path, line_number: int, message: str):
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number
