"""Shared exception types."""


class TreeValidationError(ValueError):
    """Invalid tree specification (bad node index, edge, or weight)."""


class SizeGuardError(RuntimeError):
    """Requested computation exceeds the desk-scale size guard."""


class ExpressionError(ValueError):
    """Expression parse or evaluation failure, with byte offset when known."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)
