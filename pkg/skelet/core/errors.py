class SkelFormatError(ValueError):
    """Raised for malformed SKEL/MOVES/TRI documents."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{where}{message}")


class StructureError(SkelFormatError):
    """Raised for documents that parse but break the structural invariants of the encoding."""


class RegionError(ValueError):
    """Raised when the orbit dynamics contain a self-reversed orbit."""


class MoveError(ValueError):
    """Raised when a move site is stale, not applicable, or yields an invalid complex."""


class CurveError(MoveError):
    """Raised for curves that cannot bound an external disc."""


class BudgetExceeded(RuntimeError):
    """Raised when a budgeted procedure does not converge."""
