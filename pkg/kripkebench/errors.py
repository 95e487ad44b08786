"""
Exception hierarchy shared by every workbench module.

The CLI turns any WorkbenchError into exit code 2; the HTTP app turns it into
an HTTPException.
"""


class WorkbenchError(Exception):
    """Base class for user-facing failures."""


class FormulaSyntaxError(WorkbenchError):
    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"syntax error at byte {offset}: expected {expected}, found {found}")


class ModelError(WorkbenchError):
    """Malformed frame or model: cycles, persistency, unknown worlds, bad model text."""


class ValuationError(WorkbenchError):
    """Missing atoms or malformed many-valued valuations."""


class SearchSpaceTooLarge(WorkbenchError):
    def __init__(self, size: int, ceiling: int):
        self.size = size
        self.ceiling = ceiling
        super().__init__(
            f"search space of at least {size:,} assignment evaluations exceeds the ceiling of {ceiling:,}"
        )


class FormulaTooDeep(WorkbenchError):
    def __init__(self, nesting: int, limit: int):
        self.nesting = nesting
        self.limit = limit
        super().__init__(f"formula nesting {nesting} exceeds the limit of {limit}")
