"""Exception types shared across the package."""


class StrongProdError(Exception):
    """Base class for all package errors."""


class SizeLimitError(StrongProdError, ValueError):
    """A product or generator would exceed the vertex size guard."""


class ColoringError(StrongProdError, ValueError):
    """A colouring is malformed or incompatible with its graph."""


class ConstructionError(StrongProdError, ValueError):
    """A construction's precondition does not hold."""


class BudgetExceeded(StrongProdError):
    """An oracle ran out of its vertex, colour, state or time budget."""


class SchemaError(StrongProdError, ValueError):
    """A serialized document does not match the expected schema."""
