"""Exception hierarchy shared across the package."""


class GraphAlignError(Exception):
    """Base class for all package errors."""


class InvalidInput(GraphAlignError):
    """Malformed or out-of-contract input (bad shape, non-finite, bad config)."""


class NumericalFailure(GraphAlignError):
    """A numerical routine could not produce a valid result."""


class DegenerateCertificate(GraphAlignError):
    """The dual certificate cannot be built (empty large-overlap set)."""


class MissingCrossing(GraphAlignError):
    """Threshold regression: some dimension never crosses the target level."""

    def __init__(self, missing_n):
        self.missing_n = list(missing_n)
        super().__init__(
            f"no threshold crossing within the sigma grid for n = {self.missing_n}"
        )
