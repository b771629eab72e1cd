"""Exception hierarchy."""


class AfsharSimError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(AfsharSimError, ValueError):
    """Invalid optical or scenario parameters."""


class DegenerateFieldError(AfsharSimError, ValueError):
    """A field, state or distribution with zero total weight."""


class SamplingError(AfsharSimError, ValueError):
    """A grid is too coarse (or too small) for the requested operation."""


class GridMismatchError(AfsharSimError, ValueError):
    """Two objects that must share a grid do not."""


class GeometryError(AfsharSimError, ValueError):
    """An impossible plane arrangement, e.g. zero propagation length where one is required."""


class PropagationError(AfsharSimError, ValueError):
    """Unsupported propagation request (negative distance, bad method)."""


class ChainError(AfsharSimError):
    """A step of an optical chain failed.

    Attributes
    ----------
    step_index : int
        Zero-based index of the failing step in the plan.
    """

    def __init__(self, step_index, message):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index


class FitError(AfsharSimError):
    """Fringe fit failed or produced an unreliable result."""


class SpotOverlapError(AfsharSimError):
    """Image spots are not separated well enough to attribute their masses."""


class AccountingError(AfsharSimError):
    """Power bookkeeping violated passivity."""


class LedgerError(AfsharSimError):
    """Inconsistent photon-event bookkeeping."""


class ComplementarityViolation(LedgerError):
    """An event was offered to a second statistic after already being consumed."""

    def __init__(self, event_ids, statistic_id, previous):
        self.event_ids = tuple(event_ids)
        self.statistic_id = statistic_id
        self.previous = dict(previous)
        shown = ", ".join(str(i) for i in self.event_ids[:5])
        more = "" if len(self.event_ids) <= 5 else f" (+{len(self.event_ids) - 5} more)"
        super().__init__(
            f"events [{shown}{more}] already consumed; cannot be reused for {statistic_id!r}"
        )
