"""Exception types shared across the workbench.

Every error the HTTP layer has to translate into a status code lives here,
so the service module can map them in one place.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


# --- corpus ingestion -------------------------------------------------------

class MissingId(WorkbenchError):
    """An id is present in one input file but absent in another."""

    def __init__(self, record_id: str, detail: str = ""):
        self.record_id = record_id
        msg = f"id {record_id!r} missing"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class DimensionMismatch(WorkbenchError):
    """An embedding vector does not match the corpus dimension."""


class MalformedRecord(WorkbenchError):
    """A line in an input file could not be parsed or failed validation."""

    def __init__(self, path: str, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


class ProbabilityNotNormalized(WorkbenchError):
    """A checkpoint probability triple does not sum to 1 within tolerance."""


# --- data map ---------------------------------------------------------------

class TooFewCheckpoints(WorkbenchError):
    """Data-map statistics need at least two checkpoints."""


# --- neighbor index ---------------------------------------------------------

class ZeroNorm(WorkbenchError):
    """Cosine similarity is undefined for a zero-norm vector."""


class UnknownId(WorkbenchError):
    """The requested id is not in the corpus."""


class KTooLarge(WorkbenchError):
    """k exceeds the number of other points in the corpus."""


# --- DCC mining -------------------------------------------------------------

class ConfigInvalid(WorkbenchError):
    """A configuration value violates its declared invariants."""


class NotADcc(WorkbenchError):
    """The id was not produced by the miner under the current config."""


# --- suggestions ------------------------------------------------------------

class InsufficientNeighbors(WorkbenchError):
    """Fewer same-label neighbors exist than the prompt needs."""


class ServiceUnavailable(WorkbenchError):
    """The external completion service could not be reached."""


class UnparseableCompletion(WorkbenchError):
    """A completion did not contain the expected separator line.

    Instances are returned alongside successful parses (never raised from
    the fetch loop, never dropped) so the caller can surface them.
    """

    def __init__(self, raw_completion: str):
        self.raw_completion = raw_completion
        super().__init__(f"completion has no context-word line: {raw_completion!r}")


# --- estimation -------------------------------------------------------------

class ScorerUnavailable(WorkbenchError):
    """A checkpoint scorer failed; the whole estimate is abandoned."""

    def __init__(self, checkpoint_index: int, detail: str = ""):
        self.checkpoint_index = checkpoint_index
        msg = f"scorer for checkpoint {checkpoint_index} unavailable"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


# --- workbench service ------------------------------------------------------

class NotLoaded(WorkbenchError):
    """No corpus is loaded (or it is empty)."""


class NoEstimate(WorkbenchError):
    """The draft has never been estimated, so it cannot be submitted."""


class UnknownDraft(WorkbenchError):
    """No draft with the given id exists."""


class EmptySuite(WorkbenchError):
    """The export filter matched no submitted drafts."""


class MalformedSuite(WorkbenchError):
    """The suite file is empty or contains an invalid record."""
