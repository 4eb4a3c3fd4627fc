"""Exception hierarchy shared across the pipeline stages."""


class LitkgError(Exception):
    """Base class for all pipeline failures the CLI reports as exit 1."""


class GraphError(LitkgError):
    """Invalid graph construction input or malformed graph dump."""


class IngestError(LitkgError):
    """Malformed input file (bad header, bad row in strict mode, bad value)."""


class FilterError(LitkgError):
    """Preprocessing failure, e.g. a cutoff below the whitelist floor."""


class TrainingError(LitkgError):
    """Embedding training aborted (bad config or non-finite loss)."""


class EvalError(LitkgError):
    """Evaluation failure, e.g. an empty split or empty rank list."""


class PredictError(LitkgError):
    """Candidate ranking failure, e.g. no resolvable candidates."""


class ConfigError(LitkgError):
    """Run configuration missing, unreadable, or out of bounds."""
