"""Exception types shared across the toolkit.

Everything raised on bad data or bad configuration derives from
TranslitError so the CLI can map it to a single exit code.
"""


class TranslitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TranslitError):
    """Bad or missing configuration (unknown script, unreadable model, ...)."""


class CapacityError(TranslitError):
    """More codes requested than the code-space profile can provide."""


class InputError(TranslitError):
    """Malformed input data, e.g. invalid UTF-8; message carries the byte offset."""


class FormatError(TranslitError):
    """Text does not parse under a declared file format or the wire grammar."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class IntegrityError(TranslitError):
    """A bijection or schema constraint is violated."""


class DecodeError(TranslitError):
    """Strict decoding hit a code segment with no codebook match."""

    def __init__(self, message: str, offset: int | None = None, segment: str | None = None):
        super().__init__(message)
        self.offset = offset
        self.segment = segment


class TrainingError(TranslitError):
    """Classifier training cannot proceed (e.g. single-label corpus)."""


class ComputationError(TranslitError):
    """A metric is undefined for the given inputs."""


class StageError(TranslitError):
    """A pipeline stage failed; message carries captured diagnostics."""
