"""Exception hierarchy shared across the harness.

The CLI maps these onto its exit-code contract: configuration and
validation problems exit 1, runtime/transport problems exit 2.
"""


class JaxportError(Exception):
    """Base class for all harness errors."""


class ConfigError(JaxportError):
    """Bad run configuration: missing roles, unreadable paths, bad flags."""


class DatasetError(JaxportError):
    """Base class for fixed-bug dataset problems."""


class DatasetParseError(DatasetError):
    """Malformed dataset file. Carries the byte offset of the error."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class DatasetValidationError(DatasetError):
    """Structurally well-formed file violating an entry invariant."""


class EntryNotFoundError(DatasetError):
    """Requested example_id is not present in the dataset."""


class EmptyDatasetError(DatasetError):
    """Operation requires at least one entry."""


class MetricError(JaxportError):
    """A metric could not produce any value (e.g. every verdict unparseable)."""


class LlmError(JaxportError):
    """Base class for model-access failures."""


class TransportError(LlmError):
    """Transient transport failure; retried, raised once attempts are exhausted."""


class AuthenticationError(LlmError):
    """Credential rejection. Never retried; a configuration problem."""


class ProviderError(LlmError):
    """Provider returned an unusable response (e.g. empty text)."""
