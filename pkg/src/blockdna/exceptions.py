"""
Exceptions for blockdna.

This module contains the custom exceptions used throughout the blockdna package.
"""

from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple


class BlockDnaError(Exception):
    """Base exception class for blockdna.

    All other exceptions in the package inherit from this class.
    """
    pass


class ConfigurationError(BlockDnaError):
    """Raised when a parameter set is inconsistent or out of range.

    Examples are a tree of depth 0, an elongation level deeper than the tree,
    a strand layout whose fields do not sum to the strand length, or an
    elongated primer that does not extend the main primer.

    Attributes:
        field_name: Name of the offending parameter, if known
        source: File the parameter was read from, if any
    """

    def __init__(self, message: str, field_name: Optional[str] = None,
                 source: Optional[str] = None) -> None:
        super().__init__(message)
        self.field_name = field_name
        self.source = source


class ValidationError(BlockDnaError):
    """Raised when a structured document fails validation.

    Manifests, patch documents and experiment configs raise this error when a
    required key is missing or a value has the wrong type.

    Attributes:
        errors: Dictionary of validation errors by field
        field_name: Name of the field that failed validation, if applicable
    """

    def __init__(self, message: str, errors: Optional[Dict[str, Any]] = None,
                 field_name: Optional[str] = None) -> None:
        """Initialize a ValidationError.

        Args:
            message: The error message
            errors: Dictionary of validation errors by field
            field_name: Name of the field that failed validation, if applicable
        """
        super().__init__(message)
        self.errors: Dict[str, Any] = errors or {}
        self.field_name: Optional[str] = field_name


class MalformedPayloadError(BlockDnaError):
    """Raised when a base string cannot be mapped back to bytes."""
    pass


class SizeError(BlockDnaError):
    """Raised when a byte buffer does not have the size a unit requires."""
    pass


class AddressError(BlockDnaError):
    """Raised when a block number, version or block range is out of range."""
    pass


class EccDecodeError(BlockDnaError):
    """Raised when an encoding unit cannot be corrected.

    Attributes:
        rows: Indices of the symbol rows that failed to decode
        columns: Columns implicated in the failure (erased or in error)
    """

    def __init__(self, message: str, rows: Iterable[int] = (),
                 columns: Iterable[int] = ()) -> None:
        super().__init__(message)
        self.rows: List[int] = sorted(rows)
        self.columns: List[int] = sorted(columns)


class PatchError(BlockDnaError):
    """Base class for update patch problems."""
    pass


class PatchTooLargeError(PatchError):
    """Raised when a patch inserts more bytes than one record can carry."""
    pass


class PatchApplicationError(PatchError):
    """Raised when a patch does not fit the block it is applied to.

    Attributes:
        bound: Name of the violated bound ('delete', 'insert' or 'length')
        version: Version slot of the failing patch when resolving a chain
    """

    def __init__(self, message: str, bound: str, version: Optional[int] = None) -> None:
        super().__init__(message)
        self.bound = bound
        self.version = version


class VersionOverflowError(BlockDnaError):
    """Raised when a block has no free version slot left for a patch."""
    pass


class PoolError(BlockDnaError):
    """Raised for empty-pool sampling and malformed pool or reads files.

    Attributes:
        line_number: 1-based line of the offending record, if any
    """

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        super().__init__(message)
        self.line_number = line_number


class DecodeFailure(BlockDnaError):
    """Raised when a block cannot be recovered from a readout.

    Attributes:
        block_no: The block that failed
        missing: (version, column) addresses that were never reconstructed
    """

    def __init__(self, message: str, block_no: Optional[int] = None,
                 missing: Sequence[Tuple[int, int]] = ()) -> None:
        super().__init__(message)
        self.block_no = block_no
        self.missing: List[Tuple[int, int]] = sorted(missing)
