"""Shared exception types for the toolkit.

Every operation that can fail for a reason the caller may want to branch on
raises one of these instead of a bare ValueError, so the CLI can map failure
modes onto exit codes uniformly.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidParamsError(ToolkitError):
    """Malformed input: bad slope, non-canonical coordinates, bad flag values."""


class UnsupportedSignatureError(ToolkitError):
    """Surface signature outside the supported complexity range."""


class EmptyProjectionError(ToolkitError):
    """A projection was requested for a curve that misses the subsurface."""


class BudgetExceededError(ToolkitError):
    """An enumeration exceeded its configured search budget."""


class CutoffTooSmallError(ToolkitError):
    """A truncated sum was requested below the cut-off that guarantees a
    finite, completely enumerable family of contributing subsurfaces."""


class TriangulationMismatchError(ToolkitError):
    """Two curves living on different triangulations were combined."""


class InvalidSubsurfaceError(ToolkitError):
    """A subsurface description is inconsistent (bad boundary, bad component)."""


class NotApplicableError(ToolkitError):
    """The requested check does not apply to the given configuration."""
