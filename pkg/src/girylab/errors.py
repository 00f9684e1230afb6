"""Exception hierarchy shared by every module."""


class GiryLabError(Exception):
    """Base class for all library errors."""


class InputError(GiryLabError, ValueError):
    """Malformed or inconsistent input (unknown ids, bad weights, space mismatch)."""


class ResourceError(GiryLabError):
    """An enumeration would exceed the configured cap."""


class ConsistencyError(GiryLabError):
    """A value violates an invariant that valid constructions always satisfy."""


class PreconditionError(GiryLabError):
    """An operation was called outside its domain of definition."""
