"""Exception hierarchy shared by every dkmax module."""


class DkmaxError(Exception):
    """Base class for all errors raised by dkmax."""


class InvalidArgumentError(DkmaxError, ValueError):
    pass


class OutOfRangeError(DkmaxError, ValueError):
    """A query falls outside the range a table was built for."""


class DomainError(DkmaxError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class ResourceLimitError(DkmaxError):
    """A configured memory or size budget would be exceeded."""


class InternalInconsistencyError(DkmaxError):
    """A proved inequality failed, which points at an implementation bug."""


class CacheError(DkmaxError):
    pass
