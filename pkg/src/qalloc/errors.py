"""Exception types raised by the library."""


class QallocError(Exception):
    """Base class for all library errors."""


class InvalidVertexError(QallocError, ValueError):
    """A vertex id is out of range or refers to a deleted vertex."""


class InvalidArgumentError(QallocError, ValueError):
    pass


class EmptyClassError(QallocError, ValueError):
    """A node owns no live vertex of the connectivity graph."""


class DegenerateTopologyError(QallocError, ValueError):
    """Fewer than two nonempty color classes (no inter-node pair exists)."""


class CapacityError(QallocError, ValueError):
    pass


class ConfigError(QallocError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
