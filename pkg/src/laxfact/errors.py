"""Exception hierarchy.  The CLI maps ``UsageError`` subclasses to exit code 2."""


class LaxfactError(Exception):
    pass


class ContractViolation(LaxfactError):
    """A caller broke an operation's precondition (non-composable pair, shape mismatch, ...)."""


class UsageError(LaxfactError):
    pass


class ResourceError(UsageError):
    """An enumeration would exceed the configured caps."""


class CategoryFileError(UsageError):
    """A category description file could not be loaded."""


class BeyondAmbient(LaxfactError):
    """A construction needs an object larger than the ambient category provides."""


class PreconditionError(ContractViolation):
    pass


class NotPointed(LaxfactError):
    """Some hom-set has no least element, so minimal-map classes are undefined."""
