class GuardError(RuntimeError):
    """A size guard refused a computation that would not be desk-scale."""


class CutoffExceeded(GuardError):
    pass


class GuardExceeded(GuardError):
    pass


class NotInSylow(ValueError):
    pass
