class GuardError(RuntimeError):
    """A size guard refused to run an exponential computation."""


class ContractError(ValueError):
    """An argument violated an operation's precondition."""
