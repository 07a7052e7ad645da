class InvariantError(ValueError):
    """A structural invariant of an input object does not hold."""


class IdentityCheckError(ArithmeticError):
    """Two independently computed sides of an identity disagree."""

    def __init__(self, identity: str, detail: str = ""):
        self.identity = identity
        msg = f"identity check failed: {identity}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ModelError(ValueError):
    """Malformed model file or command; ``where`` locates the problem."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
