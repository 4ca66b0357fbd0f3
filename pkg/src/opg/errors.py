"""Exception types shared across the package."""


class OPGError(Exception):
    """Base class for every error raised by this package."""


class BoundaryMismatchError(OPGError):
    def __init__(self, left, right, what="composition"):
        self.left = left
        self.right = right
        super().__init__(f"boundary mismatch in {what}: {tuple(left)} vs {tuple(right)}")


class InvalidGameError(OPGError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid game: " + "; ".join(self.violations))


class ParseError(OPGError):
    def __init__(self, message, pos=None, line=None):
        self.pos = pos
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif pos is not None:
            where = f" (at offset {pos})"
        super().__init__(message + where)


class PreconditionError(OPGError):
    pass


class ResourceGuardError(OPGError):
    """A configured size guard was exceeded."""
