class RasecError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateGeometry(RasecError, ValueError):
    """A direction or position vector has (numerically) zero length."""


class AlphaMaxUndefined(RasecError, ValueError):
    """The boresight line never becomes orthogonal to the eavesdropper."""


class CollinearGeometry(RasecError, ValueError):
    """User and eavesdropper lie on the same ray from the antenna."""


class DegenerateDensity(RasecError, ValueError):
    """The channel power has all its mass at zero (no density exists)."""


class NonConvergent(RasecError, ArithmeticError):
    """An adaptive integration ran out of its subdivision budget."""


class ConfigError(RasecError):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


class ValidationError(ConfigError, ValueError):
    pass
