"""Exception hierarchy shared by the geometry, quadrature and element code."""


class CrenrichError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(CrenrichError, ValueError):
    """Degenerate triangle or a point outside the admissible region."""


class DomainError(CrenrichError, ValueError):
    """Argument outside the mathematical domain of a function."""


class SingularParameterError(DomainError):
    """Family parameter at which the degrees of freedom are not unisolvent."""


class QuadratureMisuseError(CrenrichError, ValueError):
    """A rule with the wrong weight was handed to a functional."""


class MeshParseError(CrenrichError, ValueError):
    """Malformed Triangle .node/.ele input."""

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where += f"{source}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)
