"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by the toolkit."""


class NotInRealForm(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class LogBranchFailure(GeometryError):
    pass


class SingularGroupElement(GeometryError):
    pass


class NotImmersion(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


class NoLiftBranch(GeometryError):
    pass


class ChartBranchFailure(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class SingularMetric(GeometryError):
    pass


class NotConformal(GeometryError):
    pass


class NotALift(GeometryError):
    pass


class NotFlat(GeometryError):
    pass


class StepCountTooSmall(GeometryError):
    pass


class OpenPath(GeometryError):
    pass


class UnknownEntry(GeometryError, KeyError):
    pass


class ConfigError(GeometryError):
    """Malformed run configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
