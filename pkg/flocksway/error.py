class FlockswayError(RuntimeError):
    """base class for everything flocksway raises on purpose

    ``status`` doubles as the process exit code when the error reaches the
    runner, ``code`` is a stable machine-readable identifier.
    """

    status = 1
    code = "FLOCKSWAY.error"

    def __init__(self, message, data=None, status=None, code=None) -> None:
        super().__init__(message)
        self.message = message
        self.data = data
        self.success = False
        if status is not None:
            self.status = status
        if code is not None:
            self.code = code

    def __str__(self):
        return self.message


class InvalidArgumentError(FlockswayError, ValueError):
    """raised if an operation was called outside of its preconditions"""

    code = "FLOCKSWAY.invalid_argument"


class StepSizeTooLarge(InvalidArgumentError):
    """raised if a step size breaks the nonnegativity of a transition matrix"""

    code = "FLOCKSWAY.step_size"


class NoIntersection(InvalidArgumentError):
    """raised if two discs do not intersect"""

    code = "FLOCKSWAY.geometry.no_intersection"


class CoincidentCenters(InvalidArgumentError):
    """raised if two discs share their center"""

    code = "FLOCKSWAY.geometry.coincident_centers"


class UndefinedBearing(InvalidArgumentError):
    """raised if a bearing between identical points is requested"""

    code = "FLOCKSWAY.geometry.undefined_bearing"


class InfeasibleInfluence(InvalidArgumentError):
    """raised if the influencing agents cannot bound the convergence horizon"""

    code = "FLOCKSWAY.dynamics.infeasible_influence"


class HypothesisNotMet(InvalidArgumentError):
    """raised if a trajectory violates the hypothesis of a rate bound"""

    code = "FLOCKSWAY.spectral.hypothesis"

    def __init__(self, message, step, data=None) -> None:
        super().__init__(message, data=data)
        self.step = step


class PlacementError(FlockswayError):
    """raised if agents cannot be placed as requested"""

    status = 2
    code = "FLOCKSWAY.placement"


class ConfigError(FlockswayError):
    """raised for invalid simulation configurations"""

    code = "FLOCKSWAY.config"


class ParseError(ConfigError):
    """raised in case of malformed configuration text"""

    code = "FLOCKSWAY.config.parse"

    def __init__(self, message, key=None, line=None) -> None:
        location = []
        if key is not None:
            location.append('key "%s"' % key)
        if line is not None:
            location.append("line %d" % line)
        if location:
            message = "{} ({})".format(message, ", ".join(location))
        super().__init__(message, data={"key": key, "line": line})
        self.key = key
        self.line = line


class SimulationError(FlockswayError):
    """raised if a simulation could not be carried out"""

    status = 2
    code = "FLOCKSWAY.simulation"


class CommandError(FlockswayError):
    """raised if an error occurred while executing a command"""

    code = "FLOCKSWAY.command"


class OutputError(FlockswayError):
    """raised if results cannot be written"""

    status = 2
    code = "FLOCKSWAY.output"
