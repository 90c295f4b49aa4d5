"""Exception hierarchy shared by every module of the package."""


class LucasUzawaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(LucasUzawaError, ValueError):
    """A structural parameter violates a hard constraint."""


class OutOfRange(InvalidParams):
    def __init__(self, name: str, value: float, constraint: str):
        self.name = name
        self.value = value
        self.constraint = constraint
        super().__init__(f"parameter {name}={value!r} violates {constraint}")


class SigmaIsOne(InvalidParams):
    def __init__(self):
        self.name = "sigma"
        super().__init__("parameter sigma=1 (log utility) is not supported")


class WindowViolated(LucasUzawaError):
    """The parameters lie outside the window in which the economy reaches a BGP."""


class NonPositiveState(LucasUzawaError, ValueError):
    pass


class NonPositiveZ0(LucasUzawaError, ValueError):
    pass


class NonConvergent(LucasUzawaError):
    """Adaptive quadrature exhausted its evaluation budget."""


class NoRoot(LucasUzawaError):
    """No sign change of a consistency relation was found on the scan interval."""


class EvalDomain(LucasUzawaError):
    """A closed-form expression left its real domain (inconsistent constants)."""


class SigmaBetaMismatch(LucasUzawaError):
    """A sigma = beta family was requested for parameters with sigma != beta."""


class StepFailure(LucasUzawaError):
    """The ODE integrator could not advance while keeping the state positive."""
