class ReproError(Exception):
    """Base class for library errors."""


class InvalidParameterError(ReproError, ValueError):
    pass


class InsufficientSampleError(ReproError):
    def __init__(self, required, got, what="sample"):
        super().__init__(f"{what} too small: need {required}, got {got}")
        self.required = required
        self.got = got


class FoamBudgetError(ReproError):
    """A queried point was not captured within the stage budget."""


class DegenerateRoundingError(ReproError):
    """The rounded weight vector is zero."""


class AlgorithmFailure(ReproError):
    """An internal step found nothing usable; counts as a δ failure."""


class RoundFailure(ReproError):
    """The rejection sampler returned Bottom after its retry."""


class NonTerminationError(ReproError):
    pass


class FitDegenerateError(ReproError):
    pass


class _Bottom:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()
