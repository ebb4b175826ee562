"""Exception hierarchy shared by all modules."""


class GameError(ValueError):
    """Base class for every validation or precondition failure."""


class NotNormalized(GameError):
    pass


class NonFinite(GameError):
    pass


class NegativeProbability(GameError):
    pass


class NonRealDiagonal(GameError):
    """Raised when a density matrix diagonal carries an imaginary residue."""


class InvalidDensityMatrix(GameError):
    pass


class InvalidStrategy(GameError):
    pass


class PreconditionViolated(GameError):
    pass


class OrderingViolated(GameError):
    """Battle of the Sexes payoffs must satisfy alpha > beta > gamma."""


class InvalidEpsilon(GameError):
    pass


class InvalidDelta(GameError):
    pass


class InvalidGrid(GameError):
    pass
