class NonlocalityException(Exception):
    """Base exception for nonlocality computations"""

    pass


class InvalidState(NonlocalityException):
    """Raised when a state, distribution or setting violates its invariants"""

    pass


class DimensionMismatch(NonlocalityException):
    """Raised when objects with different party counts are combined"""

    pass


class OptimizerDidNotConverge(NonlocalityException):
    """Raised when the closest product state search fails its stationarity check"""

    pass


class SignalingDistribution(NonlocalityException):
    """Raised when a marginal depends on the settings of the other parties"""

    pass


class DegenerateSettings(NonlocalityException):
    """Raised when the Hardy subspace vectors are linearly dependent"""

    pass


class NonUniqueSolution(NonlocalityException):
    """Raised when the Hardy subspace does not single out one state"""

    pass


class VanishingSuccess(NonlocalityException):
    """Raised when the constructed state has no overlap with |a_I>"""

    pass


class IdenticallyZeroPolynomial(NonlocalityException):
    """Raised when c1^2 - c0 c2 vanishes for every x (product state)"""

    pass


class IdenticallyZeroF(NonlocalityException):
    """Raised when F(x, x*) vanishes for every modulus at a given phase"""

    pass


class DegenerateX(NonlocalityException):
    """Raised when the setting parameter x lies on an excluded value"""

    pass


class SingularDenominator(NonlocalityException):
    """Raised when a closed-form setting parameter has a vanishing denominator"""

    pass


class NotEntangled(NonlocalityException):
    """Raised when a state that must be entangled is a product state"""

    pass


class NumericalFailure(NonlocalityException):
    """Raised when an LP yields neither validated weights nor a validated certificate"""

    pass
