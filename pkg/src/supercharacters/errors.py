"""Exception types shared across the package."""


class SupercharacterError(ValueError):
    """Base class for all package errors."""


class OutOfRange(SupercharacterError):
    pass


class NotAUnit(SupercharacterError):
    pass


class BadModulus(SupercharacterError):
    pass


class BadParameter(SupercharacterError):
    pass


class DimensionMismatch(SupercharacterError):
    pass


class NoSuchRoot(SupercharacterError):
    pass


class NotOfForm(SupercharacterError):
    """Some element of the subgroup is neither jn/k + 1 nor jn/k - 1."""


class HypothesesNotVerified(SupercharacterError):
    pass


class ViewportDegenerate(SupercharacterError):
    pass
