"""Exception types shared across the package."""


class OddHodgeError(Exception):
    pass


class DimensionMismatch(OddHodgeError, ValueError):
    pass


class DegreeMismatch(OddHodgeError, ValueError):
    pass


class NonTrivialKernel(OddHodgeError, ValueError):
    """A constant (k = 0) Fourier mode was met where the box operator must be inverted."""


class IncompatibleData(OddHodgeError, ValueError):
    """Hodge-system data violates df = 0 or d*g = 0."""


class TranslationNotExact(OddHodgeError, ValueError):
    pass


class UnderSampled(OddHodgeError, ValueError):
    pass
