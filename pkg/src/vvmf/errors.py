"""Exception types shared across the package."""


class VvmfError(Exception):
    """Base class for all errors raised by this package."""


class ModuleMismatchError(VvmfError):
    """Operands live over incompatible finite quadratic modules."""


class NotIsotropicError(VvmfError):
    """A subgroup claimed isotropic carries a nonzero quadratic value."""


class DegenerateError(VvmfError):
    """A bilinear form required to be nondegenerate has a radical."""


class SaturationError(VvmfError):
    """A sublattice required to be primitive is not saturated."""


class WittConditionError(VvmfError):
    """rank(M) <= 4: the Witt-index hypothesis must be asserted explicitly."""


class TruncationError(VvmfError):
    """A series operation cannot guarantee coefficients up to the requested order."""


class BorcherdsInputError(VvmfError):
    """A form violates the integral-principal-part / even-constant-term hypotheses."""


class CharacterError(VvmfError):
    """Induction output depends on the coset representatives: wrong character."""


class RationalizationError(VvmfError):
    """A floating coefficient does not sit near a small-denominator rational."""


class InputError(VvmfError):
    """Malformed configuration or definition file."""
