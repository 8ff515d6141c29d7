"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Objects refer to incompatible mode counts, level counts, or photon sectors."""


class ParameterError(ValueError):
    """A constructor or formula argument is outside its valid range."""


class CapacityError(RuntimeError):
    """Requested size exceeds a configured safety cap."""


class EncodingError(ValueError):
    """A Fock state does not encode exactly one qudit per register mode."""


class EntangledAncillaError(EncodingError):
    """Non-register occupation varies across terms and cannot be factored out."""


class ModeCollisionError(ValueError):
    """Tensor factors occupy overlapping spatial modes."""


class DegenerateStateError(ValueError):
    """Operation undefined on a null (zero-norm) state."""


class RootBracketError(RuntimeError):
    """No sign change found while bracketing a crossover root."""


class VerificationFailure(RuntimeError):
    """A simulated quantity disagrees with its closed-form prediction."""
