"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class StepwiseError(Exception):
    """Base class for every error raised by this package."""


class InvalidRank(StepwiseError, ValueError):
    pass


class IncompleteMultiplicity(StepwiseError, ValueError):
    pass


class NotARoot(StepwiseError, ValueError):
    pass


class LayerMismatch(StepwiseError, ValueError):
    pass


class UnsupportedForm(StepwiseError):
    """Bracket-level computation requested on a non-split multiplicity function."""


class CartanDirection(StepwiseError, ValueError):
    """Bracket of opposite root vectors; lands in the Cartan subalgebra."""


class OddDimension(StepwiseError, ValueError):
    pass


class NotAntisymmetric(StepwiseError, ValueError):
    pass


class ArityError(StepwiseError, ValueError):
    pass


class StructureViolation(StepwiseError):
    """An identity that the theory guarantees failed; signals a bug."""


class IncompatibleFamily(StepwiseError, ValueError):
    pass


class FamilyViolation(StepwiseError):
    def __init__(self, level: str, witness, message: str = ""):
        self.level = level
        self.witness = witness
        super().__init__(message or f"{level}: {witness}")

    def to_dict(self) -> dict:
        return {"level": self.level, "witness": self.witness, "message": str(self)}


class SingularParameter(StepwiseError, ValueError):
    pass


class QuadratureFailure(StepwiseError):
    pass
