"""Exception types shared across the library.

Every domain failure derives from ProjlatError so callers can catch one
base class at the CLI boundary; the subclasses carry enough data to
rebuild a useful diagnostic (block index, offending value, witness).
"""

from __future__ import annotations


class ProjlatError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(ProjlatError):
    """Operands live in algebras with different block structure."""


class NotInvertible(ProjlatError):
    """An element has a singular block.

    Attributes:
        block: index of the offending block.
        sigma_min: its smallest singular value.
    """

    def __init__(self, block: int, sigma_min: float):
        self.block = block
        self.sigma_min = sigma_min
        super().__init__(
            f"block {block} is numerically singular (sigma_min={sigma_min:.3e})"
        )


class NotAProjection(ProjlatError):
    """Input cannot be snapped to a projection (eigenvalue in the
    forbidden middle band, or not Hermitian)."""


class NotComplementary(ProjlatError):
    """A perspectivity witness was requested for a pair that is not
    complementary (join != 1 or meet != 0)."""


class PreconditionViolated(ProjlatError):
    """A documented operation precondition failed on the given input."""


class NotLSOrthogonal(ProjlatError):
    """The orthogonalizer needs an LS-orthogonal pair."""


class NotAFrame(ProjlatError):
    """The given projections/witnesses do not assemble into a frame of
    three equivalent orthogonal projections summing to 1."""


class NotAGraphProjection(ProjlatError):
    """Recovery was asked on a projection that is not the graph of an
    operator in the requested slot."""


class NotOrderThree(ProjlatError):
    """Coordinatization needs every block size divisible by 3 and
    frame images that behave like three equivalent orthogonal pieces."""


class FrameAssemblyFailed(ProjlatError):
    """Normalization could not assemble the target frame."""


class SlotMismatch(ProjlatError):
    """The coordinate maps extracted through different slots disagree,
    which means the input was not a lattice isomorphism."""


class IntertwiningFailure(ProjlatError):
    """The reconstructed ring map does not intertwine supports with the
    given lattice map within tolerance.

    Attributes:
        residual: worst support-intertwining distance seen.
    """

    def __init__(self, residual: float, message: str = ""):
        self.residual = residual
        super().__init__(
            message or f"support intertwining failed (residual={residual:.3e})"
        )


class NotRingIso(ProjlatError):
    """The sampled map is not a unital ring isomorphism."""


class NotRealLinear(ProjlatError):
    """The sampled map is not real-linear."""


class DegenerateWitness(ProjlatError):
    """The Skolem-Noether witness construction degenerated (zero image
    of a matrix unit, or a singular candidate witness)."""


class OrthogonalityNotPreserved(ProjlatError):
    """A lattice map failed the orthogonality test.

    Attributes:
        witness: dict with the offending pair and residual.
    """

    def __init__(self, witness: dict):
        self.witness = witness
        super().__init__(
            "map does not preserve orthogonality "
            f"(residual={witness.get('residual', float('nan')):.3e})"
        )


class BadSplit(ProjlatError):
    """Split indices for the nine-piece decomposition are out of range
    or leave a part larger than half the block."""


class NotInvertibleProvenance(ProjlatError):
    """invert_map was called on a lattice map whose provenance does not
    carry an inverse."""
