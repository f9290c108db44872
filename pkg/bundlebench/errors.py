"""Exception hierarchy for bundlebench.

Every error raised on bad input derives from :class:`BundleBenchError`, which
is itself a ``ValueError`` so the CLI can keep the single
``except ValueError`` -> ``Error: ...`` / exit 2 path.
"""


class BundleBenchError(ValueError):
    """Base class for all bundlebench input and verification errors."""


class UnsupportedAlgebraError(BundleBenchError):
    """Family/rank pair outside A_n, B_n, C_n, D_n, E6, E7."""


class TrivialCenterError(UnsupportedAlgebraError):
    """G2, F4 and E8 have trivial center and no characteristic classes."""


class NotARootError(BundleBenchError):
    """A vector that was expected to be a root is not in R."""


class NotMinusculeError(BundleBenchError):
    """Coweight index j with n_j != 1 does not define a diagram symmetry."""


class LambdaVerificationError(BundleBenchError):
    """The Weyl element found for a class generator failed a consistency check."""


class PoleError(BundleBenchError):
    """Argument of an elliptic function too close to the lattice Z + tau Z."""

    def __init__(self, argument: complex, distance: float):
        self.argument = argument
        self.distance = distance
        super().__init__(
            f"argument {argument:.6g} lies within {distance:.3g} of the period lattice"
        )


class EllipticDomainError(BundleBenchError):
    """Modulus tau outside the supported domain (Im tau below the floor)."""


class UnsupportedOrderError(BundleBenchError):
    """Eisenstein order outside the supported range 1..2."""


class SignGaugeError(BundleBenchError):
    """No +/-1 rescaling makes the structure constants lambda-invariant."""

    def __init__(self, witness: tuple, message: str | None = None):
        self.witness = witness
        super().__init__(
            message or f"no consistent sign gauge; inconsistent pair {witness}"
        )


class InvariantRowError(BundleBenchError):
    """Identified invariant subalgebra does not match the expected table row."""


class SingularPhaseError(BundleBenchError):
    """Dynamical variable too close to a singular hyperplane."""


class NotInvariantError(BundleBenchError):
    """Cartan vector is not fixed by lambda."""


class LatticeMembershipError(BundleBenchError):
    """Vector outside the required lattice (P^vee, Q^vee, ...)."""


class UnsupportedRepresentationError(BundleBenchError):
    """Representation not present in the embedded degree table."""


class WeightExpansionError(BundleBenchError):
    """Weight given as nu - sum c_m alpha_m with malformed coefficients."""


class NonDominantError(BundleBenchError):
    """Coweight with a negative pairing against a simple root."""


class ConfigError(BundleBenchError):
    """Invalid run configuration (flags or config file)."""


class DegenerateSampleError(BundleBenchError):
    """Sample set too small or too singular for a least-squares fit."""
