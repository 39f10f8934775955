"""Exception taxonomy.

Every failure mode that the library treats as part of its contract gets its own
class so callers (and the CLI exit-code mapping) can dispatch on type.  Input
problems derive from InputError, broken internal invariants from
InternalInconsistency.
"""


class DescentKitError(Exception):
    """Base class for all library errors."""


class InputError(DescentKitError):
    """The caller handed us something malformed (exit code 2 territory)."""


# ---------------------------------------------------------------- field kernel

class InvalidModulus(InputError):
    """p is not a prime in the supported range 2..251."""


class DivisionByZero(DescentKitError):
    pass


class BothZero(DescentKitError):
    """gcd(0, 0) requested."""


class DegreeOverflow(DescentKitError):
    """A polynomial exceeded the packed-exponent capacity of its ring."""


# ------------------------------------------------------------- extension tower

class SeparabilityFailure(InputError):
    """The declared separable part is not separable/irreducible over K."""


class AutomorphismGroupFailure(InputError):
    """The supplied automorphism images do not form the required group."""


class PIndependenceFailure(InputError):
    """Inseparable generator i is not p-independent over the subtower."""

    def __init__(self, index, message):
        super().__init__(message)
        self.index = index


class SpecMismatch(DescentKitError):
    """Operands belong to different tower specifications."""


class ZeroInverse(DescentKitError):
    """Multiplicative inverse of 0 requested in L."""


class UnknownAutomorphism(InputError):
    pass


# -------------------------------------------------------------- truncated ring

class NotAUnit(DescentKitError):
    """trunc_invert on an element with vanishing constant coefficient."""


# -------------------------------------------------------------- heerema-galois

class RankMismatch(DescentKitError):
    """Higher-derivation ranks disagree."""


class NotLeibniz(InputError):
    """A purported higher derivation violates the Leibniz rule."""


class NotInA0(DescentKitError):
    """delta_inverse on an automorphism outside A0."""


# ----------------------------------------------------------------- galois-hopf

class ContextMismatch(DescentKitError):
    """Operands belong to different Galois-Hopf algebra contexts."""


class SemilinearityFailure(DescentKitError):
    """Extracted generator data does not satisfy the semilinear module axioms."""


# -------------------------------------------------------------- descent engine

class InternalInconsistency(DescentKitError):
    """Two independently proved-equivalent criteria disagreed: a library bug."""


class NotAForm(DescentKitError):
    """The invariant space of a validated action fails to be a K-form."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class ActionValidationFailure(InputError):
    """kform_from_action called on action data that fails validate_action."""


class ExponentTooLarge(InputError):
    """deformation_descent requires tower exponent e = 1."""


class NotFree(InputError):
    """The supplied truncated module basis is not free (rank drop mod Xbar)."""


# -------------------------------------------------------------------------- cli

class InputSyntaxError(InputError):
    """Parse error with position information."""

    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        what = f"expected {expected}"
        if found is not None:
            what += f", found {found}"
        super().__init__(f"{line}:{col}: {what}")


class ResolutionError(InputError):
    """An identifier in an input expression does not resolve."""
