"""Exception hierarchy for permquad.

Every library-specific failure derives from PermquadError so callers can
catch broadly; verification mismatches (which indicate a bug, not bad
input) derive from VerificationMismatch.
"""


class PermquadError(Exception):
    """Base class for all permquad errors."""


# --- field construction / arithmetic ---

class NotIrreducible(PermquadError):
    """The supplied defining polynomial factors over F_p."""


class NoTableEntry(PermquadError):
    """No shipped defining polynomial for (p, N) and none was supplied."""


class DivisionByZero(PermquadError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class NotInSubfield(PermquadError):
    """Element does not lie in the requested subfield."""


class BadTower(PermquadError):
    """Subfield degrees do not form a tower (m | d | N violated)."""


class BadOrder(PermquadError):
    """Requested root-of-unity group does not embed in this field."""


# --- polynomials and rational maps ---

class ZeroPolynomial(PermquadError):
    """Operation undefined for the zero polynomial."""


class DivisionByZeroPoly(PermquadError):
    """Polynomial division by the zero polynomial."""


class BothZero(PermquadError):
    """Rational map needs a nonzero numerator or denominator."""


class DegenerateMap(PermquadError):
    """Degree-one map with vanishing determinant."""


class ConstantMap(PermquadError):
    """Operation undefined for constant rational maps."""


class SplitFailure(PermquadError):
    """A fiber does not split over the realized field extension."""


class DegreeTooHigh(PermquadError):
    """Polynomial degree exceeds what the operation supports."""


class BetaNotInFqStar(PermquadError):
    """Linear coefficient must be a nonzero element of F_q."""


# --- criteria / oracle preconditions ---

class ENonzeroViolated(PermquadError):
    """The coefficient functional e vanishes where it must not."""


class HypothesisViolated(PermquadError):
    """A stated precondition of the check does not hold."""


class BadResidue(PermquadError):
    """Exponent r fails the required congruence mod q+1."""


class MapNotStable(PermquadError):
    """Image of the map leaves the domain it was asserted to preserve."""


class BadConjugators(PermquadError):
    """Degree-one conjugators do not carry mu_{q+1} onto P^1(F_q)."""


class RamMismatch(PermquadError):
    """Observed ramification multiset differs from the asserted one."""


class BadR(PermquadError):
    """No admissible exponent r exists in the scanned range."""


class ConstraintViolated(PermquadError):
    """Family parameters violate the case constraints."""


class NoAdmissibleExponent(PermquadError):
    """The exponent congruence has no solution."""


class NoAdmissibleLambda(PermquadError):
    """No group element satisfies the requested membership constraints."""


# --- identities ---

class NonExactDivision(PermquadError):
    """Polynomial division expected to be exact left a remainder."""


class SizeLimit(PermquadError):
    """Instance exceeds the dense-arithmetic size limit."""


class BudgetExceeded(PermquadError):
    """Exhaustive sweep larger than the configured work budget."""


# --- internal consistency ---

class VerificationMismatch(PermquadError):
    """Two supposedly equivalent computations disagree (library bug)."""


class TableEntryFails(VerificationMismatch):
    """A shipped known-permutation entry failed its check."""
