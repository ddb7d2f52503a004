"""Exception hierarchy shared by all treelocal modules."""


class TreeLocalError(Exception):
    """Base class for all errors raised by this package."""


# --- permutation groups ---

class MalformedCycle(TreeLocalError):
    """Cycle-notation string cannot be parsed."""


class OutOfRange(TreeLocalError):
    """A point lies outside 1..d."""


class RepeatedEntry(TreeLocalError):
    """A point occurs twice in a cycle decomposition."""


class DegreeMismatch(TreeLocalError):
    """Permutations or groups of different degrees were mixed."""


class SizeLimitExceeded(TreeLocalError):
    """An enumeration would exceed its configured cap."""


class ConflictingConstraints(TreeLocalError):
    """A constraint set maps one source to two different targets."""


class TrivialGroup(TreeLocalError):
    """An operation requires a nontrivial group."""


# --- automorphisms ---

class InconsistentPortrait(TreeLocalError):
    """Edge compatibility failed at an evaluated edge."""


class RadiusExhausted(TreeLocalError):
    """An iteration did not stabilize within the allowed radius."""


# --- constructions ---

class IncompatibleSigma(TreeLocalError):
    """A prescribed local permutation violates an edge constraint."""


class OrbitViolation(TreeLocalError):
    """A single-color fill constraint has no solution in the fill group."""


class LengthMismatch(TreeLocalError):
    """Two segments of different lengths were compared."""


class NotTwoTransitive(TreeLocalError):
    """The construction needs a 2-transitive outer group."""


class ConstraintUnsolvable(TreeLocalError):
    """No group element satisfies a line slot constraint."""


class NotStabilizing(TreeLocalError):
    """A generator does not stabilize the line on the checked window."""


class HypothesisUnverified(TreeLocalError):
    """A check was invoked without its hypotheses having been verified."""


class SearchExhausted(TreeLocalError):
    """A bounded search finished without finding a witness."""
