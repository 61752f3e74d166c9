"""Exception hierarchy shared by the planner modules."""


class PlanningError(Exception):
    """Base class for every error raised by tricircle."""


class InvalidRadiusError(PlanningError, ValueError):
    pass


class GeometryError(PlanningError, ValueError):
    """A point that should lie on a circle does not."""


class DegeneratePairError(PlanningError, ValueError):
    """Start and goal oriented points coincide."""


class NoHyperbolaError(PlanningError):
    """Terminal circles too close for a middle-circle locus to exist.

    ``deficit`` is ``d(o1, o3) - |r3 - r1|`` (non-positive).
    """

    def __init__(self, deficit, message=None):
        self.deficit = deficit
        super().__init__(message or f"no middle-circle locus: d(o1,o3) - |r3-r1| = {deficit:.6g}")


class PoleError(PlanningError, ValueError):
    """Parameter sits on a pole of the hyperbola parameterisation."""


class DegenerateTangencyError(PlanningError):
    pass


class NonexistentLimitError(PlanningError):
    """No direction-consistent common tangent for the requested pole."""


class UnreachableLengthError(PlanningError):
    """Requested length is outside the reachable set."""

    def __init__(self, length, reachable, message=None):
        self.length = length
        self.reachable = reachable
        super().__init__(message or f"length {length:.6g} is not reachable; reachable set is {reachable}")


class BelowMinimumError(UnreachableLengthError):
    pass


class GapInversionError(PlanningError):
    """Pair in the CSC-shortest complement class with ``l1 >= l2``.

    The unreachable gap ``(l1, l2)`` would be empty; reported rather than
    silently treated as fully reachable.
    """

    def __init__(self, l1, l2):
        self.l1 = l1
        self.l2 = l2
        super().__init__(f"unreachable gap is empty or inverted: l1={l1!r} >= l2={l2!r}")


class NoGuaranteeError(PlanningError):
    """Radii pair lies outside every set for which elongation is guaranteed."""
