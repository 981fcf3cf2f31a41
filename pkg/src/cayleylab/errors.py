"""Exception types shared across the package.

The CLI maps each class to its own exit status, so keep the hierarchy flat.
"""


class PreconditionError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class FeasibilityError(ValueError):
    """An exhaustive enumeration would exceed its size guard."""


class GroupSpecError(ValueError):
    """A group description could not be parsed or fails the group axioms."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved abs error {achieved:.3e})")
        self.achieved = achieved
