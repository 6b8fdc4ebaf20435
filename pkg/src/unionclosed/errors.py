"""Exception hierarchy shared across the package."""


class FamilyError(ValueError):
    """A set family (or a mask inside it) is malformed."""


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class ProvenStatementViolation(AssertionError):
    """A check of a proven statement failed.

    Raising this always means a bug in this package, never a mathematical
    finding. Carries the offending family for diagnostics.
    """

    def __init__(self, check: str, message: str, family=None):
        self.check = check
        self.family = family
        detail = f"[{check}] {message}"
        if family is not None:
            detail += f"\nfamily (n={family.n}): {family.to_sets()}"
        super().__init__(detail)
