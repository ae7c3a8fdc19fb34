"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """A mathematical guarantee failed at runtime.

    Raised only for conditions the theory promises can never happen
    (non-terminating stabilization, cyclic rotor output, a missing basis).
    Seeing one means a bug, not bad input.
    """
