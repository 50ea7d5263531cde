"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2, ComputationError -> 3,
OSError during output -> 4.
"""


class InputError(ValueError):
    """Invalid user-supplied data or parameters."""


class ComputationError(RuntimeError):
    """An estimator or algorithm failed on otherwise valid input."""
