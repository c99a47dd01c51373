class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap (photons, matrix dimension, vertices)."""


class SamplingError(RuntimeError):
    """The sampler tried to collapse onto a branch with zero probability."""


class TrainingAborted(RuntimeError):
    """The optimiser received a non-finite objective value."""
