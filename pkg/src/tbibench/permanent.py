"""Matrix permanents and single-amplitude checks for collision-free boson sampling."""
from __future__ import annotations

import numpy as np

from .errors import ResourceLimitError
from .tbi import TBIConfig, mode_unitary

__all__ = ["amplitude_oracle", "permanent"]

MAX_PERMANENT_DIM = 20


def permanent(matrix) -> complex:
    """Permanent by Ryser's formula, visiting column subsets in Gray-code order.

    Row sums are updated by adding or removing a single column per step, so
    the cost is ``O(2**k * k)`` for a ``k x k`` matrix.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    k = a.shape[0]
    if k > MAX_PERMANENT_DIM:
        raise ResourceLimitError(f"dimension {k} exceeds permanent cap {MAX_PERMANENT_DIM}")
    if k == 0:
        return 1.0 + 0j

    row_sums = np.zeros(k, dtype=complex)
    total = 0j
    in_subset = np.zeros(k, dtype=bool)
    gray_prev = 0
    for step in range(1, 1 << k):
        gray = step ^ (step >> 1)
        j = (gray ^ gray_prev).bit_length() - 1
        gray_prev = gray
        if in_subset[j]:
            row_sums -= a[:, j]
        else:
            row_sums += a[:, j]
        in_subset[j] = not in_subset[j]
        size = bin(gray).count("1")
        term = np.prod(row_sums)
        total += term if size % 2 == k % 2 else -term
    return complex(total)


def amplitude_oracle(config: TBIConfig, input_occ, output_occ) -> complex:
    """Transition amplitude between collision-free occupations via a permanent.

    Selects the rows of the mode unitary for occupied output modes and the
    columns for occupied input modes.
    """
    inp = [int(c) for c in input_occ]
    out = [int(c) for c in output_occ]
    if len(inp) != config.n_modes or len(out) != config.n_modes:
        raise ValueError("occupation length must equal n_modes")
    if any(c not in (0, 1) for c in inp + out):
        raise ValueError("amplitude oracle only handles 0/1 occupations")
    if sum(inp) != sum(out):
        return 0j
    u = mode_unitary(config)
    rows = [i for i, c in enumerate(out) if c]
    cols = [i for i, c in enumerate(inp) if c]
    return permanent(u[np.ix_(rows, cols)])
