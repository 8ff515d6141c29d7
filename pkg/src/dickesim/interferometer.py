"""Transfer matrices of linear optical elements, resolved per internal level.

A :class:`TransferMatrix` maps creation operators on input spatial modes to
creation operators on output spatial modes, one complex block per internal
level; a photon's level selects the block that routes it and never changes.
Matrices may be rectangular (heralding arms, discard rails) and need not be
unitary, but every constructor here produces unit-norm rows; compositions
that lose that property are flagged rather than rejected.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ParameterError

ROW_NORM_TOL = 1e-12
UNITARY_TOL = 1e-10


def _rows_unit(blocks: np.ndarray) -> bool:
    norms = np.abs(blocks) ** 2
    return bool(np.max(np.abs(norms.sum(axis=2) - 1.0)) <= ROW_NORM_TOL)


class TransferMatrix:
    """Per-level linear map between input and output spatial modes.

    ``blocks`` has shape ``(levels, l_in, l_out)``. Construction checks that
    every row of every block has unit norm (each input photon is routed
    somewhere with total weight one); pass ``subnormalized=True`` to store a
    matrix that deliberately violates this. ``unitary`` is computed, never
    declared: it is set iff the blocks are square and unitary to 1e-10.
    """

    __slots__ = ("blocks", "levels", "l_in", "l_out", "unitary", "row_normalized")

    blocks: np.ndarray
    levels: int
    l_in: int
    l_out: int
    unitary: bool
    row_normalized: bool

    def __init__(self, blocks: np.ndarray, *, subnormalized: bool = False):
        arr = np.array(blocks, dtype=np.complex128, copy=True)
        if arr.ndim == 2:
            arr = arr[np.newaxis, :, :]
        if arr.ndim != 3:
            raise DimensionMismatch(f"blocks must be (levels, l_in, l_out), got shape {arr.shape}")
        levels, l_in, l_out = arr.shape
        if levels < 1 or l_in < 1 or l_out < 1:
            raise DimensionMismatch(f"degenerate block shape {arr.shape}")
        self.row_normalized = _rows_unit(arr)
        if not self.row_normalized and not subnormalized:
            raise ParameterError(
                "rows must have unit norm; pass subnormalized=True to store anyway"
            )
        arr.setflags(write=False)
        self.blocks = arr
        self.levels = levels
        self.l_in = l_in
        self.l_out = l_out
        if l_in == l_out:
            eye = np.eye(l_in)
            self.unitary = all(
                np.max(np.abs(b @ b.conj().T - eye)) <= UNITARY_TOL for b in arr
            )
        else:
            self.unitary = False

    def block(self, level: int) -> np.ndarray:
        if not 0 <= level < self.levels:
            raise DimensionMismatch(f"level {level} outside 0..{self.levels - 1}")
        return self.blocks[level]

    def adjoint(self) -> "TransferMatrix":
        """Conjugate transpose of every block (inverse for unitary matrices)."""
        adj = np.conj(np.transpose(self.blocks, (0, 2, 1)))
        return TransferMatrix(adj, subnormalized=not _rows_unit(adj))

    def __repr__(self) -> str:
        tag = " unitary" if self.unitary else ""
        return f"<TransferMatrix {self.l_in}x{self.l_out} levels={self.levels}{tag}>"


def _replicated(block: np.ndarray, levels: int) -> np.ndarray:
    return np.repeat(block[np.newaxis, :, :], levels, axis=0)


def all_one(n: int, levels: int = 1) -> TransferMatrix:
    """Uniform spreader: every entry 1/sqrt(n).

    Row-normalized but not unitary for n >= 2; it idealizes the operator
    that distributes each input photon evenly over all outputs.
    """
    if n < 1:
        raise DimensionMismatch("need at least one mode")
    block = np.full((n, n), 1.0 / math.sqrt(n), dtype=np.complex128)
    return TransferMatrix(_replicated(block, levels))


def dft(n: int, levels: int = 1) -> TransferMatrix:
    """Symmetric multiport: U[j, l] = exp(-2*pi*i*j*l/n) / sqrt(n), 0-based.

    First row and first column are all 1/sqrt(n); unitary for every n.
    """
    if n < 1:
        raise DimensionMismatch("need at least one mode")
    idx = np.arange(n)
    block = np.exp(-2j * np.pi * np.outer(idx, idx) / n) / math.sqrt(n)
    return TransferMatrix(_replicated(block, levels))


def beam_splitter(p: float, levels: int = 1) -> TransferMatrix:
    """Two-mode splitter with transmissivity p.

    Row one is (sqrt(p), sqrt(1-p)); the second row (sqrt(1-p), -sqrt(p))
    completes the matrix to a real unitary.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"transmissivity must lie in [0, 1], got {p}")
    a = math.sqrt(p)
    b = math.sqrt(1.0 - p)
    block = np.array([[a, b], [b, -a]], dtype=np.complex128)
    return TransferMatrix(_replicated(block, levels))


def pbs() -> TransferMatrix:
    """Polarizing splitter on two modes with two internal levels.

    Level 0 is transmitted (identity routing), level 1 is reflected (swap).
    """
    blocks = np.array(
        [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
        dtype=np.complex128,
    )
    return TransferMatrix(blocks)


def bs_tree(n: int, levels: int = 1) -> TransferMatrix:
    """Balanced splitter tree over n = 2**m modes.

    Butterfly product of log2(n) layers of balanced beam splitters; a single
    photon entering mode 0 leaves each output with modulus 1/sqrt(n).
    """
    if n < 2 or n & (n - 1):
        raise ParameterError(f"tree size must be a power of two >= 2, got {n}")
    b = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
    block = np.array([[1.0]], dtype=np.complex128)
    while block.shape[0] < n:
        block = np.kron(block, b)
    return TransferMatrix(_replicated(block, levels))


def ancilla_transfer(n: int, k: int, p: float, levels: int = 1) -> TransferMatrix:
    """Heralded-splitter block of shape (n + k) x (n + 1).

    Main input j keeps weight sqrt(p) on output j and sends sqrt(1-p) to the
    single ancilla output (column n). Each of the k ancilla inputs spreads
    1/sqrt(n) over the n main outputs and never reaches the ancilla output.
    """
    if n < 1 or k < 1 or k > n:
        raise ParameterError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"transmissivity must lie in [0, 1], got {p}")
    a = math.sqrt(p)
    b = math.sqrt(1.0 - p)
    block = np.zeros((n + k, n + 1), dtype=np.complex128)
    for j in range(n):
        block[j, j] = a
        block[j, n] = b
    block[n:, :n] = 1.0 / math.sqrt(n)
    return TransferMatrix(_replicated(block, levels))


def identity(n: int, levels: int = 1) -> TransferMatrix:
    if n < 1:
        raise DimensionMismatch("need at least one mode")
    return TransferMatrix(_replicated(np.eye(n, dtype=np.complex128), levels))


def permutation(dest: Sequence[int], levels: int = 1) -> TransferMatrix:
    """Relabeling element: input j is routed to output dest[j]."""
    n = len(dest)
    if sorted(dest) != list(range(n)):
        raise ParameterError(f"{dest!r} is not a permutation of 0..{n - 1}")
    block = np.zeros((n, n), dtype=np.complex128)
    for j, d in enumerate(dest):
        block[j, d] = 1.0
    return TransferMatrix(_replicated(block, levels))


def sequential(first: TransferMatrix, second: TransferMatrix) -> TransferMatrix:
    """Compose two elements in photon-flow order (first, then second)."""
    if first.levels != second.levels:
        raise DimensionMismatch("level counts differ")
    if first.l_out != second.l_in:
        raise DimensionMismatch(
            f"cannot chain {first.l_in}x{first.l_out} into {second.l_in}x{second.l_out}"
        )
    blocks = first.blocks @ second.blocks
    return TransferMatrix(blocks, subnormalized=not _rows_unit(blocks))


def parallel(elements: Sequence[TransferMatrix]) -> TransferMatrix:
    """Direct sum of elements acting on consecutive mode windows."""
    if not elements:
        raise ParameterError("need at least one element")
    levels = elements[0].levels
    if any(e.levels != levels for e in elements):
        raise DimensionMismatch("level counts differ")
    l_in = sum(e.l_in for e in elements)
    l_out = sum(e.l_out for e in elements)
    blocks = np.zeros((levels, l_in, l_out), dtype=np.complex128)
    ri = 0
    ci = 0
    for e in elements:
        blocks[:, ri : ri + e.l_in, ci : ci + e.l_out] = e.blocks
        ri += e.l_in
        ci += e.l_out
    return TransferMatrix(blocks, subnormalized=not _rows_unit(blocks))
