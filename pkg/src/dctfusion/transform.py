"""Orthonormal DCT transforms for square patches and coefficient stacks.

Both plans precompute the orthonormal DCT-II basis once; the inverse is the
exact transpose, so forward followed by inverse round-trips to machine
precision and coefficient energy equals signal energy (Parseval).
"""

import numpy as np

__all__ = ["dct_basis", "Dct2Plan", "Dct1Plan"]


def dct_basis(n: int) -> np.ndarray:
    """Orthonormal DCT-II basis matrix of size n x n (rows are basis vectors)."""
    if n < 1:
        raise ValueError(f"transform size must be >= 1, got {n}")
    i = np.arange(n)
    basis = np.cos(np.pi * np.outer(i, 2 * i + 1) / (2.0 * n)) * np.sqrt(2.0 / n)
    basis[0] *= np.sqrt(0.5)
    return basis


class Dct2Plan:
    """Precomputed 2D DCT for b x b patches.

    The separable transform is applied as a single matrix product on
    flattened patches (Kronecker factor of the 1D basis), which is much
    faster than per-patch small matmuls for large batches.  The DC
    coefficient of a transformed patch equals b times the patch mean.
    """

    def __init__(self, b: int):
        self.size = b
        self.basis = dct_basis(b)
        self._flat = np.kron(self.basis, self.basis)  # (b*b, b*b), orthogonal

    def _check(self, arr):
        if arr.shape[-2:] != (self.size, self.size):
            raise ValueError(
                f"patch shape {arr.shape[-2:]} does not match plan size "
                f"{self.size}x{self.size}"
            )

    def forward(self, patches: np.ndarray) -> np.ndarray:
        """Transform patches of shape (..., b, b) to DCT coefficients."""
        patches = np.asarray(patches, dtype=np.float64)
        self._check(patches)
        shape = patches.shape
        flat = patches.reshape(-1, self.size * self.size)
        return (flat @ self._flat.T).reshape(shape)

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        """Reconstruct patches of shape (..., b, b) from DCT coefficients."""
        coeffs = np.asarray(coeffs, dtype=np.float64)
        self._check(coeffs)
        shape = coeffs.shape
        flat = coeffs.reshape(-1, self.size * self.size)
        return (flat @ self._flat).reshape(shape)


class Dct1Plan:
    """Precomputed 1D DCT of length k, applied along the last axis.

    Used to transform the stack of co-located coefficients across a group
    of similar patches.  DC equals sqrt(k) times the stack mean; a length-1
    plan is the identity.
    """

    def __init__(self, k: int):
        self.size = k
        self.basis = dct_basis(k)

    def _check(self, arr):
        if arr.shape[-1] != self.size:
            raise ValueError(
                f"vector length {arr.shape[-1]} does not match plan length {self.size}"
            )

    def forward(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        self._check(values)
        return values @ self.basis.T

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.float64)
        self._check(coeffs)
        return coeffs @ self.basis
