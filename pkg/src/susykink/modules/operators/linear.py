from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import scipy.sparse as sp

from ...utils import DimensionLimitError

DENSE_THRESHOLD = 4096


@dataclass(frozen=True)
class LinearOperator:
    """Sparse matrix between two bases (``codomain`` rows, ``domain`` columns)."""

    matrix: sp.csr_matrix
    domain: Any
    codomain: Any

    @classmethod
    def from_coo(
        cls,
        rows: Sequence[int],
        cols: Sequence[int],
        values: Sequence[complex],
        domain: Any,
        codomain: Any,
    ) -> "LinearOperator":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values)
        if rows.size and (rows.min() < 0 or rows.max() >= codomain.dim or cols.min() < 0 or cols.max() >= domain.dim):
            raise ValueError("Operator entries reference basis ordinals outside the spaces")
        # duplicates are summed by the COO -> CSR conversion
        mat = sp.coo_matrix((values, (rows, cols)), shape=(codomain.dim, domain.dim)).tocsr()
        mat.sum_duplicates()
        return cls(mat, domain, codomain)

    @classmethod
    def diagonal(cls, values: np.ndarray, space: Any) -> "LinearOperator":
        return cls(sp.diags(np.asarray(values), format="csr"), space, space)

    @classmethod
    def zeros(cls, domain: Any, codomain: Any) -> "LinearOperator":
        return cls(sp.csr_matrix((codomain.dim, domain.dim)), domain, codomain)

    @property
    def shape(self):
        return self.matrix.shape

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.matrix.conj().T.tocsr(), self.codomain, self.domain)

    def __matmul__(self, other):
        if isinstance(other, LinearOperator):
            if other.codomain.dim != self.domain.dim:
                raise ValueError(f"Cannot compose operators of shapes {self.shape} and {other.shape}")
            return LinearOperator((self.matrix @ other.matrix).tocsr(), other.domain, self.codomain)
        return self.matrix @ other

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        if self.shape != other.shape:
            raise ValueError(f"Cannot add operators of shapes {self.shape} and {other.shape}")
        return LinearOperator((self.matrix + other.matrix).tocsr(), self.domain, self.codomain)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self + other * -1.0

    def __mul__(self, scalar: complex) -> "LinearOperator":
        return LinearOperator((self.matrix * scalar).tocsr(), self.domain, self.codomain)

    __rmul__ = __mul__

    def to_dense(self) -> np.ndarray:
        if max(self.shape) > DENSE_THRESHOLD:
            raise DimensionLimitError(f"Dense conversion refused for shape {self.shape} (limit {DENSE_THRESHOLD})")
        return self.matrix.toarray()

    def max_abs(self) -> float:
        return float(np.abs(self.matrix.data).max()) if self.matrix.nnz else 0.0

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        if self.shape[0] != self.shape[1]:
            return False
        diff = self.matrix - self.matrix.conj().T
        return (float(np.abs(diff.data).max()) if diff.nnz else 0.0) <= tol * max(1.0, self.max_abs())

    def norm_bound(self) -> float:
        """Max absolute row sum, an upper bound on the spectral norm of a Hermitian matrix."""
        if self.matrix.nnz == 0:
            return 0.0
        return float(np.abs(self.matrix).sum(axis=1).max())

    def expectation(self, vector: np.ndarray) -> float:
        return float(np.real(np.vdot(vector, self.matrix @ vector)))

    def restrict(self, keep: np.ndarray, space: Any) -> "LinearOperator":
        """Project a square operator onto the basis states ``keep`` (P H P)."""
        return LinearOperator(self.matrix[keep][:, keep].tocsr(), space, space)
