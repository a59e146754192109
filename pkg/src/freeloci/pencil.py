"""Matrix tuples and monic linear pencils I - sum A_j x_j."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import DimensionError, QMatrix, kron

__all__ = ["MatrixTuple", "MonicPencil"]


@dataclass(frozen=True)
class MatrixTuple:
    matrices: tuple

    def __init__(self, matrices: Sequence):
        mats = tuple(m if isinstance(m, QMatrix) else QMatrix(m) for m in matrices)
        if mats:
            n = mats[0].rows
            for m in mats:
                if m.shape != (n, n):
                    raise DimensionError("tuple entries must be square of equal size")
        object.__setattr__(self, "matrices", mats)

    @property
    def g(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].rows if self.matrices else 0

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, j: int) -> QMatrix:
        return self.matrices[j]

    def __len__(self) -> int:
        return len(self.matrices)

    def conjugate(self, T: QMatrix) -> "MatrixTuple":
        """(T A_j T^-1)_j"""
        Ti = T.inverse()
        return MatrixTuple([T @ A @ Ti for A in self.matrices])

    def transpose(self) -> "MatrixTuple":
        return MatrixTuple([A.T for A in self.matrices])

    def direct_sum(self, other: "MatrixTuple") -> "MatrixTuple":
        if self.g != other.g:
            raise DimensionError("variable count mismatch")
        n, m = self.n, other.n
        return MatrixTuple(
            [QMatrix.block([[A, QMatrix.zeros(n, m)], [QMatrix.zeros(m, n), B]]) for A, B in zip(self, other)]
        )

    def to_json(self) -> list:
        return [A.to_json() for A in self.matrices]

    @classmethod
    def from_json(cls, data) -> "MatrixTuple":
        if isinstance(data, dict):
            data = data.get("matrices", data.get("coeffs"))
        return cls([QMatrix(m) for m in data])


@dataclass(frozen=True)
class MonicPencil:
    """L = I_d - sum_j A_j x_j."""

    coeffs: MatrixTuple

    def __init__(self, coeffs, d: int | None = None):
        if not isinstance(coeffs, MatrixTuple):
            coeffs = MatrixTuple(coeffs)
        if coeffs.g == 0:
            raise DimensionError("a pencil needs at least one variable")
        if coeffs.n < 1:
            raise DimensionError("pencil size must be at least 1")
        if d is not None and d != coeffs.n:
            raise DimensionError("declared size does not match coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def d(self) -> int:
        return self.coeffs.n

    @property
    def g(self) -> int:
        return self.coeffs.g

    def evaluate(self, X: Sequence[QMatrix]) -> QMatrix:
        """I_{dn} - sum A_j (x) X_j."""
        X = list(X)
        if len(X) != self.g:
            raise DimensionError(f"expected {self.g} matrices")
        n = X[0].rows
        out = QMatrix.identity(self.d * n)
        for A, Xj in zip(self.coeffs, X):
            if Xj.shape != (n, n):
                raise DimensionError("evaluation matrices must be square of equal size")
            if not A.is_zero():
                out = out - kron(A, Xj)
        return out

    def det_at(self, X: Sequence[QMatrix]):
        return self.evaluate(X).det()

    def conjugate(self, T: QMatrix) -> "MonicPencil":
        return MonicPencil(self.coeffs.conjugate(T))

    def direct_sum(self, other: "MonicPencil") -> "MonicPencil":
        return MonicPencil(self.coeffs.direct_sum(other.coeffs))

    def is_identity(self) -> bool:
        return all(A.is_zero() for A in self.coeffs)

    def sort_key(self):
        return (self.d, tuple(A.entries for A in self.coeffs))

    def to_json(self) -> dict:
        return {"d": self.d, "g": self.g, "coeffs": self.coeffs.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MonicPencil":
        L = cls(MatrixTuple.from_json(data["coeffs"]))
        if "d" in data and data["d"] != L.d:
            raise DimensionError("declared d does not match coefficients")
        if "g" in data and data["g"] != L.g:
            raise DimensionError("declared g does not match coefficients")
        return L
