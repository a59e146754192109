"""Floating-point tools for monic pencils: spectrahedron membership, boundary
sampling along rays, kernel-dimension classification of points and the
Jacobi-formula gradient of det L(X)."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "NumericPencil",
    "HPencil",
    "PointClass",
    "TOLERANCES",
    "evaluate",
    "adjugate",
    "det_gradient",
    "psd_membership",
    "classify_point",
    "boundary_sample",
    "smooth_density_experiment",
    "direct_sum_smoothness",
    "hair_span_estimate",
    "random_hermitian_pencil",
]

TOLERANCES = {"rank_rel": 1e-8, "zero_cluster": 1e-7, "psd_slack": 1e-9, "gradient": 1e-8, "hermitian": 1e-12}


def _parse_matrix(M) -> np.ndarray:
    """Accept numbers, [re, im] pairs, or strings like '1/2' as entries."""
    rows = []
    for r in M:
        row = []
        for x in r:
            if isinstance(x, (list, tuple)):
                row.append(complex(_num(x[0]), _num(x[1])))
            else:
                row.append(complex(_num(x)))
        rows.append(row)
    return np.array(rows, dtype=complex)


def _num(x) -> float:
    if isinstance(x, str):
        from fractions import Fraction

        return float(Fraction(x))
    return float(x)


def _is_hermitian(M: np.ndarray, tol: float = TOLERANCES["hermitian"]) -> bool:
    return M.shape[0] == M.shape[1] and np.allclose(M, M.conj().T, atol=tol, rtol=0)


class NumericPencil:
    """L = I - sum A_j x_j with complex double coefficients."""

    def __init__(self, coeffs: Sequence):
        mats = [c if isinstance(c, np.ndarray) else _parse_matrix(c) for c in coeffs]
        mats = [np.asarray(c, dtype=complex) for c in mats]
        if not mats:
            raise ValueError("a pencil needs at least one coefficient")
        d = mats[0].shape[0]
        for c in mats:
            if c.shape != (d, d):
                raise ValueError("coefficients must be square of equal size")
        self.coeffs = mats

    @property
    def d(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def g(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_exact(cls, L) -> "NumericPencil":
        """From a MonicPencil with rational coefficients."""
        return cls([np.array([[float(x) for x in row] for row in A], dtype=complex) for A in L.coeffs])

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "g": self.g,
            "coeffs": [[[[float(z.real), float(z.imag)] for z in row] for row in A] for A in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict):
        return cls([_parse_matrix(A) for A in data["coeffs"]])


class HPencil(NumericPencil):
    """A monic pencil with hermitian coefficients."""

    def __init__(self, coeffs: Sequence):
        super().__init__(coeffs)
        for c in self.coeffs:
            if not _is_hermitian(c):
                raise ValueError("coefficients must be hermitian")


def _tuple(X, g: int) -> list[np.ndarray]:
    X = [np.atleast_2d(np.asarray(x, dtype=complex)) if not isinstance(x, np.ndarray) or x.ndim != 2 else x.astype(complex) for x in X]
    if len(X) != g:
        raise ValueError(f"expected {g} matrices")
    n = X[0].shape[0]
    for x in X:
        if x.shape != (n, n):
            raise ValueError("evaluation matrices must be square of equal size")
    return X


def evaluate(L: NumericPencil, X) -> np.ndarray:
    X = _tuple(X, L.g)
    n = X[0].shape[0]
    out = np.eye(L.d * n, dtype=complex)
    for A, x in zip(L.coeffs, X):
        out -= np.kron(A, x)
    return out


def adjugate(M: np.ndarray) -> np.ndarray:
    """Adjugate via SVD; well defined for singular M."""
    U, s, Vh = np.linalg.svd(M)
    m = len(s)
    prods = np.array([np.prod(np.delete(s, i)) for i in range(m)]) if m > 1 else np.ones(1)
    return np.linalg.det(U) * np.linalg.det(Vh) * (Vh.conj().T * prods) @ U.conj().T


def det_gradient(L: NumericPencil, X) -> np.ndarray:
    """d det L(X) / d X_j[i,k], shape (g, n, n), by Jacobi's formula."""
    X = _tuple(X, L.g)
    n = X[0].shape[0]
    d = L.d
    G = adjugate(evaluate(L, X)).reshape(d, n, d, n)
    # tr(G (A (x) E_ik)) = sum_{a,b} G[(b,k),(a,i)] A[a,b]
    return np.stack([-np.einsum("bkai,ab->ik", G, A) for A in L.coeffs])


@dataclass
class PointClass:
    det_value: complex
    kernel_dim: int
    alg_multiplicity: int
    in_domain: bool
    on_boundary: bool
    gradient_norm: float
    smooth: bool
    hermitian: bool
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))

    def to_json(self) -> dict:
        out = asdict(self)
        dv = complex(self.det_value)
        out["det_value"] = [dv.real, dv.imag]
        return out


def psd_membership(L: HPencil, X) -> bool:
    X = _tuple(X, L.g)
    for x in X:
        if not _is_hermitian(x, 1e-10):
            raise ValueError("evaluation point must be hermitian")
    M = evaluate(L, X)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    return bool(np.linalg.eigvalsh((M + M.conj().T) / 2).min() >= -TOLERANCES["psd_slack"] * scale)


def classify_point(L: NumericPencil, X) -> PointClass:
    X = _tuple(X, L.g)
    M = evaluate(L, X)
    s = np.linalg.svd(M, compute_uv=False)
    smax = max(float(s[0]), 1.0)
    kernel_dim = int(np.sum(s <= TOLERANCES["rank_rel"] * smax))
    ev = np.linalg.eigvals(M)
    alg = int(np.sum(np.abs(ev) <= TOLERANCES["zero_cluster"] * smax))
    alg = max(alg, kernel_dim)
    grad = det_gradient(L, X)
    gnorm = float(np.linalg.norm(grad))
    herm = all(_is_hermitian(x, 1e-10) for x in X) and all(_is_hermitian(A) for A in L.coeffs)
    if herm:
        mineig = float(np.linalg.eigvalsh((M + M.conj().T) / 2).min())
        in_domain = mineig >= -TOLERANCES["psd_slack"] * smax
    else:
        in_domain = False
    smooth = kernel_dim >= 1 and bool(np.max(np.abs(grad)) > TOLERANCES["gradient"])
    return PointClass(
        det_value=complex(np.linalg.det(M)),
        kernel_dim=kernel_dim,
        alg_multiplicity=alg,
        in_domain=bool(in_domain),
        on_boundary=bool(in_domain and kernel_dim >= 1),
        gradient_norm=gnorm,
        smooth=smooth,
        hermitian=bool(herm),
    )


def _random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (Z + Z.conj().T) / 2


def random_hermitian_pencil(d: int, g: int, seed: int) -> HPencil:
    rng = np.random.default_rng(seed)
    return HPencil([_random_hermitian(rng, d) for _ in range(g)])


@dataclass
class BoundarySample:
    points: list  # (X, PointClass, t)
    misses: int
    empty: bool

    def to_json(self) -> dict:
        return {
            "points": [
                {
                    "t": t,
                    "X": [[[[float(z.real), float(z.imag)] for z in row] for row in x] for x in X],
                    "class": pc.to_json(),
                }
                for X, pc, t in self.points
            ],
            "misses": self.misses,
            "empty": self.empty,
            "tolerances": dict(TOLERANCES),
        }


def boundary_sample(L: HPencil, n: int, count: int, seed: int = 0, t_max: float = 1e8) -> BoundarySample:
    """Shoot `count` random hermitian rays from 0 and record where they leave the spectrahedron.

    Along X = t X0 the pencil is I - t M with M hermitian, so the exit
    parameter is 1 / lambda_max(M); rays with lambda_max <= 0 never exit."""
    points, misses = [], 0
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        X0 = [_random_hermitian(rng, n) for _ in range(L.g)]
        M = sum(np.kron(A, x) for A, x in zip(L.coeffs, X0))
        lam = float(np.linalg.eigvalsh(M).max())
        if lam <= 0 or 1 / lam > t_max:
            misses += 1
            continue
        t = 1.0 / lam
        X = [t * x for x in X0]
        points.append((X, classify_point(L, X), t))
    return BoundarySample(points, misses, empty=not points)


def smooth_density_experiment(L: HPencil, n: int, samples: int, seed: int = 0) -> dict:
    bs = boundary_sample(L, n, samples, seed)
    hits = len(bs.points)
    ones = sum(1 for _, pc, _ in bs.points if pc.kernel_dim == 1)
    return {
        "n": n,
        "samples": samples,
        "hits": hits,
        "kernel_dim_1": ones,
        "fraction": (ones / hits) if hits else None,
        "seed": seed,
        "tolerances": dict(TOLERANCES),
    }


def _direct_sum(X, Y) -> list[np.ndarray]:
    out = []
    for x, y in zip(X, Y):
        n, m = x.shape[0], y.shape[0]
        z = np.zeros((n + m, n + m), dtype=complex)
        z[:n, :n] = x
        z[n:, n:] = y
        out.append(z)
    return out


def direct_sum_smoothness(L: NumericPencil, X, Y) -> dict:
    X = _tuple(X, L.g)
    Y = _tuple(Y, L.g)
    cx = classify_point(L, X)
    if cx.kernel_dim < 1:
        raise ValueError("X is not on the free locus")
    cy = classify_point(L, Y)
    cxy = classify_point(L, _direct_sum(X, Y))
    y_on = cy.kernel_dim >= 1
    if y_on:
        expected = False
    else:
        expected = cx.smooth
    return {
        "X": cx.to_json(),
        "Y": cy.to_json(),
        "X_plus_Y": cxy.to_json(),
        "Y_on_locus": y_on,
        "expected_smooth": expected,
        "consistent": cxy.smooth == expected,
    }


def hair_span_estimate(L: HPencil, samples: int, seed: int = 0, n: int = 2) -> dict:
    """Numerical rank of the hair vectors: kernel vectors of L(X) at points with
    one-dimensional kernel, reshaped d x n with all columns collected."""
    bs = boundary_sample(L, n, samples, seed)
    cols = []
    for X, pc, _ in bs.points:
        if pc.kernel_dim != 1:
            continue
        _, _, Vh = np.linalg.svd(evaluate(L, X))
        v = Vh[-1].conj()
        cols.append(v.reshape(L.d, n))
    if not cols:
        return {"dimension": 0, "points": 0}
    H = np.hstack(cols)
    s = np.linalg.svd(H, compute_uv=False)
    rank = int(np.sum(s > TOLERANCES["rank_rel"] * max(s[0], 1e-300)))
    return {"dimension": rank, "points": len(cols), "seed": seed}
