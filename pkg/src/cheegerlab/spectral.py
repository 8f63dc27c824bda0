"""Dense symmetric eigendecomposition of normalized (signed) Laplacians.

The solver is a cyclic Jacobi iteration: simple, deterministic, and
orthogonal to working precision, which is all the desk-scale graphs here
need.  Eigenvalues are reported ascending; the normalized adjacency helper
follows the opposite (descending) convention of spectral-radius bounds.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, require_valid


@dataclass(frozen=True)
class EigenOptions:
    off_diag_tol: float = 1e-12      # relative to the Frobenius norm of the input
    max_sweeps: int = 64
    gap_tol: float | None = None     # None -> 1e-8 * max(1, |lambda_n|)
    residual_tol: float = 1e-8

    def __post_init__(self):
        if self.off_diag_tol <= 0 or self.max_sweeps <= 0 or self.residual_tol <= 0:
            raise ValueError("tolerances and sweep budget must be positive")
        if self.gap_tol is not None and self.gap_tol <= 0:
            raise ValueError("gap_tol must be positive")


class JacobiConvergenceError(RuntimeError):
    """Raised when the sweep budget runs out; carries the residual off-norm."""

    def __init__(self, off_norm: float, threshold: float, sweeps: int):
        self.off_norm = off_norm
        self.threshold = threshold
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi did not converge in {sweeps} sweeps: "
            f"off-diagonal norm {off_norm:.3e} > {threshold:.3e}"
        )


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eig_sym(m: np.ndarray, opts: EigenOptions = EigenOptions()):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (values, vectors) with values ascending and vectors as
    orthonormal columns, permuted consistently.  Ties keep their pre-sort
    order (stable sort); each eigenvector is sign-normalized so its entry
    of largest magnitude is positive.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n)
    threshold = opts.off_diag_tol * float(np.linalg.norm(a))
    converged = n < 2
    sweeps = 0
    while not converged and sweeps < opts.max_sweeps:
        if _off_norm(a) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if 100.0 * abs(apq) + abs(diff) == abs(diff):
                    t = apq / diff  # asymptotic tangent; avoids overflow in theta
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1
    if not converged and _off_norm(a) > threshold:
        raise JacobiConvergenceError(_off_norm(a), threshold, sweeps)

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(n):
        col = vectors[:, j]
        if col[int(np.argmax(np.abs(col)))] < 0:
            vectors[:, j] = -col
    return values, vectors


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues of the normalized Laplacian with eigenfunctions.

    `functions[k]` is the k-th eigenfunction of L = M^{-1}(D + K - A^sigma),
    mu-orthonormal: sum_i mu_i f(i) g(i) = delta.  `clusters` groups
    numerically coincident eigenvalues as (start index, multiplicity)
    pairs, 0-based.
    """

    values: tuple[float, ...]
    functions: tuple[tuple[float, ...], ...]
    clusters: tuple[tuple[int, int], ...]

    def multiplicity_block(self, k: int) -> tuple[int, int]:
        """Cluster (start, mult) containing the 1-based eigenvalue index k."""
        for start, mult in self.clusters:
            if start <= k - 1 < start + mult:
                return start, mult
        raise IndexError(f"eigenvalue index {k} out of range")

    def function(self, k: int) -> np.ndarray:
        """The k-th (1-based) eigenfunction as an array."""
        return np.asarray(self.functions[k - 1])

    def to_json_dict(self) -> dict:
        return {
            "values": list(self.values),
            "clusters": [[s, m] for s, m in self.clusters],
            "functions": [list(f) for f in self.functions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def normalized_laplacian_sym(g: WeightedGraph) -> np.ndarray:
    """Symmetric normalized Laplacian M^{-1/2} (D + K - A^sigma) M^{-1/2}.

    Entry (i,i) is (d(i) + kappa_i)/mu_i; entry (i,j) for i ~ j is
    -sigma_ij w_ij / sqrt(mu_i mu_j).  Same spectrum as M^{-1}(D + K - A^sigma).
    """
    require_valid(g)
    d = g.degrees()
    mu = np.asarray(g.mu)
    mat = np.zeros((g.n, g.n))
    np.fill_diagonal(mat, (d + np.asarray(g.kappa)) / mu)
    for e in g.edges:
        val = -e.sigma * e.w / math.sqrt(g.mu[e.u] * g.mu[e.v])
        mat[e.u, e.v] = val
        mat[e.v, e.u] = val
    return mat


def _cluster(values: np.ndarray, gap_tol: float) -> tuple[tuple[int, int], ...]:
    clusters = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap_tol:
            clusters.append((start, i - start))
            start = i
    clusters.append((start, len(values) - start))
    return tuple(clusters)


def laplacian_spectrum(g: WeightedGraph, opts: EigenOptions = EigenOptions()) -> Spectrum:
    """Spectrum of the normalized Laplacian with mu-orthonormal eigenfunctions."""
    mat = normalized_laplacian_sym(g)
    values, vectors = eig_sym(mat, opts)
    funcs = vectors / np.sqrt(np.asarray(g.mu))[:, None]
    gap_tol = opts.gap_tol
    if gap_tol is None:
        gap_tol = 1e-8 * max(1.0, abs(float(values[-1])))
    return Spectrum(
        values=tuple(float(x) for x in values),
        functions=tuple(tuple(float(x) for x in funcs[:, j]) for j in range(g.n)),
        clusters=_cluster(values, gap_tol),
    )


@dataclass(frozen=True)
class EtaResult:
    """Normalized-adjacency eigenvalues, descending, with eta = max(|eta_2|, |eta_n|)."""

    values: tuple[float, ...]
    eta: float

    def to_json_dict(self) -> dict:
        return {"values": list(self.values), "eta": self.eta}


def adjacency_eta(g: WeightedGraph, opts: EigenOptions = EigenOptions()) -> EtaResult:
    """Spectrum of M^{-1/2} A M^{-1/2} (same as M^{-1}A), sorted descending.

    Requires an unsigned graph with kappa identically 0 and at least three
    vertices; those are the standing hypotheses of the spectral-radius
    lower bound this quantity feeds.
    """
    require_valid(g)
    if g.is_signed():
        raise ValueError("eta is defined for unsigned graphs")
    if not g.kappa_is_zero():
        raise ValueError("eta requires kappa == 0")
    if g.n < 3:
        raise ValueError("eta requires at least 3 vertices")
    mat = np.zeros((g.n, g.n))
    for e in g.edges:
        val = e.w / math.sqrt(g.mu[e.u] * g.mu[e.v])
        mat[e.u, e.v] = val
        mat[e.v, e.u] = val
    values, _ = eig_sym(mat, opts)
    desc = values[::-1]
    eta = max(abs(float(desc[1])), abs(float(desc[-1])))
    return EtaResult(values=tuple(float(x) for x in desc), eta=eta)
