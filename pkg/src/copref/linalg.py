"""Dense symmetric eigensolver (cyclic Jacobi) and seeded k-means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import canonical_labels

# Above this order the cyclic Jacobi sweep cost dominates; "auto" hands off to LAPACK.
JACOBI_MAX_ORDER = 200


class ConvergenceError(ArithmeticError):
    """Raised when the Jacobi iteration fails to converge."""


def check_symmetric(matrix, tol: float = 1e-10) -> np.ndarray:
    m = np.array(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return (m + m.T) / 2.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made positive
    if vectors.size == 0:
        return vectors
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _off_norm(a: np.ndarray) -> float:
    return float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def jacobi_eigh(matrix, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a symmetric matrix by cyclic Jacobi rotations.

    Iterates until the off-diagonal Frobenius norm drops below
    ``tol * ||M||_F``. Returns eigenvalues in ascending order and the
    matching orthonormal eigenvectors as columns.
    """
    a = check_symmetric(matrix)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if n < 2 or norm == 0:
        order = np.argsort(np.diag(a), kind="stable")
        return np.diag(a)[order].copy(), v[:, order]
    threshold = tol * norm
    off = 0.0
    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        off = _off_norm(a)
        if off > threshold:
            raise ConvergenceError(
                f"Jacobi did not converge after {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, target {threshold:.3e}, order {n})"
            )
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigensolve_symmetric(matrix, k: int, method: str = "auto") -> tuple[np.ndarray, np.ndarray]:
    """The ``k`` algebraically smallest eigenpairs of a symmetric matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    order :data:`JACOBI_MAX_ORDER`). Eigenvector signs are fixed so the
    largest-magnitude component is positive.
    """
    m = check_symmetric(matrix)
    n = m.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_ORDER else "lapack"
    if method == "jacobi":
        w, v = jacobi_eigh(m)
    elif method == "lapack":
        try:
            w, v = np.linalg.eigh(m)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"LAPACK eigh failed for order {n}: {exc}") from exc
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return w[:k], _fix_signs(v[:, :k])


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    n_iter: int
    history: list[float]


def _kmeans_pp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(x)
    centers = [x[rng.integers(n)]]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(x[idx])
        d2 = np.minimum(d2, np.sum((x - x[idx]) ** 2, axis=1))
    return np.array(centers)


def _sq_dists(x, centers):
    return np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)


def _lloyd(x: np.ndarray, centers: np.ndarray, max_iter: int) -> KMeansResult:
    k = len(centers)
    labels = np.full(len(x), -1)
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        d = _sq_dists(x, centers)
        new = np.argmin(d, axis=1)
        history.append(float(d[np.arange(len(x)), new].sum()))
        if np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            members = labels == c
            if members.any():
                centers[c] = x[members].mean(axis=0)
            else:
                # re-seed an empty cluster with the point farthest from its centre
                far = int(np.argmax(d[np.arange(len(x)), labels]))
                centers[c] = x[far]
                labels[far] = c
    inertia = float(np.sum((x - centers[labels]) ** 2))
    return KMeansResult(labels, centers, inertia, it, history)


def kmeans(points, k: int, seed: int | None = 0, n_init: int = 1, max_iter: int = 300) -> KMeansResult:
    """k-means++ seeded Lloyd iterations; best of ``n_init`` restarts.

    Labels are renumbered by first appearance.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if not 1 <= k <= len(x):
        raise ValueError(f"k={k} exceeds the number of points ({len(x)})")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, n_init)):
        res = _lloyd(x, _kmeans_pp(x, k, rng), max_iter)
        if best is None or res.inertia < best.inertia - 1e-12:
            best = res
    labels = canonical_labels(best.labels)
    order = np.empty(k, dtype=np.int64)
    order[labels] = best.labels
    best.centers = best.centers[order]
    best.labels = labels
    return best
