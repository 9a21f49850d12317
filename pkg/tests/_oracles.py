"""Independent oracles used by the test suite.

These deliberately avoid the library's own code paths (and, for the
eigensolver, numpy's LAPACK bindings): brute-force formulas and a classical
Jacobi rotation solver.
"""

from __future__ import annotations

import math

import numpy as np


def brute_pearson(x, y) -> float:
    """Pearson r straight from the covariance / sigma definition."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sx = math.sqrt(sum((a - mx) ** 2 for a in x))
    sy = math.sqrt(sum((b - my) ** 2 for b in y))
    return cov / (sx * sy)


def brute_chi2(x_labels, y_labels) -> tuple[float, int]:
    """Chi-squared statistic and dof from an explicit contingency table."""
    xs = sorted(set(x_labels))
    ys = sorted(set(y_labels))
    n = len(x_labels)
    counts = {(a, b): 0 for a in xs for b in ys}
    for a, b in zip(x_labels, y_labels):
        counts[(a, b)] += 1
    row = {a: sum(counts[(a, b)] for b in ys) for a in xs}
    col = {b: sum(counts[(a, b)] for a in xs) for b in ys}
    chi2 = 0.0
    for a in xs:
        for b in ys:
            expected = row[a] * col[b] / n
            chi2 += (counts[(a, b)] - expected) ** 2 / expected
    return chi2, (len(xs) - 1) * (len(ys) - 1)


def brute_cramers_v(x_labels, y_labels) -> float:
    chi2, _ = brute_chi2(x_labels, y_labels)
    r = len(set(x_labels))
    c = len(set(y_labels))
    return math.sqrt(chi2 / (len(x_labels) * (min(r, c) - 1)))


def jacobi_eigh(matrix, tol: float = 1e-14, max_sweeps: int = 100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors in the matching columns.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[p, q] ** 2 for p in range(n) for q in range(n) if p != q))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    order = np.argsort(np.diag(a))
    return np.diag(a)[order], v[:, order]


def jacobi_dominant(matrix):
    """Dominant (largest |lambda|) eigenpair; vector sign-fixed non-negative-sum."""
    values, vectors = jacobi_eigh(matrix)
    idx = int(np.argmax(np.abs(values)))
    vec = vectors[:, idx]
    if vec.sum() < 0:
        vec = -vec
    return float(values[idx]), vec
