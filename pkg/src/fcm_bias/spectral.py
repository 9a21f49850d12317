"""Power iteration for the dominant eigenpair of a symmetric weight matrix.

At phi = 1 the reasoning rule reduces to multiply-and-normalize, so the
terminal state of a closed-system run equals the dominant eigenvector
whenever one strictly dominant eigenvalue exists. The converged flag
certifies exactly that: the iteration settled AND the dominance is strict
(checked against a deflated second eigenvalue estimate), since a tied
spectrum can leave the iterates stuck on a non-attracting eigenvector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import WeightMatrix


@dataclass(frozen=True)
class EigenResult:
    value: float
    vector: np.ndarray
    converged: bool
    iterations: int


def _matrix_of(w) -> np.ndarray:
    return w.weights if isinstance(w, WeightMatrix) else np.asarray(w, dtype=np.float64)


def _power_run(mat: np.ndarray, tol: float, max_iter: int, seed: int):
    """One power-iteration run from the all-ones start.

    Restarts from a seeded random vector when the flow vanishes (start in
    the nullspace) or the Rayleigh quotient stagnates at 0. Returns the
    final direction, its Rayleigh quotient, whether successive iterates
    settled below tol, and the iteration count.
    """
    m = mat.shape[0]
    rng = np.random.default_rng(seed)
    b = np.ones(m) / np.sqrt(m)
    restarts = 0
    settled = False
    rayleigh = float(b @ mat @ b)
    it = 0
    for it in range(1, max_iter + 1):
        y = mat @ b
        norm = np.linalg.norm(y)
        if norm < 1e-300 or (abs(rayleigh) < tol and it > 2):
            if restarts >= 3:
                return b, rayleigh, False, it
            b = rng.random(m) + 1e-3
            b /= np.linalg.norm(b)
            rayleigh = float(b @ mat @ b)
            restarts += 1
            continue
        nxt = y / norm
        diff = np.max(np.abs(nxt - b))
        b = nxt
        rayleigh = float(b @ mat @ b)
        if diff < tol:
            settled = True
            break
    return b, rayleigh, settled, it


def dominant_eigenvector(w, tol: float = 1e-10, max_iter: int = 1000,
                         seed: int = 0) -> EigenResult:
    """Dominant eigenpair via power iteration; value is the Rayleigh quotient.

    converged is False when the iteration does not settle within max_iter or
    when no strictly dominant eigenvalue exists (e.g. a tied +/- pair).
    """
    mat = _matrix_of(w)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"weight matrix must be square, got {mat.shape}")
    vector, value, settled, iterations = _power_run(mat, tol, max_iter, seed)
    converged = settled
    if settled and abs(value) > 0.0:
        # Deflate and estimate the runner-up eigenvalue magnitude; a tie
        # means the dominant eigenvector is not unique.
        deflated = mat - value * np.outer(vector, vector)
        _, second, _, _ = _power_run(deflated, tol, min(max_iter, 500), seed + 1)
        gap = abs(value) - abs(second)
        if gap <= max(tol, 1e-12 * abs(value)):
            converged = False
    return EigenResult(value=value, vector=vector, converged=converged,
                       iterations=iterations)
