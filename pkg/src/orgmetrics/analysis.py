"""Similarity analysis over per-employee category counts.

Feature vectors are raw counts min-max normalized per category to [0, 1] so
every category contributes comparably.  The same normalized features feed
both k-means clustering and the 2D neighbor-embedding projection.

Both algorithms are deterministic for a fixed seed: points are put in a
canonical order before seeding, restart seeds are derived from the main seed,
and the projection runs plain seeded gradient descent.
"""

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import InvalidKError, InvalidParamsError
from .matrix import ScoreMatrix

KMEANS_TOL = 1e-6
KMEANS_MAX_ITER = 300
DEFAULT_RESTARTS = 10
DEFAULT_K = 6


@dataclass(frozen=True, eq=False)
class FeatureTable:
    employee_ids: tuple
    categories: tuple
    raw: np.ndarray  # int counts, |categories| x |employees|
    normalized: np.ndarray  # float in [0, 1], same shape

    def vectors(self) -> np.ndarray:
        """Per-employee feature vectors, one row per employee."""
        return self.normalized.T


@dataclass(frozen=True, eq=False)
class ClusterResult:
    k: int
    seed: int
    assignments: Mapping  # employee_id -> label in [0, k)
    centroids: np.ndarray  # k x |categories|
    inertia: float
    iterations: int

    def to_view_model(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "assignments": dict(self.assignments),
            "centroids": self.centroids.tolist(),
            "inertia": self.inertia,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class ProjectionParams:
    perplexity: float = 10.0
    iterations: int = 1000
    learning_rate: float = 100.0


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    coordinates: Mapping  # employee_id -> (x, y)
    seed: int
    parameters: ProjectionParams

    def to_view_model(self) -> dict:
        return {
            "coordinates": {e: list(xy) for e, xy in self.coordinates.items()},
            "seed": self.seed,
            "parameters": {
                "perplexity": self.parameters.perplexity,
                "iterations": self.parameters.iterations,
                "learning_rate": self.parameters.learning_rate,
            },
        }


def build_features(matrix: ScoreMatrix) -> FeatureTable:
    """Min-max normalize the matrix counts per category.

    Categories whose counts are constant across employees normalize to all
    zeros (degenerate range).
    """
    raw = matrix.counts.copy()
    mins = raw.min(axis=1, keepdims=True).astype(np.float64)
    maxs = raw.max(axis=1, keepdims=True).astype(np.float64)
    span = maxs - mins
    safe = np.where(span == 0, 1.0, span)
    normalized = np.where(span == 0, 0.0, (raw - mins) / safe)
    return FeatureTable(
        employee_ids=matrix.employees,
        categories=matrix.categories,
        raw=raw,
        normalized=normalized,
    )


def _canonical_order(features: FeatureTable):
    """Sort points by feature vector then id, so input order never matters."""
    X = features.vectors()
    order = sorted(
        range(len(features.employee_ids)),
        key=lambda i: (tuple(X[i]), features.employee_ids[i]),
    )
    ids = [features.employee_ids[i] for i in order]
    return X[order], ids


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    centroids[0] = X[rng.integers(n)]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            # fewer distinct points than k: any pick gives the same partition
            idx = int(rng.integers(n))
        centroids[j] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _lloyd(X: np.ndarray, centroids: np.ndarray):
    prev_inertia = np.inf
    labels = np.zeros(len(X), dtype=np.int64)
    iterations = 0
    for iterations in range(1, KMEANS_MAX_ITER + 1):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        inertia = float(d2[np.arange(len(X)), labels].sum())
        assert inertia <= prev_inertia * (1 + 1e-9) + 1e-12, "inertia increased"
        prev_inertia = inertia
        new_centroids = centroids.copy()  # empty clusters keep their centroid
        for j in range(len(centroids)):
            mask = labels == j
            if mask.any():
                new_centroids[j] = X[mask].mean(axis=0)
        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids = new_centroids
        if shift < KMEANS_TOL:
            break
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(len(X)), labels].sum())
    return labels, centroids, inertia, iterations


def _relabel(labels, centroids, ids, k):
    """Canonical labels: cluster 0 is the largest; ties by smallest member id.

    Empty clusters sort last, keeping their relative label order.
    """
    members = {j: [ids[i] for i in np.nonzero(labels == j)[0]] for j in range(k)}
    def rank(j):
        if members[j]:
            return (0, -len(members[j]), min(members[j]))
        return (1, j, "")
    old_order = sorted(range(k), key=rank)
    remap = {old: new for new, old in enumerate(old_order)}
    assignments = {ids[i]: remap[int(labels[i])] for i in range(len(ids))}
    return assignments, centroids[old_order]


def kmeans(
    features: FeatureTable,
    k: int = DEFAULT_K,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> ClusterResult:
    """Seeded k-means++ plus Lloyd iterations, best of `restarts` runs.

    Runs until the largest centroid movement drops below 1e-6 or 300
    iterations; the run with the lowest inertia wins (first run on ties).
    """
    n = len(features.employee_ids)
    if not 1 <= k <= n:
        raise InvalidKError(f"k must be in [1, {n}], got {k}")
    X, ids = _canonical_order(features)

    best = None
    for child in np.random.SeedSequence(seed).spawn(max(1, restarts)):
        rng = np.random.default_rng(child)
        labels, centroids, inertia, iterations = _lloyd(X, _kmeans_pp_init(X, k, rng))
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia, iterations)

    labels, centroids, inertia, iterations = best
    assignments, centroids = _relabel(labels, centroids, ids, k)
    return ClusterResult(
        k=k,
        seed=seed,
        assignments=assignments,
        centroids=centroids,
        inertia=inertia,
        iterations=iterations,
    )


def _conditional_affinities(D2: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-stochastic affinities with per-point precision found by binary search."""
    n = D2.shape[0]
    target = np.log(perplexity)
    P = np.zeros((n, n))
    for i in range(n):
        d = np.delete(D2[i], i)
        beta, beta_min, beta_max = 1.0, 0.0, np.inf
        for _ in range(50):
            p = np.exp(-d * beta)
            total = p.sum()
            if total <= 0:
                h = 0.0
                p = np.zeros_like(p)
            else:
                p = p / total
                nz = p > 0
                h = float(-(p[nz] * np.log(p[nz])).sum())
            if abs(h - target) < 1e-5:
                break
            if h > target:
                beta_min = beta
                beta = beta * 2 if beta_max == np.inf else (beta + beta_max) / 2
            else:
                beta_max = beta
                beta = (beta + beta_min) / 2
        P[i, np.arange(n) != i] = p
    return P


def _embed(D2: np.ndarray, perplexity: float, iterations: int, learning_rate: float,
           rng: np.random.Generator) -> np.ndarray:
    """Gradient descent on the KL divergence between input affinities and a
    Student-t embedding (the standard heavy-tailed neighbor embedding)."""
    n = D2.shape[0]
    P = _conditional_affinities(D2, perplexity)
    P = (P + P.T) / (2.0 * n)
    P = np.maximum(P, 1e-12)

    exaggeration_until = min(250, max(1, iterations // 4))
    P_run = P * 12.0

    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    velocity = np.zeros_like(Y)
    gains = np.ones_like(Y)

    for it in range(iterations):
        if it == exaggeration_until:
            P_run = P
        diff = Y[:, None, :] - Y[None, :, :]
        num = 1.0 / (1.0 + (diff ** 2).sum(axis=2))
        np.fill_diagonal(num, 0.0)
        Q = np.maximum(num / num.sum(), 1e-12)

        PQn = (P_run - Q) * num
        grad = 4.0 * (PQn.sum(axis=1)[:, None] * Y - PQn @ Y)

        momentum = 0.5 if it < 250 else 0.8
        same_sign = np.sign(grad) == np.sign(velocity)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        gains = np.maximum(gains, 0.01)
        velocity = momentum * velocity - learning_rate * gains * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)
    return Y


def project(
    features: FeatureTable,
    params: Optional[ProjectionParams] = None,
    seed: int = 0,
) -> ProjectionResult:
    """Project employees to 2D, preserving local neighborhoods.

    Deterministic for a fixed seed.  Identical feature rows are collapsed
    before embedding and share one coordinate afterwards, so duplicates stay
    exact neighbors.
    """
    params = params or ProjectionParams()
    n = len(features.employee_ids)
    if n < 2:
        raise InvalidParamsError("projection needs at least 2 employees")
    if not 0 < params.perplexity < n:
        raise InvalidParamsError(
            f"perplexity must be in (0, {n}), got {params.perplexity}"
        )
    if params.iterations < 1 or params.learning_rate <= 0:
        raise InvalidParamsError("iterations must be >= 1 and learning_rate > 0")

    X, ids = _canonical_order(features)
    unique, inverse = np.unique(X, axis=0, return_inverse=True)
    u = unique.shape[0]
    if u == 1:
        Y = np.zeros((1, 2))
    else:
        effective_perplexity = min(params.perplexity, float(u - 1))
        D2 = ((unique[:, None, :] - unique[None, :, :]) ** 2).sum(axis=2)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        Y = _embed(D2, effective_perplexity, params.iterations, params.learning_rate, rng)
    if not np.isfinite(Y).all():
        raise InvalidParamsError("projection diverged to non-finite coordinates")

    coordinates = {
        ids[i]: (float(Y[inverse[i], 0]), float(Y[inverse[i], 1])) for i in range(n)
    }
    return ProjectionResult(coordinates=coordinates, seed=seed, parameters=params)
