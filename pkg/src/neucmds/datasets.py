"""Synthetic dissimilarity generators and point-cloud perturbations.

All generators draw from a Philox counter-based stream keyed by the seed, in
a fixed documented order, so identical (parameters, seed) reproduce the same
matrix bitwise.  Every output is exactly hollow and symmetric.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .linalg import mirror_upper


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _as_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2:
        raise ValueError(f"point cloud must be 2-d (n, d), got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point cloud contains non-finite entries")
    return p


def pairwise_sq(x: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances of the rows of x, exactly hollow/symmetric."""
    sq = np.einsum("ij,ij->i", x, x)
    d = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d, 0.0)
    return mirror_upper(d)


def signed_sq_dissimilarity(points, n_plus: int) -> np.ndarray:
    """Signed squared dissimilarity: the first n_plus coordinates contribute
    positively, the rest negatively.  Identical points give exactly zero."""
    p = _as_points(points)
    if not 0 <= n_plus <= p.shape[1]:
        raise ValueError(f"n_plus must be in [0, {p.shape[1]}], got {n_plus}")
    return pairwise_sq(p[:, :n_plus]) - pairwise_sq(p[:, n_plus:])


def gen_random_simplex(n: int, seed: int = 0) -> np.ndarray:
    """Near-simplex cloud whose last, dominant coordinate is negative-signed.

    Points have n-1 random coordinates: the first ceil(n/10) uniform in
    [0, 0.01], the rest uniform in [0, sqrt(0.5/mid)] with mid = n-ceil(n/10)-1,
    plus a deterministic last coordinate (i+1)*0.3/n.  The dissimilarity is
    the signed squared form with only the first block positive, which drives
    roughly nine tenths of the centered spectrum negative.

    Draw order: one uniform block of shape (n, n-1), row-major.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = _rng(seed)
    n_plus = -(-n // 10)  # ceil
    mid = n - n_plus - 1
    coords = rng.uniform(0.0, 1.0, size=(n, n - 1))
    coords[:, :n_plus] *= 0.01
    if mid > 0:
        coords[:, n_plus:] *= np.sqrt(0.5 / mid)
    last = (np.arange(1, n + 1, dtype=np.float64) * 0.3 / n)[:, None]
    return signed_sq_dissimilarity(np.hstack([coords, last]), n_plus)


def ball_dissimilarity(centers, radii) -> np.ndarray:
    """Signed squared gap d*|d| for d = |c_i - c_j| - r_i - r_j.

    Overlapping balls give negative entries; zero radii reduce to squared
    Euclidean distances of the centers.
    """
    centers = _as_points(centers)
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (centers.shape[0],):
        raise ValueError("need one radius per center")
    cdist = np.sqrt(np.maximum(pairwise_sq(centers), 0.0))
    gap = cdist - radii[:, None] - radii[None, :]
    d = gap * np.abs(gap)
    np.fill_diagonal(d, 0.0)
    return mirror_upper(d)


def gen_euclidean_ball(n: int, seed: int = 0) -> np.ndarray:
    """Signed squared gap distances between random balls in [0, 100]^10.

    Ball i gets a radius uniform in [0, 5] with probability 0.9, otherwise
    0.8 times the center-to-center distance to its nearest neighbor, so some
    balls overlap heavily and the triangle inequality breaks.

    Draw order: centers (n, 10) row-major, then n branch selectors, then n
    radius candidates.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = _rng(seed)
    centers = rng.uniform(0.0, 100.0, size=(n, 10))
    branch = rng.uniform(size=n)
    candidate = rng.uniform(0.0, 5.0, size=n)
    cdist = np.sqrt(np.maximum(pairwise_sq(centers), 0.0))
    np.fill_diagonal(cdist, np.inf)
    radii = np.where(branch < 0.9, candidate, 0.8 * cdist.min(axis=1))
    return ball_dissimilarity(centers, radii)


def perturb_knn(points, k_nn: int) -> np.ndarray:
    """Squared shortest-path distances over a symmetric k-nearest-neighbor graph.

    Edges join a pair when either endpoint lists the other among its k_nn
    Euclidean nearest; weights are the Euclidean distances.  Raises if the
    graph is disconnected, reporting the component sizes.
    """
    p = _as_points(points)
    n = p.shape[0]
    k_nn = int(k_nn)
    if not 1 <= k_nn <= n - 1:
        raise ValueError(f"k_nn must be in [1, {n - 1}], got {k_nn}")
    dist = np.sqrt(np.maximum(pairwise_sq(p), 0.0))
    np.fill_diagonal(dist, np.inf)
    nbrs = np.argsort(dist, axis=1, kind="stable")[:, :k_nn]
    rows = np.repeat(np.arange(n), k_nn)
    cols = nbrs.ravel()
    np.fill_diagonal(dist, 0.0)
    graph = csr_matrix((dist[rows, cols], (rows, cols)), shape=(n, n))
    graph = graph.maximum(graph.T)
    n_comp, labels = connected_components(graph, directed=False)
    if n_comp > 1:
        sizes = np.bincount(labels)
        raise ValueError(
            f"k-nn graph is disconnected: {n_comp} components with sizes {sizes.tolist()}"
        )
    paths = dijkstra(graph, directed=False)
    d = paths * paths
    np.fill_diagonal(d, 0.0)
    return mirror_upper(d)


def perturb_noise(points, sigma="auto", seed: int = 0) -> np.ndarray:
    """Squared Euclidean distances with Gaussian noise added to the distances.

    ``sigma`` is the noise scale, or "auto" for max pairwise distance / 500.
    Noise is drawn once per unordered pair (upper triangle, row-major).
    """
    p = _as_points(points)
    n = p.shape[0]
    dist = np.sqrt(np.maximum(pairwise_sq(p), 0.0))
    if isinstance(sigma, str):
        if sigma != "auto":
            raise ValueError(f"sigma must be a positive number or 'auto', got {sigma!r}")
        sigma = float(dist.max()) / 500.0
    sigma = float(sigma)
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    iu = np.triu_indices(n, 1)
    noise = np.zeros((n, n))
    noise[iu] = _rng(seed).normal(0.0, sigma, size=iu[0].shape[0])
    noisy = dist + noise + noise.T
    d = noisy * noisy
    np.fill_diagonal(d, 0.0)
    return mirror_upper(d)


def perturb_missing(points, keep_prob: float, seed: int = 0) -> np.ndarray:
    """Squared distances over the coordinates both points retained.

    Each (point, coordinate) survives independently with ``keep_prob``.
    Raises if some pair shares no surviving coordinate.

    Draw order: one uniform mask block of shape (n, d), row-major.
    """
    p = _as_points(points)
    keep_prob = float(keep_prob)
    if not 0.0 < keep_prob <= 1.0:
        raise ValueError(f"keep_prob must be in (0, 1], got {keep_prob}")
    mask = _rng(seed).uniform(size=p.shape) < keep_prob
    shared = mask.astype(np.int64) @ mask.T.astype(np.int64)
    np.fill_diagonal(shared, 1)
    if np.any(shared == 0):
        i, j = (int(v) for v in np.argwhere(shared == 0)[0])
        raise ValueError(f"points {i} and {j} share no surviving coordinate")
    m = mask.astype(np.float64)
    pm = p * m
    p2m = p * p * m
    a = p2m @ m.T
    d = a + a.T - 2.0 * (pm @ pm.T)
    np.fill_diagonal(d, 0.0)
    return mirror_upper(d)
