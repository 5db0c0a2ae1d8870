"""Signed-spectral embedding pipeline.

Center the dissimilarity matrix, decompose, select k eigenvalues, and build
real coordinates with one sign per axis.  The reconstruction evaluates the
signature bilinear form, so negative output dissimilarities are possible and
are reported rather than clamped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SpectralDecomposition, check_dissimilarity, double_center, eig_sym
from .metrics import StressReport, build_report
from .selection import (
    CMDS,
    NEUC,
    PLUS,
    SelectionResult,
    normalize_method,
    select_cmds,
    select_neuc,
    select_plus,
)

__all__ = [
    "Embedding",
    "SweepEntry",
    "embed",
    "embed_from_decomposition",
    "reconstruct",
    "sweep",
    "CMDS",
    "NEUC",
    "PLUS",
]


@dataclass(frozen=True)
class Embedding:
    """k-axis signed embedding of n points.

    ``coords[l, i]`` is the l-th coordinate of point i; axes are ordered by
    descending |axis value|.  ``signature[l]`` is +1 or -1 and matches the
    sign of ``axis_values[l]`` (zero axes carry +1 and all-zero coordinates).
    ``axis_indices[l]`` is the position of axis l in the sorted eigenvalue
    vector of the decomposition the embedding was built from.
    """

    coords: np.ndarray
    signature: np.ndarray
    axis_values: np.ndarray
    axis_indices: np.ndarray
    selection: SelectionResult | None
    method: str

    @property
    def n(self) -> int:
        return int(self.coords.shape[1])

    @property
    def k(self) -> int:
        return int(self.coords.shape[0])

    def full_axis_values(self) -> np.ndarray:
        """Length-n axis-value vector, zero outside the selected set."""
        full = np.zeros(self.n, dtype=np.float64)
        full[self.axis_indices] = self.axis_values
        return full


def _select(lam: np.ndarray, k: int, method: str) -> SelectionResult:
    if method == CMDS:
        return select_cmds(lam, k)
    if method == NEUC:
        return select_neuc(lam, k)
    return select_plus(lam, k)


def embed_from_decomposition(dec: SpectralDecomposition, k: int, method: str) -> Embedding:
    """Build an embedding from an existing decomposition (shared by sweeps)."""
    method = normalize_method(method)
    sel = _select(dec.eigenvalues, k, method)
    lam_sel = dec.eigenvalues[sel.chosen]
    if method == PLUS:
        shift = float(np.sum(dec.eigenvalues[~sel.w])) / (1.0 + k)
        axis_values = lam_sel + shift
    elif method == CMDS:
        axis_values = np.maximum(lam_sel, 0.0)
    else:
        axis_values = lam_sel.copy()

    chosen = np.asarray(sel.chosen, dtype=np.intp)
    # descending |value|, magnitude ties by ascending eigenvalue index so the
    # axis order does not depend on the selector's pick order
    order = np.lexsort((chosen, -np.abs(axis_values)))
    axis_values = axis_values[order]
    axis_indices = chosen[order]
    vecs = dec.eigenvectors[:, axis_indices].copy()
    # reproducible output: largest-magnitude entry of every eigenvector positive
    cols = np.arange(vecs.shape[1])
    flip = vecs[np.argmax(np.abs(vecs), axis=0), cols] < 0.0
    vecs[:, flip] *= -1.0
    signature = np.where(axis_values < 0.0, -1, 1).astype(np.int64)
    coords = np.sqrt(np.abs(axis_values))[:, None] * vecs.T
    return Embedding(
        coords=coords,
        signature=signature,
        axis_values=axis_values,
        axis_indices=axis_indices,
        selection=sel,
        method=method,
    )


def embed(d, k: int, method: str = NEUC) -> Embedding:
    """Full pipeline: double centering, eigendecomposition, selection, coordinates.

    For "neuc" the selected eigenvalues are used as-is; for "neuc-plus" each is
    shifted by (sum of dropped eigenvalues)/(1+k); for "cmds" non-positive
    selected values are clamped to zero-filled axes.  Deterministic in
    (d, k, method).
    """
    d = check_dissimilarity(d)
    dec = eig_sym(double_center(d))
    return embed_from_decomposition(dec, k, method)


def reconstruct(emb: Embedding) -> np.ndarray:
    """Pairwise dissimilarities of an embedding under its signature form.

    Entry (i, j) is sum_l signature[l] * (coords[l,i] - coords[l,j])^2.  The
    output is exactly hollow and symmetric; entries may be negative.
    """
    x = emb.coords
    n = emb.n
    if x.shape[0] == 0:
        return np.zeros((n, n))
    sx = emb.signature.astype(np.float64)[:, None] * x
    g = x.T @ sx
    y = np.diagonal(g)
    d_hat = y[:, None] + y[None, :] - 2.0 * g
    upper = np.triu(d_hat, 1)
    return upper + upper.T


@dataclass(frozen=True)
class SweepEntry:
    k: int
    method: str
    report: StressReport


def sweep(d, k_list, methods=(CMDS, NEUC, PLUS)) -> list[SweepEntry]:
    """Stress reports over a (k, method) grid sharing one eigendecomposition."""
    d = check_dissimilarity(d)
    methods = [normalize_method(m) for m in methods]
    dec = eig_sym(double_center(d))
    out: list[SweepEntry] = []
    for k in k_list:
        for method in methods:
            emb = embed_from_decomposition(dec, int(k), method)
            d_hat = reconstruct(emb)
            report = build_report(
                d,
                d_hat,
                dec.eigenvalues,
                dec.eigenvectors,
                emb.selection.w,
                emb.full_axis_values(),
                emb.signature,
            )
            out.append(SweepEntry(k=int(k), method=method, report=report))
    return out
