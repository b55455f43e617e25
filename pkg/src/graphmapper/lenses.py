"""Scalar lens functions on graph nodes.

A lens maps every node to a real value; structure is then viewed through
its preimages. Four lens families are provided:

* ``agd`` — average geodesic distance, low near the center of a graph.
* ``density`` — Gaussian-kernel sum over geodesic distances, high in
  dense regions.
* ``laplacian_l2`` / ``laplacian_l3`` — eigenvectors of the 2nd/3rd
  smallest eigenvalue of the unnormalized graph Laplacian.
* ``pagerank_log`` — log of the undirected PageRank vector; cheap enough
  for very large graphs.

``index`` is an additional debugging lens (node order, normalized).

Raw values are min-max normalized to [0,1]; a constant field maps to 0.5
everywhere and is flagged so callers can warn.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    MultiplicityError,
    DisconnectedGraphError,
    ParameterError,
    ValidationError,
)
from .graph import WeightedGraph, connected_components, distances_from

LENS_KINDS = ("agd", "density", "laplacian_l2", "laplacian_l3", "pagerank_log", "index")

# short names accepted by the CLI and service
LENS_ALIASES = {
    "l2": "laplacian_l2",
    "l3": "laplacian_l3",
    "pagerank": "pagerank_log",
}

CONNECTIVITY_REQUIRED = ("agd", "density", "laplacian_l2", "laplacian_l3")

DEFAULT_DELTA = 2.0
DEFAULT_DAMPING = 0.85
DEFAULT_PAGERANK_TOL = 1e-10
DEFAULT_PAGERANK_MAX_ITER = 1000
DEFAULT_EIGEN_TOL = 1e-8
DEFAULT_BIN_COUNT = 50


def resolve_lens_kind(name: str) -> str:
    kind = LENS_ALIASES.get(name, name)
    if kind not in LENS_KINDS:
        raise ParameterError(f"unknown lens kind {name!r}; choose from {LENS_KINDS + tuple(LENS_ALIASES)}")
    return kind


@dataclass(frozen=True)
class LensField:
    """Per-node raw lens values plus their [0,1] normalization."""

    kind: str
    raw: np.ndarray
    normalized: np.ndarray
    params: dict
    constant: bool

    @classmethod
    def from_raw(cls, kind: str, raw: np.ndarray, params: dict) -> "LensField":
        raw = np.asarray(raw, dtype=np.float64)
        normalized = normalize_lens(raw)
        constant = bool(raw.size) and bool(np.all(raw == raw[0]))
        return cls(kind=kind, raw=raw, normalized=normalized, params=dict(params), constant=constant)

    def to_values(self, labels) -> list[dict]:
        return [
            {"node": lab, "raw": float(r), "normalized": float(s)}
            for lab, r, s in zip(labels, self.raw, self.normalized)
        ]


@dataclass(frozen=True)
class LensHistogram:
    bin_count: int
    bin_edges: np.ndarray
    counts: np.ndarray

    def to_json_obj(self) -> dict:
        return {
            "bin_count": self.bin_count,
            "bin_edges": [float(e) for e in self.bin_edges],
            "counts": [int(c) for c in self.counts],
        }


def normalize_lens(raw: np.ndarray) -> np.ndarray:
    """(x - min) / (max - min); a constant input maps every node to 0.5."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size and not np.all(np.isfinite(raw)):
        raise ValidationError("lens values must be finite to normalize")
    if raw.size == 0:
        return raw.copy()
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.full_like(raw, 0.5)
    return (raw - lo) / (hi - lo)


def histogram(field: LensField, bin_count: int = DEFAULT_BIN_COUNT) -> LensHistogram:
    """Uniform bins over [0,1], half-open except the last bin (closed at 1)."""
    if bin_count < 1:
        raise ParameterError(f"bin_count must be >= 1, got {bin_count}")
    counts, edges = np.histogram(field.normalized, bins=bin_count, range=(0.0, 1.0))
    return LensHistogram(bin_count=bin_count, bin_edges=edges, counts=counts)


# -- distance-based lenses -----------------------------------------------------


def _require_connected(g: WeightedGraph, what: str) -> None:
    comps = connected_components(g)
    if len(comps) > 1:
        raise DisconnectedGraphError(
            f"{what} is undefined on a disconnected graph ({len(comps)} components, "
            f"infinite distances); restrict to the largest component first",
            components=len(comps),
        )


def _row_chunks(n: int):
    # block size balances distance-matrix memory against call overhead;
    # independent of the thread count so results are thread-count-stable
    chunk = max(64, int(4_000_000 // max(n, 1)))
    starts = list(range(0, n, chunk))
    return [(s, min(s + chunk, n)) for s in starts]


def _accumulate_rows(g: WeightedGraph, row_fn, threads: int = 1) -> np.ndarray:
    """Apply row_fn to blocks of the all-pairs distance matrix without ever
    materializing it. row_fn(dist_block) -> per-source values."""
    n = g.n
    out = np.empty(n, dtype=np.float64)
    spans = _row_chunks(n)

    def work(span):
        lo, hi = span
        d = distances_from(g, np.arange(lo, hi))
        out[lo:hi] = row_fn(d)

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, spans))
    else:
        for span in spans:
            work(span)
    return out


def compute_agd(g: WeightedGraph, threads: int = 1) -> LensField:
    """Mean weighted geodesic distance from each node to all nodes
    (the node itself contributes d=0)."""
    _require_connected(g, "average geodesic distance")
    raw = _accumulate_rows(g, lambda d: d.mean(axis=1), threads)
    return LensField.from_raw("agd", raw, {})


def compute_density(g: WeightedGraph, delta: float = DEFAULT_DELTA, threads: int = 1) -> LensField:
    """Gaussian-kernel density: sum over u of exp(-d(u,v)^2 / delta)."""
    if not delta > 0:
        raise ParameterError(f"delta must be > 0, got {delta}")
    _require_connected(g, "density estimation")
    raw = _accumulate_rows(g, lambda d: np.exp(-(d * d) / delta).sum(axis=1), threads)
    return LensField.from_raw("density", raw, {"delta": float(delta)})


# -- Laplacian eigenvector lenses ----------------------------------------------


def _laplacian_matvec(g: WeightedGraph):
    a = g.adjacency()
    wdeg = g.neighbor_weight_sums()

    def matvec(x: np.ndarray) -> np.ndarray:
        return wdeg * x - a @ x

    return matvec


def _lanczos_smallest(matvec, n: int, k: int, tol: float, max_matvecs: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """k smallest nonzero-eigenvalue eigenpairs of a symmetric PSD operator
    whose kernel is the constant vector.

    Lanczos with full reorthogonalization; the constant vector and every
    converged eigenvector are deflated, so repeated eigenvalues are found
    one copy per restart.
    """
    if k >= n:
        raise ParameterError(f"graph with {n} nodes has no {k + 1}-th Laplacian eigenpair")
    ones = np.full(n, 1.0 / np.sqrt(n))
    locked_vals: list[float] = []
    locked_vecs: list[np.ndarray] = []
    matvecs = 0
    last_residual = np.inf

    def deflate(w: np.ndarray) -> np.ndarray:
        w = w - (ones @ w) * ones
        for q in locked_vecs:
            w = w - (q @ w) * q
        return w

    def fresh_start() -> np.ndarray:
        for _ in range(10):
            v = deflate(rng.standard_normal(n))
            nv = np.linalg.norm(v)
            if nv > 1e-10:
                return v / nv
        raise ConvergenceError("could not find a start vector outside the deflated space", np.inf)

    start = fresh_start()
    while len(locked_vals) < k:
        if matvecs >= max_matvecs:
            raise ConvergenceError(
                f"Laplacian eigensolver hit the {max_matvecs}-matvec cap", last_residual
            )
        remaining = n - 1 - len(locked_vecs)
        m_max = min(remaining, max(60, 30 * k), max_matvecs - matvecs)
        V = [start]
        alphas: list[float] = []
        betas: list[float] = []
        for j in range(m_max):
            w = matvec(V[j])
            matvecs += 1
            alphas.append(float(V[j] @ w))
            w = w - alphas[j] * V[j]
            if j > 0:
                w = w - betas[j - 1] * V[j - 1]
            w = deflate(w)
            for _ in range(2):  # full reorthogonalization, twice for stability
                for q in V:
                    w = w - (q @ w) * q
            beta = float(np.linalg.norm(w))
            if beta < 1e-12:  # invariant subspace: Ritz pairs are exact
                break
            betas.append(beta)
            V.append(w / beta)

        basis = np.stack(V[: len(alphas)], axis=1)
        t = np.diag(np.array(alphas))
        for i in range(len(alphas) - 1):
            t[i, i + 1] = t[i + 1, i] = betas[i]
        theta, y = np.linalg.eigh(t)

        # Lock at most the smallest Ritz pair per sweep: a single Krylov
        # run sees one copy of a repeated eigenvalue, so later Ritz values
        # may skip hidden copies. Deflated restarts recover them.
        next_start = None
        if len(theta):
            x = deflate(basis @ y[:, 0])
            nx = np.linalg.norm(x)
            if nx >= 1e-10 and matvecs < max_matvecs:
                x = x / nx
                r = matvec(x) - theta[0] * x
                matvecs += 1
                last_residual = float(np.linalg.norm(r))
                if last_residual <= tol:
                    locked_vals.append(float(theta[0]))
                    locked_vecs.append(x)
                else:
                    next_start = x  # restart from the best Ritz vector so far
        if len(locked_vals) >= k:
            break
        start = next_start if next_start is not None else fresh_start()

    order = np.argsort(locked_vals)
    vals = np.array([locked_vals[i] for i in order])
    vecs = np.stack([locked_vecs[i] for i in order], axis=1)
    return vals, vecs


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Entry of largest magnitude made positive; ties pick the lowest index.

    Magnitudes within a relative 1e-9 of the maximum count as tied, so the
    rule is stable against last-ulp noise in symmetric eigenvectors.
    """
    mags = np.abs(v)
    top = mags.max()
    i = int(np.nonzero(mags >= top * (1.0 - 1e-9))[0][0])
    return -v if v[i] < 0 else v.copy()


def compute_laplacian_eigen(
    g: WeightedGraph, which: str = "l2", tol: float = DEFAULT_EIGEN_TOL
) -> LensField:
    """Unit-norm eigenvector of the 2nd ('l2') or 3rd ('l3') smallest
    eigenvalue of the unnormalized Laplacian."""
    if which not in ("l2", "l3"):
        raise ParameterError(f"which must be 'l2' or 'l3', got {which!r}")
    comps = connected_components(g)
    if len(comps) > 1:
        raise MultiplicityError(len(comps))
    k = 1 if which == "l2" else 2
    matvec = _laplacian_matvec(g)
    rng = np.random.default_rng(0x5EED)
    vals, vecs = _lanczos_smallest(matvec, g.n, k, tol, max_matvecs=10 * g.n, rng=rng)
    vec = _fix_sign(vecs[:, k - 1])
    eigenvalue = float(vals[k - 1])
    residual = float(np.linalg.norm(matvec(vec) - eigenvalue * vec))
    return LensField.from_raw(
        f"laplacian_{which}",
        vec,
        {"tol": float(tol), "eigenvalue": eigenvalue, "residual": residual},
    )


# -- PageRank lens ---------------------------------------------------------------


def compute_pagerank(
    g: WeightedGraph,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_PAGERANK_TOL,
    max_iter: int = DEFAULT_PAGERANK_MAX_ITER,
) -> LensField:
    """Log of the undirected PageRank vector.

    Fixed-point iteration from the uniform vector until the L1 change is
    <= tol. Edge weights are ignored: the recurrence divides by neighbor
    counts. Raw values are natural logs of the scores.
    """
    if not 0 < damping < 1:
        raise ParameterError(f"damping must be in (0,1), got {damping}")
    deg = g.degrees().astype(np.float64)
    if g.n == 0:
        raise ParameterError("PageRank is undefined on an empty graph")
    isolated = np.nonzero(deg == 0)[0]
    if isolated.size:
        raise ValidationError(
            f"PageRank is undefined with isolated nodes (e.g. {g.labels[isolated[0]]!r}): "
            "the recurrence divides by neighbor count"
        )
    a = g.adjacency(unit_weights=True)
    n = g.n
    r = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = base + damping * (a @ (r / deg))
        residual = float(np.abs(nxt - r).sum())
        r = nxt
        if residual <= tol:
            break
    else:
        raise ConvergenceError(f"PageRank did not converge in {max_iter} iterations", residual)
    raw = np.log(r)
    return LensField.from_raw(
        "pagerank_log",
        raw,
        {
            "damping": float(damping),
            "tol": float(tol),
            "max_iter": int(max_iter),
            "iterations": iterations,
            "residual": residual,
        },
    )


def compute_index_lens(g: WeightedGraph) -> LensField:
    """Node order as a lens; purely a debugging/demo aid."""
    return LensField.from_raw("index", np.arange(g.n, dtype=np.float64), {})


def compute_lens(g: WeightedGraph, kind: str, threads: int = 1, **params) -> LensField:
    """Dispatch on lens kind (short aliases accepted)."""
    kind = resolve_lens_kind(kind)
    if kind == "agd":
        return compute_agd(g, threads=threads)
    if kind == "density":
        return compute_density(g, delta=params.get("delta", DEFAULT_DELTA), threads=threads)
    if kind in ("laplacian_l2", "laplacian_l3"):
        return compute_laplacian_eigen(
            g, which=kind.removeprefix("laplacian_"), tol=params.get("tol", DEFAULT_EIGEN_TOL)
        )
    if kind == "pagerank_log":
        return compute_pagerank(
            g,
            damping=params.get("damping", DEFAULT_DAMPING),
            tol=params.get("tol", DEFAULT_PAGERANK_TOL),
            max_iter=params.get("max_iter", DEFAULT_PAGERANK_MAX_ITER),
        )
    return compute_index_lens(g)
