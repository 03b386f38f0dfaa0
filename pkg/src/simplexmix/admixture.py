"""Admixture (multinomial mixture) EM and the two-stage component pruning.

Documents are multinomial draws from per-document mixtures pi_i = phi_i @ F
of shared component rows F.  `em_fit` maximizes the multinomial likelihood by
EM over a sparse document-term matrix; `two_stage` fits with a generous
component budget, counts the extreme points of the fitted components in PCA
coordinates, and refits at that count, reporting everything along the way.

Log-likelihoods here omit the multinomial coefficient (a data constant,
irrelevant to the maximization and to likelihood differences).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .choquet import ChoquetMeasure, choquet_measure, make_frame
from .hull import PointSet, extremal_set, pca_project, point_to_hull_distance
from .simplex import child_seed

__all__ = [
    "DocTermMatrix",
    "AdmixtureModel",
    "RoundRecord",
    "PipelineReport",
    "load_docword",
    "drop_zero_terms",
    "permute_terms",
    "log_likelihood",
    "em_fit",
    "identifiability_check",
    "two_stage",
    "choquet_from_fit",
    "synthetic_corpus",
]

_EM_SMOOTHING = 1e-10


@dataclass(frozen=True)
class DocTermMatrix:
    """Sparse counts as parallel triplet arrays, ingestion order preserved."""

    n_docs: int
    n_terms: int
    doc_ids: np.ndarray
    term_ids: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        doc = np.asarray(self.doc_ids, dtype=np.int64)
        term = np.asarray(self.term_ids, dtype=np.int64)
        cnt = np.asarray(self.counts, dtype=np.int64)
        if not (doc.shape == term.shape == cnt.shape) or doc.ndim != 1:
            raise ValueError("doc_ids, term_ids and counts must be 1-D arrays of equal length")
        if doc.size:
            if doc.min() < 0 or doc.max() >= self.n_docs:
                raise ValueError("document id out of range")
            if term.min() < 0 or term.max() >= self.n_terms:
                raise ValueError("term id out of range")
            if cnt.min() < 1:
                raise ValueError("counts must be positive integers")
            key = doc * self.n_terms + term
            if np.unique(key).size != key.size:
                raise ValueError("duplicate (doc, term) pairs; merge them before construction")
        for arr in (doc, term, cnt):
            arr.setflags(write=False)
        object.__setattr__(self, "doc_ids", doc)
        object.__setattr__(self, "term_ids", term)
        object.__setattr__(self, "counts", cnt)

    @property
    def nnz(self) -> int:
        return int(self.counts.size)

    @property
    def total_tokens(self) -> int:
        return int(self.counts.sum())

    def doc_totals(self) -> np.ndarray:
        return np.bincount(self.doc_ids, weights=self.counts, minlength=self.n_docs).astype(np.int64)

    def term_totals(self) -> np.ndarray:
        return np.bincount(self.term_ids, weights=self.counts, minlength=self.n_terms).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_docs, self.n_terms))
        out[self.doc_ids, self.term_ids] = self.counts
        return out


def load_docword(source) -> DocTermMatrix:
    """Parse the UCI bag-of-words layout into a DocTermMatrix.

    Three header lines (D, W, NNZ) followed by NNZ lines "docID wordID count"
    with 1-indexed ids.  Duplicate (doc, term) pairs are summed into the
    first occurrence; ids come back 0-indexed.  Declared dimensions are kept
    even if some terms never occur.
    """
    if hasattr(source, "read"):
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode()
    elif isinstance(source, bytes):
        raw = source
    elif isinstance(source, (str, os.PathLike)):
        source = os.fspath(source)
        # a string with newlines is inline content, otherwise a file path
        if isinstance(source, str) and "\n" in source:
            raw = source.encode()
        else:
            with open(source, "rb") as fh:
                raw = fh.read()
    else:
        raise TypeError(f"cannot read docword data from {type(source)!r}")
    lines = [ln for ln in raw.decode("utf-8").splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("malformed header: expected three lines D, W, NNZ")
    try:
        n_docs, n_terms, nnz = (int(lines[i].strip()) for i in range(3))
    except ValueError as exc:
        raise ValueError(f"malformed header: {exc}") from None
    if n_docs < 0 or n_terms < 0 or nnz < 0:
        raise ValueError("malformed header: negative dimension")
    body = lines[3:]
    if len(body) != nnz:
        raise ValueError(f"header declares NNZ={nnz} but body has {len(body)} entries")
    doc_ids, term_ids, counts = [], [], []
    seen: dict[tuple[int, int], int] = {}
    for ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"malformed triplet line: {ln!r}")
        d, w, c = (int(x) for x in parts)
        if not 1 <= d <= n_docs:
            raise ValueError(f"document id {d} out of range 1..{n_docs}")
        if not 1 <= w <= n_terms:
            raise ValueError(f"term id {w} out of range 1..{n_terms}")
        if c < 1:
            raise ValueError(f"count must be positive, got {c} on line {ln!r}")
        key = (d - 1, w - 1)
        if key in seen:
            counts[seen[key]] += c
        else:
            seen[key] = len(doc_ids)
            doc_ids.append(d - 1)
            term_ids.append(w - 1)
            counts.append(c)
    return DocTermMatrix(
        n_docs=n_docs,
        n_terms=n_terms,
        doc_ids=np.asarray(doc_ids, dtype=np.int64),
        term_ids=np.asarray(term_ids, dtype=np.int64),
        counts=np.asarray(counts, dtype=np.int64),
    )


def drop_zero_terms(x: DocTermMatrix) -> tuple[DocTermMatrix, np.ndarray]:
    """Remove terms with zero total count; returns (matrix, kept original ids)."""
    totals = x.term_totals()
    kept = np.flatnonzero(totals > 0)
    if kept.size == x.n_terms:
        return x, kept
    remap = -np.ones(x.n_terms, dtype=np.int64)
    remap[kept] = np.arange(kept.size)
    return (
        DocTermMatrix(
            n_docs=x.n_docs,
            n_terms=int(kept.size),
            doc_ids=x.doc_ids,
            term_ids=remap[x.term_ids],
            counts=x.counts,
        ),
        kept,
    )


def permute_terms(x: DocTermMatrix, perm) -> DocTermMatrix:
    """Relabel term ids by ``perm`` (new id = perm[old id]); order preserved."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(x.n_terms)):
        raise ValueError("perm must be a permutation of range(n_terms)")
    return DocTermMatrix(
        n_docs=x.n_docs,
        n_terms=x.n_terms,
        doc_ids=x.doc_ids,
        term_ids=perm[x.term_ids],
        counts=x.counts,
    )


@dataclass(frozen=True)
class AdmixtureModel:
    """Fitted mixing weights Phi (docs x L), components F (L x terms), and fit info."""

    phi: np.ndarray
    f: np.ndarray
    loglik: float
    n_iters: int
    loglik_trace: np.ndarray
    restart: int
    smoothing: float

    @property
    def n_components(self) -> int:
        return self.f.shape[0]


def log_likelihood(x: DocTermMatrix, phi: np.ndarray, f: np.ndarray) -> float:
    """sum_ij x_ij log((phi @ f)_ij), the parameter-dependent likelihood part."""
    pi = np.einsum("el,el->e", phi[x.doc_ids], f[:, x.term_ids].T)
    if np.any(pi <= 0.0):
        return -math.inf
    return float(x.counts @ np.log(pi))


def _m_step(x: DocTermMatrix, resp: np.ndarray, l_comp: int, smoothing: float):
    """Normalized phi and F from weighted responsibilities (nnz, L)."""
    weighted = resp * x.counts[:, None]
    phi = np.zeros((x.n_docs, l_comp))
    f = np.zeros((l_comp, x.n_terms))
    for l in range(l_comp):
        phi[:, l] = np.bincount(x.doc_ids, weights=weighted[:, l], minlength=x.n_docs)
        f[l] = np.bincount(x.term_ids, weights=weighted[:, l], minlength=x.n_terms)
    phi += smoothing
    f += smoothing
    phi /= phi.sum(axis=1, keepdims=True)
    f /= f.sum(axis=1, keepdims=True)
    return phi, f


def em_fit(
    x: DocTermMatrix,
    l_comp: int,
    max_iters: int = 500,
    rel_tol: float = 1e-8,
    restarts: int = 5,
    seed: int = 0,
    smoothing: float = _EM_SMOOTHING,
    threads: int = 1,
) -> AdmixtureModel:
    """EM for the multinomial admixture likelihood; best of ``restarts`` runs.

    E-step: responsibilities r_el proportional to phi[doc_e, l] * f[l, term_e].
    M-step: phi rows and f rows are the count-weighted responsibility sums,
    renormalized (plus ``smoothing`` against exact zeros).  Each restart
    initializes responsibilities iid Dirichlet(1) per stored entry from a
    child seed.  The recorded log-likelihood trace is exactly non-decreasing:
    a float decrease (possible only at the numerical plateau) reverts to the
    previous iterate and stops.  Ties between restarts keep the lowest index.
    """
    if l_comp < 1:
        raise ValueError(f"need at least one component, got {l_comp}")
    if x.nnz == 0:
        raise ValueError("empty matrix: nothing to fit")
    totals = x.doc_totals()
    if np.any(totals == 0):
        raise ValueError(f"empty document (id {int(np.flatnonzero(totals == 0)[0])}); every document needs >= 1 token")
    if l_comp > x.total_tokens:
        raise ValueError(f"more components ({l_comp}) than tokens ({x.total_tokens})")

    def run_restart(restart: int) -> AdmixtureModel:
        rng = np.random.default_rng(child_seed(seed, restart))
        resp = rng.standard_exponential(size=(x.nnz, l_comp))
        resp /= resp.sum(axis=1, keepdims=True)
        phi, f = _m_step(x, resp, l_comp, smoothing)
        trace = [log_likelihood(x, phi, f)]
        for _ in range(max_iters):
            numer = phi[x.doc_ids] * f[:, x.term_ids].T
            resp = numer / numer.sum(axis=1, keepdims=True)
            new_phi, new_f = _m_step(x, resp, l_comp, smoothing)
            ll = log_likelihood(x, new_phi, new_f)
            if ll < trace[-1]:
                break  # numerical plateau; keep the previous iterate
            phi, f = new_phi, new_f
            trace.append(ll)
            if abs(trace[-1] - trace[-2]) <= rel_tol * abs(trace[-2]):
                break
        return AdmixtureModel(
            phi=phi,
            f=f,
            loglik=trace[-1],
            n_iters=len(trace) - 1,
            loglik_trace=np.asarray(trace),
            restart=restart,
            smoothing=smoothing,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            models = list(pool.map(run_restart, range(restarts)))
    else:
        models = [run_restart(r) for r in range(restarts)]
    best = models[0]
    for model in models[1:]:
        if model.loglik > best.loglik:  # strict: ties keep the lowest restart
            best = model
    return best


def identifiability_check(f: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    """Per-component flag: True if the row is extreme among the rows (full space)."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] < 2:
        raise ValueError("need a matrix of at least two component rows")
    return np.array(
        [point_to_hull_distance(f[i], np.delete(f, i, axis=0)) > tol for i in range(f.shape[0])]
    )


@dataclass(frozen=True)
class RoundRecord:
    """One fit-project-count round of the two-stage pipeline."""

    round_index: int
    l_components: int
    loglik: float
    n_iters: int
    pca_dim: int
    explained_variance: np.ndarray
    extrema_count: int


@dataclass(frozen=True)
class PipelineReport:
    """Everything the two-stage pruning run produced."""

    rounds: tuple
    model: AdmixtureModel
    final_m: int
    identifiable: np.ndarray
    choquet_weights: np.ndarray | None
    choquet_note: str
    term_remap: np.ndarray
    warnings: tuple
    l0: int
    pca_dim: int
    seed: int


def _count_extrema(f: np.ndarray, pca_dim: int, tol: float, warnings: list) -> tuple[int, int, np.ndarray]:
    """Extrema count of component rows in PCA coordinates (with rank fallback)."""
    ps = PointSet(f)
    distinct = ps.points
    if distinct.shape[0] == 1:
        return 1, 0, np.asarray([])
    _, rank = _pca_rank(distinct)
    attained = min(pca_dim, rank)
    if attained < pca_dim:
        warnings.append(
            f"pca dimension reduced from {pca_dim} to attainable rank {attained}"
        )
    if attained >= 2 and distinct.shape[0] > attained:
        res = pca_project(distinct, attained)
        count = extremal_set(res.pointset, tol=tol).f0
        return count, attained, res.explained_variance_ratio
    # Rank or size too small to project; count in the original coordinates.
    count = extremal_set(ps, tol=tol).f0
    return count, 0, np.asarray([])


def _pca_rank(points: np.ndarray) -> tuple[np.ndarray, int]:
    y = points - points.mean(axis=0)
    s = np.linalg.svd(y, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return s, 0
    return s, int(np.sum(s > max(points.shape) * np.finfo(np.float64).eps * s[0]))


def two_stage(
    x: DocTermMatrix,
    l0: int,
    pca_dim: int = 5,
    max_rounds: int = 2,
    max_iters: int = 500,
    rel_tol: float = 1e-8,
    restarts: int = 5,
    seed: int = 0,
    extremal_tol: float = 1e-7,
    threads: int = 1,
) -> PipelineReport:
    """Fit with ``l0`` components, count extrema in PCA space, refit at that count.

    Rounds continue while the extrema count M drops below the current
    component count and the round budget lasts (default 2: one refit).  The
    final model's rows are also flagged by the full-space identifiability
    check, and when M = J and the rows form a valid frame, each document's
    mixing row doubles as its barycentric weight vector over the components.
    """
    if l0 < 2:
        raise ValueError(f"l0 must be >= 2, got {l0}")
    if pca_dim < 2:
        raise ValueError(f"pca_dim must be >= 2, got {pca_dim}")
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be >= 1, got {max_rounds}")
    warnings: list[str] = []
    x, kept = drop_zero_terms(x)
    rounds: list[RoundRecord] = []
    l_current = l0
    model = None
    m = None
    for round_index in range(max_rounds):
        model = em_fit(
            x,
            l_current,
            max_iters=max_iters,
            rel_tol=rel_tol,
            restarts=restarts,
            seed=child_seed(seed, round_index),
            threads=threads,
        )
        m, attained_dim, evr = _count_extrema(model.f, pca_dim, extremal_tol, warnings)
        rounds.append(
            RoundRecord(
                round_index=round_index,
                l_components=l_current,
                loglik=model.loglik,
                n_iters=model.n_iters,
                pca_dim=attained_dim,
                explained_variance=evr,
                extrema_count=m,
            )
        )
        if m >= l_current:
            break
        l_current = m
    if model.n_components >= 2:
        identifiable = identifiability_check(model.f, tol=extremal_tol)
    else:
        identifiable = np.asarray([True])
    choquet_weights, note = _choquet_readoff(model)
    return PipelineReport(
        rounds=tuple(rounds),
        model=model,
        final_m=m,
        identifiable=identifiable,
        choquet_weights=choquet_weights,
        choquet_note=note,
        term_remap=kept,
        warnings=tuple(warnings),
        l0=l0,
        pca_dim=pca_dim,
        seed=seed,
    )


def _choquet_readoff(model: AdmixtureModel):
    if model.f.shape[0] != model.f.shape[1]:
        return None, (
            f"non-simplex regime: {model.f.shape[0]} components in dimension {model.f.shape[1]}"
        )
    try:
        make_frame(model.f)
    except (ValueError, RuntimeError) as exc:
        return None, f"components do not form a valid frame: {exc}"
    return model.phi.copy(), "weights read off the mixing matrix (pi_i = phi_i @ F)"


def choquet_from_fit(model: AdmixtureModel, verify: bool = True, verify_tol: float = 1e-6) -> list[ChoquetMeasure]:
    """Barycentric weights of each document over the fitted components.

    Requires as many components as term dimensions and a valid frame.  The
    weights are the mixing rows read off directly; with ``verify`` each
    document's pi_i = phi_i @ F is independently re-solved over the frame and
    compared at ``verify_tol``.
    """
    if model.f.shape[0] != model.f.shape[1]:
        raise ValueError(
            f"non-simplex regime: {model.f.shape[0]} components in dimension {model.f.shape[1]}"
        )
    frame = make_frame(model.f)
    measures = [ChoquetMeasure(weights=row) for row in model.phi]
    if verify:
        pi = model.phi @ model.f
        for i, measure in enumerate(measures):
            resolved = choquet_measure(pi[i], frame)
            if np.max(np.abs(resolved.weights - measure.weights)) > verify_tol:
                raise RuntimeError(
                    f"read-off weights and re-solved weights disagree beyond {verify_tol:g} at document {i}"
                )
    return measures


def synthetic_corpus(
    m_star: int,
    j_terms: int,
    n_docs: int,
    doc_len: int,
    separation: float,
    seed: int,
    mixing_alpha: float = 0.1,
):
    """Corpus with known truth: (DocTermMatrix, Phi*, F*).

    Component l interpolates between a full-support Dirichlet row and a
    point mass on its own anchor term: f*_l = (1-s)*base_l + s*e_l.  At
    ``separation`` = 1 the supports are disjoint singletons, so every
    document's empirical distribution stays inside Conv(F*) and surplus
    fitted components have nowhere extreme to go.  Document weights are
    symmetric Dirichlet rows and documents are multinomial draws of
    ``doc_len`` tokens from pi = Phi* F*.
    """
    if not 2 <= m_star <= j_terms:
        raise ValueError(f"need 2 <= m_star <= j_terms, got {m_star}, {j_terms}")
    if not 0.0 <= separation <= 1.0:
        raise ValueError(f"separation must lie in [0, 1], got {separation}")
    if n_docs < 1 or doc_len < 1:
        raise ValueError("n_docs and doc_len must be positive")
    rng = np.random.default_rng(child_seed(seed))
    f_star = np.zeros((m_star, j_terms))
    for l in range(m_star):
        base = rng.dirichlet(np.ones(j_terms))
        f_star[l] = (1.0 - separation) * base
        f_star[l, l] += separation
    phi_star = rng.dirichlet(np.full(m_star, mixing_alpha), size=n_docs)
    pi = phi_star @ f_star
    dense = rng.multinomial(doc_len, pi)
    doc_ids, term_ids = np.nonzero(dense)
    return (
        DocTermMatrix(
            n_docs=n_docs,
            n_terms=j_terms,
            doc_ids=doc_ids,
            term_ids=term_ids,
            counts=dense[doc_ids, term_ids],
        ),
        phi_star,
        f_star,
    )
