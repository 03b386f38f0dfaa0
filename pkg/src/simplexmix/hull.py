"""Convex-hull extremal sets, tower counts, Hausdorff distance, PCA projection.

The workhorse is Wolfe's min-norm-point algorithm for the distance from a
point to the convex hull of a finite point set: an active-set method on the
weight simplex that terminates finitely at machine precision.  Extremality of
a point is "distance to the hull of the others exceeds a tolerance", which
works in any moderate dimension without facet enumeration.  For extremal-set
counting, a qhull pass on rank-reduced isometric coordinates shortlists
candidates first, and each candidate is confirmed with the distance test; the
pure per-point route remains available and is used as a fallback.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

__all__ = [
    "DEDUP_TOL",
    "EXTREME_TOL",
    "PointSet",
    "ExtremalSet",
    "TowerCount",
    "PCAResult",
    "point_to_hull_distance",
    "is_extreme",
    "extremal_set",
    "hausdorff",
    "count_towers",
    "c_constant",
    "pca_project",
]

# Points closer than this are merged on PointSet construction.
DEDUP_TOL = 1e-9
# Points within this distance of the others' hull are declared non-extreme
# (conservative: near-duplicates of a vertex do not count twice).
EXTREME_TOL = 1e-7

# extremal_set falls back to per-point distance tests above this rank.
_QHULL_MAX_DIM = 8

_MNP_MAX_MAJOR = 1000    # major cycles; active sets stay near size d+1 in practice
_MNP_ABS_GAP = 1e-24     # dual gap floor on ||w||^2
_MNP_REL_GAP = 1e-12     # relative dual gap
_MNP_ZERO = 1e-24        # ||w||^2 below this means the point is in the hull
_MNP_DROP = 1e-14        # weights at or below this leave the active set


@dataclass(frozen=True)
class PointSet:
    """Immutable set of points in R^d, deduplicated at ``DEDUP_TOL``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a nonempty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        pts = _dedup(pts, DEDUP_TOL)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def to_csv(self, path) -> None:
        """One point per row, 17 significant digits."""
        np.savetxt(path, self.points, delimiter=",", fmt="%.17g")

    @classmethod
    def from_csv(cls, path) -> "PointSet":
        return cls(np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=np.float64)))

    def to_json(self) -> str:
        return json.dumps({"points": self.points.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        return cls(np.asarray(json.loads(text)["points"], dtype=np.float64))


def _dedup(pts: np.ndarray, tol: float) -> np.ndarray:
    """Drop near-duplicate rows, keeping the first occurrence, order preserved."""
    n = pts.shape[0]
    if n <= 1:
        return pts.copy()
    pairs = cKDTree(pts).query_pairs(r=tol, output_type="ndarray")
    if len(pairs) == 0:
        return pts.copy()
    drop = np.zeros(n, dtype=bool)
    for i, j in pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]:
        if not drop[i] and not drop[j]:
            drop[j] = True
    return pts[~drop].copy()


@dataclass(frozen=True)
class ExtremalSet:
    """Sorted indices of the extreme points of a PointSet."""

    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        idx = np.sort(idx)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def f0(self) -> int:
        return int(self.indices.size)

    def to_json(self) -> str:
        return json.dumps({"indices": self.indices.tolist(), "f0": self.f0})


@dataclass(frozen=True)
class TowerCount:
    """Number of maximal face chains (towers) of the (J-1)-simplex."""

    J: int
    towers: int


def _as_points(ps) -> np.ndarray:
    if isinstance(ps, PointSet):
        return ps.points
    pts = np.asarray(ps, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected a (n, d) array or PointSet, got shape {pts.shape}")
    return pts


def _affine_min_norm(xs: np.ndarray) -> np.ndarray:
    """Weights (summing to 1, sign-free) of the min-norm point in aff(rows)."""
    k = xs.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[0, 1:] = 1.0
    kkt[1:, 0] = 1.0
    kkt[1:, 1:] = xs @ xs.T
    rhs = np.zeros(k + 1)
    rhs[0] = 1.0
    return np.linalg.lstsq(kkt, rhs, rcond=None)[0][1:]


def _mnp_distance(p: np.ndarray, pts: np.ndarray) -> float:
    """Distance from ``p`` to Conv(rows of ``pts``) by Wolfe's min-norm-point.

    Works in coordinates shifted by -p, so the target is the min-norm point
    of the hull.  Major cycles add the vertex most aligned against the
    current point; minor cycles re-solve the affine subproblem on the active
    set and drop atoms whose weight would turn negative.  Exact for p in the
    hull (returns 0 up to machine scale) and for boundary projections.
    """
    x = pts - p
    norms2 = (x * x).sum(axis=1)
    start = int(np.argmin(norms2))
    active = [start]
    lam = np.array([1.0])
    w = x[start].copy()
    for _ in range(_MNP_MAX_MAJOR):
        wn = float(w @ w)
        if wn <= _MNP_ZERO:
            break
        g = x @ w
        j = int(np.argmin(g))
        if wn - float(g[j]) <= max(_MNP_ABS_GAP, _MNP_REL_GAP * wn):
            break
        if j in active:
            break  # no numerically new descent vertex
        active.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(pts.shape[0]):
            alpha = _affine_min_norm(x[active])
            if alpha.min() > _MNP_DROP:
                lam = alpha
                break
            neg = alpha <= _MNP_DROP
            denom = lam[neg] - alpha[neg]
            ratios = np.where(denom > 0.0, lam[neg] / np.where(denom > 0.0, denom, 1.0), np.inf)
            theta = min(1.0, float(ratios.min()))
            lam = theta * alpha + (1.0 - theta) * lam
            lam[lam < _MNP_DROP] = 0.0
            keep = lam > 0.0
            if keep.all():
                keep[int(np.argmin(alpha))] = False  # force progress
            active = [a for a, kp in zip(active, keep) if kp]
            lam = lam[keep]
            if len(active) == 1:
                lam = np.array([1.0])
                break
        w = x[active].T @ lam
    return math.sqrt(max(float(w @ w), 0.0))


def point_to_hull_distance(p, ps) -> float:
    """Euclidean distance from ``p`` to the convex hull of ``ps``.

    ``ps`` may be a PointSet or an (n, d) array.  Returns 0 (to within solver
    precision, well below 1e-9) for any convex combination of the points.
    """
    pts = _as_points(ps)
    if pts.shape[0] == 0:
        raise ValueError("empty point set")
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.size != pts.shape[1]:
        raise ValueError(f"dimension mismatch: point has {p.size}, set has {pts.shape[1]}")
    return _mnp_distance(p, pts)


def is_extreme(i: int, ps, tol: float = EXTREME_TOL) -> bool:
    """True iff point ``i`` is farther than ``tol`` from the hull of the rest."""
    pts = _as_points(ps)
    n = pts.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"point index {i} out of range for {n} points")
    if n < 2:
        raise ValueError("need at least 2 distinct points")
    others = np.delete(pts, i, axis=0)
    return _mnp_distance(pts[i], others) > tol


def _affine_coordinates(pts: np.ndarray) -> tuple[np.ndarray, int]:
    """Isometric coordinates of ``pts`` inside their affine hull.

    Returns (Z, r) where r is the affine rank and Z is (n, r) with all
    pairwise distances preserved (points in a flat, e.g. the simplex
    hyperplane, become full-dimensional).  Deterministic sign convention.
    The rank tolerance includes the absolute coordinate scale: points on a
    hyperplane carry rounding noise relative to their coordinates, not to
    their (possibly tiny) spread.
    """
    y = pts - pts.mean(axis=0)
    _, s, vt = np.linalg.svd(y, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((pts.shape[0], 0)), 0
    scale = max(float(s[0]), float(np.abs(pts).max()))
    rank_tol = max(pts.shape) * np.finfo(np.float64).eps * scale
    r = int(np.sum(s > rank_tol))
    basis = _fix_signs(vt[:r])
    return y @ basis.T, r


def _fix_signs(vt: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each row positive."""
    out = vt.copy()
    for row in out:
        k = int(np.argmax(np.abs(row)))
        if row[k] < 0:
            row *= -1.0
    return out


def extremal_set(ps, tol: float = EXTREME_TOL, method: str = "auto") -> ExtremalSet:
    """Indices of extreme points of ``ps`` at tolerance ``tol``.

    method="auto" shortlists hull vertices with qhull on rank-reduced
    coordinates and confirms each with the distance test; "perpoint" runs the
    distance test on every point (any dimension, slower).
    """
    if method not in ("auto", "qhull", "perpoint"):
        raise ValueError(f"unknown method {method!r}")
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    pts = ps.points
    n = pts.shape[0]
    if n < 2:
        raise ValueError("degenerate input: fewer than 2 distinct points")
    z, r = _affine_coordinates(pts)
    if r == 0:
        raise ValueError("degenerate input: all points identical")
    if r == 1:
        coord = z[:, 0]
        return ExtremalSet(np.unique([int(np.argmin(coord)), int(np.argmax(coord))]))
    if n <= r + 1:
        # Affinely independent: every point is a vertex.
        return ExtremalSet(np.arange(n))
    if method == "perpoint" or (method == "auto" and r > _QHULL_MAX_DIM):
        keep = [i for i in range(n) if _mnp_distance(z[i], np.delete(z, i, axis=0)) > tol]
        return ExtremalSet(np.asarray(keep, dtype=np.int64))
    try:
        cand = np.sort(ConvexHull(z).vertices.astype(np.int64))
    except QhullError:
        keep = [i for i in range(n) if _mnp_distance(z[i], np.delete(z, i, axis=0)) > tol]
        return ExtremalSet(np.asarray(keep, dtype=np.int64))
    zc = z[cand]
    keep = [
        int(cand[a])
        for a in range(len(cand))
        if _mnp_distance(zc[a], np.delete(zc, a, axis=0)) > tol
    ]
    return ExtremalSet(np.asarray(keep, dtype=np.int64))


def hausdorff(a, b) -> float:
    """Hausdorff distance between the convex hulls of two point sets.

    max over points of either set of the distance to the other hull;
    symmetric, zero iff the hulls coincide (within solver precision).
    """
    pa = _as_points(a)
    pb = _as_points(b)
    if pa.shape[1] != pb.shape[1]:
        raise ValueError(f"dimension mismatch: {pa.shape[1]} vs {pb.shape[1]}")
    d_ab = max(_mnp_distance(p, pb) for p in pa)
    d_ba = max(_mnp_distance(q, pa) for q in pb)
    return max(d_ab, d_ba)


def count_towers(J: int) -> TowerCount:
    """Count towers of the (J-1)-simplex by explicit face-lattice enumeration.

    A face is a nonempty vertex subset; a tower is a maximal chain of faces,
    one per dimension 0..J-1.  Counted by dynamic programming over the subset
    lattice (no closed formula).
    """
    if not 2 <= J <= 6:
        raise ValueError(f"J={J} outside the supported brute-force range [2, 6]")
    ways = {frozenset([v]): 1 for v in range(J)}
    for size in range(2, J + 1):
        for face in itertools.combinations(range(J), size):
            fs = frozenset(face)
            ways[fs] = sum(ways[fs - {v}] for v in face)
    return TowerCount(J=J, towers=ways[frozenset(range(J))])


def c_constant(J: int) -> float:
    """Growth constant T(simplex) / ((J+1)^(J-1) (J-1)!)."""
    t = count_towers(J).towers
    return t / ((J + 1) ** (J - 1) * math.factorial(J - 1))


@dataclass(frozen=True)
class PCAResult:
    """Centered SVD projection with explained-variance bookkeeping.

    ``scores`` holds one projected row per input row; ``pointset`` is the
    deduplicated geometric object fed to hull routines.
    """

    scores: np.ndarray
    pointset: PointSet
    components: np.ndarray
    mean: np.ndarray
    explained_variance_ratio: np.ndarray
    singular_values: np.ndarray


def pca_project(data, d: int) -> PCAResult:
    """Project rows of ``data`` onto their top-``d`` principal directions.

    Rows are centered by the column mean and projected onto the top-d right
    singular directions (deterministic sign: the largest-magnitude entry of
    each direction is positive).  Raises if the data rank is below ``d``,
    naming the attainable dimension.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"data must be 2-D, got shape {x.shape}")
    n, m = x.shape
    if d < 2:
        raise ValueError(f"target dimension must be >= 2, got {d}")
    if d > min(n - 1, m):
        raise ValueError(f"target dimension {d} exceeds min(rows-1, columns) = {min(n - 1, m)}")
    mean = x.mean(axis=0)
    y = x - mean
    _, s, vt = np.linalg.svd(y, full_matrices=False)
    rank_tol = max(n, m) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > rank_tol))
    if rank < d:
        raise ValueError(f"data rank {rank} is below target dimension {d}; attainable d = {rank}")
    basis = _fix_signs(vt[:d])
    scores = y @ basis.T
    total = float((s**2).sum())
    ratio = (s[:d] ** 2) / total if total > 0 else np.zeros(d)
    return PCAResult(
        scores=scores,
        pointset=PointSet(scores),
        components=basis,
        mean=mean,
        explained_variance_ratio=ratio,
        singular_values=s.copy(),
    )
