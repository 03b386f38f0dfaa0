"""Unique barycentric weight recovery over a simplex frame.

A frame is a set of M = J affinely independent probability vectors in the
J-dimensional simplex; every point of their hull has a unique representing
weight vector over the frame vertices.  `choquet_measure` recovers it by a
direct linear solve, with a nonnegative-least-squares route available as an
independent cross-check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .hull import is_extreme, point_to_hull_distance
from .simplex import validate

__all__ = [
    "MEMBERSHIP_TOL",
    "COND_LIMIT",
    "OutsideHullError",
    "FrameConditionError",
    "SimplexFrame",
    "ChoquetMeasure",
    "make_frame",
    "choquet_measure",
    "reconstruct",
]

# Points within this distance of the frame hull are solved and clipped.
MEMBERSHIP_TOL = 1e-8
# Frames with a worse condition number of the affine system are rejected.
COND_LIMIT = 1e10
_AFFINE_RANK_TOL = 1e-9


class OutsideHullError(ValueError):
    """Raised for points beyond the membership tolerance; carries the distance."""

    def __init__(self, distance: float):
        super().__init__(f"point lies outside the frame hull (distance {distance:.6g} > {MEMBERSHIP_TOL:g})")
        self.distance = distance


class FrameConditionError(RuntimeError):
    """Raised when the frame's affine system is numerically unusable."""


@dataclass(frozen=True)
class SimplexFrame:
    """M = J affinely independent simplex points plus the system condition."""

    vertices: np.ndarray
    cond: float

    @property
    def m(self) -> int:
        return self.vertices.shape[0]

    @property
    def J(self) -> int:
        return self.vertices.shape[1]

    def to_json(self) -> str:
        return json.dumps({"vertices": self.vertices.tolist(), "cond": self.cond})

    @classmethod
    def from_json(cls, text: str) -> "SimplexFrame":
        return make_frame(np.asarray(json.loads(text)["vertices"], dtype=np.float64))


def _augmented(vertices: np.ndarray) -> np.ndarray:
    """Stack vertex columns over a row of ones: the affine solve matrix."""
    return np.vstack([vertices.T, np.ones(vertices.shape[0])])


def make_frame(vertices, extreme_tol: float = 1e-7) -> SimplexFrame:
    """Validate vertices into a frame, or raise naming the violated invariant.

    Checks M = J, affine independence (smallest singular value of the
    difference matrix above 1e-9), every vertex extreme among the set, and
    the condition number of the augmented affine system.
    """
    rows = [validate(v) for v in np.atleast_2d(np.asarray(vertices, dtype=np.float64))]
    v = np.asarray(rows)
    m, j = v.shape
    if m != j:
        raise ValueError(f"frame must have M = J vertices; got M={m} in dimension J={j}")
    if m < 2:
        raise ValueError("frame needs at least 2 vertices")
    diffs = v[:-1] - v[-1]
    smin = np.linalg.svd(diffs, compute_uv=False)[-1]
    if smin <= _AFFINE_RANK_TOL:
        raise ValueError(f"vertices are affinely dependent (smallest singular value {smin:.3g} <= {_AFFINE_RANK_TOL:g})")
    for i in range(m):
        if not is_extreme(i, v, tol=extreme_tol):
            raise ValueError(f"vertex {i} lies inside the hull of the others")
    cond = float(np.linalg.cond(_augmented(v)))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise FrameConditionError(f"frame condition number {cond:.3g} exceeds {COND_LIMIT:g}")
    v.setflags(write=False)
    return SimplexFrame(vertices=v, cond=cond)


@dataclass(frozen=True)
class ChoquetMeasure:
    """Probability weights over the vertices of a frame."""

    weights: np.ndarray

    def __post_init__(self):
        w = validate(self.weights)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return self.weights.size

    def to_json(self) -> str:
        return json.dumps({"weights": self.weights.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "ChoquetMeasure":
        return cls(weights=np.asarray(json.loads(text)["weights"], dtype=np.float64))


def choquet_measure(p, frame: SimplexFrame, solver: str = "direct") -> ChoquetMeasure:
    """Weights w with p = sum_l w_l f_l, sum w = 1, over the frame vertices.

    The point must be within MEMBERSHIP_TOL of the frame hull (the error
    carries the offending distance otherwise).  solver="direct" solves the
    augmented linear system; solver="nnls" solves the same system under a
    nonnegativity constraint and exists as an independent route for
    cross-checking uniqueness.
    """
    p = validate(p)
    if p.size != frame.J:
        raise ValueError(f"point has dimension {p.size}, frame expects {frame.J}")
    dist = point_to_hull_distance(p, frame.vertices)
    if dist > MEMBERSHIP_TOL:
        raise OutsideHullError(dist)
    a = _augmented(frame.vertices)
    b = np.append(p, 1.0)
    if solver == "direct":
        w, *_ = np.linalg.lstsq(a, b, rcond=None)
    elif solver == "nnls":
        w, _ = nnls(a, b)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    # Boundary points may come back with tiny negative weights; clip and renormalize.
    w = np.clip(w, 0.0, None)
    return ChoquetMeasure(weights=w)


def reconstruct(w: ChoquetMeasure, frame: SimplexFrame) -> np.ndarray:
    """The convex combination sum_l w_l f_l; always a valid simplex point."""
    if w.m != frame.m:
        raise ValueError(f"weight length {w.m} != frame size {frame.m}")
    return validate(frame.vertices.T @ w.weights)
