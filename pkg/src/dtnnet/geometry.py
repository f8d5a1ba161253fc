"""Disk packings and their derived network geometry.

A packing is the raw input: a disk domain of radius L holding N
non-touching disks. From it we derive the Voronoi neighbor sets, the gap
widths between neighboring disks, and the classification of disks whose
Voronoi cell reaches the outer boundary. All indices are 0-based; after
:func:`classify_boundary` the boundary disks occupy indices
``0..boundary_count-1``, ordered counterclockwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateAngleError,
    EmptyPackingError,
    OutsideDomainError,
    OverlapError,
    ParseError,
)

# Witness search along clipped Voronoi bisectors.
BISECTOR_SAMPLES = 1024
BISECTOR_REFINEMENTS = 3

# Angular sweep for the boundary classification.
SWEEP_SAMPLES = 4096
SWEEP_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Disk:
    x: float
    y: float
    r: float

    @property
    def center(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class Packing:
    """Domain disk of radius L, centered at the origin, plus inclusions."""

    L: float
    inclusions: tuple[Disk, ...]

    @property
    def n(self) -> int:
        return len(self.inclusions)

    def centers(self) -> np.ndarray:
        return np.array([[d.x, d.y] for d in self.inclusions]).reshape(-1, 2)

    def radii(self) -> np.ndarray:
        return np.array([d.r for d in self.inclusions])


@dataclass(frozen=True)
class GeometryAnalysis:
    """Derived structure of a validated packing, renumbered boundary-first."""

    packing: Packing
    neighbor_sets: tuple[frozenset[int], ...]
    gap_widths: dict[tuple[int, int], float]  # keyed (i, j) with i < j
    boundary_count: int
    boundary_gaps: np.ndarray  # delta_i, length boundary_count
    boundary_angles: np.ndarray  # theta_i in [0, 2pi)
    boundary_nodes: np.ndarray  # (boundary_count, 2), points on |x| = L

    def gap(self, i: int, j: int) -> float:
        return self.gap_widths[(i, j) if i < j else (j, i)]


@dataclass(frozen=True)
class ScaleReport:
    delta_max: float
    delta_min: float
    R_min: float
    R_max: float
    ratio_delta_R: float
    ratio_R_L: float
    warnings: tuple[str, ...] = field(default=())


def validate_packing(packing: Packing) -> Packing:
    """Check the packing invariants; return the packing unchanged."""
    if packing.n == 0:
        raise EmptyPackingError("packing holds no inclusions")
    if not (packing.L > 0 and math.isfinite(packing.L)):
        raise ParseError(f"domain radius must be positive and finite, got {packing.L}")
    centers = packing.centers()
    radii = packing.radii()
    norms = np.hypot(centers[:, 0], centers[:, 1])
    for i in range(packing.n):
        if norms[i] + radii[i] >= packing.L:
            raise OutsideDomainError(i)
    for i in range(packing.n):
        for j in range(i + 1, packing.n):
            d = math.hypot(centers[i, 0] - centers[j, 0], centers[i, 1] - centers[j, 1])
            if d <= radii[i] + radii[j]:
                raise OverlapError(i, j)
    return packing


def _bisector_witness(centers: np.ndarray, L: float, i: int, j: int) -> bool:
    """True iff the Voronoi cells of centers i and j share a 1D edge.

    Searches the perpendicular bisector of (x_i, x_j), clipped to the domain
    disk, for a point strictly closer to x_i and x_j than to every other
    center. Samples plus a few bisection refinements at sign changes.
    """
    n = centers.shape[0]
    if n == 2:
        return True
    mid = 0.5 * (centers[i] + centers[j])
    d = centers[j] - centers[i]
    t = np.array([-d[1], d[0]])
    t = t / np.hypot(t[0], t[1])
    # |mid + s t| <= L  <=>  s^2 + 2 s (mid.t) + |mid|^2 - L^2 <= 0
    b = float(mid @ t)
    c = float(mid @ mid) - L * L
    disc = b * b - c
    if disc <= 0.0:
        return False
    s_lo, s_hi = -b - math.sqrt(disc), -b + math.sqrt(disc)

    others = np.array([k for k in range(n) if k != i and k != j])

    def margin(s: np.ndarray) -> np.ndarray:
        z = mid[None, :] + s[:, None] * t[None, :]
        d_i = np.hypot(z[:, 0] - centers[i, 0], z[:, 1] - centers[i, 1])
        diff = z[:, None, :] - centers[others][None, :, :]
        d_other = np.min(np.hypot(diff[:, :, 0], diff[:, :, 1]), axis=1)
        return d_other - d_i

    s = np.linspace(s_lo, s_hi, BISECTOR_SAMPLES)
    f = margin(s)
    if np.any(f > 0.0):
        return True
    # Refine around sign changes in case a thin positive stretch was missed.
    sign_change = np.nonzero(np.diff(np.sign(f)) != 0)[0]
    for idx in sign_change:
        lo, hi = s[idx], s[idx + 1]
        for _ in range(BISECTOR_REFINEMENTS):
            m = 0.5 * (lo + hi)
            fm = float(margin(np.array([m]))[0])
            if fm > 0.0:
                return True
            if fm * f[idx] > 0.0:
                lo = m
            else:
                hi = m
    return False


def compute_adjacency(packing: Packing) -> tuple[frozenset[int], ...]:
    """Voronoi neighbor sets of the inclusion centers, clipped to the domain."""
    centers = packing.centers()
    n = packing.n
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if _bisector_witness(centers, packing.L, i, j):
                neighbors[i].add(j)
                neighbors[j].add(i)
    return tuple(frozenset(s) for s in neighbors)


def _nearest_center(centers: np.ndarray, theta: float, L: float) -> int:
    p = np.array([L * math.cos(theta), L * math.sin(theta)])
    d = np.hypot(centers[:, 0] - p[0], centers[:, 1] - p[1])
    return int(np.argmin(d))


def _boundary_labels(centers: np.ndarray, L: float) -> set[int]:
    """Indices whose Voronoi cell meets the outer circle, by angular sweep."""
    thetas = np.linspace(0.0, 2.0 * math.pi, SWEEP_SAMPLES, endpoint=False)
    pts = L * np.column_stack([np.cos(thetas), np.sin(thetas)])
    diff = pts[:, None, :] - centers[None, :, :]
    labels = np.argmin(np.hypot(diff[:, :, 0], diff[:, :, 1]), axis=1)
    found = set(int(v) for v in np.unique(labels))
    # Bisect every label switchover; any label seen at a midpoint counts too.
    for k in range(SWEEP_SAMPLES):
        a, b = thetas[k], thetas[(k + 1) % SWEEP_SAMPLES]
        if k == SWEEP_SAMPLES - 1:
            b = 2.0 * math.pi
        la, lb = labels[k], labels[(k + 1) % SWEEP_SAMPLES]
        if la == lb:
            continue
        while b - a > SWEEP_ANGLE_TOL:
            m = 0.5 * (a + b)
            lm = _nearest_center(centers, m, L)
            found.add(lm)
            if lm == la:
                a = m
            elif lm == lb:
                b = m
            else:
                # A third cell appears inside the interval: split both halves.
                b = m
                lb = lm
    return found


def classify_boundary(
    packing: Packing, neighbor_sets: tuple[frozenset[int], ...]
) -> GeometryAnalysis:
    """Identify boundary inclusions and renumber everything boundary-first."""
    centers = packing.centers()
    radii = packing.radii()
    L = packing.L
    boundary = _boundary_labels(centers, L)

    def angle_of(idx: int) -> float:
        x, y = centers[idx]
        if x == 0.0 and y == 0.0:
            return 0.0  # disk centered at the origin: conventional angle
        return math.atan2(y, x) % (2.0 * math.pi)

    b_sorted = sorted(boundary, key=angle_of)
    angles = [angle_of(i) for i in b_sorted]
    for a, b in zip(angles, angles[1:]):
        if a == b:
            raise DegenerateAngleError(
                f"two boundary inclusions share the angle {a}; ordering undefined"
            )

    interior = [i for i in range(packing.n) if i not in boundary]
    order = b_sorted + interior  # new index -> old index
    inv = {old: new for new, old in enumerate(order)}

    new_packing = Packing(L=L, inclusions=tuple(packing.inclusions[o] for o in order))
    new_neighbors = tuple(
        frozenset(inv[j] for j in neighbor_sets[o]) for o in order
    )
    gap_widths: dict[tuple[int, int], float] = {}
    new_centers = new_packing.centers()
    new_radii = new_packing.radii()
    for i in range(new_packing.n):
        for j in new_neighbors[i]:
            if j <= i:
                continue
            d = math.hypot(
                new_centers[i, 0] - new_centers[j, 0],
                new_centers[i, 1] - new_centers[j, 1],
            )
            gap_widths[(i, j)] = d - new_radii[i] - new_radii[j]

    n_b = len(b_sorted)
    b_norm = np.hypot(new_centers[:n_b, 0], new_centers[:n_b, 1])
    boundary_gaps = L - b_norm - new_radii[:n_b]
    boundary_angles = np.array(angles)
    boundary_nodes = L * np.column_stack(
        [np.cos(boundary_angles), np.sin(boundary_angles)]
    )
    return GeometryAnalysis(
        packing=new_packing,
        neighbor_sets=new_neighbors,
        gap_widths=gap_widths,
        boundary_count=n_b,
        boundary_gaps=boundary_gaps,
        boundary_angles=boundary_angles,
        boundary_nodes=boundary_nodes,
    )


def analyze(packing: Packing, delta_max_edge: float | None = None) -> GeometryAnalysis:
    """Validate, compute adjacency, classify the boundary.

    ``delta_max_edge`` optionally drops gap edges wider than the given
    threshold (the conductivity of such edges is small anyway).
    """
    validate_packing(packing)
    neighbors = compute_adjacency(packing)
    analysis = classify_boundary(packing, neighbors)
    if delta_max_edge is not None:
        kept = {k: v for k, v in analysis.gap_widths.items() if v <= delta_max_edge}
        sets = [set() for _ in range(analysis.packing.n)]
        for (i, j) in kept:
            sets[i].add(j)
            sets[j].add(i)
        analysis = GeometryAnalysis(
            packing=analysis.packing,
            neighbor_sets=tuple(frozenset(s) for s in sets),
            gap_widths=kept,
            boundary_count=analysis.boundary_count,
            boundary_gaps=analysis.boundary_gaps,
            boundary_angles=analysis.boundary_angles,
            boundary_nodes=analysis.boundary_nodes,
        )
    return analysis


def scale_report(analysis: GeometryAnalysis) -> ScaleReport:
    """Report scale separation ratios and warn when the asymptotics is doubtful."""
    gaps = list(analysis.gap_widths.values()) + list(analysis.boundary_gaps)
    radii = analysis.packing.radii()
    delta_max = float(max(gaps))
    delta_min = float(min(gaps))
    r_min = float(radii.min())
    r_max = float(radii.max())
    ratio_delta_r = delta_max / r_min
    ratio_r_l = r_max / analysis.packing.L
    warnings: list[str] = []
    if ratio_delta_r > 0.2:
        warnings.append(
            f"delta_max/R_min = {ratio_delta_r:.3g} > 0.2: gaps are not small"
        )
    if ratio_r_l > 0.3:
        warnings.append(
            f"R_max/L = {ratio_r_l:.3g} > 0.3: inclusions are not small"
        )
    for i in range(analysis.boundary_count):
        d = analysis.packing.inclusions[i]
        if d.x == 0.0 and d.y == 0.0:
            warnings.append(
                "boundary inclusion centered at the origin: angle 0 assigned by convention"
            )
    return ScaleReport(
        delta_max=delta_max,
        delta_min=delta_min,
        R_min=r_min,
        R_max=r_max,
        ratio_delta_R=ratio_delta_r,
        ratio_R_L=ratio_r_l,
        warnings=tuple(warnings),
    )


# --- packing file I/O -------------------------------------------------------

def packing_to_dict(packing: Packing) -> dict:
    return {
        "L": packing.L,
        "inclusions": [{"x": d.x, "y": d.y, "r": d.r} for d in packing.inclusions],
    }


def packing_from_dict(obj: dict) -> Packing:
    try:
        L = float(obj["L"])
        raw = obj["inclusions"]
        disks = []
        for k, item in enumerate(raw):
            x, y, r = float(item["x"]), float(item["y"]), float(item["r"])
            if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(r)):
                raise ParseError(f"inclusion {k}: non-finite coordinate or radius")
            if r <= 0.0:
                raise ParseError(f"inclusion {k}: radius must be positive, got {r}")
            disks.append(Disk(x, y, r))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed packing object: {exc}") from exc
    if not math.isfinite(L) or L <= 0.0:
        raise ParseError(f"domain radius must be positive and finite, got {L}")
    return Packing(L=L, inclusions=tuple(disks))


def load_packing(path: str) -> Packing:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read packing file {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("packing file must hold a JSON object")
    return packing_from_dict(obj)


def save_packing(packing: Packing, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(packing_to_dict(packing), fh, indent=2)
        fh.write("\n")
