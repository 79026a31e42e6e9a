"""Voronoi cells of spectrum patches and the covering-radius iteration.

Cells are built by direct half-plane clipping of a bounding square; the
locality of Voronoi neighbours keeps the candidate sets tiny.  The
covering radius is reported as the diameter of the largest point-free
disk, which is twice the largest cell circumradius; upper bounds come
from the degree-limited sets clipped to shrink-consistent regions, lower
bounds from a large complete patch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cyclotomic import Alphabet, BaseSpec, CyclotomicInt
from .spectrum import Patch, generate_ball, generate_degree

EDGE_TOL = 1e-9

# Half-opening angle of the digit fan used for the shrink-consistent
# regions, per spectrum case.  For orders 10 and 14 the odd digit subset
# suffices, which doubles the angle.
REGION_THETA = {
    (5, "tau"): math.pi / 5,
    (10, "tau"): math.pi / 5,
    (10, "tau2"): math.pi / 10,
    (7, "lambda"): math.pi / 7,
    (14, "lambda"): math.pi / 7,
    (8, "delta"): math.pi / 8,
    (18, "kappa"): math.pi / 18,
    (12, "mu"): math.pi / 12,
}


def region_radius(theta: float, gamma: float) -> float:
    """Radius R with gamma*B_R covered by the digit translates of B_R.

    R(theta, gamma) = (gamma^2 cos(theta) + gamma sqrt(1 - gamma^2 sin^2(theta)))
                      / (gamma^2 - 1),
    where theta is the worst angular distance to a digit direction.
    """
    if gamma <= 1:
        raise ValueError("gamma must exceed 1")
    s = gamma * math.sin(theta)
    if s > 1:
        raise ValueError("gamma*sin(theta) must not exceed 1")
    return (gamma**2 * math.cos(theta) + gamma * math.sqrt(1.0 - s * s)) / (
        gamma**2 - 1.0
    )


@dataclass(frozen=True)
class VoronoiCell:
    """One Voronoi cell: counterclockwise vertices and edge-sharing neighbors."""

    center: CyclotomicInt | None
    center_value: complex
    vertices: tuple[complex, ...]
    neighbors: tuple[int, ...]  # indices into the generating point list
    radius: float  # farthest vertex distance from the center
    trusted: bool
    clipped_by_box: bool = False

    def area(self) -> float:
        acc = 0.0
        vs = self.vertices
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            acc += a.real * b.imag - b.real * a.imag
        return 0.5 * acc

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        vs = self.vertices
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            cross = (b.real - a.real) * (z.imag - a.imag) - (b.imag - a.imag) * (
                z.real - a.real
            )
            if cross < -tol:
                return False
        return True


def halfplane_cell(
    center: complex,
    others: np.ndarray,
    box_half: float,
    neighbor_indices: np.ndarray | None = None,
) -> tuple[list[complex], list[int], bool]:
    """Clip the box square around center by the bisectors with other points.

    Returns (ccw vertices, indices of points contributing an edge, whether
    any box edge survived).  Points are processed nearest first and the
    loop stops once the remaining bisectors cannot reach the current cell.
    """
    cx, cy = center.real, center.imag
    verts = [
        complex(cx - box_half, cy - box_half),
        complex(cx + box_half, cy - box_half),
        complex(cx + box_half, cy + box_half),
        complex(cx - box_half, cy + box_half),
    ]
    sources = [-1, -1, -1, -1]  # sources[i] labels edge verts[i] -> verts[i+1]
    if neighbor_indices is None:
        neighbor_indices = np.arange(len(others))
    if len(others):
        d2 = (others.real - cx) ** 2 + (others.imag - cy) ** 2
        order = np.argsort(d2, kind="stable")
        others = others[order]
        neighbor_indices = np.asarray(neighbor_indices)[order]
        dists = np.sqrt(d2[order])
    else:
        dists = np.array([])

    for p, idx, dist in zip(others, neighbor_indices, dists):
        if dist <= EDGE_TOL:
            continue
        radius = max(abs(v - center) for v in verts)
        if dist > 2.0 * radius + EDGE_TOL:
            break
        mx, my = (cx + p.real) / 2.0, (cy + p.imag) / 2.0
        dx, dy = p.real - cx, p.imag - cy
        side = [(v.real - mx) * dx + (v.imag - my) * dy for v in verts]
        if all(s <= EDGE_TOL * dist for s in side):
            continue
        new_verts: list[complex] = []
        new_sources: list[int] = []
        m = len(verts)
        entry_pos = -1
        for i in range(m):
            j = (i + 1) % m
            vi, vj = verts[i], verts[j]
            si, sj = side[i], side[j]
            inside_i = si <= 0.0
            inside_j = sj <= 0.0
            if inside_i:
                new_verts.append(vi)
                new_sources.append(sources[i])
            if inside_i != inside_j:
                t = si / (si - sj)
                cross = vi + t * (vj - vi)
                if inside_i:
                    # leaving: start of the new bisector edge
                    new_verts.append(cross)
                    new_sources.append(int(idx))
                    entry_pos = len(new_sources) - 1
                else:
                    # entering: bisector edge ends here, original edge resumes
                    new_verts.append(cross)
                    new_sources.append(sources[i])
        verts = new_verts
        sources = new_sources
        if len(verts) < 3:
            return [], [], False
        del entry_pos

    # merge near-duplicate vertices and drop degenerate edges
    cleaned: list[complex] = []
    cleaned_sources: list[int] = []
    m = len(verts)
    for i in range(m):
        j = (i + 1) % m
        if abs(verts[i] - verts[j]) > EDGE_TOL:
            cleaned.append(verts[i])
            cleaned_sources.append(sources[i])
    if len(cleaned) < 3:
        return [], [], False
    contributing = sorted(set(s for s in cleaned_sources if s >= 0))
    box_open = any(s == -1 for s in cleaned_sources)
    return cleaned, contributing, box_open


def cells(patch: Patch, safe_radius: float) -> list[VoronoiCell]:
    """Trusted Voronoi cells for all patch points inside the safe radius.

    Each cell is clipped against the patch points within twice the proven
    cell-radius bound 1/(beta-1); completeness of the patch out to
    safe_radius + 2/(beta-1) makes these cells final.
    """
    if patch.kind != "ball" or not patch.complete:
        raise ValueError("cells need a complete ball patch")
    beta_val = patch.base.beta_value
    reach = 2.0 / (beta_val - 1.0)
    if safe_radius > patch.radius - reach + 1e-9:
        raise ValueError(
            f"safe_radius {safe_radius} too large: patch of radius {patch.radius} "
            f"certifies cells only within {patch.radius - reach:.6f}"
        )
    values = patch.embeds()
    points = patch.points
    box_half = 8.0 / (beta_val - 1.0)
    bound = 1.0 / (beta_val - 1.0) + EDGE_TOL
    out = []
    for i in np.flatnonzero(np.abs(values) <= safe_radius + 1e-12):
        center = values[i]
        d = np.abs(values - center)
        cand = np.flatnonzero((d <= reach + EDGE_TOL) & (d > EDGE_TOL))
        verts, contrib, box_open = halfplane_cell(
            complex(center), values[cand], box_half, cand
        )
        if not verts:
            raise RuntimeError("degenerate cell in a complete patch")
        radius = max(abs(v - center) for v in verts)
        if box_open or radius > bound:
            raise RuntimeError(
                f"cell of point {i} is not confined by the proven bound; "
                "patch is not complete enough"
            )
        out.append(
            VoronoiCell(
                center=points[i],
                center_value=complex(center),
                vertices=tuple(verts),
                neighbors=tuple(contrib),
                radius=float(radius),
                trusted=True,
            )
        )
    return out


def _cell_radius_for_center(
    values: np.ndarray,
    grid: dict,
    grid_h: float,
    i: int,
    initial_reach: float,
    box_half: float,
) -> tuple[float, float, bool]:
    """(circumradius, farthest vertex modulus, box_open) of cell i.

    Widens the candidate radius until the cell is provably unaffected by
    points beyond it.
    """
    center = values[i]
    reach = initial_reach
    while True:
        cand = _grid_query(values, grid, grid_h, center, reach)
        cand = cand[cand != i]
        verts, _, box_open = halfplane_cell(complex(center), values[cand], box_half, cand)
        if not verts:
            return math.inf, math.inf, True
        radius = max(abs(v - center) for v in verts)
        if box_open:
            return float(radius), max(abs(v) for v in verts), True
        if 2.0 * radius <= reach - EDGE_TOL or reach >= 2.0 * box_half:
            return float(radius), max(abs(v) for v in verts), False
        reach = max(2.0 * radius + 1e-6, reach * 1.5)


def _build_grid(values: np.ndarray, h: float) -> dict:
    grid: dict[tuple[int, int], list[int]] = {}
    gx = np.floor(values.real / h).astype(np.int64)
    gy = np.floor(values.imag / h).astype(np.int64)
    for i, key in enumerate(zip(gx.tolist(), gy.tolist())):
        grid.setdefault(key, []).append(i)
    return grid


def _grid_query(
    values: np.ndarray, grid: dict, h: float, center: complex, reach: float
) -> np.ndarray:
    r = int(math.ceil(reach / h)) + 1
    cx, cy = int(math.floor(center.real / h)), int(math.floor(center.imag / h))
    idx: list[int] = []
    for dx in range(-r, r + 1):
        for dy in range(-r, r + 1):
            idx.extend(grid.get((cx + dx, cy + dy), ()))
    arr = np.array(idx, dtype=np.int64)
    if len(arr) == 0:
        return arr
    d = np.abs(values[arr] - center)
    return arr[d <= reach + EDGE_TOL]


@dataclass(frozen=True)
class CoveringRadiusResult:
    """Covering measure of the spectrum: diameter of the largest empty disk.

    r_c equals twice the largest Voronoi-cell radius.  delta_sequence holds
    the per-degree upper bounds, which decrease to r_c; achieved_at_n is
    the first degree whose bound meets the patch lower bound.
    """

    r_c: float
    achieved_at_n: int
    delta_sequence: tuple[tuple[int, float], ...]
    lower_bound_radius_used: float
    converged: bool


def _degree_delta(base: BaseSpec, alphabet: Alphabet, m: int, region_r: float) -> float:
    """Upper bound at degree m: largest doubled cell radius of the degree-m
    set, over cells whose determining disk lies inside the region.

    A cell is shaped only by points within twice its radius of the center,
    so it qualifies when the disk of that radius around its center fits in
    the region; rim cells whose shape still depends on the unfinished
    outskirts are excluded.
    """
    patch = generate_degree(base, alphabet, m)
    values = patch.embeds()
    beta_val = base.beta_value
    area_radius = beta_val**m * region_r
    initial_reach = 4.0 / (beta_val - 1.0)
    box_half = max(4.0 * area_radius, 16.0 / (beta_val - 1.0))
    grid_h = max(initial_reach / 2.0, 1e-6)
    grid = _build_grid(values, grid_h)
    centers = np.flatnonzero(np.abs(values) <= area_radius + 1e-9)
    best = 0.0
    for i in centers:
        radius, _, box_open = _cell_radius_for_center(
            values, grid, grid_h, int(i), initial_reach, box_half
        )
        if box_open or abs(values[int(i)]) + 2.0 * radius > area_radius + 1e-9:
            continue
        best = max(best, radius)
    return 2.0 * best


def covering_radius(
    base: BaseSpec,
    alphabet: Alphabet,
    n_max: int = 8,
    lower_bound_radius: float | None = None,
) -> CoveringRadiusResult:
    """Exact covering measure via matching lower and upper bounds.

    The lower bound is the largest doubled cell radius over a large
    complete patch; the upper bounds come from the degree-limited sets.
    The iteration stops at the first degree whose bound matches the lower
    bound to 1e-9.
    """
    key = (base.order, base.name)
    if key not in REGION_THETA:
        raise ValueError(f"covering radius is implemented for the Delone cases, not {key}")
    theta = REGION_THETA[key]
    beta_val = base.beta_value
    region_r = region_radius(theta, beta_val)

    if lower_bound_radius is None:
        lower_bound_radius = 8.0 / (beta_val - 1.0)
    patch = generate_ball(base, alphabet, lower_bound_radius)
    safe = lower_bound_radius - 2.0 / (beta_val - 1.0) - 1e-6
    lower = 2.0 * max(c.radius for c in cells(patch, safe))

    deltas: list[tuple[int, float]] = []
    achieved = -1
    for m in range(1, n_max + 1):
        delta = _degree_delta(base, alphabet, m, region_r)
        deltas.append((m, delta))
        if delta <= lower + 1e-9:
            achieved = m
            break
    converged = achieved > 0
    return CoveringRadiusResult(
        r_c=lower,
        achieved_at_n=achieved,
        delta_sequence=tuple(deltas),
        lower_bound_radius_used=lower_bound_radius,
        converged=converged,
    )


def origin_tile_radius(base: BaseSpec, alphabet: Alphabet) -> float:
    """Doubled radius of the trusted cell of the origin."""
    beta_val = base.beta_value
    radius = 3.0 / (beta_val - 1.0)
    patch = generate_ball(base, alphabet, radius)
    for cell in cells(patch, 1e-9):
        if cell.center is not None and cell.center.is_zero():
            return 2.0 * cell.radius
    raise RuntimeError("origin cell not found")
