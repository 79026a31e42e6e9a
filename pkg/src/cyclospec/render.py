"""Deterministic emission of point clouds, tilings and overlays.

CSV carries exact coefficients plus embedded coordinates; SVG output is
fixed-palette and timestamp-free so repeated runs hash identically.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .cut_project import MissingReport
from .cyclotomic import CyclotomicInt
from .spectrum import Patch
from .voronoi import VoronoiCell

PALETTE = (
    "#4477aa",
    "#ee6677",
    "#228833",
    "#ccbb44",
    "#66ccee",
    "#aa3377",
    "#bbbbbb",
    "#222255",
    "#225555",
    "#552222",
    "#997700",
    "#d07bb4",
)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_patch_csv(path: Path, patch: Patch) -> None:
    """One row per point: exact coefficients then embedded re, im."""
    phi = patch.coeff_array().shape[1]
    header = ",".join(f"c{i}" for i in range(phi)) + ",re,im"
    lines = [header]
    emb = patch.embeds()
    for row, z in zip(patch.coeff_array().tolist(), emb):
        lines.append(
            ",".join(str(c) for c in row) + f",{_fmt(z.real)},{_fmt(z.imag)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_patch_metadata(path: Path, patch: Patch) -> None:
    Path(path).write_text(json.dumps(patch.metadata(), indent=2, sort_keys=True) + "\n")


def write_points_csv(path: Path, points: list[CyclotomicInt]) -> None:
    if not points:
        Path(path).write_text("re,im\n")
        return
    phi = len(points[0].coeffs)
    header = ",".join(f"c{i}" for i in range(phi)) + ",re,im"
    lines = [header]
    for p in sorted(points, key=lambda q: q.coeffs):
        z = p.embed()
        lines.append(
            ",".join(str(c) for c in p.coeffs) + f",{_fmt(z.real)},{_fmt(z.imag)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


class SvgCanvas:
    """Minimal SVG writer in mathematical coordinates (y up)."""

    def __init__(self, view_radius: float, size: int = 900):
        self.r = view_radius
        self.size = size
        self.elements: list[str] = []

    def _map(self, z: complex) -> tuple[float, float]:
        s = self.size / (2 * self.r)
        return (z.real + self.r) * s, (self.r - z.imag) * s

    def dot(self, z: complex, radius: float = 1.2, color: str = "#000000") -> None:
        x, y = self._map(z)
        self.elements.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}" fill="{color}"/>'
        )

    def polygon(
        self,
        vertices,
        fill: str = "none",
        stroke: str = "#000000",
        width: float = 1.0,
        opacity: float = 1.0,
    ) -> None:
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (self._map(v) for v in vertices))
        self.elements.append(
            f'<polygon points="{pts}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}" fill-opacity="{opacity}"/>'
        )

    def circle_outline(self, radius: float, color: str = "#888888") -> None:
        x, y = self._map(0j)
        s = self.size / (2 * self.r)
        self.elements.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius * s:.2f}" '
            f'fill="none" stroke="{color}" stroke-dasharray="4 3"/>'
        )

    def save(self, path: Path, metadata: dict | None = None) -> None:
        comment = ""
        if metadata:
            body = json.dumps(metadata, sort_keys=True).replace("--", "- -")
            comment = f"<!-- {body} -->\n"
        content = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" '
            f'height="{self.size}" viewBox="0 0 {self.size} {self.size}">\n'
            f"{comment}"
            f'<rect width="{self.size}" height="{self.size}" fill="#ffffff"/>\n'
            + "\n".join(self.elements)
            + "\n</svg>\n"
        )
        Path(path).write_text(content)


def spectrum_svg(path: Path, patch: Patch) -> None:
    emb = patch.embeds()
    canvas = SvgCanvas(view_radius=float(patch.radius or np.abs(emb).max() or 1.0) * 1.05)
    for z in emb:
        canvas.dot(complex(z))
    canvas.save(path, metadata=patch.metadata())


def attractor_svg(path: Path, approx, max_points: int = 400_000) -> None:
    pts = approx.complex_points()
    if len(pts) > max_points:
        step = int(math.ceil(len(pts) / max_points))
        pts = pts[::step]
    canvas = SvgCanvas(view_radius=approx.spec.bounding_radius * 1.05)
    for z in pts:
        canvas.dot(complex(z), radius=0.8)
    canvas.save(
        path,
        metadata={
            "kind": "attractor",
            "base": approx.spec.base.name,
            "order": approx.spec.base.order,
            "depth": approx.depth,
            "resolution": approx.resolution,
            "count": len(approx),
        },
    )


def tiling_svg(
    path: Path,
    cells: list[VoronoiCell],
    class_of_cell: dict[int, int] | None = None,
    metadata: dict | None = None,
) -> None:
    reach = max(abs(c.center_value) + c.radius for c in cells) if cells else 1.0
    canvas = SvgCanvas(view_radius=reach * 1.05)
    for i, cell in enumerate(cells):
        color = "#dddddd"
        if class_of_cell is not None and i in class_of_cell:
            color = PALETTE[class_of_cell[i] % len(PALETTE)]
        canvas.polygon(cell.vertices, fill=color, stroke="#333333", width=0.6)
    canvas.save(path, metadata=metadata)


def window_overlay_svg(
    path: Path,
    conjugated_points: list[complex],
    window_outline: list[complex] | None,
    attractor_cloud: np.ndarray | None,
    missing_points: list[complex],
    bounding_radius: float,
    metadata: dict | None = None,
) -> None:
    canvas = SvgCanvas(view_radius=bounding_radius * 1.1)
    if attractor_cloud is not None:
        for z in attractor_cloud:
            canvas.dot(complex(z), radius=0.6, color="#bbddbb")
    if window_outline:
        canvas.polygon(window_outline, stroke="#228833", width=1.4)
    canvas.circle_outline(bounding_radius)
    for z in conjugated_points:
        canvas.dot(z, radius=1.4, color="#4477aa")
    for z in missing_points:
        canvas.dot(z, radius=2.6, color="#ee6677")
    canvas.save(path, metadata=metadata)


def write_cells_json(path: Path, cells: list[VoronoiCell]) -> None:
    data = [
        {
            "center_coeffs": list(c.center.coeffs) if c.center is not None else None,
            "vertices": [[v.real, v.imag] for v in c.vertices],
            "neighbor_indices": list(c.neighbors),
            "radius": c.radius,
            "trusted": c.trusted,
        }
        for c in cells
    ]
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_missing_json(path: Path, report: MissingReport) -> None:
    Path(path).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")


def write_tiles_json(path: Path, tiles) -> None:
    data = [t.to_json(i) for i, t in enumerate(tiles)]
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def tiles_svg(path: Path, tiles, metadata: dict | None = None) -> None:
    """Swatch sheet: one tile shape per class, laid out on a grid."""
    if not tiles:
        raise ValueError("no tile classes to draw")
    cols = int(math.ceil(math.sqrt(len(tiles))))
    pitch = 2.2 * max(
        max(abs(v) for v in t.representative_vertices) for t in tiles
    )
    view = pitch * cols / 1.8
    canvas = SvgCanvas(view_radius=view)
    for i, t in enumerate(tiles):
        row, col = divmod(i, cols)
        offset = complex(
            (col - (cols - 1) / 2) * pitch, ((cols - 1) / 2 - row) * pitch
        )
        canvas.polygon(
            [v + offset for v in t.representative_vertices],
            fill=PALETTE[i % len(PALETTE)],
            stroke="#222222",
            width=1.0,
            opacity=0.85,
        )
    canvas.save(path, metadata=metadata)


def write_config_graph_dot(path: Path, edges, root_key: bytes) -> None:
    """Config descent graph in dot format; nodes are numbered in first-seen
    order with the origin's class as node 0."""
    ids: dict[bytes, int] = {root_key: 0}
    for parent, _, child in edges:
        if parent not in ids:
            ids[parent] = len(ids)
        if child not in ids:
            ids[child] = len(ids)
    lines = ["digraph configs {", "  rankdir=LR;", "  node [shape=circle];"]
    for parent, digit, child in edges:
        lines.append(f"  n{ids[parent]} -> n{ids[child]} [label=\"{digit}\"];")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")
