"""Enumeration of local configurations and the prototile inventory.

A local configuration is the exact relative point set of the spectrum
within (strictly) 2/(beta-1) of a point, up to the dihedral symmetries of
the digit polygon.  Every configuration descends from the origin's, so a
breadth-first search over the descent rule enumerates them all; each
configuration determines its Voronoi tile, and grouping tiles by shape
yields the prototile census.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .cyclotomic import (
    Alphabet,
    BaseSpec,
    CyclotomicInt,
    embed_rows,
    galois_matrix,
    mul_matrix,
)
from .spectrum import generate_ball
from .voronoi import halfplane_cell

DEFAULT_BUDGET = 100_000
STRICT_BAND = 1e-9


def _dihedral_transforms(order: int) -> np.ndarray:
    """The 2n coefficient-space matrices of rotations and reflections."""
    rot = [mul_matrix(CyclotomicInt.omega(order, j)) for j in range(order)]
    conj = galois_matrix(order, order - 1)
    mats = rot + [conj @ r for r in rot]
    return np.stack(mats)


_TRANSFORM_CACHE: dict[int, np.ndarray] = {}


def _transforms(order: int) -> np.ndarray:
    if order not in _TRANSFORM_CACHE:
        _TRANSFORM_CACHE[order] = _dihedral_transforms(order)
    return _TRANSFORM_CACHE[order]


def _sorted_bytes(arr: np.ndarray) -> bytes:
    view = arr[np.lexsort(arr.T[::-1])]
    return view.astype(np.int64).tobytes()


def canonicalize(points: np.ndarray, order: int) -> bytes:
    """Canonical key of a point set: minimal serialization over the 2n
    rotations and reflections, rows sorted lexicographically."""
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2:
        raise ValueError("expected an (m, phi) coefficient array")
    images = np.einsum("mi,tij->tmj", pts, _transforms(order))
    return min(_sorted_bytes(images[t]) for t in range(images.shape[0]))


def canonicalize_points(points, order: int) -> bytes:
    """Canonical key from CyclotomicInt points."""
    return canonicalize(np.array([p.coeffs for p in points], dtype=np.int64), order)


@dataclass(frozen=True)
class LocalConfig:
    """One equivalence class of local configurations.

    points is the representative as first discovered (contains the zero
    row); parent records how the search reached it.
    """

    key: bytes
    points: np.ndarray
    parent: tuple[bytes, int] | None

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass
class EnumResult:
    base: BaseSpec
    alphabet: Alphabet
    configs: dict[bytes, LocalConfig]
    edges: list[tuple[bytes, int, bytes]]
    complete: bool
    budget: int
    root_key: bytes

    def __len__(self) -> int:
        return len(self.configs)


class _ConfigBall:
    """|z| <= r test with a high-precision recheck near the rim.

    The configuration radius is closed: points at exactly 2/(beta-1), which
    occur for delta and the two tau cases, are part of the configuration.
    The published tile censuses count them, and the descent rule stays
    valid since the radius bound in its proof is not strict.
    """

    def __init__(self, base: BaseSpec, radius_num: float):
        self.base = base
        self.radius = radius_num

    def filter(self, coeffs: np.ndarray) -> np.ndarray:
        mods = np.abs(embed_rows(coeffs, self.base.order))
        keep = mods < self.radius - STRICT_BAND
        nearby = np.flatnonzero(np.abs(mods - self.radius) <= STRICT_BAND)
        for i in nearby:
            if self._inside_mp(coeffs[i]):
                keep[i] = True
        return coeffs[keep]

    def _inside_mp(self, row) -> bool:
        with mpmath.workprec(120):
            z = CyclotomicInt(self.base.order, row).embed_mp(120)
            beta = self.base.beta.embed_mp(120).real
            gap = abs(z) * (beta - 1) - 2
            return gap < mpmath.mpf("1e-25")


def origin_configuration(base: BaseSpec, alphabet: Alphabet) -> np.ndarray:
    """Exact local configuration of the origin (closed radius)."""
    radius = 2.0 / (base.beta_value - 1.0)
    patch = generate_ball(base, alphabet, radius + 0.25)
    ball = _ConfigBall(base, radius)
    return ball.filter(patch.coeff_array())


def enumerate_configs(
    base: BaseSpec,
    alphabet: Alphabet,
    budget: int = DEFAULT_BUDGET,
) -> EnumResult:
    """Breadth-first enumeration of all local configurations.

    The children of a configuration S under digit a_i are the points of
    beta*S + digits within the strict radius of a_i, recentred; the search
    closes when no new equivalence classes appear.  Hitting the budget
    flips complete to False, leaving a certified partial family.
    """
    radius = 2.0 / (base.beta_value - 1.0)
    ball = _ConfigBall(base, radius)
    beta_mat = mul_matrix(base.beta)
    digit_arr = alphabet.coeff_array()
    order = base.order
    phi = digit_arr.shape[1]

    root_points = origin_configuration(base, alphabet)
    root_key = canonicalize(root_points, order)
    root = LocalConfig(key=root_key, points=root_points, parent=None)
    configs: dict[bytes, LocalConfig] = {root_key: root}
    edges: list[tuple[bytes, int, bytes]] = []
    queue = [root_key]
    complete = True

    while queue:
        key = queue.pop(0)
        cfg = configs[key]
        expanded = cfg.points @ beta_mat
        all_children = (
            expanded[:, None, :] + digit_arr[None, :, :]
        ).reshape(-1, phi)
        for digit_idx in range(len(digit_arr)):
            shifted = all_children - digit_arr[digit_idx]
            cand = np.unique(shifted, axis=0)
            child_points = ball.filter(cand)
            child_key = canonicalize(child_points, order)
            edges.append((key, digit_idx, child_key))
            if child_key in configs:
                continue
            if len(configs) >= budget:
                complete = False
                continue
            configs[child_key] = LocalConfig(
                key=child_key, points=child_points, parent=(key, digit_idx)
            )
            queue.append(child_key)

    return EnumResult(
        base=base,
        alphabet=alphabet,
        configs=configs,
        edges=edges,
        complete=complete,
        budget=budget,
        root_key=root_key,
    )


@dataclass(frozen=True)
class TileClass:
    """A prototile: the tile shape shared by a group of configurations."""

    signature: tuple[tuple[int, int], ...]
    representative_vertices: tuple[complex, ...]
    member_config_keys: tuple[bytes, ...]

    @property
    def edge_count(self) -> int:
        return len(self.signature)

    @property
    def member_count(self) -> int:
        return len(self.member_config_keys)

    def to_json(self, class_id: int) -> dict:
        return {
            "class_id": class_id,
            "edge_count": self.edge_count,
            "signature": [[a * 1e-9, b * 1e-9] for a, b in self.signature],
            "member_count": self.member_count,
        }


def _tile_vertices(base: BaseSpec, points: np.ndarray) -> tuple[complex, ...]:
    """Voronoi cell of the origin within one configuration."""
    values = embed_rows(points, base.order)
    others = values[np.abs(values) > 1e-12]
    box_half = 8.0 / (base.beta_value - 1.0)
    verts, _, box_open = halfplane_cell(0j, others, box_half)
    if box_open or not verts:
        raise RuntimeError("configuration does not close its central tile")
    return tuple(verts)


_QUANTUM = 1e-9


def _shape_signature(vertices: tuple[complex, ...]) -> tuple[tuple[int, int], ...]:
    """Canonical cyclic (edge length, vertex angle) sequence at 1e-9 grain,
    minimal over rotations and over the mirror image."""

    def seq_for(verts: list[complex]) -> list[tuple[int, int]]:
        m = len(verts)
        out = []
        for i in range(m):
            a = verts[i]
            b = verts[(i + 1) % m]
            c = verts[(i + 2) % m]
            e1 = b - a
            e2 = c - b
            length = abs(e1)
            ang = math.atan2(e2.imag, e2.real) - math.atan2(e1.imag, e1.real)
            ang %= 2.0 * math.pi
            out.append((round(length / _QUANTUM), round(ang / _QUANTUM)))
        return out

    def min_rotation(seq: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
        m = len(seq)
        return min(tuple(seq[i:] + seq[:i]) for i in range(m))

    fwd = seq_for(list(vertices))
    mirrored = seq_for([v.conjugate() for v in reversed(vertices)])
    return min(min_rotation(fwd), min_rotation(mirrored))


def _signatures_close(a, b, tol_units: int = 4) -> bool:
    if len(a) != len(b):
        return False
    seq = list(b)
    m = len(seq)
    for i in range(m):
        rot = seq[i:] + seq[:i]
        if all(
            abs(x[0] - y[0]) <= tol_units and abs(x[1] - y[1]) <= tol_units
            for x, y in zip(a, rot)
        ):
            return True
    return False


def tile_inventory(result: EnumResult) -> list[TileClass]:
    """Group the configurations by the shape of their central tile.

    Shapes are compared by the quantized edge/angle sequence up to cyclic
    rotation and reflection; groups one quantization step apart are merged
    so grid-snapping noise cannot split a class.
    """
    groups: dict[tuple, list[bytes]] = {}
    rep_vertices: dict[tuple, tuple[complex, ...]] = {}
    for key, cfg in result.configs.items():
        verts = _tile_vertices(result.base, cfg.points)
        sig = _shape_signature(verts)
        if sig not in groups:
            merged = False
            for existing in groups:
                if _signatures_close(sig, existing):
                    groups[existing].append(key)
                    merged = True
                    break
            if merged:
                continue
            groups[sig] = []
            rep_vertices[sig] = verts
        groups[sig].append(key)
    classes = [
        TileClass(
            signature=sig,
            representative_vertices=rep_vertices[sig],
            member_config_keys=tuple(sorted(members)),
        )
        for sig, members in groups.items()
    ]
    classes.sort(key=lambda t: (t.edge_count, t.signature))
    return classes


def config_graph(result: EnumResult) -> list[tuple[bytes, int, bytes]]:
    """Directed descent edges (parent, digit index, child); needs a complete
    enumeration, where every node is reachable from the origin's class."""
    if not result.complete:
        raise ValueError("configuration graph requires a complete enumeration")
    return list(result.edges)
