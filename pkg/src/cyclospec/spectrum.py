"""Finite patches of the spectrum and relative-density verdicts.

A ball patch is the full intersection of the spectrum with a closed disk,
computed as the fixed point of one round of digit expansion intersected
with a bounding disk.  A degree patch is the exact set of values of digit
words up to a fixed degree.
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
    mul_matrix,
)
from .errors import ResourceBudgetError, UndecidedDensityError

BALL_SLACK = 1e-9

DEFAULT_POINT_CAP = 5_000_000


def _lexsort_rows(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    return np.unique(arr, axis=0)


class Patch:
    """A finite, deduplicated point set of the spectrum with its metadata."""

    def __init__(
        self,
        base: BaseSpec,
        alphabet: Alphabet,
        coeffs: np.ndarray,
        kind: str,
        radius: float | None = None,
        degree: int | None = None,
        complete: bool = True,
    ) -> None:
        self.base = base
        self.alphabet = alphabet
        self._coeffs = _lexsort_rows(np.asarray(coeffs, dtype=np.int64))
        self.kind = kind
        self.radius = radius
        self.degree = degree
        self.complete = complete
        self._point_set: frozenset | None = None
        self._points: tuple[CyclotomicInt, ...] | None = None
        self._embeds: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._coeffs)

    def coeff_array(self) -> np.ndarray:
        return self._coeffs

    def coeff_set(self) -> frozenset:
        if self._point_set is None:
            self._point_set = frozenset(map(tuple, self._coeffs.tolist()))
        return self._point_set

    def __contains__(self, x: CyclotomicInt) -> bool:
        return tuple(x.coeffs) in self.coeff_set()

    @property
    def points(self) -> tuple[CyclotomicInt, ...]:
        if self._points is None:
            order = self.base.order
            self._points = tuple(
                CyclotomicInt(order, row) for row in self._coeffs.tolist()
            )
        return self._points

    def embeds(self) -> np.ndarray:
        if self._embeds is None:
            self._embeds = embed_rows(self._coeffs, self.base.order)
        return self._embeds

    def metadata(self) -> dict:
        return {
            "base": self.base.name,
            "order": self.base.order,
            "kind": self.kind,
            "radius_or_degree": self.radius if self.kind == "ball" else self.degree,
            "count": len(self),
            "complete": self.complete,
        }


def generate_ball(
    base: BaseSpec,
    alphabet: Alphabet,
    radius: float,
    point_cap: int = DEFAULT_POINT_CAP,
) -> Patch:
    """All spectrum points in the closed disk of the given radius.

    Iterates X_k = (X_{k-1} union beta*X_{k-1} + digits) clipped to the
    disk of radius max(radius, 1/(beta-1)) until it stabilizes; every
    spectrum point in the target disk is reachable through intermediates
    inside the working disk, so the fixed point is complete.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if alphabet.order != base.order:
        raise ValueError("alphabet order does not match base order")
    beta_val = base.beta_value
    working_radius = max(radius, 1.0 / (beta_val - 1.0)) + BALL_SLACK
    beta_mat = mul_matrix(base.beta)
    digits = alphabet.coeff_array()

    pts = _unique_rows(digits)
    emb = embed_rows(pts, base.order)
    pts = pts[np.abs(emb) <= working_radius]
    zero = np.zeros((1, pts.shape[1]), dtype=np.int64)
    pts = _unique_rows(np.concatenate([pts, zero]))

    while True:
        expanded = pts @ beta_mat
        cand = (expanded[:, None, :] + digits[None, :, :]).reshape(-1, pts.shape[1])
        cand = np.concatenate([pts, cand])
        if len(cand) > point_cap:
            raise ResourceBudgetError(
                f"ball generation exceeded the point cap {point_cap}"
            )
        cand = _unique_rows(cand)
        emb = embed_rows(cand, base.order)
        cand = cand[np.abs(emb) <= working_radius]
        if len(cand) == len(pts):
            break
        pts = cand

    emb = embed_rows(pts, base.order)
    pts = pts[np.abs(emb) <= radius + BALL_SLACK]
    return Patch(base, alphabet, pts, kind="ball", radius=radius, complete=True)


def generate_degree(
    base: BaseSpec,
    alphabet: Alphabet,
    nmax: int,
    point_cap: int = DEFAULT_POINT_CAP,
) -> Patch:
    """The exact set of digit-word values of degree at most nmax."""
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    if alphabet.order != base.order:
        raise ValueError("alphabet order does not match base order")
    digits = alphabet.coeff_array()
    pts = _unique_rows(digits)
    beta_pow = base.beta
    for _ in range(nmax):
        if len(pts) * len(digits) > point_cap:
            raise ResourceBudgetError(
                f"degree generation exceeded the point cap {point_cap}"
            )
        shift = digits @ mul_matrix(beta_pow)
        cand = (pts[:, None, :] + shift[None, :, :]).reshape(-1, pts.shape[1])
        pts = _unique_rows(cand)
        beta_pow = beta_pow * base.beta
    return Patch(base, alphabet, pts, kind="degree", degree=nmax, complete=True)


def min_pairwise_distance(patch: Patch) -> float:
    """Minimum embedded distance over distinct point pairs, grid-accelerated."""
    pts = patch.embeds()
    m = len(pts)
    if m < 2:
        raise ValueError("pairwise distance undefined for fewer than two points")
    xy = np.column_stack([pts.real, pts.imag])
    span = max(xy.max(axis=0) - xy.min(axis=0))
    h = max(span / math.sqrt(m), 1e-12)
    for _ in range(64):
        cells: dict[tuple[int, int], list[int]] = {}
        keys = np.floor(xy / h).astype(np.int64)
        for i, key in enumerate(map(tuple, keys.tolist())):
            cells.setdefault(key, []).append(i)
        best = math.inf
        for (cx, cy), idx in cells.items():
            neighbor_idx = []
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    neighbor_idx.extend(cells.get((cx + dx, cy + dy), ()))
            a = xy[idx]
            b = xy[neighbor_idx]
            d = np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])
            ii = np.array(idx)[:, None]
            jj = np.array(neighbor_idx)[None, :]
            d[ii == jj] = math.inf
            local = d.min() if d.size else math.inf
            if local < best:
                best = local
        if best <= h:
            return float(best)
        h = best if best < math.inf else h * 2
    raise RuntimeError("pairwise distance search failed to converge")


@dataclass(frozen=True)
class DensityVerdict:
    """Whether the spectrum is relatively dense, and which criterion decided."""

    relatively_dense: bool
    reason: str
    threshold: float


def cardinality_precludes_density(digit_count: int, beta_abs: float) -> bool:
    """True when the digit count is smaller than |beta|^2."""
    return digit_count < beta_abs**2 - 1e-12


def density_verdict(base: BaseSpec, alphabet: Alphabet) -> DensityVerdict:
    """Relative-density verdict for the polygonal alphabet of the base's order.

    Decides by, in order: the digit-count bound, the lower representability
    bound 1 + 2cos(2pi/n), and the upper non-representability bound
    (1 + cos(pi/n) + cos^2(pi/n) for odd n, 2 + cos(2pi/n) for even n).
    Raises UndecidedDensityError between the bounds.
    """
    if alphabet.order != base.order:
        raise ValueError("alphabet order does not match base order")
    n = base.order
    count = len(alphabet.digits)
    beta_val = base.beta_value
    if cardinality_precludes_density(count, beta_val):
        return DensityVerdict(False, "cardinality_bound", float(beta_val**2))
    if not alphabet.is_polygonal():
        raise UndecidedDensityError(
            "only the digit-count bound applies to non-polygonal alphabets, "
            "and it does not preclude density here"
        )

    lower_exact = (
        CyclotomicInt.one(n) + CyclotomicInt.omega(n, 1) + CyclotomicInt.omega(n, -1)
    )
    with mpmath.workprec(120):
        lower = 1 + 2 * mpmath.cospi(mpmath.mpf(2) / n)
        if n % 2 == 1:
            upper = 1 + mpmath.cospi(mpmath.mpf(1) / n) + mpmath.cospi(mpmath.mpf(1) / n) ** 2
        else:
            upper = 2 + mpmath.cospi(mpmath.mpf(2) / n)
        beta_mp = base.beta.embed_mp(120).real
        if base.beta == lower_exact or beta_mp < lower - mpmath.mpf("1e-12"):
            return DensityVerdict(True, "herreros_lower", float(lower))
        if beta_mp > upper + mpmath.mpf("1e-12"):
            return DensityVerdict(False, "herreros_upper", float(upper))
    raise UndecidedDensityError(
        f"beta={beta_val!r} at order {n} falls between the decidable bounds"
    )
