"""Cut-and-project sets for quadratic bases and missing-point detection.

Candidate model-set points come from a parallelogram pre-window built out
of two one-dimensional cut-and-project sequences; acceptance is then
decided exactly against the attractor (or its polygon, when the attractor
is one).  Missing points are model-set points absent from the spectrum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .attractor import (
    IFSSpec,
    PolygonWindow,
    classify_attractor_point,
    membership,
    polygonal_window,
)
from .cyclotomic import Alphabet, BaseSpec, CyclotomicInt, embed_rows
from .spectrum import Patch

INTERVAL_SLACK = 1e-12
BALL_SLACK = 1e-9


@dataclass(frozen=True)
class OneDimWindow:
    """Symmetric intervals I = [-s, s] (internal) and J = [-t, t] (physical)."""

    s: float
    t: float

    def __post_init__(self):
        if self.s <= 0 or self.t <= 0:
            raise ValueError("interval half-widths must be positive")


def quadratic_conjugates(base: BaseSpec) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(beta, beta') as high-precision reals; requires a quadratic base."""
    if base.degree != 2:
        raise ValueError("one-dimensional sequences need a quadratic base")
    c0, c1, _ = base.min_poly
    with mpmath.workprec(160):
        disc = mpmath.sqrt(mpmath.mpf(c1) ** 2 - 4 * c0)
        r1 = (-c1 + disc) / 2
        r2 = (-c1 - disc) / 2
    if abs(float(r1) - base.beta_value) < 1e-9:
        return r1, r2
    return r2, r1


def one_dim_points(
    base: BaseSpec, interval_i: tuple[float, float], interval_j: tuple[float, float]
) -> list[tuple[int, int]]:
    """Integer pairs (a, b) with a + b*beta in J and a + b*beta' in I.

    The two linear constraints bound b; each b leaves an interval of a.
    Comparisons run at 160-bit precision with a tiny inclusion slack, since
    the endpoints are irrational.
    """
    beta, beta_conj = quadratic_conjugates(base)
    with mpmath.workprec(160):
        i_lo, i_hi = (mpmath.mpf(v) for v in interval_i)
        j_lo, j_hi = (mpmath.mpf(v) for v in interval_j)
        slack = mpmath.mpf(INTERVAL_SLACK)
        spread = beta - beta_conj
        assert spread > 0
        b_lo = mpmath.ceil((j_lo - i_hi) / spread - slack)
        b_hi = mpmath.floor((j_hi - i_lo) / spread + slack)
        out = []
        b = int(b_lo)
        while b <= int(b_hi):
            a_lo = max(j_lo - b * beta, i_lo - b * beta_conj)
            a_hi = min(j_hi - b * beta, i_hi - b * beta_conj)
            a = int(mpmath.ceil(a_lo - slack))
            a_top = int(mpmath.floor(a_hi + slack))
            while a <= a_top:
                out.append((a, b))
                a += 1
            b += 1
    out.sort()
    return out


@dataclass(frozen=True)
class CapSpec:
    """A quadratic cut-and-project setup with its parallelogram pre-window."""

    base: BaseSpec
    ifs: IFSSpec
    polygon: PolygonWindow | None
    prewindow: OneDimWindow
    sigma_omega_exponent: int
    ball_radius: float
    probe_depth: int = 30

    @classmethod
    def for_case(
        cls,
        base: BaseSpec,
        ball_radius: float | None = None,
        k: int | None = None,
        probe_depth: int = 30,
    ) -> "CapSpec":
        if base.degree != 2:
            raise ValueError("CapSpec requires a quadratic base")
        if k is None:
            k = base.conjugate_exponent
        ifs = IFSSpec.for_base(base, k=k)
        n = base.order
        if ball_radius is None:
            ball_radius = 1.0 / (base.beta_value - 1.0)
        theta = 2.0 * math.pi / n
        theta_conj = 2.0 * math.pi * k / n
        s = ifs.bounding_radius / math.sin(theta_conj)
        t = ball_radius / math.sin(theta)
        return cls(
            base=base,
            ifs=ifs,
            polygon=polygonal_window(ifs),
            prewindow=OneDimWindow(s=s, t=t),
            sigma_omega_exponent=k,
            ball_radius=ball_radius,
            probe_depth=probe_depth,
        )

    def classify(self, x: CyclotomicInt) -> str:
        """Window position of the conjugate of x.

        Returns interior / boundary / boundary_suspect / outside; exact for
        polygonal windows and for points on the bounding circle, heuristic
        (disk probe) for interior-vs-boundary of fractal windows.
        """
        if self.polygon is not None:
            return self.polygon.classify_point(x, self.sigma_omega_exponent)
        return classify_attractor_point(
            self.ifs, x, probe_depth=self.probe_depth
        )

    def in_window(self, x: CyclotomicInt, closed: bool = True) -> bool:
        label = self.classify(x)
        if closed:
            return label != "outside"
        return label == "interior"


def candidate_grid(spec: CapSpec) -> tuple[CyclotomicInt, ...]:
    """Superset of the model set inside the closed seed disk.

    Combines two one-dimensional sequences along 1 and omega, then clips
    to the disk of the spec's ball radius.
    """
    s, t = spec.prewindow.s, spec.prewindow.t
    pairs = one_dim_points(spec.base, (-s, s), (-t, t))
    base = spec.base
    order = base.order
    one = CyclotomicInt.one(order)
    omega = CyclotomicInt.omega(order, 1)
    line_vals = [a * one + b * base.beta for a, b in pairs]
    phi = len(base.beta.coeffs)
    rows = []
    for u in line_vals:
        for v in line_vals:
            rows.append((u + omega * v).coeffs)
    arr = np.unique(np.array(rows, dtype=np.int64).reshape(-1, phi), axis=0)
    emb = embed_rows(arr, order)
    arr = arr[np.abs(emb) <= spec.ball_radius + BALL_SLACK]
    order_idx = np.lexsort(arr.T[::-1])
    return tuple(CyclotomicInt(order, row) for row in arr[order_idx].tolist())


@dataclass
class MissingReport:
    """Model-set points absent from the spectrum, with window positions."""

    case: tuple[str, int]
    seed_missing: tuple[CyclotomicInt, ...]
    propagated_missing: tuple[tuple[int, CyclotomicInt], ...]
    labels: dict[CyclotomicInt, str]
    classification: str  # "none" | "boundary_only" | "interior"
    propagation_certifies: bool
    seed_ball_radius: float = 0.0
    max_depth: int = 0
    window_kind: str = "attractor"

    def to_json(self) -> dict:
        by_depth: dict[int, int] = {}
        for depth, _ in self.propagated_missing:
            by_depth[depth] = by_depth.get(depth, 0) + 1
        points = [
            {
                "coeffs": list(x.coeffs),
                "depth": 0,
                "label": self.labels[x],
                "re": x.embed().real,
                "im": x.embed().imag,
            }
            for x in self.seed_missing
        ] + [
            {
                "coeffs": list(x.coeffs),
                "depth": depth,
                "label": self.labels[x],
                "re": x.embed().real,
                "im": x.embed().imag,
            }
            for depth, x in self.propagated_missing
        ]
        return {
            "case": {"base": self.case[0], "order": self.case[1]},
            "seed_count": len(self.seed_missing),
            "propagated": [
                {"depth": d, "count": c} for d, c in sorted(by_depth.items())
            ],
            "classification": self.classification,
            "propagation_certifies_equality": self.propagation_certifies,
            "window_kind": self.window_kind,
            "points": points,
        }


def _overall_classification(labels: dict[CyclotomicInt, str]) -> str:
    if not labels:
        return "none"
    if any(v == "interior" for v in labels.values()):
        return "interior"
    return "boundary_only"


def missing_points(spec: CapSpec, patch: Patch, max_depth: int = 2) -> MissingReport:
    """Model-set points missing from the spectrum, seeded in the small disk.

    Seeds are candidate-grid points inside the closed window but absent
    from the patch; each propagation step maps x to beta*x + digit and
    keeps the children still inside the window and absent.  The patch must
    be complete out to beta^d/(beta-1) + (beta^d - 1)/(beta - 1), the
    radius a seed can reach after d propagation steps, so every tested
    point lies in certified territory.
    """
    base = spec.base
    beta_val = base.beta_value
    seed_radius = 1.0 / (beta_val - 1.0)
    growth = (beta_val**max_depth - 1.0) / (beta_val - 1.0)
    needed = beta_val**max_depth * seed_radius + growth
    if patch.kind != "ball" or not patch.complete:
        raise ValueError("missing-point search needs a complete ball patch")
    if patch.radius < needed - 1e-9:
        raise ValueError(
            f"patch radius {patch.radius} too small; propagation to depth "
            f"{max_depth} needs at least {needed:.3f}"
        )
    if abs(spec.ball_radius - seed_radius) > 1e-9:
        spec = CapSpec.for_case(
            base, k=spec.sigma_omega_exponent, probe_depth=spec.probe_depth
        )

    labels: dict[CyclotomicInt, str] = {}
    seeds = []
    for x in candidate_grid(spec):
        if x in patch:
            continue
        label = spec.classify(x)
        if label == "outside":
            continue
        labels[x] = label
        seeds.append(x)

    propagated: list[tuple[int, CyclotomicInt]] = []
    current = list(seeds)
    recorded = set(x.coeffs for x in seeds)
    digits = spec.ifs.digits.digits
    for depth in range(1, max_depth + 1):
        nxt = []
        for x in current:
            bx = base.beta * x
            for a in digits:
                child = bx + a
                if child.coeffs in recorded:
                    continue
                recorded.add(child.coeffs)
                if child in patch:
                    continue
                label = spec.classify(child)
                if label == "outside":
                    continue
                labels[child] = label
                propagated.append((depth, child))
                nxt.append(child)
        current = nxt

    return MissingReport(
        case=(base.name, base.order),
        seed_missing=tuple(seeds),
        propagated_missing=tuple(propagated),
        labels=labels,
        classification=_overall_classification(labels),
        propagation_certifies=base.is_unit,
        seed_ball_radius=seed_radius,
        max_depth=max_depth,
        window_kind="polygon" if spec.polygon is not None else "attractor",
    )


def model_set_in_ball(
    spec: CapSpec, radius: float, closed: bool = True
) -> tuple[CyclotomicInt, ...]:
    """All model-set points in the closed disk of the given radius.

    Builds the candidate grid for that disk and keeps the points whose
    conjugates the window accepts (closed or open acceptance).
    """
    wide = CapSpec.for_case(
        spec.base,
        ball_radius=radius,
        k=spec.sigma_omega_exponent,
        probe_depth=spec.probe_depth,
    )
    return tuple(x for x in candidate_grid(wide) if wide.in_window(x, closed=closed))


def cubic_conjugate_containment(
    base: BaseSpec, patch: Patch, sample_limit: int = 400
) -> float:
    """Fraction of sampled patch points whose two conjugates both lie in
    their attractors (walk-certified).  Qualitative check for cubic bases."""
    if base.degree != 3:
        raise ValueError("cubic containment check needs a cubic base")
    k1, k2 = base.conj_auts[:2]
    ifs1 = IFSSpec.for_base(base, k=k1)
    ifs2 = IFSSpec.for_base(base, k=k2)
    pts = patch.points[:sample_limit]
    ok = 0
    for x in pts:
        r1 = membership(ifs1, x)
        r2 = membership(ifs2, x)
        if r1.status == "inside" and r2.status == "inside":
            ok += 1
    return ok / len(pts)


def cubic_missing_lower_bound(
    base: BaseSpec, patch: Patch, coeff_bound: int = 2
) -> tuple[CyclotomicInt, ...]:
    """Missing-point candidates for a cubic base from a coarse integer box.

    Enumerates coefficient vectors in a box, keeps lattice points in the
    seed disk whose conjugate pair is walk-certified inside both windows,
    and reports those absent from the patch.  A lower bound only: the box
    does not exhaust the model set.
    """
    if base.degree != 3:
        raise ValueError("cubic missing-point scan needs a cubic base")
    order = base.order
    phi = len(base.beta.coeffs)
    seed_radius = 1.0 / (base.beta_value - 1.0)
    rng = range(-coeff_bound, coeff_bound + 1)
    arr = np.array(list(itertools.product(rng, repeat=phi)), dtype=np.int64)
    emb = embed_rows(arr, order)
    arr = arr[np.abs(emb) <= seed_radius + BALL_SLACK]
    k1, k2 = base.conj_auts[:2]
    ifs1 = IFSSpec.for_base(base, k=k1)
    ifs2 = IFSSpec.for_base(base, k=k2)
    missing = []
    for row in arr.tolist():
        x = CyclotomicInt(order, row)
        if x in patch:
            continue
        if membership(ifs1, x).status != "inside":
            continue
        if membership(ifs2, x).status != "inside":
            continue
        missing.append(x)
    missing.sort(key=lambda p: p.coeffs)
    return tuple(missing)
