"""Attractors of the digit contraction system and exact window membership.

The conjugated base acts as a contraction; the closure of the conjugated
spectrum is the attractor of z -> contraction*z + digit.  Membership of a
lattice point's conjugate in the attractor is decided exactly for unit
bases by walking the inverse maps over exact ring states, which take only
finitely many values inside the bounding disk.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

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
from .errors import ResourceBudgetError
from .spectrum import Patch, _lexsort_rows, _unique_rows

DEFAULT_STATE_BUDGET = 1_000_000
DEFAULT_POINT_CAP = 2_000_000
RADIUS_SLACK = 1e-9


def beta_inverse(base: BaseSpec) -> CyclotomicInt:
    """Exact ring inverse of beta; requires a unit base.

    From the minimal polynomial c0 + c1 x + ... + x^d = 0,
    beta^(-1) = -(beta^(d-1) + c_(d-1) beta^(d-2) + ... + c1) / c0.
    """
    if not base.is_unit:
        raise ValueError(f"base {base.name} is not a unit; no ring inverse")
    c = base.min_poly
    d = len(c) - 1
    acc = CyclotomicInt.zero(base.order)
    power = CyclotomicInt.one(base.order)
    for i in range(1, d + 1):
        acc = acc + c[i] * power
        power = power * base.beta
    inv = -acc if c[0] == 1 else acc
    assert (inv * base.beta) == CyclotomicInt.one(base.order)
    return inv


@dataclass(frozen=True)
class IFSSpec:
    """Contraction system: conjugated base plus the digit offsets."""

    base: BaseSpec
    aut_exponent: int
    contraction: CyclotomicInt
    digits: Alphabet

    @classmethod
    def for_base(
        cls, base: BaseSpec, alphabet: Alphabet | None = None, k: int | None = None
    ) -> "IFSSpec":
        if k is None:
            k = base.conjugate_exponent
        if k not in base.conj_auts:
            raise ValueError(f"exponent {k} is not a contracting automorphism")
        if alphabet is None:
            alphabet = Alphabet.polygonal(base.order)
        return cls(
            base=base,
            aut_exponent=k,
            contraction=base.beta.galois(k),
            digits=alphabet,
        )

    @property
    def contraction_value(self) -> complex:
        return self.contraction.embed()

    @property
    def bounding_radius(self) -> float:
        return 1.0 / (1.0 - abs(self.contraction_value))

    def resolution(self, depth: int) -> float:
        return self.bounding_radius * abs(self.contraction_value) ** depth


class AttractorApprox:
    """All depth-truncated digit sums, exactly deduplicated."""

    def __init__(self, spec: IFSSpec, depth: int, coeffs: np.ndarray) -> None:
        self.spec = spec
        self.depth = depth
        self._coeffs = _lexsort_rows(np.asarray(coeffs, dtype=np.int64))
        self._points: tuple[CyclotomicInt, ...] | None = None

    def __len__(self) -> int:
        return len(self._coeffs)

    @property
    def resolution(self) -> float:
        return self.spec.resolution(self.depth)

    def coeff_array(self) -> np.ndarray:
        return self._coeffs

    def coeff_set(self) -> frozenset:
        return frozenset(map(tuple, self._coeffs.tolist()))

    @property
    def points(self) -> tuple[CyclotomicInt, ...]:
        if self._points is None:
            order = self.spec.base.order
            self._points = tuple(
                CyclotomicInt(order, row) for row in self._coeffs.tolist()
            )
        return self._points

    def complex_points(self) -> np.ndarray:
        return embed_rows(self._coeffs, self.spec.base.order)


def approximate(
    spec: IFSSpec, depth: int, point_cap: int = DEFAULT_POINT_CAP
) -> AttractorApprox:
    """Exact point set of all digit sums truncated at the given depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    phi = len(spec.contraction.coeffs)
    pts = np.zeros((1, phi), dtype=np.int64)
    gamma_mat = mul_matrix(spec.contraction)
    digits = spec.digits.coeff_array()
    for _ in range(depth):
        if len(pts) * len(digits) > point_cap:
            raise ResourceBudgetError(
                f"attractor approximation exceeded the point cap {point_cap}"
            )
        cand = (pts @ gamma_mat)[:, None, :] + digits[None, :, :]
        pts = _unique_rows(cand.reshape(-1, phi))
    return AttractorApprox(spec, depth, pts)


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of the exact membership walk.

    For inside points the eventually periodic digit expansion is the
    certificate (digit indices into the alphabet); for outside points the
    deepest explored level is recorded.
    """

    status: str  # "inside" | "outside" | "boundary_suspect"
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    escape_depth: int | None = None
    states_visited: int = 0

    def replay(self, spec: IFSSpec) -> complex:
        """Value of the periodic expansion; matches the conjugated query."""
        if self.status != "inside":
            raise ValueError("only inside results carry a replayable certificate")
        gamma = spec.contraction_value
        digit_vals = [d.embed() for d in spec.digits.digits]
        pre = sum(
            digit_vals[d] * gamma**i for i, d in enumerate(self.preperiod)
        )
        p = len(self.period)
        per = sum(digit_vals[d] * gamma**i for i, d in enumerate(self.period))
        return pre + gamma ** len(self.preperiod) * per / (1.0 - gamma**p)


def membership(
    spec: IFSSpec,
    x: CyclotomicInt,
    state_budget: int = DEFAULT_STATE_BUDGET,
    fallback_depth: int = 24,
) -> MembershipResult:
    """Decide whether the conjugate of x lies in the attractor.

    Unit bases get the exact inverse-map walk: a state repeated along the
    current branch yields an eventually periodic expansion (inside); if
    every branch leaves the bounding disk the point is outside.  Non-unit
    bases fall back to a certified distance query against the attractor
    and can only report outside or boundary_suspect.
    """
    z0 = x.galois(spec.aut_exponent)
    radius = spec.bounding_radius + RADIUS_SLACK
    if abs(z0.embed()) > radius:
        return MembershipResult(status="outside", escape_depth=0)

    if not spec.base.is_unit:
        res = spec.resolution(fallback_depth)
        ub, lb = attractor_distance(spec, complex(z0.embed()), tol=res / 4)
        if lb > 2 * res:
            return MembershipResult(status="outside", escape_depth=fallback_depth)
        return MembershipResult(status="boundary_suspect")

    inv_gamma = beta_inverse(spec.base).galois(spec.aut_exponent)
    digit_list = list(spec.digits.digits)

    def children(state: CyclotomicInt):
        out = []
        for idx, a in enumerate(digit_list):
            nxt = (state - a) * inv_gamma
            mod = abs(nxt.embed())
            if mod <= radius:
                out.append((mod, idx, nxt))
        out.sort(key=lambda t: t[0])
        return [(idx, nxt) for _, idx, nxt in out]

    dead: set[tuple[int, ...]] = set()
    on_path: dict[tuple[int, ...], int] = {z0.coeffs: 0}
    stack = [(z0, iter(children(z0)))]
    path_digits: list[int] = []
    visited = 1
    max_depth = 0

    while stack:
        state, it = stack[-1]
        advanced = False
        for idx, nxt in it:
            key = nxt.coeffs
            if key in dead:
                continue
            if key in on_path:
                cut = on_path[key]
                pre = tuple(path_digits[:cut])
                per = tuple(path_digits[cut:] + [idx])
                return MembershipResult(
                    status="inside",
                    preperiod=pre,
                    period=per,
                    states_visited=visited,
                )
            visited += 1
            if visited > state_budget:
                raise ResourceBudgetError(
                    f"membership walk exceeded the state budget {state_budget}"
                )
            on_path[key] = len(path_digits) + 1
            path_digits.append(idx)
            stack.append((nxt, iter(children(nxt))))
            max_depth = max(max_depth, len(path_digits))
            advanced = True
            break
        if not advanced:
            dead.add(state.coeffs)
            del on_path[state.coeffs]
            stack.pop()
            if path_digits:
                path_digits.pop()
    return MembershipResult(
        status="outside", escape_depth=max_depth, states_visited=visited
    )


def attractor_distance(
    spec: IFSSpec,
    z: complex,
    tol: float = 1e-12,
    stop_below: float = 0.0,
    node_budget: int = 200_000,
) -> tuple[float, float]:
    """Bounds (upper, lower) on the distance from z to the attractor.

    Best-first search over digit prefixes: every prefix value is itself an
    attractor point (zero tail), giving upper bounds; a prefix subtree lies
    in a disk of radius bounding_radius*|contraction|^depth around the
    prefix value, giving lower bounds.  Ties on the lower bound are broken
    toward the prefix closest to z, so interior queries descend greedily.
    Stops once ub <= stop_below (lower bound then reported as 0) or when
    the bounds meet within tol; on budget exhaustion the lower bound is
    whatever has been certified so far.
    """
    gamma = complex(spec.contraction_value)
    digit_vals = [complex(d.embed()) for d in spec.digits.digits]
    big_r = spec.bounding_radius
    ub = abs(z)  # prefix of depth 0 has value 0
    if ub <= stop_below:
        return ub, 0.0
    heap = [(0.0, ub, 0, 0j, 1.0 + 0j)]
    counter = 1
    popped = 0
    certified = 0.0
    while heap:
        lb, dist, _, value, gamma_pow = heapq.heappop(heap)
        certified = lb
        if lb >= ub - tol:
            return ub, max(lb, 0.0)
        popped += 1
        if popped > node_budget:
            return ub, certified
        child_gamma_pow = gamma_pow * gamma
        sub_radius = big_r * abs(child_gamma_pow)
        for dv in digit_vals:
            child_value = value + dv * gamma_pow
            child_dist = abs(z - child_value)
            if child_dist < ub:
                ub = child_dist
                if ub <= stop_below:
                    return ub, 0.0
            child_lb = child_dist - sub_radius
            if child_lb < ub - tol:
                heapq.heappush(
                    heap,
                    (max(child_lb, 0.0), child_dist, counter, child_value, child_gamma_pow),
                )
                counter += 1
    return ub, ub


def interior_probe(
    spec: IFSSpec,
    z: complex,
    depth: int = 30,
    samples: int = 16,
) -> bool:
    """Heuristic interior test: a small disk around z hugs the attractor.

    Checks that the center and a ring of radius twice the depth-resolution
    all lie within one resolution of the attractor.  A False return means
    boundary_suspect, not a certified boundary.
    """
    res = spec.resolution(depth)
    probes = [z] + [
        z + 2 * res * complex(math.cos(2 * math.pi * j / samples),
                              math.sin(2 * math.pi * j / samples))
        for j in range(samples)
    ]
    for w in probes:
        ub, _ = attractor_distance(spec, w, tol=res / 8, stop_below=res * 0.999)
        if ub > res:
            return False
    return True


def classify_attractor_point(
    spec: IFSSpec,
    x: CyclotomicInt,
    probe_depth: int = 30,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> str:
    """Classify the conjugate of x: outside / boundary / interior / boundary_suspect.

    The boundary label is exact only for points on the bounding circle;
    otherwise interior is the heuristic disk probe and boundary_suspect its
    complement (documented convention, flagged in reports).
    """
    result = membership(spec, x, state_budget=state_budget)
    if result.status == "outside":
        return "outside"
    z = complex(x.galois(spec.aut_exponent).embed())
    if abs(z) >= spec.bounding_radius - RADIUS_SLACK:
        return "boundary"
    if result.status == "boundary_suspect":
        return "boundary_suspect"
    if interior_probe(spec, z, depth=probe_depth):
        return "interior"
    return "boundary_suspect"


def conjugate_patch(patch: Patch, k: int) -> tuple[CyclotomicInt, ...]:
    """Image of a patch under the automorphism exponent k (renders windows)."""
    if k not in patch.base.conj_auts:
        raise ValueError(f"exponent {k} is not a contracting automorphism")
    g_mat = galois_matrix(patch.base.order, k)
    rows = _lexsort_rows(_unique_rows(patch.coeff_array() @ g_mat))
    order = patch.base.order
    return tuple(CyclotomicInt(order, row) for row in rows.tolist())


@dataclass(frozen=True)
class PolygonWindow:
    """An exactly polygonal attractor: the regular n-gon of the extremes.

    The circumradius 1/(1 - |contraction|) is recomputed from the exact
    contraction element at the working precision of each query, so points
    whose conjugates land exactly on a vertex or edge classify as boundary.
    """

    order: int
    contraction: CyclotomicInt

    @property
    def circumradius(self) -> float:
        return 1.0 / (1.0 - abs(self.contraction.embed()))

    def _circumradius_mp(self):
        return 1 / (1 - abs(self.contraction.embed_mp(mpmath.mp.prec)))

    def classify(self, z, bits: int = 128) -> str:
        """interior / boundary / outside by support-function comparison."""
        n = self.order
        with mpmath.workprec(bits):
            apothem = self._circumradius_mp() * mpmath.cospi(mpmath.mpf(1) / n)
            zc = mpmath.mpc(z)
            best = None
            for m in range(n):
                direction = mpmath.expjpi(mpmath.mpf(2 * m + 1) / n)
                proj = mpmath.re(zc * mpmath.conj(direction))
                if best is None or proj > best:
                    best = proj
            gap = best - apothem
            if gap > mpmath.mpf("1e-25"):
                return "outside"
            if gap < -mpmath.mpf("1e-25"):
                return "interior"
            return "boundary"

    def classify_point(self, x: CyclotomicInt, aut_exponent: int, bits: int = 128) -> str:
        with mpmath.workprec(bits):
            z = x.galois(aut_exponent).embed_mp(bits)
            return self.classify(z, bits=bits)

    def vertices(self) -> list[complex]:
        return [
            self.circumradius
            * complex(math.cos(2 * math.pi * j / self.order),
                      math.sin(2 * math.pi * j / self.order))
            for j in range(self.order)
        ]


@lru_cache(maxsize=32)
def polygonal_window(spec: IFSSpec) -> PolygonWindow | None:
    """The exact polygon equal to the attractor, when one exists.

    A real contraction g gives a polygonal attractor when 1/2 < g < 1, or
    when -1 < g < -1/2 with even order, or -1 < g < -1/sqrt(2) with odd
    order.  In the first two cases the polygon is regular with vertices at
    the digit directions and circumradius 1/(1-|g|).
    """
    g = spec.contraction_value
    if abs(g.imag) > 1e-12:
        return None
    gr = g.real
    n = spec.digits.order
    if 0.5 < gr < 1.0 or (-1.0 < gr < -0.5 and n % 2 == 0):
        return PolygonWindow(order=n, contraction=spec.contraction)
    if -1.0 < gr < -1.0 / math.sqrt(2.0) and n % 2 == 1:
        raise NotImplementedError(
            "odd-order polygon windows with negative contraction are not needed "
            "by any catalog case"
        )
    return None
