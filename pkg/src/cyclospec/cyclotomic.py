"""Exact arithmetic in the cyclotomic rings Z[omega_n] and the base catalog.

Elements are integer coefficient vectors over the power basis
1, omega, ..., omega^(phi(n)-1), reduced modulo the n-th cyclotomic
polynomial.  Equality is exact coefficient comparison; floats are only
ever produced by the embedding, never used for identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import mpmath
import numpy as np

SUPPORTED_ORDERS = (5, 7, 8, 9, 10, 12, 14, 18)

EULER_PHI = {5: 4, 7: 6, 8: 4, 9: 6, 10: 4, 12: 4, 14: 6, 18: 6}

# n-th cyclotomic polynomial, ascending coefficients, monic.
CYCLOTOMIC_POLY = {
    5: (1, 1, 1, 1, 1),
    7: (1, 1, 1, 1, 1, 1, 1),
    8: (1, 0, 0, 0, 1),
    9: (1, 0, 0, 1, 0, 0, 1),
    10: (1, -1, 1, -1, 1),
    12: (1, 0, -1, 0, 1),
    14: (1, -1, 1, -1, 1, -1, 1),
    18: (1, 0, 0, -1, 0, 0, 1),
}


def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Vectors of omega^j for j = phi .. 2*phi-2, reduced to the power basis."""
    phi = EULER_PHI[n]
    poly = CYCLOTOMIC_POLY[n]
    rows = []
    cur = [-c for c in poly[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
        rows.append(tuple(cur))
    return tuple(rows)


_REDTAB = {n: _reduction_rows(n) for n in SUPPORTED_ORDERS}


def _omega_power_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced vectors of omega^j for j = 0 .. n-1."""
    phi = EULER_PHI[n]
    rows = []
    for j in range(n):
        if j < phi:
            v = [0] * phi
            v[j] = 1
            rows.append(tuple(v))
        elif j <= 2 * phi - 2:
            rows.append(_REDTAB[n][j - phi])
        else:
            prev = rows[j - 1]
            shifted = [0] + list(prev[:-1])
            top = prev[-1]
            if top:
                for i in range(phi):
                    shifted[i] += top * _REDTAB[n][0][i]
            rows.append(tuple(shifted))
    return tuple(rows)


_OMEGA_POW = {n: _omega_power_rows(n) for n in SUPPORTED_ORDERS}

_EMBED_BASIS = {
    n: np.array(
        [cmath.exp(2j * math.pi * i / n) for i in range(EULER_PHI[n])],
        dtype=np.complex128,
    )
    for n in SUPPORTED_ORDERS
}


def _check_order(n: int) -> None:
    if n not in EULER_PHI:
        raise ValueError(f"unsupported cyclotomic order {n}; supported: {SUPPORTED_ORDERS}")


class CyclotomicInt:
    """An element of Z[omega_n], immutable and hashable."""

    __slots__ = ("_order", "_coeffs")

    def __init__(self, order: int, coeffs) -> None:
        _check_order(order)
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != EULER_PHI[order]:
            raise ValueError(
                f"order {order} needs {EULER_PHI[order]} coefficients, got {len(coeffs)}"
            )
        self._order = order
        self._coeffs = coeffs

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @classmethod
    def zero(cls, order: int) -> "CyclotomicInt":
        return cls(order, (0,) * EULER_PHI[order])

    @classmethod
    def one(cls, order: int) -> "CyclotomicInt":
        return cls.from_int(order, 1)

    @classmethod
    def from_int(cls, order: int, value: int) -> "CyclotomicInt":
        v = [0] * EULER_PHI[order]
        v[0] = int(value)
        return cls(order, v)

    @classmethod
    def omega(cls, order: int, power: int = 1) -> "CyclotomicInt":
        _check_order(order)
        return cls(order, _OMEGA_POW[order][power % order])

    def _require_same_order(self, other: "CyclotomicInt") -> None:
        if self._order != other._order:
            raise ValueError(f"order mismatch: {self._order} vs {other._order}")

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(self._order, other)
        elif not isinstance(other, CyclotomicInt):
            return NotImplemented
        self._require_same_order(other)
        return CyclotomicInt(
            self._order, tuple(a + b for a, b in zip(self._coeffs, other._coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(self._order, other)
        elif not isinstance(other, CyclotomicInt):
            return NotImplemented
        self._require_same_order(other)
        return CyclotomicInt(
            self._order, tuple(a - b for a, b in zip(self._coeffs, other._coeffs))
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CyclotomicInt(self._order, tuple(-a for a in self._coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self._order, tuple(a * other for a in self._coeffs))
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        self._require_same_order(other)
        phi = EULER_PHI[self._order]
        a, b = self._coeffs, other._coeffs
        conv = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = list(conv[:phi])
        red = _REDTAB[self._order]
        for j in range(phi, 2 * phi - 1):
            cj = conv[j]
            if cj:
                row = red[j - phi]
                for i in range(phi):
                    out[i] += cj * row[i]
        return CyclotomicInt(self._order, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = CyclotomicInt.one(self._order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == CyclotomicInt.from_int(self._order, other)
        if not isinstance(other, CyclotomicInt):
            return False
        return self._order == other._order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._order, self._coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicInt({self._order}, {list(self._coeffs)})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs)

    def galois(self, k: int) -> "CyclotomicInt":
        """Image under the ring automorphism omega -> omega^k, gcd(k, n) = 1."""
        n = self._order
        if math.gcd(k, n) != 1:
            raise ValueError(f"galois exponent {k} not coprime to {n}")
        k %= n
        rows = _OMEGA_POW[n]
        phi = EULER_PHI[n]
        out = [0] * phi
        for i, ci in enumerate(self._coeffs):
            if ci:
                row = rows[(i * k) % n]
                for j in range(phi):
                    out[j] += ci * row[j]
        return CyclotomicInt(n, out)

    def conjugate(self) -> "CyclotomicInt":
        return self.galois(self._order - 1)

    def embed(self, bits: int | None = None) -> complex:
        """Numeric value at omega = exp(2*pi*i/n).

        The default is a fast double-precision evaluation; pass bits > 53
        for an mpmath evaluation at that working precision.
        """
        if bits is None or bits <= 53:
            basis = _EMBED_BASIS[self._order]
            return complex(np.dot(np.array(self._coeffs, dtype=np.float64), basis))
        return complex(self.embed_mp(bits))

    def embed_mp(self, bits: int = 128) -> "mpmath.mpc":
        if bits < 53:
            raise ValueError("precision below 53 bits is not supported")
        with mpmath.workprec(bits):
            omega = mpmath.expjpi(mpmath.mpf(2) / self._order)
            acc = mpmath.mpc(0)
            for c in reversed(self._coeffs):
                acc = acc * omega + c
            return acc


def add(x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    return x + y


def mul(x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    return x * y


def embed(x: CyclotomicInt, bits: int | None = None) -> complex:
    return x.embed(bits)


def galois(x: CyclotomicInt, k: int) -> CyclotomicInt:
    return x.galois(k)


def mul_matrix(x: CyclotomicInt) -> np.ndarray:
    """Integer matrix M with (v @ M) = coefficients of x * v for row vectors v."""
    n = x.order
    phi = EULER_PHI[n]
    rows = [(x * CyclotomicInt.omega(n, i)).coeffs for i in range(phi)]
    return np.array(rows, dtype=np.int64)


def galois_matrix(order: int, k: int) -> np.ndarray:
    """Integer matrix G with (v @ G) = coefficients of galois(v, k)."""
    if math.gcd(k, order) != 1:
        raise ValueError(f"galois exponent {k} not coprime to {order}")
    phi = EULER_PHI[order]
    rows = [CyclotomicInt.omega(order, i).galois(k).coeffs for i in range(phi)]
    return np.array(rows, dtype=np.int64)


def embed_rows(coeffs: np.ndarray, order: int) -> np.ndarray:
    """Complex embeddings for an (m, phi) integer coefficient array."""
    return coeffs.astype(np.float64) @ _EMBED_BASIS[order]


@dataclass(frozen=True)
class Alphabet:
    """The digit set {0} united with all n-th roots of unity."""

    order: int
    digits: tuple[CyclotomicInt, ...]

    @classmethod
    def polygonal(cls, order: int) -> "Alphabet":
        _check_order(order)
        digits = (CyclotomicInt.zero(order),) + tuple(
            CyclotomicInt.omega(order, j) for j in range(order)
        )
        return cls(order=order, digits=digits)

    def __post_init__(self):
        if len(set(d.coeffs for d in self.digits)) != len(self.digits):
            raise ValueError("alphabet digits must be pairwise distinct")

    @property
    def nonzero_digits(self) -> tuple[CyclotomicInt, ...]:
        return tuple(d for d in self.digits if not d.is_zero())

    def coeff_array(self) -> np.ndarray:
        return np.array([d.coeffs for d in self.digits], dtype=np.int64)

    def is_polygonal(self) -> bool:
        reference = Alphabet.polygonal(self.order)
        return set(d.coeffs for d in self.digits) == set(
            d.coeffs for d in reference.digits
        )


_DISPLAY_NAMES = {
    "tau": "τ",
    "tau2": "τ²",
    "lambda": "λ",
    "delta": "δ",
    "kappa": "κ",
    "mu": "μ",
}


@dataclass(frozen=True)
class BaseSpec:
    """A Pisot-cyclotomic base: the ring order, beta, and its conjugation data.

    conj_auts lists every exponent k coprime to the order whose automorphism
    sends beta to a conjugate of modulus < 1; the canonical one is the
    smallest.  expr_derived marks beta expressions recovered by the integer
    expression search rather than taken from the published identities.
    """

    order: int
    name: str
    beta: CyclotomicInt
    min_poly: tuple[int, ...]
    conj_auts: tuple[int, ...]
    is_unit: bool
    expr_derived: bool = False

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def beta_value(self) -> float:
        return self.beta.embed().real

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES.get(self.name, self.name)

    @property
    def conjugate_exponent(self) -> int:
        return min(self.conj_auts)

    def conjugate_value(self, k: int | None = None) -> complex:
        if k is None:
            k = self.conjugate_exponent
        return self.beta.galois(k).embed()

    def min_poly_at(self, x):
        acc = 0
        for c in reversed(self.min_poly):
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "min_poly": list(self.min_poly),
            "beta_coeffs": list(self.beta.coeffs),
            "conj_auts": list(self.conj_auts),
            "is_unit": self.is_unit,
        }


def _conjugation_exponents(order: int, beta: CyclotomicInt) -> tuple[int, ...]:
    """Exponents k with |sigma_k(beta)| < 1, one per complex-conjugate pair.

    sigma_(n-k) is the complex conjugate of sigma_k, so min(k, n-k) is the
    canonical representative.
    """
    ks = []
    for k in range(2, order):
        if math.gcd(k, order) == 1 and min(k, order - k) == k:
            if abs(beta.galois(k).embed()) < 1.0 - 1e-9:
                ks.append(k)
    return tuple(ks)


def _one_plus_omega_pair(order: int, power: int = 1) -> CyclotomicInt:
    return (
        CyclotomicInt.one(order)
        + CyclotomicInt.omega(order, power)
        + CyclotomicInt.omega(order, -power)
    )


def _omega_pair(order: int, power: int = 1) -> CyclotomicInt:
    return CyclotomicInt.omega(order, power) + CyclotomicInt.omega(order, -power)


def _real_subfield_conjugates(order: int) -> list[int]:
    """Representatives k of the automorphisms of Z[2cos(2pi/n)], k=1 first."""
    reps = []
    seen = set()
    for k in range(1, order):
        if math.gcd(k, order) != 1:
            continue
        key = min(k, order - k)
        if key not in seen:
            seen.add(key)
            reps.append(key)
    return reps


def solve_subfield_expression(
    order: int, min_poly: tuple[int, ...], approx: float
) -> CyclotomicInt:
    """Find beta in Z[2cos(2pi/n)] with the given minimal polynomial.

    Solves the Vandermonde system over the conjugates of 2cos(2pi/n) for
    every assignment of the polynomial's roots, rounds to integers and
    verifies exactly in the ring.
    """
    degree = len(min_poly) - 1
    reps = _real_subfield_conjugates(order)
    if len(reps) != degree:
        raise ValueError(f"degree {degree} does not match the order-{order} subfield")
    with mpmath.workprec(200):
        roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(min_poly)])
        roots = [mpmath.re(r) for r in roots]
        pisot = max(roots, key=lambda r: r)
        others = [r for r in roots if r != pisot]
        cos_vals = [2 * mpmath.cospi(mpmath.mpf(2 * k) / order) for k in reps]
        for perm in permutations(others):
            targets = [pisot, *perm]
            v_matrix = mpmath.matrix(
                [[cos_vals[i] ** j for j in range(degree)] for i in range(degree)]
            )
            try:
                sol = mpmath.lu_solve(v_matrix, mpmath.matrix(targets))
            except ZeroDivisionError:
                continue
            ints = [int(mpmath.nint(s)) for s in sol]
            if any(abs(s - i) > 1e-20 for s, i in zip(sol, ints)):
                continue
            c = _omega_pair(order)
            beta = CyclotomicInt.zero(order)
            for j, coef in enumerate(ints):
                beta = beta + coef * (c**j)
            poly_val = CyclotomicInt.zero(order)
            for coef in reversed(min_poly):
                poly_val = poly_val * beta + coef
            if poly_val.is_zero() and abs(beta.embed().real - approx) < 1e-7:
                return beta
    raise ValueError(f"no Z[2cos(2pi/{order})] expression found for {min_poly}")


def _make_base(
    order: int,
    name: str,
    min_poly: tuple[int, ...],
    beta: CyclotomicInt | None,
    approx: float,
    expr_derived: bool = False,
) -> BaseSpec:
    if beta is None:
        beta = solve_subfield_expression(order, min_poly, approx)
        expr_derived = True
    return BaseSpec(
        order=order,
        name=name,
        beta=beta,
        min_poly=min_poly,
        conj_auts=_conjugation_exponents(order, beta),
        is_unit=abs(min_poly[0]) == 1,
        expr_derived=expr_derived,
    )


# Rows of the catalog: (order, name, approx value, min poly ascending,
# explicit beta expression or None to trigger the expression search).
_CATALOG_ROWS = (
    (5, "tau", 1.618033989, (-1, -1, 1), lambda: _one_plus_omega_pair(5)),
    (5, "tau2", 2.618033989, (1, -3, 1), lambda: _one_plus_omega_pair(5) + 1),
    (7, "lambda", 2.246979604, (1, -1, -2, 1), lambda: _one_plus_omega_pair(7)),
    (7, "4.048917340", 4.048917340, (-1, -4, -3, 1), None),
    (7, "5.048917340", 5.048917340, (-1, 5, -6, 1), None),
    (7, "20.44264896", 20.44264896, (-1, -9, -20, 1), None),
    (7, "21.44264896", 21.44264896, (-13, 34, -23, 1), None),
    (8, "delta", 2.414213562, (-1, -2, 1), lambda: _one_plus_omega_pair(8)),
    (8, "3.414213562", 3.414213562, (2, -4, 1), None),
    (9, "kappa", 2.879385242, (1, 0, -3, 1), None),
    (9, "7.290859369", 7.290859369, (-3, -9, -6, 1), None),
    (9, "8.290859369", 8.290859369, (-1, 6, -9, 1), None),
    (12, "mu", 2.732050808, (-2, -2, 1), lambda: _one_plus_omega_pair(12)),
    (12, "3.732050808", 3.732050808, (1, -4, 1), None),
)

# Expressions for the Delone spectrum cases at their alternate orders.
_ALTERNATE_CASES = {
    ("tau", 10): ((-1, -1, 1), 1.618033989, lambda: _omega_pair(10)),
    ("tau2", 10): ((1, -3, 1), 2.618033989, lambda: _one_plus_omega_pair(10)),
    ("lambda", 14): ((1, -1, -2, 1), 2.246979604, lambda: _one_plus_omega_pair(14, 2)),
    ("kappa", 18): ((1, 0, -3, 1), 2.879385242, lambda: _one_plus_omega_pair(18)),
}

# The eight spectrum cases with a relatively dense (Delone) spectrum.
DELONE_CASES = (
    ("tau", 5),
    ("tau", 10),
    ("tau2", 10),
    ("lambda", 7),
    ("lambda", 14),
    ("delta", 8),
    ("kappa", 18),
    ("mu", 12),
)


@lru_cache(maxsize=1)
def base_catalog() -> tuple[BaseSpec, ...]:
    """All quadratic and cubic Pisot-cyclotomic numbers, one row per number."""
    rows = []
    for order, name, approx, min_poly, expr in _CATALOG_ROWS:
        beta = expr() if expr is not None else None
        rows.append(_make_base(order, name, min_poly, beta, approx))
    return tuple(rows)


_NAME_ALIASES = {
    "tau": "tau",
    "τ": "tau",
    "tau2": "tau2",
    "tau^2": "tau2",
    "τ²": "tau2",
    "lambda": "lambda",
    "λ": "lambda",
    "delta": "delta",
    "δ": "delta",
    "kappa": "kappa",
    "κ": "kappa",
    "mu": "mu",
    "μ": "mu",
}


@lru_cache(maxsize=32)
def get_base(name: str, order: int | None = None) -> BaseSpec:
    """Look up a named base, optionally re-expressed at an alternate order."""
    key = _NAME_ALIASES.get(name)
    if key is None:
        raise ValueError(f"unknown base name {name!r}")
    catalog_row = next(b for b in base_catalog() if b.name == key)
    if order is None or order == catalog_row.order:
        return catalog_row
    alt = _ALTERNATE_CASES.get((key, order))
    if alt is None:
        raise ValueError(f"base {name!r} is not available at order {order}")
    min_poly, approx, expr = alt
    return _make_base(order, key, min_poly, expr(), approx)


def delone_bases() -> tuple[BaseSpec, ...]:
    return tuple(get_base(name, order) for name, order in DELONE_CASES)
