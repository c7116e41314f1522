"""Exact calculus on finite sums p * rho^s for the Koranyi gauge.

rho^4 equals the polynomial R = (|z|^2)^2 + t^2, so exponents only matter
mod 4.  The normal form keeps one polynomial per residue class mod 4, with
the exponent pushed up to the class representative in {0,1,2,3} whenever the
polynomial part divides by R, and never above it.  An expression is zero iff
every class polynomial is zero: 1, rho, rho^2, rho^3 are linearly independent
over the rational function field because X^4 - R is the minimal polynomial of
rho (R is not a perfect square in the polynomial ring).
"""

from __future__ import annotations

from fractions import Fraction

from .groups import (
    GroupSpec,
    VectorField,
    heisenberg,
    horizontal_norm_sq,
    koranyi_gauge4,
    rotation_field,
    sublaplacian,
)
from .poly import Polynomial


class GaugeExpr:
    """Finite sum of terms p * rho^s with polynomial p and integer s."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: GroupSpec, terms=()):
        if spec.heisenberg_k is None:
            raise ValueError("gauge calculus is restricted to Heisenberg presentations")
        self.spec = spec
        raw = terms.items() if isinstance(terms, dict) else terms
        self.terms = _normalize(spec, raw)

    # -- constructors ------------------------------------------------------

    @classmethod
    def of_poly(cls, spec, p, s: int = 0):
        if not isinstance(p, Polynomial):
            p = Polynomial.constant(spec.signature, p)
        return cls(spec, [(int(s), p)])

    @classmethod
    def rho_power(cls, spec, s: int):
        return cls.of_poly(spec, 1, s)

    # -- ring structure ----------------------------------------------------

    def _require_same(self, other):
        if self.spec != other.spec:
            raise ValueError("gauge expressions live over different groups")

    def __add__(self, other):
        if isinstance(other, GaugeExpr):
            self._require_same(other)
            return GaugeExpr(
                self.spec, list(self.terms.items()) + list(other.terms.items())
            )
        return self + GaugeExpr.of_poly(self.spec, other)

    def __sub__(self, other):
        return self + (-other if isinstance(other, GaugeExpr) else -1 * other)

    def __neg__(self):
        return GaugeExpr(self.spec, [(s, -p) for s, p in self.terms.items()])

    def __mul__(self, other):
        if isinstance(other, GaugeExpr):
            self._require_same(other)
            prods = []
            for s1, p1 in self.terms.items():
                for s2, p2 in other.terms.items():
                    prods.append((s1 + s2, p1 * p2))
            return GaugeExpr(self.spec, prods)
        return GaugeExpr(self.spec, [(s, p * other) for s, p in self.terms.items()])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, GaugeExpr)
            and self.spec == other.spec
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    # -- analysis ----------------------------------------------------------

    def apply(self, field: VectorField) -> "GaugeExpr":
        """Derivation along a polynomial vector field, via the chain rule
        X(rho^s) = (s/4) rho^(s-4) X(R)."""
        R = koranyi_gauge4(self.spec)
        XR = field.apply(R)
        new = []
        for s, p in self.terms.items():
            new.append((s, field.apply(p)))
            if s != 0:
                new.append((s - 4, p * XR * Fraction(s, 4)))
        return GaugeExpr(self.spec, new)

    def sublaplacian(self) -> "GaugeExpr":
        """Horizontal sum of squares, applied term by term."""
        out = GaugeExpr(self.spec)
        for f in self.spec.horizontal:
            out = out + self.apply(f).apply(f)
        return out

    def degrees(self) -> set:
        """Homogeneous degrees present (polynomial degree plus exponent)."""
        out = set()
        for s, p in self.terms.items():
            for d in p.homogeneous_components():
                out.add(d + s)
        return out

    def evaluate(self, point) -> float:
        """Numeric value at a point with positive gauge."""
        rho4 = float(koranyi_gauge4(self.spec).eval([float(c) for c in point]))
        if rho4 <= 0:
            raise ValueError("gauge vanishes at the requested point")
        rho = rho4 ** 0.25
        return sum(float(p.eval(point)) * rho**s for s, p in self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for s in sorted(self.terms):
            p = self.terms[s]
            if s == 0:
                parts.append(f"({p})")
            else:
                parts.append(f"({p})*rho^{s}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GaugeExpr({self!s})"


def _normalize(spec, raw):
    R = koranyi_gauge4(spec)
    by_class: dict[int, list] = {}
    for s, p in raw:
        if not p.is_zero():
            by_class.setdefault(s % 4, []).append((int(s), p))
    out: dict[int, Polynomial] = {}
    rpow = {0: Polynomial.constant(spec.signature, 1)}
    for r, items in sorted(by_class.items()):
        e = min(min(s for s, _ in items), r)
        total = Polynomial.zero(spec.signature)
        for s, p in items:
            k = (s - e) // 4
            if k not in rpow:
                rpow[k] = R**k
            total = total + p * rpow[k]
        while not total.is_zero() and e + 4 <= r:
            q = total.exact_div(R)
            if q is None:
                break
            total, e = q, e + 4
        if not total.is_zero():
            out[e] = total
    return out


def gradient_sq(spec: GroupSpec) -> GaugeExpr:
    """Squared horizontal gradient of the gauge, sum_j (X_j rho)^2."""
    R = koranyi_gauge4(spec)
    out = GaugeExpr(spec)
    quarter = Fraction(1, 4)
    for f in spec.horizontal:
        d = GaugeExpr.of_poly(spec, f.apply(R) * quarter, -3)
        out = out + d * d
    return out


def radial_coefficient_residual(spec: GroupSpec) -> GaugeExpr:
    """(2-Q)(1-Q)|grad rho|^2 + (2-Q) rho * (Delta rho); zero iff the
    first-derivative coefficient of the radial sub-Laplacian closes."""
    Q = spec.Q
    rho = GaugeExpr.rho_power(spec, 1)
    return (2 - Q) * (1 - Q) * gradient_sq(spec) + (2 - Q) * rho * rho.sublaplacian()


def eigen_residual(h: Polynomial) -> GaugeExpr:
    """Residual of the weighted spherical eigenvalue identity on the first
    Heisenberg group:

        Delta(rho^-m h) + m rho^(-m-4) [(m+2)|z|^2 h + 2 t (rot h)]

    which vanishes exactly for homogeneous harmonic h of degree m.
    """
    spec = heisenberg(1)
    _check_harmonic_input(spec, h)
    if h.is_zero():
        return GaugeExpr(spec)
    m = h.degree()
    omega = rotation_field(spec)
    t = Polynomial.variable(spec.signature, 2)
    correction = (m + 2) * horizontal_norm_sq(spec) * h + 2 * t * omega.apply(h)
    lhs = GaugeExpr.of_poly(spec, h, -m).sublaplacian()
    return lhs + GaugeExpr.of_poly(spec, m * correction, -m - 4)


def unweighted_eigen_residual(h: Polynomial) -> GaugeExpr:
    """Residual of the bare angular eigenvalue form

        Delta(rho^-m h) + m(m+2) rho^(-m-2) h

    This is reported, never asserted: it carries no horizontal weight and is
    generally nonzero even for harmonic h (compare `eigen_residual`).
    """
    spec = heisenberg(1)
    _check_harmonic_input(spec, h)
    if h.is_zero():
        return GaugeExpr(spec)
    m = h.degree()
    lhs = GaugeExpr.of_poly(spec, h, -m).sublaplacian()
    return lhs + GaugeExpr.of_poly(spec, m * (m + 2) * h, -m - 2)


def _check_harmonic_input(spec, h):
    if h.signature != spec.signature:
        raise ValueError("polynomial is not over the first Heisenberg group")
    if not h.is_homogeneous():
        raise ValueError("polynomial must be homogeneous")
    if not sublaplacian(spec, h).is_zero():
        raise ValueError("polynomial is not harmonic")
