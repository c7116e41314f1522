"""Koranyi-sphere chart, closed-form moments, quadrature and Gram machinery.

The unit gauge sphere |z|^4 + t^2 = 1 is charted by
(theta, psi) -> (sqrt(cos psi) cos theta, sqrt(cos psi) sin theta, sin psi),
under which the polar-coordinate volume element of the group becomes exactly
r^3 dr dtheta dpsi, so the sphere carries the flat measure dtheta dpsi.  That
claim is validated at runtime against an independent one-dimensional integral
for the unit ball volume before any Gram machinery runs.

Monomial moments split into a theta factor and a psi factor, each a Beta
value, evaluated in high-precision arithmetic; tensor quadrature (periodic
trapezoid in theta, Gauss-Legendre in psi) provides the numerical cross-check.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

from .groups import heisenberg, horizontal_norm_sq
from .harmonic import harmonic_basis
from .poly import Polynomial

_WEIGHTS = ("none", "horizontal")


def _check_weight(weight):
    if weight not in _WEIGHTS:
        raise ValueError(f"weight must be one of {_WEIGHTS}")


# -- closed-form moments -------------------------------------------------------


def sphere_moment(a: int, b: int, c: int, weight: str = "none", dps: int = 40):
    """High-precision value of the sphere integral of x^a y^b t^c.

    Odd parity in any variable kills the integral.  Otherwise it factors as

        [2 B((a+1)/2, (b+1)/2)] * [B((p+1)/2, (c+1)/2)],   p = (a+b)/2,

    with p bumped by one under the horizontal weight (which equals cos psi on
    the sphere).
    """
    _check_weight(weight)
    if a % 2 or b % 2 or c % 2:
        return mp.mpf(0)
    p = (a + b) // 2 + (1 if weight == "horizontal" else 0)
    with mp.workdps(dps):
        theta = 2 * mp.beta(mp.mpf(a + 1) / 2, mp.mpf(b + 1) / 2)
        psi = mp.beta(mp.mpf(p + 1) / 2, mp.mpf(c + 1) / 2)
        return theta * psi


class MomentTable:
    """Cache of unweighted monomial moments at a fixed working precision."""

    def __init__(self, dps: int = 40):
        self.dps = dps
        self._cache: dict = {}

    def value(self, a: int, b: int, c: int):
        key = (a, b, c)
        v = self._cache.get(key)
        if v is None:
            v = sphere_moment(a, b, c, dps=self.dps)
            self._cache[key] = v
        return v


def moment_exponents_upto(max_weighted_degree: int):
    out = []
    for c in range(max_weighted_degree // 2 + 1):
        rest = max_weighted_degree - 2 * c
        for a in range(rest + 1):
            for b in range(rest - a + 1):
                out.append((a, b, c))
    out.sort()
    return out


def ball_volume_oracle(dps: int = 40):
    """Unit gauge-ball volume from cylindrical shells: 2 pi * int 2R sqrt(1-R^4)."""
    with mp.workdps(dps):
        return 2 * mp.pi * mp.quad(lambda r: 2 * r * mp.sqrt(1 - r**4), [0, 1])


# -- chart and quadrature ------------------------------------------------------


def chart_point(theta: float, psi: float):
    root = math.sqrt(math.cos(psi))
    return (root * math.cos(theta), root * math.sin(theta), math.sin(psi))


def chart_point_mp(theta, psi):
    root = mp.sqrt(mp.cos(psi))
    return (root * mp.cos(theta), root * mp.sin(theta), mp.sin(psi))


@dataclass
class QuadratureRule:
    n_theta: int
    n_psi: int
    thetas: np.ndarray
    theta_weight: float
    psis: np.ndarray
    psi_weights: np.ndarray
    cos_psi: np.ndarray = field(init=False)

    def __post_init__(self):
        self.cos_psi = np.cos(self.psis)


def quadrature_rule(n_theta: int = 64, n_psi: int = 64) -> QuadratureRule:
    if n_theta < 2 or n_psi < 2:
        raise ValueError("quadrature sizes must be at least 2")
    thetas = np.arange(n_theta) * (2 * math.pi / n_theta)
    nodes, weights = np.polynomial.legendre.leggauss(n_psi)
    return QuadratureRule(
        n_theta=n_theta,
        n_psi=n_psi,
        thetas=thetas,
        theta_weight=2 * math.pi / n_theta,
        psis=nodes * (math.pi / 2),
        psi_weights=weights * (math.pi / 2),
    )


def grid_values(p: Polynomial, thetas: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Trace of p on the chart grid, shape (len(thetas), len(psis))."""
    root = np.sqrt(np.cos(psis))
    x = root[None, :] * np.cos(thetas)[:, None]
    y = root[None, :] * np.sin(thetas)[:, None]
    t = np.broadcast_to(np.sin(psis)[None, :], x.shape)
    if not p.terms:
        return np.zeros_like(x)
    amax = max(e[0] for e in p.terms)
    bmax = max(e[1] for e in p.terms)
    cmax = max(e[2] for e in p.terms)
    xp = _powers(x, amax)
    yp = _powers(y, bmax)
    tp = _powers(t, cmax)
    acc = np.zeros_like(x)
    for (a, b, c), coeff in p.sorted_terms():
        acc += float(coeff) * xp[a] * yp[b] * tp[c]
    return acc


def _powers(base: np.ndarray, top: int):
    out = [np.ones_like(base)]
    for _ in range(top):
        out.append(out[-1] * base)
    return out


def integrate_values(values: np.ndarray, rule: QuadratureRule, weight: str = "none") -> float:
    _check_weight(weight)
    w = rule.psi_weights
    if weight == "horizontal":
        w = w * rule.cos_psi  # |grad rho|^2 restricted to the sphere
    return float(np.sum(values * w[None, :]) * rule.theta_weight)


def integrate_poly(p: Polynomial, rule: QuadratureRule, weight: str = "none") -> float:
    return integrate_values(grid_values(p, rule.thetas, rule.psis), rule, weight)


# -- measure validation --------------------------------------------------------

_MEASURE_VALIDATED = False


def validate_measure(tol: float = 1e-9) -> None:
    """Check the flat chart measure against independent oracles once.

    Everything downstream (moments, Gram matrices, projections) rests on
    d(sigma) = dtheta dpsi; refuse to continue if the quadrature area, the
    shell-integral ball volume and the area = Q * volume relation disagree.
    """
    global _MEASURE_VALIDATED
    if _MEASURE_VALIDATED:
        return
    rule = quadrature_rule(64, 64)
    ones = np.ones((rule.n_theta, rule.n_psi))
    area = integrate_values(ones, rule)
    ball = float(ball_volume_oracle())
    expected_area = 2 * math.pi**2
    if abs(area - expected_area) > tol:
        raise RuntimeError(f"sphere area {area} deviates from 2*pi^2")
    if abs(ball - math.pi**2 / 2) > tol:
        raise RuntimeError(f"ball volume oracle {ball} deviates from pi^2/2")
    if abs(area - 4 * ball) > tol:
        raise RuntimeError("area != Q * ball volume; chart measure is wrong")
    _MEASURE_VALIDATED = True


# -- inner products ------------------------------------------------------------


def inner_product(
    f: Polynomial,
    g: Polynomial,
    method: str = "moments",
    weight: str = "none",
    rule: QuadratureRule | None = None,
    table: MomentTable | None = None,
) -> float:
    """Sphere inner product of two polynomial traces."""
    _check_weight(weight)
    if method == "moments":
        table = table or _default_table()
        prod = f * g
        if weight == "horizontal":
            prod = prod * horizontal_norm_sq(heisenberg(1))
        with mp.workdps(table.dps):
            total = mp.mpf(0)
            for (a, b, c), coeff in prod.sorted_terms():
                m = table.value(a, b, c)
                if m:
                    total += m * coeff.numerator / coeff.denominator
        return float(total)
    if method == "quadrature":
        rule = rule or _default_rule()
        vf = grid_values(f, rule.thetas, rule.psis)
        vg = grid_values(g, rule.thetas, rule.psis)
        return integrate_values(vf * vg, rule, weight)
    raise ValueError("method must be 'moments' or 'quadrature'")


@lru_cache(maxsize=4)
def _default_table(dps: int = 40) -> MomentTable:
    return MomentTable(dps)


@lru_cache(maxsize=4)
def _default_rule(n_theta: int = 96, n_psi: int = 80) -> QuadratureRule:
    return quadrature_rule(n_theta, n_psi)


# -- exact symmetry detection ----------------------------------------------------


@lru_cache(maxsize=None)
def _theta_fourier(a: int, b: int):
    """Exact Fourier coefficients of cos^a(theta) sin^b(theta).

    Returns {j: (re, im)} for the coefficient of e^(i j theta), over Fractions.
    """
    coeffs = {0: (Fraction(1), Fraction(0))}
    half = Fraction(1, 2)
    for _ in range(a):
        new: dict = {}
        for j, (re, im) in coeffs.items():
            for k in (j + 1, j - 1):
                r, i = new.get(k, (Fraction(0), Fraction(0)))
                new[k] = (r + re * half, i + im * half)
        coeffs = new
    for _ in range(b):
        new = {}
        for j, (re, im) in coeffs.items():
            r, i = new.get(j + 1, (Fraction(0), Fraction(0)))
            new[j + 1] = (r + im * half, i - re * half)
            r, i = new.get(j - 1, (Fraction(0), Fraction(0)))
            new[j - 1] = (r - im * half, i + re * half)
        coeffs = new
    return {j: c for j, c in coeffs.items() if c[0] or c[1]}


def theta_modes(p: Polynomial) -> frozenset:
    """Exact theta-Fourier support of the trace, as ("cos"|"sin", j) pairs.

    Terms with distinct t-powers pull back to linearly independent psi
    profiles, so contributions are collected per (mode, t-power) before
    deciding whether a mode is present.
    """
    acc: dict = {}
    for (a, b, c), coeff in p.terms.items():
        for j, (re, im) in _theta_fourier(a, b).items():
            if j < 0:
                continue
            r, i = acc.get((j, c), (Fraction(0), Fraction(0)))
            acc[(j, c)] = (r + coeff * re, i + coeff * im)
    support = set()
    for (j, _c), (re, im) in acc.items():
        if re:
            support.add(("cos", j))
        if im and j > 0:
            support.add(("sin", j))
    return frozenset(support)


def t_parity(p: Polynomial):
    """0 for even t-powers only, 1 for odd only, None when mixed or zero."""
    parities = {exps[2] % 2 for exps in p.terms}
    if len(parities) == 1:
        return parities.pop()
    return None


def symmetry_zero(f: Polynomial, g: Polynomial) -> bool:
    """True when the product integral vanishes for symmetry reasons alone:
    disjoint theta-Fourier support, or opposite definite t-parities."""
    pf, pg = t_parity(f), t_parity(g)
    if pf is not None and pg is not None and pf != pg:
        return True
    return theta_modes(f).isdisjoint(theta_modes(g))


# -- Gram matrices ---------------------------------------------------------------


@dataclass
class GramEntry:
    deg_i: int
    idx_i: int
    deg_j: int
    idx_j: int
    value: float
    symmetry_zero: bool

    def as_dict(self):
        return {
            "deg_i": self.deg_i,
            "idx_i": self.idx_i,
            "deg_j": self.deg_j,
            "idx_j": self.idx_j,
            "value": self.value,
            "symmetry_zero": self.symmetry_zero,
        }


@dataclass
class GramReport:
    max_degree: int
    method: str
    weight: str
    basis_sizes: list
    entries: list

    def summary(self):
        sym = [abs(e.value) for e in self.entries if e.symmetry_zero]
        cross = [
            abs(e.value)
            for e in self.entries
            if not e.symmetry_zero and e.deg_i != e.deg_j
        ]
        return {
            "basis_total": sum(self.basis_sizes),
            "pairs": len(self.entries),
            "max_abs_symmetry_zero": max(sym) if sym else 0.0,
            "max_abs_cross_degree_unflagged": max(cross) if cross else 0.0,
        }

    def as_dict(self):
        return {
            "max_degree": self.max_degree,
            "method": self.method,
            "weight": self.weight,
            "basis_sizes": self.basis_sizes,
            "pairs": [e.as_dict() for e in self.entries],
            "summary": self.summary(),
        }


def labeled_basis(max_degree: int):
    """Flat list of (degree, index, polynomial) across degrees 0..max_degree."""
    spec = heisenberg(1)
    out = []
    for m in range(max_degree + 1):
        for i, h in enumerate(harmonic_basis(spec, m)):
            out.append((m, i, h))
    return out


def gram_matrix(
    max_degree: int,
    method: str = "moments",
    weight: str = "none",
    n_theta: int = 96,
    n_psi: int = 80,
    dps: int = 40,
) -> GramReport:
    """All pairwise sphere inner products of the harmonic bases up to degree
    max_degree, with exact symmetry-zero flags."""
    validate_measure()
    basis = labeled_basis(max_degree)
    rule = quadrature_rule(n_theta, n_psi) if method == "quadrature" else None
    table = MomentTable(dps) if method == "moments" else None
    entries = []
    for i, (mi, ii, f) in enumerate(basis):
        for mj, ij, g in basis[i:]:
            value = inner_product(f, g, method=method, weight=weight, rule=rule, table=table)
            entries.append(GramEntry(mi, ii, mj, ij, value, symmetry_zero(f, g)))
    sizes = [len(harmonic_basis(heisenberg(1), m)) for m in range(max_degree + 1)]
    return GramReport(max_degree, method, weight, sizes, entries)


# -- projection onto harmonic traces ----------------------------------------------


@dataclass
class ProjectionResult:
    coefficients: list  # (degree, index, value)
    residual: float
    condition: float
    method: str
    weight: str
    refined: bool  # True when the rule was enlarged due to conditioning

    def as_dict(self):
        return {
            "coefficients": [
                {"degree": m, "index": i, "value": v} for m, i, v in self.coefficients
            ],
            "residual": self.residual,
            "condition": self.condition,
            "method": self.method,
            "weight": self.weight,
            "refined": self.refined,
        }


def project(
    p: Polynomial,
    max_degree: int,
    method: str = "moments",
    weight: str = "none",
    n_theta: int = 96,
    n_psi: int = 80,
    dps: int = 40,
    cond_limit: float = 1e12,
) -> ProjectionResult:
    """Least-squares representation of the trace of p in the span of harmonic
    traces up to max_degree; the residual is reported, never asserted."""
    validate_measure()
    basis = labeled_basis(max_degree)
    refined = False

    def assemble(ntheta, npsi):
        rule = quadrature_rule(ntheta, npsi) if method == "quadrature" else None
        table = MomentTable(dps) if method == "moments" else None
        n = len(basis)
        G = np.zeros((n, n))
        for i, (_, _, f) in enumerate(basis):
            for j in range(i, n):
                g = basis[j][2]
                G[i, j] = G[j, i] = inner_product(
                    f, g, method=method, weight=weight, rule=rule, table=table
                )
        b = np.array(
            [
                inner_product(f, p, method=method, weight=weight, rule=rule, table=table)
                for _, _, f in basis
            ]
        )
        pp = inner_product(p, p, method=method, weight=weight, rule=rule, table=table)
        return G, b, pp

    G, b, pp = assemble(n_theta, n_psi)
    condition = float(np.linalg.cond(G))
    if method == "quadrature" and condition > cond_limit:
        refined = True
        G, b, pp = assemble(2 * n_theta, 2 * n_psi)
        condition = float(np.linalg.cond(G))
    coeffs, *_ = np.linalg.lstsq(G, b, rcond=None)
    quad_form = float(pp - 2 * coeffs @ b + coeffs @ G @ coeffs)
    residual = math.sqrt(max(quad_form, 0.0))
    out = [
        (m, i, float(c)) for (m, i, _), c in zip(basis, coeffs)
    ]
    return ProjectionResult(out, residual, condition, method, weight, refined)


# -- radial derivative statistics ---------------------------------------------------


def radial_derivative_error(h: Polynomial, n_points: int = 100, seed: int = 0, dps: int = 30) -> float:
    """Max deviation |d/dr h(delta_r w)|_{r=1} - m h(w)| over random chart points.

    The derivative is a central finite difference taken in high-precision
    arithmetic, an oracle independent of the homogeneity bookkeeping.
    """
    rng = random.Random(seed)
    m = h.degree()
    worst = 0.0
    with mp.workdps(dps):
        delta = mp.mpf("1e-8")
        for _ in range(n_points):
            theta = rng.uniform(0, 2 * math.pi)
            psi = rng.uniform(-math.pi / 2, math.pi / 2)
            x, y, t = chart_point_mp(theta, psi)

            def at(r):
                return h.eval((r * x, r * y, r * r * t))

            derivative = (at(1 + delta) - at(1 - delta)) / (2 * delta)
            err = abs(derivative - m * at(mp.mpf(1)))
            worst = max(worst, float(err))
    return worst
