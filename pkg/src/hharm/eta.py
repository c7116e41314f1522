"""Splitting homogeneous polynomials on the first Heisenberg group into a
harmonic part plus a multiple of the polynomial gauge square |z|^2 + 4t.

The workhorse solves Delta((1 - g) q) = -Delta(p) for q of degree at most
deg(p) - 2, where g = |z|^2 + 4t.  Grading by homogeneous degree makes the
system block lower triangular (the degree-j output depends on q_j and
q_{j+2} only), so it falls to forward substitution over exactly invertible
diagonal blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .groups import heisenberg, sublaplacian
from .poly import Polynomial, monomial_basis


class SingularBlockError(RuntimeError):
    """A diagonal block failed to invert; reports where (degree, t-power)."""

    def __init__(self, degree, t_power):
        super().__init__(
            f"diagonal block at degree {degree} is singular near t-power {t_power}"
        )
        self.degree = degree
        self.t_power = t_power


def _spec():
    return heisenberg(1)


def eta_gauge_sq() -> Polynomial:
    """The polynomial gauge square x^2 + y^2 + 4t."""
    sig = _spec().signature
    return Polynomial(sig, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 1): 4})


def delta_monomial(a: int, b: int, c: int):
    """Sub-Laplacian of x^a y^b t^c as explicit (coefficient, exponents) shifts.

    Used for block assembly; unit tests compare it against the vector-field
    computation, and the solver's final recheck goes through that independent
    path as well.
    """
    out = []
    if a >= 2:
        out.append((a * (a - 1), (a - 2, b, c)))
    if b >= 2:
        out.append((b * (b - 1), (a, b - 2, c)))
    if c >= 1:
        if a >= 1:
            out.append((4 * a * c, (a - 1, b + 1, c - 1)))
        if b >= 1:
            out.append((-4 * b * c, (a + 1, b - 1, c - 1)))
    if c >= 2:
        shift = 4 * c * (c - 1)
        out.append((shift, (a, b + 2, c - 2)))
        out.append((shift, (a + 2, b, c - 2)))
    return out


def delta_fast(p: Polynomial) -> Polynomial:
    """Sub-Laplacian on h1 through the monomial shift table."""
    sig = _spec().signature
    acc: dict = {}
    for (a, b, c), v in p.terms.items():
        for coeff, exps in delta_monomial(a, b, c):
            acc[exps] = acc.get(exps, 0) + v * coeff
    return Polynomial(sig, acc)


def _diagonal_image(a, b, c):
    """Image of x^a y^b t^c under q -> -Delta(x^2 q) - Delta(y^2 q) - 4 Delta(t q),
    the degree-preserving diagonal of the forward-substitution system."""
    out: dict = {}
    for coeff, exps in delta_monomial(a + 2, b, c):
        out[exps] = out.get(exps, 0) - coeff
    for coeff, exps in delta_monomial(a, b + 2, c):
        out[exps] = out.get(exps, 0) - coeff
    for coeff, exps in delta_monomial(a, b, c + 1):
        out[exps] = out.get(exps, 0) - 4 * coeff
    return out


def t_shift_coefficient(a: int, b: int, c: int) -> Fraction:
    """Coefficient of x^a y^(b+2) t^(c-1) in -4 Delta(t * x^a y^b t^c).

    This is the entry the descending-t-power elimination pivots on; it equals
    -16 c (c+1).
    """
    target = (a, b + 2, c - 1)
    total = Fraction(0)
    for coeff, exps in delta_monomial(a, b, c + 1):
        if exps == target:
            total += -4 * coeff
    return total


def _block_key(sig, exps):
    # t-power descending, then canonical order
    return (-exps[2], sig.order_key(exps))


@dataclass
class DirichletBlock:
    """Diagonal block of the forward-substitution system at one degree."""

    degree: int
    monomials: tuple  # ordered by descending t-power, then canonically
    rows: list  # square matrix, rows/cols indexed by `monomials`

    def determinant(self) -> Fraction:
        return linalg.det(self.rows)


@lru_cache(maxsize=None)
def dirichlet_block(j: int) -> DirichletBlock:
    sig = _spec().signature
    monos = sorted(monomial_basis(sig, j), key=lambda e: _block_key(sig, e))
    index = {e: i for i, e in enumerate(monos)}
    n = len(monos)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for col, (a, b, c) in enumerate(monos):
        for exps, coeff in _diagonal_image(a, b, c).items():
            rows[index[exps]][col] = Fraction(coeff)
    return DirichletBlock(j, tuple(monos), rows)


@lru_cache(maxsize=None)
def _block_inverse(j: int):
    block = dirichlet_block(j)
    try:
        return linalg.inverse(block.rows)
    except linalg.SingularMatrixError as err:
        t_power = block.monomials[err.column][2] if err.column is not None else None
        raise SingularBlockError(j, t_power) from err


def solve_dirichlet_q(p: Polynomial) -> Polynomial:
    """Polynomial q of degree <= deg(p) - 2 with Delta((1 - g) q) = -Delta(p).

    Solved degree block by degree block from the top; the returned q is
    re-verified against the defining identity through the vector-field
    sub-Laplacian, which is independent of the assembly path.
    """
    spec = _spec()
    sig = spec.signature
    if p.signature != sig:
        raise ValueError("polynomial is not over the first Heisenberg group")
    m = p.degree()
    target = {d: -comp for d, comp in delta_fast(p).homogeneous_components().items()}
    q_parts: dict[int, Polynomial] = {}
    for j in range(m - 2, -1, -1):
        rhs = target.get(j, Polynomial.zero(sig))
        upper = q_parts.get(j + 2)
        if upper is not None:
            rhs = rhs - delta_fast(upper)
        if rhs.is_zero():
            continue
        block = dirichlet_block(j)
        inv = _block_inverse(j)
        vec = [rhs.coeff(e) for e in block.monomials]
        sol = [
            sum(inv[r][c] * vec[c] for c in range(len(vec)) if vec[c])
            for r in range(len(vec))
        ]
        q_parts[j] = Polynomial(
            sig, {block.monomials[i]: v for i, v in enumerate(sol) if v}
        )
    q = Polynomial.zero(sig)
    for part in q_parts.values():
        q = q + part

    one = Polynomial.constant(sig, 1)
    lhs = sublaplacian(spec, (one - eta_gauge_sq()) * q)
    if lhs != -sublaplacian(spec, p):
        raise InconsistentSolveError(
            "forward substitution produced a q violating the defining identity"
        )
    return q


class InconsistentSolveError(RuntimeError):
    pass


@dataclass
class DecompositionResult:
    """p = h + g * q with h harmonic homogeneous and g the gauge square."""

    h: Polynomial
    q: Polynomial


def decompose_once(p: Polynomial) -> DecompositionResult:
    """Split homogeneous p of degree m as h + g*q with h harmonic of degree m
    and q homogeneous of degree m-2."""
    spec = _spec()
    sig = spec.signature
    if p.signature != sig:
        raise ValueError("polynomial is not over the first Heisenberg group")
    if not p.is_homogeneous():
        raise ValueError("decomposition needs a homogeneous input; split it first")
    m = p.degree()
    if m < 2:
        return DecompositionResult(p, Polynomial.zero(sig))
    # uniqueness rests on the graded dimension count, so keep it checked
    from .harmonic import harmonic_basis

    dim_p = len(monomial_basis(sig, m))
    dim_h = len(harmonic_basis(spec, m))
    dim_prev = len(monomial_basis(sig, m - 2))
    if dim_p != dim_h + dim_prev:
        raise InconsistentSolveError(f"dimension count failed at degree {m}")

    q_full = solve_dirichlet_q(p)
    q = q_full.component(m - 2)
    h = p - eta_gauge_sq() * q
    if not sublaplacian(spec, h).is_zero():
        raise InconsistentSolveError(f"harmonic part at degree {m} fails the recheck")
    return DecompositionResult(h, q)


def decompose_full(p: Polynomial) -> list[Polynomial]:
    """Iterated splitting: chain [h_m, h_{m-2}, ...] with
    p = sum_j g^j * chain[j], each entry harmonic of degree m - 2j."""
    if not p.is_homogeneous():
        raise ValueError("decomposition needs a homogeneous input; split it first")
    if p.is_zero():
        return [p]
    chain = []
    current = p
    steps = p.degree() // 2 + 1
    for _ in range(steps):
        result = decompose_once(current)
        chain.append(result.h)
        current = result.q
    return chain
