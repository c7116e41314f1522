"""Stratified group presentations: group law, dilations, vector fields and
sub-Laplacians acting on polynomials.

Built-in Heisenberg presentations carry an exact polynomial group law; user
presentations loaded from JSON provide weighted variables and a horizontal
frame, with no attempt to verify left-invariance or bracket generation.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache

from .grammar import parse_poly
from .poly import Polynomial, Signature


class GroupLawUnavailable(ValueError):
    """The operation needs a polynomial group law this presentation lacks."""


class VectorField:
    """First-order operator sum_i a_i(x) d/dx_i with polynomial coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a vector field needs at least one coordinate")
        sig = self.coeffs[0].signature
        if any(c.signature != sig for c in self.coeffs) or len(self.coeffs) != len(sig):
            raise ValueError("coefficients must cover every variable of one signature")
        self._hash = None

    @property
    def signature(self):
        return self.coeffs[0].signature

    @classmethod
    def coordinate(cls, signature, index):
        coeffs = [Polynomial.zero(signature) for _ in signature.names]
        coeffs[index] = Polynomial.constant(signature, 1)
        return cls(coeffs)

    def apply(self, p: Polynomial) -> Polynomial:
        if p.signature != self.signature:
            raise ValueError("field and polynomial have different signatures")
        out = Polynomial.zero(self.signature)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = out + c * p.derivative(i)
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        return VectorField(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return VectorField(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return VectorField(c * scalar for c in self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        parts = [
            f"({c})*d/d{n}"
            for c, n in zip(self.coeffs, self.signature.names)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"


def commutator(f: VectorField, g: VectorField) -> VectorField:
    """[f, g] as a vector field; second-order parts cancel identically."""
    return VectorField(
        f.apply(gc) - g.apply(fc) for fc, gc in zip(f.coeffs, g.coeffs)
    )


class GroupSpec:
    """Weighted coordinates plus a horizontal frame, optionally a group law."""

    __slots__ = ("name", "signature", "horizontal", "law", "heisenberg_k", "_hash")

    def __init__(self, name, signature, horizontal, law=None, heisenberg_k=None):
        self.name = name
        self.signature = signature
        self.horizontal = tuple(horizontal)
        self.law = tuple(law) if law is not None else None
        self.heisenberg_k = heisenberg_k
        for f in self.horizontal:
            if f.signature != signature:
                raise ValueError("horizontal field has a foreign signature")
        if self.law is not None and len(self.law) != len(signature):
            raise ValueError("group law needs one polynomial per coordinate")
        self._hash = None

    @property
    def Q(self) -> int:
        """Homogeneous dimension: the sum of the variable weights."""
        return sum(self.signature.weights)

    def __eq__(self, other):
        return (
            isinstance(other, GroupSpec)
            and self.name == other.name
            and self.signature == other.signature
            and self.horizontal == other.horizontal
            and self.law == other.law
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.name, self.signature, self.horizontal))
        return self._hash

    def __repr__(self):
        return f"GroupSpec({self.name}, Q={self.Q}, fields={len(self.horizontal)})"


def doubled_signature(signature: Signature) -> Signature:
    """Signature with a primed copy (suffix ``_p``) of every variable."""
    names = signature.names + tuple(n + "_p" for n in signature.names)
    return Signature(names, signature.weights * 2)


@lru_cache(maxsize=None)
def heisenberg(k: int) -> GroupSpec:
    """Built-in Heisenberg presentation on 2k+1 weighted coordinates."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k == 1:
        names = ("x", "y", "t")
        aliases = {"x1": "x", "y1": "y"}
    else:
        names = tuple(f"x{j}" for j in range(1, k + 1)) + tuple(
            f"y{j}" for j in range(1, k + 1)
        ) + ("t",)
        aliases = None
    sig = Signature(names, (1,) * (2 * k) + (2,), aliases)
    t_index = 2 * k
    zero = Polynomial.zero(sig)
    two = Fraction(2)

    fields = []
    for j in range(k):
        xj = Polynomial.variable(sig, j)
        yj = Polynomial.variable(sig, k + j)
        cx = [zero] * (2 * k + 1)
        cx[j] = Polynomial.constant(sig, 1)
        cx[t_index] = two * yj
        fields.append(VectorField(cx))
        cy = [zero] * (2 * k + 1)
        cy[k + j] = Polynomial.constant(sig, 1)
        cy[t_index] = -two * xj
        fields.append(VectorField(cy))

    dsig = doubled_signature(sig)
    n = len(sig)
    law = []
    for i in range(n):
        law.append(Polynomial.variable(dsig, i) + Polynomial.variable(dsig, n + i))
    twist = Polynomial.zero(dsig)
    for j in range(k):
        xj = Polynomial.variable(dsig, j)
        yj = Polynomial.variable(dsig, k + j)
        xjp = Polynomial.variable(dsig, n + j)
        yjp = Polynomial.variable(dsig, n + k + j)
        twist = twist + two * (xjp * yj - xj * yjp)
    law[t_index] = law[t_index] + twist

    return GroupSpec(f"h{k}", sig, fields, law=law, heisenberg_k=k)


def load_group(source) -> GroupSpec:
    """Resolve a built-in name (``h1``, ``h2``, ...), a dict, or a JSON path."""
    if isinstance(source, GroupSpec):
        return source
    if isinstance(source, dict):
        return _group_from_dict(source)
    m = re.fullmatch(r"h(\d+)", str(source))
    if m:
        return heisenberg(int(m.group(1)))
    with open(source, "r", encoding="utf-8") as fh:
        return _group_from_dict(json.load(fh))


def _group_from_dict(data) -> GroupSpec:
    names = [v["name"] for v in data["variables"]]
    weights = [v["weight"] for v in data["variables"]]
    sig = Signature(names, weights)
    fields = []
    for coeff_strings in data["fields"]:
        if len(coeff_strings) != len(sig):
            raise ValueError("each field needs one coefficient per variable")
        fields.append(VectorField(parse_poly(s, sig) for s in coeff_strings))
    law = None
    if "law" in data and data["law"] is not None:
        dsig = doubled_signature(sig)
        law = [parse_poly(s, dsig) for s in data["law"]]
    return GroupSpec(data.get("name", "custom"), sig, fields, law=law)


# -- group operations --------------------------------------------------------


def identity_element(spec: GroupSpec):
    return tuple(Fraction(0) for _ in spec.signature.names)


def group_mul(spec: GroupSpec, g, h):
    """Product g*h through the polynomial group law."""
    if spec.law is None:
        raise GroupLawUnavailable(f"group law unavailable for {spec.name!r}")
    point = tuple(g) + tuple(h)
    return tuple(p.eval(point) for p in spec.law)


def group_inverse(spec: GroupSpec, g):
    """Inverse element; on Heisenberg groups this is plain negation."""
    if spec.heisenberg_k is None:
        raise GroupLawUnavailable("inverse formula only available for built-ins")
    return tuple(-c for c in g)


def left_translate(spec: GroupSpec, p: Polynomial, g) -> Polynomial:
    """Pullback p(g . x) by exact substitution of the group law."""
    if spec.law is None:
        raise GroupLawUnavailable(f"group law unavailable for {spec.name!r}")
    sig = spec.signature
    n = len(sig)
    g = tuple(Fraction(c) for c in g)
    # substitute the translating element into the unprimed slots of the law
    images = [Polynomial.constant(sig, c) for c in g]
    images += [Polynomial.variable(sig, i) for i in range(n)]
    coord_polys = [law_i.substitute(images) for law_i in spec.law]
    return p.substitute(coord_polys)


def dilate(p: Polynomial, lam) -> Polynomial:
    """Anisotropic scaling: each variable by lam^weight."""
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("dilation factor must be nonzero")
    w = p.signature.wdeg
    return Polynomial(p.signature, {e: c * lam ** w(e) for e, c in p.terms.items()})


def euler_field(spec: GroupSpec) -> VectorField:
    """Generator of the dilations: sum_i weight_i * x_i * d/dx_i."""
    sig = spec.signature
    return VectorField(
        Polynomial.variable(sig, i) * sig.weights[i] for i in range(len(sig))
    )


def rotation_field(spec: GroupSpec, j: int = 0) -> VectorField:
    """Rotation y_j d/dx_j - x_j d/dy_j in the j-th horizontal plane."""
    k = _require_heisenberg(spec)
    if not 0 <= j < k:
        raise ValueError(f"plane index out of range for {spec.name}")
    sig = spec.signature
    coeffs = [Polynomial.zero(sig)] * len(sig)
    coeffs[j] = Polynomial.variable(sig, k + j)
    coeffs[k + j] = -Polynomial.variable(sig, j)
    return VectorField(coeffs)


def vertical_field(spec: GroupSpec) -> VectorField:
    """The central direction d/dt on a Heisenberg presentation."""
    k = _require_heisenberg(spec)
    return VectorField.coordinate(spec.signature, 2 * k)


def sublaplacian(spec: GroupSpec, p: Polynomial) -> Polynomial:
    """Sum of squares of the horizontal frame applied to p."""
    out = Polynomial.zero(spec.signature)
    for f in spec.horizontal:
        out = out + f.apply(f.apply(p))
    return out


def sublaplacian_decomposed(spec: GroupSpec, p: Polynomial) -> Polynomial:
    """Heisenberg sub-Laplacian through its flat-plus-rotation-plus-vertical
    split; an independent computation used to cross-check `sublaplacian`."""
    k = _require_heisenberg(spec)
    sig = spec.signature
    t_index = 2 * k
    flat = Polynomial.zero(sig)
    for i in range(2 * k):
        flat = flat + p.derivative(i).derivative(i)
    pt = p.derivative(t_index)
    rot = Polynomial.zero(sig)
    for j in range(k):
        xj = Polynomial.variable(sig, j)
        yj = Polynomial.variable(sig, k + j)
        rot = rot + yj * pt.derivative(j) - xj * pt.derivative(k + j)
    ptt = pt.derivative(t_index)
    return flat + 4 * rot + 4 * horizontal_norm_sq(spec) * ptt


def horizontal_norm_sq(spec: GroupSpec) -> Polynomial:
    """|z|^2 = sum_j x_j^2 + y_j^2 on a Heisenberg presentation."""
    k = _require_heisenberg(spec)
    sig = spec.signature
    out = Polynomial.zero(sig)
    for i in range(2 * k):
        v = Polynomial.variable(sig, i)
        out = out + v * v
    return out


def koranyi_gauge4(spec: GroupSpec) -> Polynomial:
    """Fourth power of the Koranyi gauge: (|z|^2)^2 + t^2."""
    k = _require_heisenberg(spec)
    zsq = horizontal_norm_sq(spec)
    t = Polynomial.variable(spec.signature, 2 * k)
    return zsq * zsq + t * t


def koranyi_norm(spec: GroupSpec, point) -> float:
    """Numeric gauge value at a point."""
    value = float(koranyi_gauge4(spec).eval([float(c) for c in point]))
    return value ** 0.25


def _require_heisenberg(spec: GroupSpec) -> int:
    if spec.heisenberg_k is None:
        raise ValueError(f"{spec.name!r} is not a built-in Heisenberg presentation")
    return spec.heisenberg_k
