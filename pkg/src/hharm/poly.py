"""Sparse exact-rational polynomials graded by per-variable weights.

Monomials are bare exponent tuples; a :class:`Signature` fixes the variable
names and their weights, and every :class:`Polynomial` carries one.  The
canonical term order (weighted degree ascending, then exponent tuples in
descending lexicographic order) drives printing, monomial enumeration and
matrix assembly, so all downstream output is deterministic.
"""

from __future__ import annotations

from fractions import Fraction


class Signature:
    """Ordered list of weighted variables shared by a family of polynomials."""

    __slots__ = ("names", "weights", "aliases", "_index")

    def __init__(self, names, weights, aliases=None):
        self.names = tuple(names)
        self.weights = tuple(int(w) for w in weights)
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable name")
        if any(w < 1 for w in self.weights):
            raise ValueError("variable weights must be positive integers")
        self._index = {name: i for i, name in enumerate(self.names)}
        self.aliases = dict(aliases or {})
        for alias, target in self.aliases.items():
            if alias in self._index:
                raise ValueError(f"alias {alias!r} shadows a variable")
            self._index[alias] = self._index[target]

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, Signature)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        pairs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"Signature({pairs})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def wdeg(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def order_key(self, exps):
        # weighted degree first, then descending lexicographic on exponents
        return (self.wdeg(exps), tuple(-e for e in exps))


class Polynomial:
    """Sparse polynomial over Fraction; zero coefficients are never stored.

    Instances are treated as immutable: all operations return new objects and
    values are safe to share across threads and to use as cache keys.
    """

    __slots__ = ("signature", "terms", "_hash")

    def __init__(self, signature: Signature, terms=()):
        self.signature = signature
        n = len(signature)
        acc: dict[tuple, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != n or any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r}")
            coeff = Fraction(coeff)
            if coeff:
                prev = acc.get(exps)
                acc[exps] = coeff if prev is None else prev + coeff
        self.terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, signature):
        return cls(signature)

    @classmethod
    def constant(cls, signature, value):
        return cls(signature, [((0,) * len(signature), value)])

    @classmethod
    def variable(cls, signature, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else signature.index(name_or_index)
        exps = [0] * len(signature)
        exps[i] = 1
        return cls(signature, [(tuple(exps), 1)])

    @classmethod
    def monomial(cls, signature, exps, coeff=1):
        return cls(signature, [(tuple(exps), coeff)])

    # -- ring operations ---------------------------------------------------

    def _require_same(self, other):
        if self.signature != other.signature:
            raise ValueError("polynomials have different variable signatures")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._require_same(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Polynomial(self.signature, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Polynomial(self.signature, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._require_same(other)
            out: dict[tuple, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    s = out.get(e, 0) + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        out.pop(e, None)
            return Polynomial(self.signature, out)
        coeff = Fraction(other)
        return Polynomial(self.signature, {e: c * coeff for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.signature, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.signature == other.signature
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.signature, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        """Largest weighted degree present; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        w = self.signature.wdeg
        return max(w(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        w = self.signature.wdeg
        return len({w(e) for e in self.terms}) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        """Split into weighted-homogeneous pieces, keyed by degree."""
        w = self.signature.wdeg
        buckets: dict[int, dict] = {}
        for exps, c in self.terms.items():
            buckets.setdefault(w(exps), {})[exps] = c
        return {d: Polynomial(self.signature, t) for d, t in sorted(buckets.items())}

    def component(self, degree: int) -> "Polynomial":
        w = self.signature.wdeg
        return Polynomial(
            self.signature, {e: c for e, c in self.terms.items() if w(e) == degree}
        )

    def sorted_terms(self):
        key = self.signature.order_key
        return [(e, self.terms[e]) for e in sorted(self.terms, key=key)]

    # -- calculus / evaluation ----------------------------------------------

    def derivative(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self.signature.index(var)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                shifted = exps[:i] + (e - 1,) + exps[i + 1 :]
                out[shifted] = out.get(shifted, 0) + c * e
        return Polynomial(self.signature, out)

    def substitute(self, images) -> "Polynomial":
        """Compose with images[i] in place of variable i.

        All images must share one signature; the result lives there.
        """
        images = tuple(images)
        if len(images) != len(self.signature):
            raise ValueError("one image polynomial required per variable")
        target = images[0].signature
        result = Polynomial.zero(target)
        powers: dict[tuple, Polynomial] = {}

        def power(i, e):
            pw = powers.get((i, e))
            if pw is None:
                pw = images[i] ** e
                powers[(i, e)] = pw
            return pw

        for exps, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def eval(self, values):
        """Evaluate at a point; works for Fraction, float or mpmath inputs."""
        values = tuple(values)
        if len(values) != len(self.signature):
            raise ValueError("wrong number of coordinates")
        total = 0
        for exps, c in self.terms.items():
            v = 1
            for x, e in zip(values, exps):
                if e:
                    v = v * x**e
            total = total + v * c.numerator / c.denominator
        return total

    # -- divisibility and normal forms ---------------------------------------

    def exact_div(self, divisor: "Polynomial"):
        """Quotient self/divisor when the division is exact, else None."""
        self._require_same(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        key = self.signature.order_key
        dlead = max(divisor.terms, key=key)
        dcoeff = divisor.terms[dlead]
        rem = dict(self.terms)
        quo: dict[tuple, Fraction] = {}
        while rem:
            lead = max(rem, key=key)
            diff = tuple(a - b for a, b in zip(lead, dlead))
            if any(d < 0 for d in diff):
                return None
            factor = rem[lead] / dcoeff
            quo[diff] = factor
            for exps, c in divisor.terms.items():
                e = tuple(a + b for a, b in zip(diff, exps))
                s = rem.get(e, 0) - factor * c
                if s:
                    rem[e] = s
                else:
                    rem.pop(e, None)
        return Polynomial(self.signature, quo)

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive leading term."""
        if not self.terms:
            return self
        items = self.sorted_terms()
        den = 1
        for _, c in items:
            den = den * c.denominator // _gcd(den, c.denominator)
        nums = [int(c * den) for _, c in items]
        g = 0
        for v in nums:
            g = _gcd(g, abs(v))
        scale = Fraction(den, g)
        if items[0][1] < 0:
            scale = -scale
        return self * scale

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.signature.names
        pieces = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = body if sign == "+" else "-" + body
        for sign, body in pieces[1:]:
            out += sign + body
        return out

    def __repr__(self):
        return f"Polynomial({self!s})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def monomial_basis(signature: Signature, degree: int):
    """All exponent tuples of exact weighted degree, canonically ordered."""
    if degree < 0:
        return []
    n = len(signature)
    out = []

    def rec(i, rem, prefix):
        if i == n:
            if rem == 0:
                out.append(tuple(prefix))
            return
        w = signature.weights[i]
        for e in range(rem // w, -1, -1):
            prefix.append(e)
            rec(i + 1, rem - e * w, prefix)
            prefix.pop()

    rec(0, degree, [])
    out.sort(key=signature.order_key)
    return out


def random_homogeneous(signature, degree, rng, density=0.6, max_coeff=9):
    """Seeded random homogeneous polynomial, nonzero whenever the space is."""
    basis = monomial_basis(signature, degree)
    terms = []
    for exps in basis:
        if rng.random() < density:
            c = rng.randint(1, max_coeff) * rng.choice((1, -1))
            terms.append((exps, Fraction(c, rng.choice((1, 1, 1, 2, 4)))))
    if not terms and basis:
        terms.append((basis[rng.randrange(len(basis))], Fraction(1)))
    return Polynomial(signature, terms)


def random_polynomial(signature, max_degree, rng, density=0.5):
    parts = [
        random_homogeneous(signature, d, rng, density=density)
        for d in range(max_degree + 1)
        if rng.random() < 0.7
    ]
    total = Polynomial.zero(signature)
    for p in parts:
        total = total + p
    if total.is_zero():
        total = random_homogeneous(signature, max_degree, rng, density=density)
    return total
