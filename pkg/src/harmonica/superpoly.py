"""The polynomial superalgebra Q[x_1..x_n, y_1..y_n] (x) Wedge(th_1..th_n).

Monomials carry two exponent vectors and a strictly increasing tuple of odd
(exterior) indices; the product of odd generators anticommutes, so every
product picks up the usual Koszul sign.  S_n acts by permuting the x, y and
odd variables simultaneously.  First-order super differential operators are
kept as formal sums of (coefficient, multiplication word, derivation word)
terms with derivations to the right of multiplications.

The fixed monomial order is: odd index tuples compared lexicographically,
then exponent vectors (x_1,..,x_n,y_1,..,y_n) compared lexicographically
with larger exponents first.  Every deterministic choice downstream (basis
enumeration, quotient representatives, rendering) derives from this order.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterable, NamedTuple, Optional

MONOMIAL_ORDER_ID = "oddlex-then-xylex-desc-v1"


class TriDegree(NamedTuple):
    dx: int
    dy: int
    da: int

    def __str__(self):
        return f"({self.dx},{self.dy},{self.da})"


class Monomial(NamedTuple):
    xe: tuple  # x exponents, length n
    ye: tuple  # y exponents, length n
    odd: tuple  # strictly increasing 0-based odd indices

    @property
    def n(self) -> int:
        return len(self.xe)

    def tridegree(self) -> TriDegree:
        return TriDegree(sum(self.xe), sum(self.ye), len(self.odd))

    def sort_key(self):
        return (
            self.odd,
            tuple(-e for e in self.xe),
            tuple(-e for e in self.ye),
        )


def perm_sign(sigma) -> int:
    """Sign of a permutation given as a tuple of images."""
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def _sort_sign(seq) -> tuple:
    """Sort a sequence of distinct ints, returning (sorted tuple, sign)."""
    items = list(seq)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


def monomial_mul(a: Monomial, b: Monomial):
    """Product of monomials: (result, Koszul sign) or (None, 0) if it dies."""
    if set(a.odd) & set(b.odd):
        return None, 0
    # Sign of interleaving b's odd factors past a's.
    sign = 1
    for s in a.odd:
        for t in b.odd:
            if s > t:
                sign = -sign
    odd = tuple(sorted(a.odd + b.odd))
    xe = tuple(p + q for p, q in zip(a.xe, b.xe))
    ye = tuple(p + q for p, q in zip(a.ye, b.ye))
    return Monomial(xe, ye, odd), sign


class Polynomial:
    """Sparse element of the superalgebra: map from Monomial to Fraction."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            f = Fraction(c)
            if f != 0:
                clean[m] = f
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls(n, {unit_monomial(n): Fraction(1)})

    @classmethod
    def x(cls, n: int, i: int, power: int = 1) -> "Polynomial":
        xe = tuple(power if j == i else 0 for j in range(n))
        return cls(n, {Monomial(xe, (0,) * n, ()): Fraction(1)})

    @classmethod
    def y(cls, n: int, i: int, power: int = 1) -> "Polynomial":
        ye = tuple(power if j == i else 0 for j in range(n))
        return cls(n, {Monomial((0,) * n, ye, ()): Fraction(1)})

    @classmethod
    def odd_var(cls, n: int, i: int) -> "Polynomial":
        return cls(n, {Monomial((0,) * n, (0,) * n, (i,)): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, coeff=1) -> "Polynomial":
        return cls(m.n, {m: Fraction(coeff)})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.n, terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, a) -> "Polynomial":
        a = Fraction(a)
        if a == 0:
            return Polynomial(self.n)
        return Polynomial(self.n, {m: a * c for m, c in self.terms.items()})

    def __rmul__(self, a):
        return self.scale(a)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Polynomial"):
        if self.n != other.n:
            raise ValueError(f"mixed variable counts {self.n} and {other.n}")

    # -- grading -----------------------------------------------------------

    def tridegree(self) -> Optional[TriDegree]:
        """TriDegree if homogeneous, else None (zero counts as homogeneous)."""
        degs = {m.tridegree() for m in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else TriDegree(0, 0, 0)

    def homogeneous_components(self) -> dict:
        out: dict = {}
        for m, c in self.terms.items():
            out.setdefault(m.tridegree(), {})[m] = c
        return {d: Polynomial(self.n, t) for d, t in sorted(out.items())}

    def __repr__(self):
        return f"Polynomial({render(self)})"


def unit_monomial(n: int) -> Monomial:
    return Monomial((0,) * n, (0,) * n, ())


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    """Superalgebra product; odd generators anticommute and square to zero."""
    p._check(q)
    terms: dict = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m, sign = monomial_mul(m1, m2)
            if m is None:
                continue
            s = terms.get(m, 0) + sign * c1 * c2
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
    return Polynomial(p.n, terms)


def act(sigma, p: Polynomial) -> Polynomial:
    """Action of a permutation (tuple of images) on x, y and odd variables."""
    n = p.n
    if sorted(sigma) != list(range(n)):
        raise ValueError("not a permutation of range(n)")
    terms: dict = {}
    for m, c in p.terms.items():
        xe = [0] * n
        ye = [0] * n
        for i in range(n):
            xe[sigma[i]] = m.xe[i]
            ye[sigma[i]] = m.ye[i]
        odd, sign = _sort_sign(sigma[t] for t in m.odd)
        new = Monomial(tuple(xe), tuple(ye), odd)
        s = terms.get(new, 0) + sign * c
        if s == 0:
            terms.pop(new, None)
        else:
            terms[new] = s
    return Polynomial(n, terms)


def alt(p: Polynomial) -> Polynomial:
    """Antisymmetrization (1/n!) sum sgn(s) s(p); an idempotent projector."""
    n = p.n
    out = Polynomial.zero(n)
    for sigma in permutations(range(n)):
        out = out + act(sigma, p).scale(perm_sign(sigma))
    return out.scale(Fraction(1, factorial(n)))


def sym(p: Polynomial) -> Polynomial:
    """Symmetrization (1/n!) sum s(p); an idempotent projector."""
    n = p.n
    out = Polynomial.zero(n)
    for sigma in permutations(range(n)):
        out = out + act(sigma, p)
    return out.scale(Fraction(1, factorial(n)))


# -- differential operators -------------------------------------------------


class OpTerm(NamedTuple):
    coeff: Fraction
    mult: Monomial  # multiplied in from the left
    dx: tuple  # orders of d/dx_i
    dy: tuple  # orders of d/dy_i
    odd_ann: tuple  # odd annihilators, increasing; the last one acts first


class DiffOperator:
    """Formal sum of first-order-style super differential operator terms.

    Each term is canonical with all derivations to the right of the
    multiplication word, i.e. a term acts as f -> coeff * mult * (deriv f).
    """

    __slots__ = ("n", "ops")

    def __init__(self, n: int, ops: Iterable[OpTerm]):
        self.n = n
        self.ops = tuple(op for op in ops if op.coeff != 0)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        if self.n != other.n:
            raise ValueError("mixed variable counts")
        return DiffOperator(self.n, self.ops + other.ops)

    def scale(self, a) -> "DiffOperator":
        a = Fraction(a)
        return DiffOperator(
            self.n, [OpTerm(a * t.coeff, t.mult, t.dx, t.dy, t.odd_ann) for t in self.ops]
        )

    def __repr__(self):
        return f"DiffOperator(n={self.n}, {len(self.ops)} terms)"


def _falling(e: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= e - j
    return out


def _apply_term(term: OpTerm, m: Monomial, c: Fraction, acc: dict) -> None:
    coeff = term.coeff * c
    # Even derivatives.
    xe = list(m.xe)
    ye = list(m.ye)
    for i, k in enumerate(term.dx):
        if k:
            if xe[i] < k:
                return
            coeff *= _falling(xe[i], k)
            xe[i] -= k
    for i, k in enumerate(term.dy):
        if k:
            if ye[i] < k:
                return
            coeff *= _falling(ye[i], k)
            ye[i] -= k
    # Odd annihilators; the last listed acts first.
    odd = list(m.odd)
    sign = 1
    for t in reversed(term.odd_ann):
        if t not in odd:
            return
        pos = odd.index(t)
        if pos % 2:
            sign = -sign
        odd.pop(pos)
    derived = Monomial(tuple(xe), tuple(ye), tuple(odd))
    out, msign = monomial_mul(term.mult, derived)
    if out is None:
        return
    total = coeff * sign * msign
    s = acc.get(out, 0) + total
    if s == 0:
        acc.pop(out, None)
    else:
        acc[out] = s


def apply_op(op: DiffOperator, p: Polynomial) -> Polynomial:
    """Apply a differential operator; Q-linear in p."""
    if op.n != p.n:
        raise ValueError("mixed variable counts")
    acc: dict = {}
    for term in op.ops:
        for m, c in p.terms.items():
            _apply_term(term, m, c, acc)
    return Polynomial(p.n, acc)


def _unit_exp(n: int, i: int, k: int = 1) -> tuple:
    return tuple(k if j == i else 0 for j in range(n))


def _zero_exp(n: int) -> tuple:
    return (0,) * n


def op_zero(n: int) -> DiffOperator:
    return DiffOperator(n, [])


def op_F(n: int, k: int) -> DiffOperator:
    """F_k = sum_i x_i^k d/dy_i; shifts tridegree by (+k, -1, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_unit_exp(n, i, k), _zero_exp(n), ()), _zero_exp(n), _unit_exp(n, i), ())
            for i in range(n)
        ],
    )


def op_E(n: int, k: int) -> DiffOperator:
    """E_k = sum_i y_i^k d/dx_i; shifts tridegree by (-1, +k, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_zero_exp(n), _unit_exp(n, i, k), ()), _unit_exp(n, i), _zero_exp(n), ())
            for i in range(n)
        ],
    )


def op_F_star(n: int, k: int) -> DiffOperator:
    """F_k^* = sum_i y_i (d/dx_i)^k; shifts tridegree by (-k, +1, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_zero_exp(n), _unit_exp(n, i), ()), _unit_exp(n, i, k), _zero_exp(n), ())
            for i in range(n)
        ],
    )


def op_E_star(n: int, k: int) -> DiffOperator:
    """E_k^* = sum_i x_i (d/dy_i)^k; shifts tridegree by (+1, -k, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_unit_exp(n, i), _zero_exp(n), ()), _zero_exp(n), _unit_exp(n, i, k), ())
            for i in range(n)
        ],
    )


def op_d(n: int, N: int) -> DiffOperator:
    """d_N = sum_i th_i^* x_i^N; odd, shifts tridegree by (+N, 0, -1)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_unit_exp(n, i, N), _zero_exp(n), ()), _zero_exp(n), _zero_exp(n), (i,))
            for i in range(n)
        ],
    )


def op_d_star(n: int, N: int) -> DiffOperator:
    """d_N^* = sum_i th_i (d/dx_i)^N; odd, shifts tridegree by (-N, 0, +1)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_zero_exp(n), _zero_exp(n), (i,)), _unit_exp(n, i, N), _zero_exp(n), ())
            for i in range(n)
        ],
    )


def op_wedge_omega(n: int, N: int) -> DiffOperator:
    """Left wedge with sum_i x_i^N th_i; shifts tridegree by (+N, 0, +1)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), Monomial(_unit_exp(n, i, N), _zero_exp(n), (i,)), _zero_exp(n), _zero_exp(n), ())
            for i in range(n)
        ],
    )


def op_hamiltonian(n: int, a: int, b: int) -> DiffOperator:
    """Vector field of x^a y^b: sum_i (a x^(a-1) y^b d/dy - b x^a y^(b-1) d/dx).

    Shifts tridegree by (a-1, b-1, 0); requires a + b >= 1.
    """
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 with a + b >= 1")
    ops = []
    for i in range(n):
        if a:
            xe = _unit_exp(n, i, a - 1) if a > 1 else _zero_exp(n)
            ops.append(
                OpTerm(Fraction(a), Monomial(xe, _unit_exp(n, i, b), ()), _zero_exp(n), _unit_exp(n, i), ())
            )
        if b:
            ye = _unit_exp(n, i, b - 1) if b > 1 else _zero_exp(n)
            ops.append(
                OpTerm(Fraction(-b), Monomial(_unit_exp(n, i, a), ye, ()), _unit_exp(n, i), _zero_exp(n), ())
            )
    return DiffOperator(n, ops)


def op_partial_x(n: int, i: int) -> DiffOperator:
    return DiffOperator(n, [OpTerm(Fraction(1), unit_monomial(n), _unit_exp(n, i), _zero_exp(n), ())])


def op_partial_y(n: int, i: int) -> DiffOperator:
    return DiffOperator(n, [OpTerm(Fraction(1), unit_monomial(n), _zero_exp(n), _unit_exp(n, i), ())])


def op_odd_ann(n: int, i: int) -> DiffOperator:
    """The odd left derivation dual to th_i."""
    return DiffOperator(n, [OpTerm(Fraction(1), unit_monomial(n), _zero_exp(n), _zero_exp(n), (i,))])


def op_power_sum_deriv(n: int, a: int, b: int) -> DiffOperator:
    """p_{a,b} with every variable replaced by its derivative."""
    if a + b < 1:
        raise ValueError("need a + b >= 1")
    return DiffOperator(
        n,
        [
            OpTerm(Fraction(1), unit_monomial(n), _unit_exp(n, i, a), _unit_exp(n, i, b), ())
            for i in range(n)
        ],
    )


# -- pairing ----------------------------------------------------------------


def monomial_pair_weight(m: Monomial) -> int:
    w = 1
    for e in m.xe:
        w *= factorial(e)
    for e in m.ye:
        w *= factorial(e)
    return w


def pairing(f: Polynomial, g: Polynomial, extended: bool = False) -> Fraction:
    """<f, g> = f with variables replaced by derivatives, applied to g, at 0.

    Defined on the even part; the monomial basis is orthogonal with weight
    prod(e!) over all exponents.  With extended=True the odd generators are
    declared orthonormal (th_i paired with its annihilator), which is used
    only for duality checks on hook-type components.
    """
    f._check(g)
    if not extended:
        for m in list(f.terms) + list(g.terms):
            if m.odd:
                raise ValueError("pairing defined on odd-degree-zero input; pass extended=True")
    total = Fraction(0)
    for m, c in f.terms.items():
        d = g.terms.get(m)
        if d:
            total += c * d * monomial_pair_weight(m)
    return total


def vandermonde(var: str, n: int) -> Polynomial:
    """Product of all pairwise differences of the chosen variable family."""
    if var not in ("x", "y"):
        raise ValueError("var must be 'x' or 'y'")
    make = Polynomial.x if var == "x" else Polynomial.y
    out = Polynomial.one(n)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (make(n, i) - make(n, j))
    return out


# -- enumeration and rendering ----------------------------------------------


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to total, lex descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def monomials_bidegree(n: int, dx: int, dy: int) -> list:
    """Even monomials of the bidegree, in the canonical column order."""
    out = [
        Monomial(xe, ye, ())
        for xe in compositions(dx, n)
        for ye in compositions(dy, n)
    ]
    out.sort(key=Monomial.sort_key)
    return out


def subsets_of_size(n: int, k: int) -> list:
    from itertools import combinations

    return [tuple(c) for c in combinations(range(n), k)]


def monomials_tridegree(n: int, deg: TriDegree) -> list:
    """Monomials of a tridegree, in the canonical column order."""
    out = [
        Monomial(xe, ye, odd)
        for odd in subsets_of_size(n, deg.da)
        for xe in compositions(deg.dx, n)
        for ye in compositions(deg.dy, n)
    ]
    out.sort(key=Monomial.sort_key)
    return out


def _render_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m.xe):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    for i, e in enumerate(m.ye):
        if e == 1:
            parts.append(f"y{i + 1}")
        elif e > 1:
            parts.append(f"y{i + 1}^{e}")
    for t in m.odd:
        parts.append(f"th{t + 1}")
    return "*".join(parts)


def render(p: Polynomial) -> str:
    """Canonical text form: monomials in the fixed order, explicit signs."""
    if not p.terms:
        return "0"
    chunks = []
    for m in sorted(p.terms, key=Monomial.sort_key):
        c = p.terms[m]
        body = _render_monomial(m)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not chunks:
            chunks.append(text if c > 0 else f"-{text}")
        else:
            chunks.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(chunks)
