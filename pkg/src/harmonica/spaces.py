"""Graded spaces: coinvariant quotients, harmonic subspaces, isotypic parts.

Every space is presented piece by piece in the canonical monomial basis of
each tridegree.  Quotients store, per tridegree, the unique reduced
row-echelon form of their relation subspace together with the complementary
(non-pivot) representative monomials; subspaces store canonical echelon
bases.  Construction is staged so that elimination always happens in small
coordinates:

* the invariant ideal is row-reduced one variable family at a time (the
  pure-x and pure-y generators give a tensor-product presentation), and only
  the genuinely mixed generators are reduced in the small product quotient;
* the odd (hook) quotients reuse the even presentation per odd index set,
  then add the wedge relations of th_1+..+th_n and the sign projector rows;
* harmonic pieces start from the tensor product of single-family harmonic
  kernels and intersect with the kernels of the mixed derivative operators.

The composite still yields the canonical reduced echelon form over the full
monomial basis: every stage pivots on the leading surviving column, so the
assembled rows are exactly the RREF rows of the total relation space.

Total degrees are scanned upward and enumeration stops once two consecutive
total degrees contribute nothing (hard cap dx+dy <= n(n-1)); completeness is
certified downstream by the closed-form total dimensions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Dict, List, Optional, Tuple

from .linalg import RrefAccumulator, SparseMatrix, Vec, vec_add_scaled
from .superpoly import (
    Monomial,
    Polynomial,
    TriDegree,
    act,
    alt,
    compositions,
    monomials_tridegree,
    perm_sign,
    subsets_of_size,
)

DEFAULT_CAP = 4
HARD_CAP = 5


class ResourceCapExceeded(Exception):
    """Raised when a space build beyond the configured cap is requested."""


def _check_cap(n: int, allow_large: bool):
    if n < 2:
        raise ValueError("spaces are defined for n >= 2")
    if n >= 6:
        raise ResourceCapExceeded(f"n={n} is out of scope (hard limit n <= {HARD_CAP})")
    if n > DEFAULT_CAP and not allow_large:
        raise ResourceCapExceeded(
            f"n={n} exceeds the default cap {DEFAULT_CAP}; pass allow_large (--allow-large) to proceed"
        )


@lru_cache(maxsize=None)
def ambient_basis(n: int, deg: TriDegree):
    """Canonically ordered monomial basis of one tridegree piece."""
    monos = monomials_tridegree(n, deg)
    return monos, {m: i for i, m in enumerate(monos)}


def poly_to_vec(p: Polynomial, deg: TriDegree) -> Vec:
    _, index = ambient_basis(p.n, deg)
    vec: Vec = {}
    for m, c in p.terms.items():
        j = index.get(m)
        if j is None:
            raise ValueError(f"monomial {m} is not homogeneous of degree {deg}")
        vec[j] = c
    return vec


def vec_to_poly(vec: Vec, n: int, deg: TriDegree) -> Polynomial:
    monos, _ = ambient_basis(n, deg)
    return Polynomial(n, {monos[j]: c for j, c in vec.items()})


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------


class HilbertSeries:
    """Finitely supported map from TriDegree to dimension."""

    def __init__(self, dims: Dict[TriDegree, int]):
        self.dims = {TriDegree(*d): v for d, v in dims.items() if v}

    def __getitem__(self, deg) -> int:
        return self.dims.get(TriDegree(*deg), 0)

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.dims == other.dims

    def __hash__(self):
        return hash(tuple(sorted(self.dims.items())))

    def total(self) -> int:
        """Specialization at q = t = a = 1."""
        return sum(self.dims.values())

    def per_a(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for deg, v in self.dims.items():
            out[deg.da] = out.get(deg.da, 0) + v
        return dict(sorted(out.items()))

    def slice_a(self, da: int) -> "HilbertSeries":
        return HilbertSeries({d: v for d, v in self.dims.items() if d.da == da})

    def qt_swapped(self) -> "HilbertSeries":
        return HilbertSeries({TriDegree(d.dy, d.dx, d.da): v for d, v in self.dims.items()})

    def is_qt_symmetric(self) -> bool:
        return self == self.qt_swapped()

    def render(self) -> str:
        """Canonical text form, e.g. 'q^3 + q^2*t + q*t^2 + q*t + t^3'."""
        if not self.dims:
            return "0"
        parts = []
        keys = sorted(self.dims, key=lambda d: (d.da, -d.dx, -d.dy))
        for deg in keys:
            coeff = self.dims[deg]
            factors = []
            if deg.da:
                factors.append("a" if deg.da == 1 else f"a^{deg.da}")
            if deg.dx:
                factors.append("q" if deg.dx == 1 else f"q^{deg.dx}")
            if deg.dy:
                factors.append("t" if deg.dy == 1 else f"t^{deg.dy}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(body)
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"HilbertSeries({self.render()})"


# ---------------------------------------------------------------------------
# Quotient presentations
# ---------------------------------------------------------------------------


class Block:
    """One tridegree piece of a quotient: ambient basis, relations, reps.

    `nf` maps each pivot column to the normal form of its monomial as a
    vector over representative columns; together the rows (pivot - nf) are
    the unique RREF of the relation subspace.
    """

    __slots__ = ("deg", "n", "monomials", "index", "reps", "nf", "_rep_pos")

    def __init__(self, n: int, deg: TriDegree, reps: List[int], nf: Dict[int, Vec]):
        self.n = n
        self.deg = deg
        self.monomials, self.index = ambient_basis(n, deg)
        self.reps = list(reps)
        self.nf = nf
        self._rep_pos = {c: k for k, c in enumerate(self.reps)}

    @property
    def dim(self) -> int:
        return len(self.reps)

    @property
    def ambient_dim(self) -> int:
        return len(self.monomials)

    def rep_monomials(self) -> List[Monomial]:
        return [self.monomials[c] for c in self.reps]

    def normal_form(self, vec: Vec) -> Vec:
        """Reduce an ambient coordinate vector to representative columns."""
        out: Vec = {}
        for j, c in vec.items():
            if j in self._rep_pos:
                out[j] = out.get(j, 0) + c
            else:
                vec_add_scaled(out, c, self.nf[j])
        return {j: v for j, v in out.items() if v != 0}

    def class_coords(self, p: Polynomial) -> Vec:
        """Class of a polynomial, as {rep position: coefficient}."""
        reduced = self.normal_form(poly_to_vec(p, self.deg))
        return {self._rep_pos[j]: v for j, v in reduced.items()}

    def class_of_vec(self, vec: Vec) -> Vec:
        reduced = self.normal_form(vec)
        return {self._rep_pos[j]: v for j, v in reduced.items()}

    def rep_poly(self, position: int) -> Polynomial:
        return Polynomial.monomial(self.monomials[self.reps[position]])

    def relation_rows(self):
        """RREF rows of the relation subspace (pivot coefficient 1)."""
        for piv in sorted(self.nf):
            row = {c: -v for c, v in self.nf[piv].items()}
            row[piv] = Fraction(1)
            yield piv, row

    def relation_matrix(self) -> SparseMatrix:
        rows = [row for _, row in self.relation_rows()]
        return SparseMatrix.from_rows(rows, self.ambient_dim)


class QuotientSpace:
    """Per-tridegree quotient presentation of an ambient superalgebra slice."""

    def __init__(self, n: int, kind: str, blocks: Dict[TriDegree, Block]):
        self.n = n
        self.kind = kind
        self.blocks = dict(blocks)

    def block(self, deg) -> Optional[Block]:
        return self.blocks.get(TriDegree(*deg))

    def dim(self, deg) -> int:
        b = self.blocks.get(TriDegree(*deg))
        return b.dim if b else 0

    def support(self) -> List[TriDegree]:
        return sorted(d for d, b in self.blocks.items() if b.dim)

    def hilbert(self) -> HilbertSeries:
        return HilbertSeries({d: b.dim for d, b in self.blocks.items()})

    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks.values())

    def __repr__(self):
        return f"QuotientSpace({self.kind}, n={self.n}, dim={self.total_dim()})"


class GradedSubspace:
    """Per-tridegree canonical echelon bases of a subspace of the superalgebra.

    degree_cap, when set, records the top total (dx+dy) degree up to which
    the space was built; pieces beyond it exist mathematically but were not
    materialized (relevant for ideals, which live in all degrees).
    """

    def __init__(self, n: int, kind: str, pieces: Dict[TriDegree, List[Vec]], degree_cap: Optional[int] = None):
        self.n = n
        self.kind = kind
        self.pieces = {d: v for d, v in pieces.items() if v}
        self.degree_cap = degree_cap
        self._accs: Dict[TriDegree, RrefAccumulator] = {}

    def basis(self, deg) -> List[Vec]:
        return self.pieces.get(TriDegree(*deg), [])

    def basis_polys(self, deg) -> List[Polynomial]:
        deg = TriDegree(*deg)
        return [vec_to_poly(v, self.n, deg) for v in self.basis(deg)]

    def basis_matrix(self, deg) -> SparseMatrix:
        deg = TriDegree(*deg)
        monos, _ = ambient_basis(self.n, deg)
        return SparseMatrix.from_columns(self.basis(deg), len(monos))

    def dim(self, deg) -> int:
        return len(self.basis(deg))

    def hilbert(self) -> HilbertSeries:
        return HilbertSeries({d: len(v) for d, v in self.pieces.items()})

    def total_dim(self) -> int:
        return sum(len(v) for v in self.pieces.values())

    def support(self) -> List[TriDegree]:
        return sorted(self.pieces)

    def _acc(self, deg: TriDegree) -> RrefAccumulator:
        if deg not in self._accs:
            acc = RrefAccumulator()
            for v in self.pieces.get(deg, []):
                acc.insert(v)
            self._accs[deg] = acc
        return self._accs[deg]

    def contains_vec(self, deg, vec: Vec) -> bool:
        return not self._acc(TriDegree(*deg)).reduce(vec)

    def contains(self, p: Polynomial) -> bool:
        if p.is_zero():
            return True
        ok = True
        for deg, comp in p.homogeneous_components().items():
            try:
                vec = poly_to_vec(comp, deg)
            except ValueError:
                return False
            ok = ok and self.contains_vec(deg, vec)
        return ok

    def __repr__(self):
        return f"GradedSubspace({self.kind}, n={self.n}, dim={self.total_dim()})"


# ---------------------------------------------------------------------------
# Single variable family reductions
# ---------------------------------------------------------------------------


class _SingleDegree:
    __slots__ = ("monos", "index", "reps", "nf", "rows")

    def __init__(self, monos, index, reps, nf, rows):
        self.monos = monos  # exponent tuples, canonical (descending-lex) order
        self.index = index
        self.reps = reps  # non-pivot columns
        self.nf = nf  # pivot column -> vec over rep columns
        self.rows = rows  # pivot column -> RREF row (over all columns)


class _SingleFamily:
    """Degreewise reduction of Q[z_1..z_n] modulo its power sum ideal."""

    def __init__(self, n: int):
        self.n = n
        self.degrees: Dict[int, _SingleDegree] = {}
        self._build(0)

    def _monos(self, d: int):
        return list(compositions(d, self.n))

    def ensure(self, d: int):
        for k in range(len(self.degrees), d + 1):
            self._build(k)

    def deg(self, d: int) -> _SingleDegree:
        self.ensure(d)
        return self.degrees[d]

    def nf(self, exps: tuple) -> Vec:
        """Normal form of a monomial, as vec over rep columns of its degree."""
        d = sum(exps)
        sd = self.deg(d)
        j = sd.index[exps]
        if j in sd.nf:
            return sd.nf[j]
        return {j: Fraction(1)}

    def _build(self, d: int):
        monos = self._monos(d)
        index = {m: i for i, m in enumerate(monos)}
        acc = RrefAccumulator()
        if d >= 1:
            prev = self.degrees[d - 1]
            # Shifts of the lower-degree relation rows by each variable.
            for piv in sorted(prev.rows):
                row = prev.rows[piv]
                for i in range(self.n):
                    shifted: Vec = {}
                    for c, v in row.items():
                        exps = list(prev.monos[c])
                        exps[i] += 1
                        shifted[index[tuple(exps)]] = v
                    acc.insert(shifted)
            # The power sum of this degree, if it is a generator.
            if 1 <= d <= self.n:
                vec = {}
                for i in range(self.n):
                    exps = [0] * self.n
                    exps[i] = d
                    vec[index[tuple(exps)]] = Fraction(1)
                acc.insert(vec)
        pivset = set(acc.rows)
        reps = [j for j in range(len(monos)) if j not in pivset]
        nf = {}
        rows = {}
        for piv, row in acc.rows.items():
            nf[piv] = {c: -v for c, v in row.items() if c != piv}
            full = dict(row)
            full[piv] = Fraction(1)
            rows[piv] = full
        self.degrees[d] = _SingleDegree(monos, index, reps, nf, rows)


@lru_cache(maxsize=None)
def _family(n: int) -> _SingleFamily:
    return _SingleFamily(n)


def _mixed_generators(n: int):
    return [
        (c, d)
        for c in range(1, n)
        for d in range(1, n)
        if 2 <= c + d <= n
    ]


# ---------------------------------------------------------------------------
# Diagonal coinvariants
# ---------------------------------------------------------------------------


def _build_even_block(n: int, a: int, b: int) -> Block:
    """Quotient presentation of one bidegree piece of the coinvariant ring."""
    fam = _family(n)
    A = fam.deg(a)
    B = fam.deg(b)
    nb = len(B.monos)
    minicols = [(ia, ib) for ia in A.reps for ib in B.reps]
    mini_index = {pair: k for k, pair in enumerate(minicols)}
    acc = RrefAccumulator()

    def tensor_mini(xvec: Vec, yvec: Vec) -> Vec:
        out: Vec = {}
        for ia, ca in xvec.items():
            for ib, cb in yvec.items():
                k = mini_index[(ia, ib)]
                s = out.get(k, 0) + ca * cb
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    full = len(minicols)
    for (c, d) in _mixed_generators(n):
        if acc.rank == full:
            break
        if a - c < 0 or b - d < 0:
            continue
        xnfs = []
        ynfs = []
        for alpha in compositions(a - c, n):
            per_i = []
            for i in range(n):
                e = list(alpha)
                e[i] += c
                per_i.append(fam.nf(tuple(e)))
            xnfs.append(per_i)
        for beta in compositions(b - d, n):
            per_i = []
            for i in range(n):
                e = list(beta)
                e[i] += d
                per_i.append(fam.nf(tuple(e)))
            ynfs.append(per_i)
        for xs in xnfs:
            if acc.rank == full:
                break
            for ys in ynfs:
                row: Vec = {}
                for i in range(n):
                    vec_add_scaled(row, Fraction(1), tensor_mini(xs[i], ys[i]))
                acc.insert(row)
                if acc.rank == full:
                    break

    pivots = set(acc.rows)
    rep_pairs = [pair for pair in minicols if mini_index[pair] not in pivots]
    rep_cols = [ia * nb + ib for (ia, ib) in rep_pairs]
    col_of_pair = {mini_index[pair]: pair[0] * nb + pair[1] for pair in minicols}

    def mini_to_full(vec: Vec) -> Vec:
        return {col_of_pair[k]: v for k, v in vec.items()}

    deg = TriDegree(a, b, 0)
    nf: Dict[int, Vec] = {}
    rep_set = set(rep_cols)
    trivial = not rep_cols  # zero-dimensional piece: everything reduces to 0
    for ia, alpha in enumerate(A.monos):
        xvec = A.nf[ia] if ia in A.nf else {ia: Fraction(1)}
        for ib, beta in enumerate(B.monos):
            colf = ia * nb + ib
            if colf in rep_set:
                continue
            if trivial:
                nf[colf] = {}
                continue
            yvec = B.nf[ib] if ib in B.nf else {ib: Fraction(1)}
            mini: Vec = {}
            for ja, ca in xvec.items():
                for jb, cb in yvec.items():
                    k = mini_index[(ja, jb)]
                    s = mini.get(k, 0) + ca * cb
                    if s == 0:
                        mini.pop(k, None)
                    else:
                        mini[k] = s
            reduced = acc.reduce(mini)
            nf[colf] = mini_to_full(reduced)
    return Block(n, deg, rep_cols, nf)


def _scan_bidegrees(n: int, build, cap: Optional[int] = None):
    """Drive `build(a, b) -> dim` over total degrees with self-certifying stop."""
    cap = n * (n - 1) if cap is None else cap
    empty_streak = 0
    for d in range(cap + 1):
        total = 0
        for a in range(d, -1, -1):
            total += build(a, d - a)
        if d == 0:
            continue
        empty_streak = empty_streak + 1 if total == 0 else 0
        if empty_streak >= 2:
            break


_REGISTRY: Dict[tuple, object] = {}


def coinvariants(n: int, allow_large: bool = False, cache_dir=None) -> QuotientSpace:
    """The diagonal coinvariant quotient, as per-bidegree presentations.

    Total dimension is (n+1)^(n-1); the relation subspace per bidegree is
    spanned by products of polarized power sums with monomials.
    """
    _check_cap(n, allow_large)
    key = ("drn", n)
    if key in _REGISTRY:
        return _REGISTRY[key]
    if cache_dir is not None:
        from . import cache as _cache

        cached = _cache.load_quotient(cache_dir, "drn", n)
        if cached is not None:
            _REGISTRY[key] = cached
            return cached
    blocks: Dict[TriDegree, Block] = {}

    def build(a: int, b: int) -> int:
        blk = _build_even_block(n, a, b)
        if blk.dim:
            blocks[blk.deg] = blk
        return blk.dim

    _scan_bidegrees(n, build)
    space = QuotientSpace(n, "drn", blocks)
    _REGISTRY[key] = space
    if cache_dir is not None:
        from . import cache as _cache

        _cache.save_quotient(cache_dir, space)
    return space


def invariant_ideal_piece(n: int, bidegree: Tuple[int, int]) -> SparseMatrix:
    """Spanning columns of one bidegree piece of the invariant ideal.

    Columns are the products p_{a,b} * monomial over polarized power sums
    with 1 <= a+b <= n; no reduction is performed.
    """
    a, b = bidegree
    deg = TriDegree(a, b, 0)
    monos, index = ambient_basis(n, deg)
    cols: List[Vec] = []
    gens = [(c, d) for c in range(n + 1) for d in range(n + 1) if 1 <= c + d <= n]
    for (c, d) in gens:
        if a - c < 0 or b - d < 0:
            continue
        for alpha in compositions(a - c, n):
            for beta in compositions(b - d, n):
                col: Vec = {}
                for i in range(n):
                    xe = list(alpha)
                    xe[i] += c
                    ye = list(beta)
                    ye[i] += d
                    j = index[Monomial(tuple(xe), tuple(ye), ())]
                    col[j] = col.get(j, 0) + Fraction(1)
                cols.append(col)
    return SparseMatrix.from_columns(cols, len(monos))


# ---------------------------------------------------------------------------
# Harmonics
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _single_harmonics(n: int, d: int) -> tuple:
    """Joint kernel of p_c(d/dz), c = 1..n, on degree-d monomials (one family)."""
    monos = list(compositions(d, n))
    index = {m: i for i, m in enumerate(monos)}
    rows: List[Vec] = []
    for c in range(1, n + 1):
        if d - c < 0:
            continue
        targets = {m: i for i, m in enumerate(compositions(d - c, n))}
        # One constraint row per target monomial.
        block: Dict[int, Vec] = {}
        for j, m in enumerate(monos):
            for i in range(n):
                if m[i] >= c:
                    coeff = 1
                    for t in range(c):
                        coeff *= m[i] - t
                    e = list(m)
                    e[i] -= c
                    r = targets[tuple(e)]
                    row = block.setdefault(r, {})
                    row[j] = row.get(j, 0) + Fraction(coeff)
        rows.extend(block[r] for r in sorted(block))
    acc = RrefAccumulator()
    for row in rows:
        acc.insert(row)
    pivset = set(acc.rows)
    basis: List[Vec] = []
    for j in range(len(monos)):
        if j in pivset:
            continue
        vec: Vec = {j: Fraction(1)}
        for piv, row in acc.rows.items():
            c = row.get(j)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return tuple((tuple(sorted(v.items()))) for v in basis)


def _build_harmonic_piece(n: int, a: int, b: int) -> List[Vec]:
    """Exact basis of the harmonic piece of one bidegree."""
    fam = _family(n)
    A = fam.deg(a)
    B = fam.deg(b)
    nb = len(B.monos)
    kx = [dict(v) for v in _single_harmonics(n, a)]
    ky = [dict(v) for v in _single_harmonics(n, b)]
    basis: List[Vec] = []
    for vx in kx:
        for vy in ky:
            vec: Vec = {}
            for ia, ca in vx.items():
                for ib, cb in vy.items():
                    vec[ia * nb + ib] = ca * cb
            basis.append(vec)
    if not basis:
        return []
    amonos = A.monos
    bmonos = B.monos
    for (c, d) in _mixed_generators(n):
        if a - c < 0 or b - d < 0 or not basis:
            continue
        tb = list(compositions(b - d, n))
        ta = list(compositions(a - c, n))
        ta_index = {m: i for i, m in enumerate(ta)}
        tb_index = {m: i for i, m in enumerate(tb)}
        rows: List[Vec] = []
        images: Dict[int, Vec] = {}
        for j, v in enumerate(basis):
            for col, coeff in v.items():
                alpha = amonos[col // nb]
                beta = bmonos[col % nb]
                for i in range(n):
                    if alpha[i] >= c and beta[i] >= d:
                        w = 1
                        for t in range(c):
                            w *= alpha[i] - t
                        for t in range(d):
                            w *= beta[i] - t
                        ea = list(alpha)
                        ea[i] -= c
                        eb = list(beta)
                        eb[i] -= d
                        r = ta_index[tuple(ea)] * len(tb) + tb_index[tuple(eb)]
                        row = images.setdefault(r, {})
                        s = row.get(j, 0) + coeff * w
                        if s == 0:
                            row.pop(j, None)
                        else:
                            row[j] = s
        matrix = SparseMatrix.from_rows([images[r] for r in sorted(images)], len(basis))
        from .linalg import kernel_basis as _kb

        combos = _kb(matrix)
        new_basis: List[Vec] = []
        for combo in combos:
            vec: Vec = {}
            for j, cc in combo.items():
                vec_add_scaled(vec, cc, basis[j])
            new_basis.append(vec)
        basis = new_basis
    acc = RrefAccumulator()
    for v in basis:
        acc.insert(v)
    return acc.row_vectors()


def harmonics(n: int, allow_large: bool = False, cache_dir=None) -> GradedSubspace:
    """Joint kernel of all positive-degree invariant derivative operators.

    Computed independently of the quotient presentation (kernel
    intersections only), so graded duality with the coinvariants is a real
    check downstream, not a construction artifact.
    """
    _check_cap(n, allow_large)
    key = ("dh", n)
    if key in _REGISTRY:
        return _REGISTRY[key]
    if cache_dir is not None:
        from . import cache as _cache

        cached = _cache.load_subspace(cache_dir, "dh", n)
        if cached is not None:
            _REGISTRY[key] = cached
            return cached
    pieces: Dict[TriDegree, List[Vec]] = {}

    def build(a: int, b: int) -> int:
        vecs = _build_harmonic_piece(n, a, b)
        if vecs:
            pieces[TriDegree(a, b, 0)] = vecs
        return len(vecs)

    _scan_bidegrees(n, build)
    space = GradedSubspace(n, "dh", pieces)
    _REGISTRY[key] = space
    if cache_dir is not None:
        from . import cache as _cache

        _cache.save_subspace(cache_dir, space)
    return space


# ---------------------------------------------------------------------------
# Sign and hook components
# ---------------------------------------------------------------------------


def _alt_class_vec(block: Block, mono: Monomial) -> Vec:
    """Class (over rep positions) of the sign-projection of a monomial."""
    n = block.n
    out: Vec = {}
    for sigma in permutations(range(n)):
        image = act(sigma, Polynomial.monomial(mono))
        ((m, c),) = image.terms.items()
        sgn = perm_sign(sigma)
        vec = block.class_of_vec({block.index[m]: c})
        vec_add_scaled(out, Fraction(sgn, factorial(n)), vec)
    return {k: v for k, v in out.items() if v != 0}


def _sign_quotient_block(base: Block) -> Block:
    """Add the rows of (1 - alt) to a block's relation subspace."""
    acc = RrefAccumulator()
    k = base.dim
    for pos in range(k):
        mono = base.monomials[base.reps[pos]]
        altvec = _alt_class_vec(base, mono)
        row = {pos: Fraction(1)}
        vec_add_scaled(row, Fraction(-1), altvec)
        acc.insert(row)
    pivots = set(acc.rows)
    reps = [base.reps[pos] for pos in range(k) if pos not in pivots]
    rep_set = set(reps)
    nf: Dict[int, Vec] = {}

    def to_full(vec: Vec) -> Vec:
        return {base.reps[pos]: v for pos, v in vec.items()}

    for col in range(base.ambient_dim):
        if col in rep_set:
            continue
        if col in base._rep_pos:
            mini = {base._rep_pos[col]: Fraction(1)}
        else:
            mini = {base._rep_pos[j]: v for j, v in base.nf[col].items()}
        nf[col] = to_full(acc.reduce(mini))
    return Block(base.n, base.deg, reps, nf)


def sign_component(space):
    """Sign-isotypic part: quotient presentation or alt-image subspace.

    For a QuotientSpace the result is the quotient by the enlarged relation
    subspace (relations plus the image of 1 - alt); for a GradedSubspace it
    is the span of the sign projections of the basis vectors.
    """
    key = (space.kind + "-sign", space.n)
    memoizable = _REGISTRY.get((space.kind, space.n)) is space
    if memoizable and key in _REGISTRY:
        return _REGISTRY[key]
    if isinstance(space, QuotientSpace):
        blocks = {}
        for deg, base in space.blocks.items():
            blk = _sign_quotient_block(base)
            if blk.dim:
                blocks[deg] = blk
        out = QuotientSpace(space.n, space.kind + "-sign", blocks)
    elif isinstance(space, GradedSubspace):
        pieces: Dict[TriDegree, List[Vec]] = {}
        for deg in space.support():
            acc = RrefAccumulator()
            for vec in space.basis(deg):
                poly = vec_to_poly(vec, space.n, deg)
                acc.insert(poly_to_vec(alt(poly), deg))
            if acc.rank:
                pieces[deg] = acc.row_vectors()
        out = GradedSubspace(space.n, space.kind + "-sign", pieces)
    else:
        raise TypeError(f"unsupported space type {type(space)!r}")
    if memoizable:
        _REGISTRY[key] = out
    return out


def _build_hook_block(n: int, dr_block: Block, da: int) -> Block:
    """One tridegree piece of the hook component.

    Stages: coinvariant relations per odd index set, then wedge relations of
    th_1+..+th_n (on representative classes only; the rest already lies in
    the ideal relations), then the sign projector rows.
    """
    a, b, _ = dr_block.deg
    deg = TriDegree(a, b, da)
    thetasets = subsets_of_size(n, da)
    set_pos = {S: i for i, S in enumerate(thetasets)}
    k = dr_block.dim
    minicols = [(si, pos) for si in range(len(thetasets)) for pos in range(k)]
    mini_index = {pair: i for i, pair in enumerate(minicols)}
    acc = RrefAccumulator()
    # Wedge relations: omega_0 ^ (rep * theta_set) for each smaller set.
    if da >= 1:
        for Sp in subsets_of_size(n, da - 1):
            spset = set(Sp)
            for pos in range(k):
                row: Vec = {}
                for i in range(n):
                    if i in spset:
                        continue
                    sign = (-1) ** sum(1 for s in Sp if s < i)
                    S = tuple(sorted(Sp + (i,)))
                    key = mini_index[(set_pos[S], pos)]
                    row[key] = row.get(key, 0) + Fraction(sign)
                acc.insert({c: v for c, v in row.items() if v != 0})

    # Sign projector rows on the surviving classes.
    fact = factorial(n)
    for si, S in enumerate(thetasets):
        for pos in range(k):
            mono = dr_block.monomials[dr_block.reps[pos]]
            full_mono = Monomial(mono.xe, mono.ye, S)
            altvec: Vec = {}
            for sigma in permutations(range(n)):
                image = act(sigma, Polynomial.monomial(full_mono))
                ((m, c),) = image.terms.items()
                even = Monomial(m.xe, m.ye, ())
                vec = dr_block.class_of_vec({dr_block.index[even]: c})
                spos = set_pos[m.odd]
                for p2, v in vec.items():
                    kk = mini_index[(spos, p2)]
                    s = altvec.get(kk, 0) + Fraction(perm_sign(sigma), fact) * v
                    if s == 0:
                        altvec.pop(kk, None)
                    else:
                        altvec[kk] = s
            row = {mini_index[(si, pos)]: Fraction(1)}
            vec_add_scaled(row, Fraction(-1), altvec)
            acc.insert(row)

    pivots = set(acc.rows)
    d_ab = dr_block.ambient_dim

    def full_col(si: int, xy_col: int) -> int:
        return si * d_ab + xy_col

    rep_cols = [
        full_col(si, dr_block.reps[pos])
        for (si, pos) in minicols
        if mini_index[(si, pos)] not in pivots
    ]
    rep_cols.sort()
    rep_set = set(rep_cols)
    nf: Dict[int, Vec] = {}
    for si in range(len(thetasets)):
        for xy_col in range(d_ab):
            colf = full_col(si, xy_col)
            if colf in rep_set:
                continue
            if xy_col in dr_block._rep_pos:
                mini = {mini_index[(si, dr_block._rep_pos[xy_col])]: Fraction(1)}
            else:
                mini = {
                    mini_index[(si, dr_block._rep_pos[j])]: v
                    for j, v in dr_block.nf[xy_col].items()
                }
            reduced = acc.reduce(mini)
            out: Vec = {}
            for kk, v in reduced.items():
                si2, pos2 = minicols[kk]
                out[full_col(si2, dr_block.reps[pos2])] = v
            nf[colf] = out
    return Block(n, deg, rep_cols, nf)


def hook_component(n: int, allow_large: bool = False, cache_dir=None) -> QuotientSpace:
    """Sign part of (reduced odd exterior algebra) tensor the coinvariants.

    The odd degree is the third grading; the degree-zero odd slice coincides
    with the sign component of the coinvariant quotient.
    """
    _check_cap(n, allow_large)
    key = ("hook", n)
    if key in _REGISTRY:
        return _REGISTRY[key]
    if cache_dir is not None:
        from . import cache as _cache

        cached = _cache.load_quotient(cache_dir, "hook", n)
        if cached is not None:
            _REGISTRY[key] = cached
            return cached
    dr = coinvariants(n, allow_large=allow_large, cache_dir=cache_dir)
    blocks: Dict[TriDegree, Block] = {}
    for deg in sorted(dr.blocks):
        base = dr.blocks[deg]
        for da in range(n):
            blk = _build_hook_block(n, base, da)
            if blk.dim:
                blocks[blk.deg] = blk
    space = QuotientSpace(n, "hook", blocks)
    _REGISTRY[key] = space
    if cache_dir is not None:
        from . import cache as _cache

        _cache.save_quotient(cache_dir, space)
    return space


# ---------------------------------------------------------------------------
# Ideals generated by antisymmetric elements
# ---------------------------------------------------------------------------

_IDEAL_FLAVORS = ("J", "mJ", "Jbar", "mJbar")


def _alt_image_vectors(n: int, deg: TriDegree) -> List[Vec]:
    monos, _ = ambient_basis(n, deg)
    out = []
    for m in monos:
        p = alt(Polynomial.monomial(m))
        if not p.is_zero():
            out.append(poly_to_vec(p, deg))
    return out


def _wedge_omega0_vec(n: int, deg: TriDegree, vec: Vec) -> Vec:
    """Coordinates of (th_1 + .. + th_n) ^ v one odd degree up."""
    monos, _ = ambient_basis(n, deg)
    _, tindex = ambient_basis(n, TriDegree(deg.dx, deg.dy, deg.da + 1))
    out: Vec = {}
    for j, c in vec.items():
        m = monos[j]
        inset = set(m.odd)
        for i in range(n):
            if i in inset:
                continue
            sign = (-1) ** sum(1 for s in m.odd if s < i)
            target = Monomial(m.xe, m.ye, tuple(sorted(m.odd + (i,))))
            kk = tindex[target]
            s = out.get(kk, 0) + sign * c
            if s == 0:
                out.pop(kk, None)
            else:
                out[kk] = s
    return out


class _IdealTower:
    """Degreewise echelon bases of the antisymmetric ideal and its multiples."""

    def __init__(self, n: int, max_total: int):
        self.n = n
        self.max_total = max_total
        self.J: Dict[TriDegree, RrefAccumulator] = {}
        self.mJ: Dict[TriDegree, RrefAccumulator] = {}
        self._build()

    def _shift_candidates(self, deg: TriDegree) -> List[Vec]:
        n = self.n
        out: List[Vec] = []
        _, index = ambient_basis(n, deg)
        for (src, var) in (
            (TriDegree(deg.dx - 1, deg.dy, deg.da), "x"),
            (TriDegree(deg.dx, deg.dy - 1, deg.da), "y"),
        ):
            if src.dx < 0 or src.dy < 0:
                continue
            acc = self.J.get(src)
            if not acc or not acc.rank:
                continue
            smonos, _ = ambient_basis(n, src)
            for row in acc.row_vectors():
                for i in range(n):
                    shifted: Vec = {}
                    for c, v in row.items():
                        m = smonos[c]
                        if var == "x":
                            xe = list(m.xe)
                            xe[i] += 1
                            t = Monomial(tuple(xe), m.ye, m.odd)
                        else:
                            ye = list(m.ye)
                            ye[i] += 1
                            t = Monomial(m.xe, tuple(ye), m.odd)
                        shifted[index[t]] = v
                    out.append(shifted)
        return out

    def _build(self):
        n = self.n
        for total in range(self.max_total + 1):
            for dx in range(total, -1, -1):
                dy = total - dx
                for da in range(n + 1):
                    deg = TriDegree(dx, dy, da)
                    accm = RrefAccumulator()
                    for cand in self._shift_candidates(deg):
                        accm.insert(cand)
                    accj = RrefAccumulator()
                    for row in accm.row_vectors():
                        accj.insert(row)
                    for seed in _alt_image_vectors(n, deg):
                        accj.insert(seed)
                    self.mJ[deg] = accm
                    self.J[deg] = accj


@lru_cache(maxsize=None)
def _ideal_tower(n: int, max_total: int) -> _IdealTower:
    return _IdealTower(n, max_total)


def default_ideal_degree_cap(n: int) -> int:
    """Top total degree of the coinvariant quotient plus a two-degree margin."""
    return n * (n - 1) // 2 + 2


def antisymmetric_ideal(n: int, flavor: str, max_total: Optional[int] = None) -> GradedSubspace:
    """Per-degree bases for the ideal generated by antisymmetric elements.

    Flavors: "J" (the ideal), "mJ" (its product with the maximal ideal),
    "Jbar" (a complement of omega_0 ^ J inside J, realizing the reduced
    ideal degreewise), "mJbar" (the image of mJ in that reduction, realized
    as a complement of omega_0 ^ J inside mJ + omega_0 ^ J).
    """
    if flavor not in _IDEAL_FLAVORS:
        raise ValueError(f"flavor must be one of {_IDEAL_FLAVORS}")
    if n < 2:
        raise ValueError("n >= 2 required")
    if max_total is None:
        max_total = default_ideal_degree_cap(n)
    tower = _ideal_tower(n, max_total)
    pieces: Dict[TriDegree, List[Vec]] = {}
    if flavor in ("J", "mJ"):
        accs = tower.J if flavor == "J" else tower.mJ
        for deg, acc in accs.items():
            if acc.rank:
                pieces[deg] = acc.row_vectors()
        return GradedSubspace(n, flavor, pieces, degree_cap=max_total)
    for deg, accj in tower.J.items():
        if deg.da == 0:
            omega_rows: List[Vec] = []
        else:
            lower = TriDegree(deg.dx, deg.dy, deg.da - 1)
            src = tower.J.get(lower)
            omega_rows = (
                [_wedge_omega0_vec(n, lower, row) for row in src.row_vectors()] if src else []
            )
        acc = RrefAccumulator()
        for row in omega_rows:
            acc.insert(row)
        vecs: List[Vec] = []
        source = accj if flavor == "Jbar" else tower.mJ[deg]
        for row in source.row_vectors():
            residual = acc.reduce(row)
            if residual:
                acc.insert(row)
                vecs.append(residual)
        if vecs:
            norm = RrefAccumulator()
            for v in vecs:
                norm.insert(v)
            pieces[deg] = norm.row_vectors()
    return GradedSubspace(n, flavor, pieces, degree_cap=max_total)


def ideal_quotient_series(n: int, reduced: bool, max_total: Optional[int] = None) -> HilbertSeries:
    """Graded dimensions of J/mJ (reduced=False) or of the omega_0-reduced
    quotient Jbar/mJbar (reduced=True)."""
    if max_total is None:
        max_total = default_ideal_degree_cap(n)
    tower = _ideal_tower(n, max_total)
    dims: Dict[TriDegree, int] = {}
    for deg, accj in tower.J.items():
        if not reduced:
            if deg.da == 0:
                d = accj.rank - tower.mJ[deg].rank
                if d:
                    dims[deg] = d
            continue
        acc = RrefAccumulator()
        if deg.da:
            lower = TriDegree(deg.dx, deg.dy, deg.da - 1)
            src = tower.J.get(lower)
            if src:
                for row in src.row_vectors():
                    acc.insert(_wedge_omega0_vec(n, lower, row))
        for row in tower.mJ[deg].row_vectors():
            acc.insert(row)
        d = accj.rank - acc.rank
        if d:
            dims[deg] = d
    return HilbertSeries(dims)


def hilbert(space) -> HilbertSeries:
    """Exact per-tridegree dimensions of any space built by this module."""
    return space.hilbert()


def clear_registry():
    """Drop every in-process memo (used by timing and cache tests)."""
    _REGISTRY.clear()
    ambient_basis.cache_clear()
    _family.cache_clear()
    _single_harmonics.cache_clear()
    _ideal_tower.cache_clear()
    from . import operators as _ops

    _ops._even_block_cache.clear()
    _ops._CERT_CACHE.clear()
    from . import structure as _st

    _st._MODELS.clear()
