from fractions import Fraction
from itertools import permutations

import pytest

from harmonica.linalg import RrefAccumulator, rref
from harmonica.spaces import (
    ResourceCapExceeded,
    ambient_basis,
    antisymmetric_ideal,
    coinvariants,
    harmonics,
    hilbert,
    hook_component,
    ideal_quotient_series,
    invariant_ideal_piece,
    poly_to_vec,
    sign_component,
    vec_to_poly,
)
from harmonica.superpoly import (
    Monomial,
    Polynomial,
    TriDegree,
    act,
    apply_op,
    op_power_sum_deriv,
    pairing,
    render,
    sym,
    vandermonde,
)


class TestInvariantIdealPiece:
    def test_n2_bidegree_10(self):
        m = invariant_ideal_piece(2, (1, 0))
        _, _, rank = rref(m)
        assert rank == 1  # the span of x1 + x2

    def test_n2_bidegree_11_full_rank(self):
        # With all polarized power sums (including the mixed one) the piece
        # fills the whole ambient space, so the quotient there is zero; this
        # is forced by the total dimension 3.
        m = invariant_ideal_piece(2, (1, 1))
        _, _, rank = rref(m)
        assert rank == 4
        assert coinvariants(2).dim((1, 1, 0)) == 0

    def test_n3_total_dimension(self):
        dr = coinvariants(3)
        total = 0
        for deg in dr.blocks:
            total += dr.blocks[deg].dim
        assert total == 16

    def test_spanning_rank_matches_quotient_presentation(self):
        # The staged construction must reproduce the rank of the naive span.
        for n in (2, 3):
            dr = coinvariants(n)
            for (a, b) in [(1, 1), (2, 1), (2, 2), (3, 0)]:
                m = invariant_ideal_piece(n, (a, b))
                _, _, rank = rref(m)
                blk = dr.block((a, b, 0))
                qdim = blk.dim if blk else 0
                assert m.rows - rank == qdim


class TestCoinvariants:
    @pytest.mark.parametrize("n,total", [(2, 3), (3, 16), (4, 125)])
    def test_total_dimension(self, n, total):
        assert coinvariants(n).total_dim() == total

    def test_cap_enforced(self):
        with pytest.raises(ResourceCapExceeded):
            coinvariants(5)
        with pytest.raises(ResourceCapExceeded):
            coinvariants(6, allow_large=True)

    def test_relations_are_sn_stable(self):
        dr = coinvariants(3)
        for deg in list(dr.blocks)[:6]:
            block = dr.blocks[deg]
            for _, row in block.relation_rows():
                poly = vec_to_poly(row, 3, deg)
                for sigma in permutations(range(3)):
                    moved = act(sigma, poly)
                    assert not block.class_coords(moved)

    def test_normal_form_is_projector(self):
        dr = coinvariants(3)
        deg = TriDegree(2, 1, 0)
        block = dr.block(deg)
        monos, _ = ambient_basis(3, deg)
        for j in range(len(monos)):
            nf = block.normal_form({j: Fraction(1)})
            assert block.normal_form(nf) == nf

    def test_invariants_are_constants(self):
        for n in (2, 3):
            dr = coinvariants(n)
            for deg, block in dr.blocks.items():
                acc = RrefAccumulator()
                for pos in range(block.dim):
                    image = sym(block.rep_poly(pos))
                    acc.insert(block.class_of_vec(poly_to_vec(image, deg)))
                expected = 1 if deg == (0, 0, 0) else 0
                assert acc.rank == expected


class TestHarmonics:
    def test_n2_linear_piece(self):
        dh = harmonics(2)
        polys = dh.basis_polys(TriDegree(1, 0, 0))
        assert len(polys) == 1
        assert render(polys[0]) == "x1 - x2"

    def test_duality_of_series(self):
        for n in (2, 3):
            assert harmonics(n).hilbert() == coinvariants(n).hilbert()

    def test_harmonics_are_killed_by_invariant_derivatives(self):
        for n in (2, 3):
            dh = harmonics(n)
            for deg in dh.support():
                for p in dh.basis_polys(deg):
                    for a in range(n + 1):
                        for b in range(n + 1):
                            if 1 <= a + b <= n:
                                assert apply_op(op_power_sum_deriv(n, a, b), p).is_zero()

    def test_sign_piece_contains_vandermonde(self):
        dh3 = sign_component(harmonics(3))
        deg = TriDegree(3, 0, 0)
        assert dh3.dim(deg) == 1
        assert dh3.contains(vandermonde("x", 3))

    def test_orthogonal_to_relations(self):
        n = 3
        dr = coinvariants(n)
        dh = harmonics(n)
        for deg in list(dr.blocks)[:8]:
            block = dr.blocks[deg]
            for hp in dh.basis_polys(deg):
                for _, row in block.relation_rows():
                    assert pairing(vec_to_poly(row, n, deg), hp) == 0


class TestSignAndHook:
    def test_sign_dimensions(self):
        assert sign_component(coinvariants(2)).total_dim() == 2
        s3 = sign_component(coinvariants(3))
        assert s3.total_dim() == 5
        assert s3.hilbert().render() == "q^3 + q^2*t + q*t^2 + q*t + t^3"
        assert sign_component(coinvariants(4)).total_dim() == 14

    def test_hook_dimensions(self):
        assert hook_component(2).hilbert().per_a() == {0: 2, 1: 1}
        h3 = hook_component(3)
        assert h3.hilbert().per_a() == {0: 5, 1: 5, 2: 1}
        assert h3.total_dim() == 11

    def test_hook_a0_slice_is_sign_component(self):
        for n in (2, 3):
            hook = hook_component(n)
            sgn = sign_component(coinvariants(n))
            assert hook.hilbert().slice_a(0) == sgn.hilbert()

    def test_hook_top_slice_is_invariants(self):
        # the top odd slice is one class in bidegree (0, 0)
        for n in (2, 3):
            hook = hook_component(n)
            top = hook.hilbert().slice_a(n - 1)
            assert top.dims == {TriDegree(0, 0, n - 1): 1}

    def test_hook_classes_are_sign_isotypic(self):
        hook = hook_component(3)
        for deg in hook.support():
            block = hook.blocks[deg]
            for pos in range(block.dim):
                p = block.rep_poly(pos)
                for sigma in permutations(range(3)):
                    from harmonica.superpoly import perm_sign

                    moved = act(sigma, p).scale(perm_sign(sigma))
                    # class of sigma(p) times sign equals class of p
                    assert block.class_coords(moved) == block.class_coords(p)


class TestAntisymmetricIdeals:
    def test_lowest_antisymmetric_piece(self):
        J = antisymmetric_ideal(2, "J")
        polys = J.basis_polys(TriDegree(1, 0, 0))
        assert len(polys) == 1 and render(polys[0]) == "x1 - x2"

    def test_j_quotient_matches_sign_series(self):
        for n in (2, 3):
            sgn = sign_component(coinvariants(n))
            assert ideal_quotient_series(n, reduced=False) == sgn.hilbert()

    def test_reduced_quotient_matches_hook_series(self):
        for n in (2, 3):
            assert ideal_quotient_series(n, reduced=True) == hook_component(n).hilbert()

    def test_mj_inside_j(self):
        J = antisymmetric_ideal(2, "J")
        mJ = antisymmetric_ideal(2, "mJ")
        for deg in mJ.support():
            for vec in mJ.basis(deg):
                assert J.contains_vec(deg, vec)

    def test_naive_span_agrees(self):
        # J piece = span of m1 * alt(m2) over all splittings of the bidegree.
        n = 2
        J = antisymmetric_ideal(n, "J")
        deg = TriDegree(1, 1, 0)
        acc = RrefAccumulator()
        for dx1 in range(2):
            for dy1 in range(2):
                lows, _ = ambient_basis(n, TriDegree(dx1, dy1, 0))
                his, _ = ambient_basis(n, TriDegree(1 - dx1, 1 - dy1, 0))
                from harmonica.superpoly import alt

                for m1 in lows:
                    for m2 in his:
                        p = Polynomial.monomial(m1) * alt(Polynomial.monomial(m2))
                        if not p.is_zero():
                            acc.insert(poly_to_vec(p, deg))
        assert acc.rank == J.dim(deg)

    def test_free_module_over_the_two_diagonal_parameters(self):
        # J decomposes as (joint kernel of the two divergence fields) times
        # the polynomial algebra on the two diagonal power sums, degreewise.
        from harmonica.superpoly import op_partial_x, op_partial_y

        n = 2
        cap = 4
        J = antisymmetric_ideal(n, "J", max_total=cap)

        def divergence_kernel_dim(deg):
            vecs = J.basis(deg)
            if not vecs:
                return 0
            images = []
            for vec in vecs:
                p = vec_to_poly(vec, n, deg)
                dx_img = Polynomial.zero(n)
                dy_img = Polynomial.zero(n)
                for i in range(n):
                    dx_img = dx_img + apply_op(op_partial_x(n, i), p)
                    dy_img = dy_img + apply_op(op_partial_y(n, i), p)
                images.append((dx_img, dy_img))
            cols = []
            for (dx_img, dy_img) in images:
                col = {}
                if not dx_img.is_zero():
                    for j, c in poly_to_vec(dx_img, TriDegree(deg.dx - 1, deg.dy, deg.da)).items():
                        col[("x", j)] = c
                if not dy_img.is_zero():
                    for j, c in poly_to_vec(dy_img, TriDegree(deg.dx, deg.dy - 1, deg.da)).items():
                        col[("y", j)] = c
                cols.append(col)
            keys = sorted({k for col in cols for k in col})
            key_index = {k: i for i, k in enumerate(keys)}
            from harmonica.linalg import SparseMatrix, kernel_basis

            mat = SparseMatrix.from_columns(
                [{key_index[k]: v for k, v in col.items()} for col in cols], len(keys)
            )
            return len(kernel_basis(mat))

        kernel_dims = {}
        for deg in J.support():
            if deg.da == 0 and deg.dx + deg.dy <= cap:
                kernel_dims[(deg.dx, deg.dy)] = divergence_kernel_dim(deg)
        for a in range(cap + 1):
            for b in range(cap + 1 - a):
                expect = sum(
                    kernel_dims.get((a - i, b - j), 0)
                    for i in range(a + 1)
                    for j in range(b + 1)
                )
                assert J.dim((a, b, 0)) == expect


class TestSolomonInvariants:
    @staticmethod
    def _series_coeff(n, dx, da, reduced):
        # free module on the odd generators over the symmetric polynomials
        gens = range(1, n) if reduced else range(0, n)
        coeffs = {(0, 0): 1}
        for N in gens:
            new = dict(coeffs)
            for (d, a), c in coeffs.items():
                key = (d + N, a + 1)
                new[key] = new.get(key, 0) + c
            coeffs = new
        total = 0
        for (d, a), c in coeffs.items():
            if a == da and d <= dx:
                rest = dx - d
                total += c * _partitions_with_parts(rest, n)
        return total

    def test_invariant_forms_are_free(self):
        for n in (2, 3):
            for dx in range(5):
                for da in range(n + 1):
                    got = _invariant_form_dim(n, dx, da, reduced=False)
                    want = self._series_coeff(n, dx, da, reduced=False)
                    assert got == want, (n, dx, da, got, want)

    def test_reduced_invariant_forms_are_free(self):
        for n in (2, 3):
            for dx in range(5):
                for da in range(n):
                    got = _invariant_form_dim(n, dx, da, reduced=True)
                    want = self._series_coeff(n, dx, da, reduced=True)
                    assert got == want, (n, dx, da, got, want)


def _partitions_with_parts(total, n):
    """Monomial count of degree `total` in the elementary symmetric algebra."""
    if total == 0:
        return 1
    counts = [0] * (total + 1)
    counts[0] = 1
    for part in range(1, n + 1):
        for v in range(part, total + 1):
            counts[v] += counts[v - part]
    return counts[total]


def _invariant_form_dim(n, dx, da, reduced):
    """dim of the S_n-invariants of (odd exterior algebra) x (polynomials in x),
    optionally modulo the wedge by th_1 + .. + th_n."""
    deg = TriDegree(dx, 0, da)
    monos, index = ambient_basis(n, deg)
    if not monos:
        return 0
    acc = RrefAccumulator()
    if reduced and da >= 1:
        lower, _ = ambient_basis(n, TriDegree(dx, 0, da - 1))
        for m in lower:
            inset = set(m.odd)
            row = {}
            for i in range(n):
                if i in inset:
                    continue
                sign = (-1) ** sum(1 for s in m.odd if s < i)
                target = Monomial(m.xe, m.ye, tuple(sorted(m.odd + (i,))))
                row[index[target]] = row.get(index[target], 0) + Fraction(sign)
            acc.insert({k: v for k, v in row.items() if v})
    sym_acc = RrefAccumulator()
    for m in monos:
        image = sym(Polynomial.monomial(m))
        if image.is_zero():
            continue
        vec = poly_to_vec(image, deg)
        residual = acc.reduce(vec)
        if residual:
            sym_acc.insert(residual)
    return sym_acc.rank


class TestHilbertSeries:
    def test_dr2_series(self):
        assert coinvariants(2).hilbert().render() == "q + t + 1"

    def test_total_is_specialization(self):
        s = coinvariants(3).hilbert()
        assert s.total() == 16

    def test_symmetry(self):
        for n in (2, 3, 4):
            assert coinvariants(n).hilbert().is_qt_symmetric()

    def test_hilbert_function_dispatch(self):
        assert hilbert(coinvariants(2)) == coinvariants(2).hilbert()
        assert hilbert(harmonics(2)) == harmonics(2).hilbert()

    def test_x_axis_slice_matches_graded_permutation_count(self):
        # [n]!_q coefficients
        expected = {2: [1, 1], 3: [1, 2, 2, 1], 4: [1, 3, 5, 6, 5, 3, 1]}
        for n, coeffs in expected.items():
            dr = coinvariants(n)
            got = [dr.dim((d, 0, 0)) for d in range(len(coeffs))]
            assert got == coeffs
