from fractions import Fraction

import pytest

from harmonica.operators import (
    OperatorSpec,
    WellDefinednessError,
    bracket,
    check_preserves,
    commutes_with_differentials,
    compose,
    hamiltonian_bracket_matches,
    is_zero_on,
    matrix_json,
    matrix_of,
    operator_matrices,
)
from harmonica.spaces import (
    antisymmetric_ideal,
    coinvariants,
    hook_component,
    sign_component,
)
from harmonica.superpoly import TriDegree


class TestMatrixOf:
    def test_f1_into_the_top_line(self):
        s3 = sign_component(coinvariants(3))
        om = matrix_of(OperatorSpec.F(3, 1), s3, (2, 1, 0))
        assert om.target == TriDegree(3, 0, 0)
        assert (om.matrix.rows, om.matrix.cols) == (1, 1)
        assert not om.is_zero()

    def test_f2_into_the_top_line(self):
        s3 = sign_component(coinvariants(3))
        om = matrix_of(OperatorSpec.F(3, 2), s3, (1, 1, 0))
        assert (om.matrix.rows, om.matrix.cols) == (1, 1)
        assert not om.is_zero()

    def test_f3_vanishes_on_every_hook_piece(self):
        assert is_zero_on(OperatorSpec.F(3, 3), hook_component(3))

    def test_threshold_is_sharp(self):
        hook = hook_component(3)
        assert not is_zero_on(OperatorSpec.F(3, 1), hook)
        assert not is_zero_on(OperatorSpec.F(3, 2), hook)
        assert is_zero_on(OperatorSpec.F(3, 4), hook)

    def test_wedge_operator_acts_on_hook(self):
        hook = hook_component(2)
        om = matrix_of(OperatorSpec.wedge(2, 1), hook, (0, 1, 0))
        assert om.target == TriDegree(1, 1, 1)
        # reported, not asserted: the commutator with F1 may be nonzero
        br = bracket(OperatorSpec.F(2, 1), OperatorSpec.wedge(2, 1), hook)
        assert isinstance(br, dict)

    def test_missing_source_piece_gives_empty_matrix(self):
        s2 = sign_component(coinvariants(2))
        om = matrix_of(OperatorSpec.F(2, 1), s2, (5, 5, 0))
        assert om.matrix.cols == 0 and om.matrix.rows == 0


class TestCheckPreserves:
    def test_e2_preserves_j_n2(self):
        ok, witness = check_preserves(OperatorSpec.E(2, 2), antisymmetric_ideal(2, "J"))
        assert ok and witness is None

    def test_f1_preserves_mj_n3(self):
        ok, _ = check_preserves(OperatorSpec.F(3, 1), antisymmetric_ideal(3, "mJ", max_total=3))
        assert ok

    def test_f1_well_defined_on_coinvariants(self):
        ok, _ = check_preserves(OperatorSpec.F(3, 1), coinvariants(3))
        assert ok

    def test_witness_for_non_preserving_operator(self):
        # the odd contraction with N = 0 does not descend to the hook model
        hook = hook_component(2)
        ok, witness = check_preserves(OperatorSpec.d(2, 0), hook)
        assert not ok and witness is not None

    def test_matrix_of_raises_on_ill_defined_operator(self):
        hook = hook_component(2)
        with pytest.raises(WellDefinednessError):
            matrix_of(OperatorSpec.d(2, 0), hook, (0, 0, 1))


class TestBrackets:
    def test_v20_v02_is_4_v11(self):
        ok, _ = hamiltonian_bracket_matches(3, (2, 0), (0, 2), hook_component(3))
        assert ok

    def test_v10_v01_commute_on_free_pieces(self):
        # on the free superalgebra the two divergence fields commute
        from harmonica.superpoly import Polynomial, apply_op, op_hamiltonian

        import random

        rng = random.Random(3)
        v10 = op_hamiltonian(2, 1, 0)
        v01 = op_hamiltonian(2, 0, 1)
        for _ in range(20):
            terms = {}
            from harmonica.superpoly import Monomial

            for _ in range(4):
                xe = tuple(rng.randint(0, 2) for _ in range(2))
                ye = tuple(rng.randint(0, 2) for _ in range(2))
                terms[Monomial(xe, ye, ())] = Fraction(rng.randint(-2, 2))
            p = Polynomial(2, terms)
            lhs = apply_op(v10, apply_op(v01, p))
            rhs = apply_op(v01, apply_op(v10, p))
            assert lhs == rhs

    def test_fk_em_bracket_matches_vector_field(self):
        hook = hook_component(3)
        for k in (1, 2):
            for m in (1, 2):
                br = bracket(OperatorSpec.F(3, k), OperatorSpec.E(3, m), hook)
                for deg, om in br.items():
                    expected = matrix_of(OperatorSpec.hamiltonian(3, k, m), hook, deg)
                    assert om.matrix == expected.matrix.scaled(-1)

    def test_fk_pairwise_commute(self):
        hook = hook_component(3)
        br = bracket(OperatorSpec.F(3, 1), OperatorSpec.F(3, 2), hook)
        assert all(om.is_zero() for om in br.values())


class TestDifferentials:
    def test_commutation_with_f(self):
        hook = hook_component(3)
        assert commutes_with_differentials(OperatorSpec.F(3, 1), OperatorSpec.d(3, 1), hook)[0]
        assert commutes_with_differentials(OperatorSpec.F(3, 2), OperatorSpec.d(3, 2), hook)[0]

    def test_anticommutation(self):
        hook = hook_component(3)
        d1, d2 = OperatorSpec.d(3, 1), OperatorSpec.d(3, 2)
        for deg in sorted(hook.blocks):
            a = compose(matrix_of(d1, hook, d2.target_degree(deg)), matrix_of(d2, hook, deg))
            b = compose(matrix_of(d2, hook, d1.target_degree(deg)), matrix_of(d1, hook, deg))
            assert a.matrix.add(b.matrix).is_zero()


class TestPlumbing:
    def test_compose_rejects_mismatched_degrees(self):
        s2 = sign_component(coinvariants(2))
        m1 = matrix_of(OperatorSpec.F(2, 1), s2, (0, 1, 0))
        with pytest.raises(ValueError):
            compose(m1, m1)

    def test_operator_matrices_covers_support(self):
        s2 = sign_component(coinvariants(2))
        mats = operator_matrices(OperatorSpec.F(2, 1), s2)
        assert set(mats) == set(s2.blocks)

    def test_matrix_json_rational_entries(self):
        s3 = sign_component(coinvariants(3))
        om = matrix_of(OperatorSpec.F(3, 1), s3, (2, 1, 0))
        payload = matrix_json(om)
        assert payload["rows"] == 1 and payload["cols"] == 1
        assert payload["source"] == [2, 1, 0] and payload["target"] == [3, 0, 0]
        for (r, c, s) in payload["entries"]:
            Fraction(s)  # parses exactly

    def test_labels(self):
        assert OperatorSpec.F(3, 1).label() == "F1"
        assert OperatorSpec.E_star(3, 2).label() == "E*2"
        assert OperatorSpec.hamiltonian(3, 2, 0).label() == "v(2,0)"
        assert OperatorSpec.wedge(3, 1).label() == "w1"
