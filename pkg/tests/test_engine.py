import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specsum import (
    LIMIT_ZERO,
    Boundedness,
    Compactness,
    DiagonalOperator,
    Discreteness,
    FiniteMatrixOperator,
    InSpectrumError,
    OperatorFamily,
    ShiftOperator,
    SingularBlockError,
    TailRule,
    assemble_resolvent_truncation,
    has_discrete_spectrum,
    is_bounded,
    is_compact,
    resolvent_tail_norm,
    scalar,
)
from specsum.family import Limit, LimitKind, bounded_by
from specsum.oracle import block_diag

from conftest import identity_family, integer_family, ode_family, pi_family_infinite, reciprocal_family


class TestTailDeclarations:
    def test_bounded_needs_value(self):
        with pytest.raises(ValueError):
            Limit(LimitKind.BOUNDED)
        with pytest.raises(ValueError):
            bounded_by(math.inf)
        with pytest.raises(ValueError):
            Limit(LimitKind.ZERO, 1.0)

    def test_finite_rule_takes_no_declarations(self):
        with pytest.raises(ValueError):
            TailRule(norm=LIMIT_ZERO)

    def test_coordinate_indexing(self):
        fam = reciprocal_family()
        assert fam.coordinate(4).operator_norm() == pytest.approx(0.25)
        with pytest.raises(IndexError):
            fam.coordinate(0)
        with pytest.raises(IndexError):
            OperatorFamily.finite(scalar(1)).coordinate(2)

    def test_prefix_type_checked(self):
        with pytest.raises(TypeError):
            OperatorFamily((np.eye(2),))


class TestBoundedness:
    def test_unbounded(self):
        assert is_bounded(integer_family()).status is Boundedness.UNBOUNDED

    def test_decaying(self):
        r = is_bounded(reciprocal_family())
        assert r.status is Boundedness.BOUNDED and r.norm == pytest.approx(1.0)
        # largest singular value of growing truncations agrees
        for m in (1, 5, 20):
            blocks = [op.truncate(1) for _, op in reciprocal_family().coordinates(m)]
            assert np.linalg.norm(block_diag(blocks), 2) == pytest.approx(1.0)

    def test_matrix(self):
        r = is_bounded(OperatorFamily.finite(FiniteMatrixOperator(np.diag([3.0, 4.0]))))
        assert r.norm == pytest.approx(4.0)
        assert str(r) == "Bounded(4.0)"

    def test_unbounded_coordinate(self):
        assert is_bounded(OperatorFamily.finite(DiagonalOperator([1]), ShiftOperator())).status is Boundedness.BOUNDED
        fam = OperatorFamily.finite(pi_family_infinite().coordinate(1))
        assert is_bounded(fam).status is Boundedness.UNBOUNDED

    def test_unknown_tail(self):
        fam = OperatorFamily((scalar(1),), TailRule(lambda n: scalar(1)))
        assert is_bounded(fam).status is Boundedness.INCONCLUSIVE


class TestCompactness:
    def test_decaying_is_compact(self):
        assert is_compact(reciprocal_family()) is Compactness.COMPACT

    def test_constant_is_not(self):
        assert is_compact(identity_family()) is Compactness.NOT_COMPACT

    def test_finite_matrices(self):
        fam = OperatorFamily.finite(FiniteMatrixOperator(np.ones((2, 2))), scalar(3))
        assert is_compact(fam) is Compactness.COMPACT

    def test_noncompact_coordinate(self):
        assert is_compact(OperatorFamily.finite(ShiftOperator())) is Compactness.NOT_COMPACT


class TestDiscreteness:
    def test_ode_family(self):
        assert has_discrete_spectrum(ode_family(), -1) is Discreteness.DISCRETE

    def test_diagonal_family(self):
        assert has_discrete_spectrum(pi_family_infinite(), 0.5) is Discreteness.DISCRETE

    def test_constant_resolvent_not_certified(self):
        assert has_discrete_spectrum(identity_family(), 0) is Discreteness.NOT_CERTIFIED

    def test_point_in_spectrum_raises(self):
        with pytest.raises(InSpectrumError):
            has_discrete_spectrum(pi_family_infinite(), math.pi)

    def test_rough_coordinate_warns(self):
        fam = OperatorFamily.finite(ShiftOperator(), scalar(1))
        with pytest.warns(UserWarning):
            assert has_discrete_spectrum(fam, 5) is Discreteness.NOT_CERTIFIED


class TestResolventAssembly:
    def test_scalar_inverse(self):
        k = assemble_resolvent_truncation(OperatorFamily.finite(scalar(2)), 0, 1, 1)
        assert np.allclose(k.assembled, [[0.5]])

    def test_two_blocks(self):
        k = assemble_resolvent_truncation(OperatorFamily.finite(scalar(1), scalar(2)), 0, 2, 1)
        assert np.allclose(k.assembled, np.diag([1, 0.5]))
        assert k.norm == pytest.approx(1.0)

    def test_norm_is_max_block(self):
        fam = pi_family_infinite(prefix=3)
        k = assemble_resolvent_truncation(fam, 1 + 1j, 3, 15)
        assert k.norm == pytest.approx(max(k.block_norms))
        expected = max(1 / abs(math.pi**n * m**2 - (1 + 1j)) for n in (1, 2, 3) for m in range(1, 16))
        assert k.norm == pytest.approx(expected)

    def test_singular_block(self):
        with pytest.raises(SingularBlockError):
            assemble_resolvent_truncation(OperatorFamily.finite(scalar(2)), 2, 1, 1)

    @pytest.mark.parametrize("m", [1, 3, 5])
    @pytest.mark.parametrize("size", [1, 10, 50])
    def test_product_identity(self, m, size):
        fam = ode_family(prefix=5)
        k = assemble_resolvent_truncation(fam, -1, m, size).assembled
        a = block_diag([op.truncate(size) for _, op in fam.coordinates(m)])
        eye = np.eye(a.shape[0])
        assert np.linalg.norm(k @ (a + eye) - eye, 2) <= 1e-8
        assert np.linalg.norm((a + eye) @ k - eye, 2) <= 1e-8


class TestTailNorm:
    def test_decays_along_m(self):
        fam = pi_family_infinite()
        values = [resolvent_tail_norm(fam, 0.5, m) for m in range(0, 8)]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-3

    def test_finite_family_past_end(self):
        assert resolvent_tail_norm(OperatorFamily.finite(scalar(1), scalar(2)), 0, 2) == 0.0

    def test_constant_family(self):
        assert all(resolvent_tail_norm(identity_family(), 0, m) == pytest.approx(1.0) for m in range(4))

    def test_unknown(self):
        fam = OperatorFamily((scalar(1),), TailRule(lambda n: scalar(1)))
        assert resolvent_tail_norm(fam, 0, 1) is None


@settings(max_examples=40, deadline=None)
@given(norms=st.lists(st.floats(0.01, 10), min_size=1, max_size=8))
def test_finite_norm_is_max_of_blocks(norms):
    fam = OperatorFamily.finite(*(scalar(v) for v in norms))
    assert is_bounded(fam).norm == pytest.approx(max(norms))
