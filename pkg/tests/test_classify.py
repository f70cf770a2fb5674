import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specsum import (
    LIMIT_INFINITY,
    UNKNOWN,
    DiagonalOperator,
    FiniteMatrixOperator,
    InSpectrumError,
    MultipointOperator,
    OperatorFamily,
    ShiftOperator,
    SpectralClass,
    SupKind,
    TailRule,
    classify_direct_sum_point,
    resolvent_norm_sup,
    scalar,
    spectral_scan,
)
from specsum.classify import scan_nodes
from specsum.spectrum import TailCertificationError

from conftest import ode_family, reciprocal_family, shift_plus_diagonal

TWO_PI = 2 * math.pi


def multipoint():
    return OperatorFamily.finite(MultipointOperator(0, 1))


class TestClassify:
    def test_lattice_point(self):
        c = classify_direct_sum_point(TWO_PI * 1j, multipoint())
        assert c.spectral_class is SpectralClass.POINT
        assert c.witness_index == 1
        assert c.verdict() == "PointSpectrum (witness 1)"

    def test_resolvent_blowup_is_continuous(self):
        c = classify_direct_sum_point(0, reciprocal_family())
        assert c.spectral_class is SpectralClass.CONTINUOUS
        assert c.witness_index is None
        assert c.resolvent_sup.kind is SupKind.INFINITE

    def test_matrix_resolvent(self):
        fam = OperatorFamily.finite(FiniteMatrixOperator(np.diag([1.0, 2.0])))
        c = classify_direct_sum_point(3, fam)
        assert c.spectral_class is SpectralClass.RESOLVENT
        assert c.resolvent_sup.value == pytest.approx(1.0)

    def test_residual_from_shift(self):
        c = classify_direct_sum_point(0, shift_plus_diagonal())
        assert c.spectral_class is SpectralClass.RESIDUAL
        assert c.witness_index == 1

    def test_point_beats_residual(self):
        c = classify_direct_sum_point(1, shift_plus_diagonal())
        assert c.spectral_class is SpectralClass.POINT
        assert c.witness_index == 2

    def test_point_beats_residual_inside_disk(self):
        fam = OperatorFamily.finite(ShiftOperator(), scalar(0.5))
        assert classify_direct_sum_point(0.5, fam).spectral_class is SpectralClass.POINT

    def test_continuous_from_coordinate(self):
        fam = OperatorFamily.finite(scalar(2), ShiftOperator())
        c = classify_direct_sum_point(1j, fam)
        assert c.spectral_class is SpectralClass.CONTINUOUS
        assert c.witness_index == 2

    def test_unsettled_tail_is_inconclusive(self):
        tail = TailRule(lambda n: scalar(1.0 / n), max_scan=5)
        fam = OperatorFamily((scalar(1.0),), tail)
        c = classify_direct_sum_point(0, fam)
        assert c.spectral_class is SpectralClass.INCONCLUSIVE
        assert c.resolvent_sup.kind is SupKind.LOWER_BOUND

    def test_tail_eigenvalue_found(self):
        c = classify_direct_sum_point(0.25, reciprocal_family())
        assert c.spectral_class is SpectralClass.POINT
        assert c.witness_index == 4

    def test_false_pointwise_declaration_raises(self):
        tail = TailRule(lambda n: scalar(0.0), resolvent_at=((0.0, LIMIT_INFINITY),))
        fam = OperatorFamily((scalar(1.0),), tail)
        with pytest.raises(TailCertificationError):
            classify_direct_sum_point(0, fam)


class TestResolventSup:
    def test_ode_decay_gives_prefix_max(self):
        sup = resolvent_norm_sup(-1, ode_family())
        assert sup.kind is SupKind.FINITE
        # normal coordinate: exact norm 1/dist(-1, 1 + 2k pi i) at n = 1
        assert sup.value == pytest.approx(0.5)

    def test_divergent(self):
        sup = resolvent_norm_sup(0, reciprocal_family())
        assert sup.kind is SupKind.INFINITE
        assert sup.witness is not None

    def test_single_coordinate(self):
        op = MultipointOperator(0, 1)
        sup = resolvent_norm_sup(1 + 1j, OperatorFamily.finite(op))
        assert sup.value == pytest.approx(op.resolvent_norm(1 + 1j))

    def test_in_spectrum_raises(self):
        with pytest.raises(InSpectrumError):
            resolvent_norm_sup(0, multipoint())

    def test_unknown_tail_is_lower_bound(self):
        fam = OperatorFamily((scalar(2.0),), TailRule(lambda n: scalar(2.0), resolvent=UNKNOWN))
        assert resolvent_norm_sup(0, fam).kind is SupKind.LOWER_BOUND


class TestScan:
    def test_single_node_matches_classify(self):
        rows = spectral_scan((-1, 1, TWO_PI - 1, TWO_PI + 1), (1, 1), multipoint())
        assert rows[0][0] == classify_direct_sum_point(complex(0, TWO_PI), multipoint())

    def test_three_by_three(self):
        fam = OperatorFamily.finite(FiniteMatrixOperator([[0.0]]))
        rows = spectral_scan((-1, 1, -1, 1), (3, 3), fam)
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                expected = SpectralClass.POINT if (i, j) == (1, 1) else SpectralClass.RESOLVENT
                assert c.spectral_class is expected

    def test_reciprocal_cell_at_zero(self):
        rows = spectral_scan((-1, 0, -1, 0), (2, 2), reciprocal_family())
        assert rows[1][1].point.value == 0
        assert rows[1][1].spectral_class is SpectralClass.CONTINUOUS

    def test_row_major_ordering(self):
        re, im = scan_nodes((0, 1, 0, 2), (2, 3))
        rows = spectral_scan((0, 1, 0, 2), (2, 3), OperatorFamily.finite(scalar(5)))
        assert [[c.point.value for c in row] for row in rows] == [[complex(x, y) for x in re] for y in im]

    def test_threaded_scan_identical(self):
        fam = OperatorFamily.finite(MultipointOperator(0, 1), scalar(1))
        region, grid = (-1, 8, -8, 8), (9, 7)
        assert spectral_scan(region, grid, fam) == spectral_scan(region, grid, fam, workers=4)

    def test_degenerate_region_rejected(self):
        with pytest.raises(ValueError):
            scan_nodes((1, 1, 0, 1), (2, 2))
        with pytest.raises(ValueError):
            scan_nodes((0, 1, 0, 1), (0, 2))


points = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False)


@settings(max_examples=80, deadline=None)
@given(lam=points)
def test_exactly_one_settled_class(lam):
    fam = OperatorFamily.finite(ShiftOperator(), MultipointOperator(0, 1), DiagonalOperator([1, 2, 3]))
    c = classify_direct_sum_point(lam, fam)
    per = dict(c.per_coordinate)
    assert c.spectral_class is not SpectralClass.INCONCLUSIVE
    if SpectralClass.POINT in per.values():
        assert c.spectral_class is SpectralClass.POINT
    elif SpectralClass.RESIDUAL in per.values():
        assert c.spectral_class is SpectralClass.RESIDUAL
    elif SpectralClass.CONTINUOUS in per.values():
        assert c.spectral_class is SpectralClass.CONTINUOUS
    else:
        assert c.spectral_class is SpectralClass.RESOLVENT
        assert c.resolvent_sup.is_finite


@settings(max_examples=60, deadline=None)
@given(values=st.lists(st.floats(-5, 5), min_size=1, max_size=6), lam=points)
def test_finite_sup_is_max_of_coordinates(values, lam):
    ops = [scalar(v) for v in values]
    fam = OperatorFamily.finite(*ops)
    if any(abs(v - lam) <= 1e-9 for v in values):
        return
    sup = resolvent_norm_sup(lam, fam)
    assert sup.value == pytest.approx(max(1 / abs(v - lam) for v in values))
