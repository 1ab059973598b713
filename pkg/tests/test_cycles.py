"""Cycle construction, boundary accounting, residue classes, span checks.

The residue derivation goes through the local blow-up rules; the closed
forms (exceptional three-term class for gamma, line degeneration class
for lambda) serve as oracles here.
"""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from hodge_degen.cycles import (
    HigherCycle,
    MarkerCancellationError,
    Precycle,
    boundary_divisor,
    build_cycle,
    express_in_B,
    family_cycles,
    pair_kernel_class,
    singularity_at_infinity,
    singularity_at_zero,
    span_rank,
    threefold_boundary,
)
from hodge_degen.degeneration import H2Class, hodge_kernel_basis, phi_matrix, reduce_raw


def gamma_closed_form(d, i, j, k, l):
    """Oracle: the three-term exceptional class."""
    return reduce_raw(
        d,
        {("e", i, j, l): Fraction(1), ("e", j, k, l): Fraction(1), ("e", i, k, l): Fraction(-1)},
    )


def lambda_closed_form(d, i, l):
    """Oracle: strict transform plus the higher-index exceptional curves."""
    raw = {("l", i): Fraction(1)}
    for a in range(1, i):
        raw[("e", a, i, l)] = Fraction(-1)
    for a in range(i + 1, d + 1):
        raw[("e", i, a, l)] = Fraction(1)
    return reduce_raw(d, raw)


class TestBuildCycle:
    def test_gamma_terms(self):
        g = build_cycle("gamma", (1, 2, 3, 1))
        assert [t.support for t in g.terms] == [(1, 1), (2, 1), (3, 1)]
        assert [t.func_zero for t in g.terms] == [("L", 2), ("L", 3), ("L", 1)]
        assert [t.func_pole for t in g.terms] == [("L", 3), ("L", 1), ("L", 2)]

    def test_delta_swaps_roles(self):
        dl = build_cycle("delta", (4, 1, 2, 3))
        assert [t.support for t in dl.terms] == [(4, 1), (4, 2), (4, 3)]
        assert [t.func_zero for t in dl.terms] == [("M", 2), ("M", 3), ("M", 1)]

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            build_cycle("gamma", (2, 1, 3, 1))
        with pytest.raises(ValueError):
            build_cycle("delta", (1, 3, 2, 4))

    def test_lambda(self):
        lam = build_cycle("lambda", (2, 3))
        assert lam.terms[0].support == (2, 3)
        assert lam.terms[0].func_zero is None


class TestBoundary:
    def test_single_term(self):
        term = Precycle((1, 2), ("L", 2), ("L", 3))
        div = boundary_divisor(HigherCycle("gamma", (), (term,)))
        assert dict(div.points) == {("p", 1, 2, 2): 1, ("p", 1, 3, 2): -1}

    @pytest.mark.parametrize("d", range(3, 7))
    def test_gamma_and_delta_close(self, d):
        for c in family_cycles(d, "gamma") + family_cycles(d, "delta"):
            assert boundary_divisor(c).is_zero()

    def test_lambda_closes(self):
        assert boundary_divisor(build_cycle("lambda", (1, 1))).is_zero()


class TestSingularity:
    def test_gamma_example(self):
        got = singularity_at_zero(build_cycle("gamma", (1, 2, 3, 1)), 4)
        assert got == gamma_closed_form(4, 1, 2, 3, 1)
        assert got == H2Class(
            4,
            {("e", 1, 2, 1): Fraction(1), ("e", 2, 3, 1): Fraction(1), ("e", 1, 3, 1): Fraction(-1)},
        )

    def test_lambda_example(self):
        got = singularity_at_zero(build_cycle("lambda", (1, 1)), 4)
        assert got == H2Class(
            4,
            {
                ("l", 1): Fraction(1),
                ("e", 1, 2, 1): Fraction(1),
                ("e", 1, 3, 1): Fraction(1),
                ("e", 1, 4, 1): Fraction(1),
            },
        )

    @pytest.mark.parametrize("d", range(3, 7))
    def test_gamma_closed_form_all(self, d):
        for i, j, k in combinations(range(1, d + 1), 3):
            for l in range(1, d + 1):
                got = singularity_at_zero(build_cycle("gamma", (i, j, k, l)), d)
                assert got == gamma_closed_form(d, i, j, k, l)

    @pytest.mark.parametrize("d", range(3, 7))
    def test_lambda_closed_form_all(self, d):
        for i in range(1, d + 1):
            for l in range(1, d + 1):
                got = singularity_at_zero(build_cycle("lambda", (i, l)), d)
                assert got == lambda_closed_form(d, i, l)

    @pytest.mark.parametrize("d", range(3, 7))
    def test_delta_trivial_all(self, d):
        for c in family_cycles(d, "delta"):
            assert singularity_at_zero(c, d).is_zero()

    @pytest.mark.parametrize("d", range(2, 7))
    def test_lambda_column_sums(self, d):
        total_lines = H2Class(d, {("l", i): Fraction(1) for i in range(1, d + 1)})
        for l in range(1, d + 1):
            acc = H2Class(d, {})
            for i in range(1, d + 1):
                acc = acc + singularity_at_zero(build_cycle("lambda", (i, l)), d)
            assert acc == total_lines

    def test_marker_cancellation_enforced(self):
        lone = HigherCycle("gamma", (), (Precycle((1, 1), ("L", 2), ("L", 3)),))
        with pytest.raises(MarkerCancellationError):
            singularity_at_zero(lone, 4)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            singularity_at_zero(build_cycle("gamma", (1, 2, 5, 1)), 4)


class TestRelabelingSymmetry:
    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_delta_at_infinity_is_swapped_gamma(self, d):
        for i in range(1, d + 1):
            for l, m, n in combinations(range(1, d + 1), 3):
                dl = build_cycle("delta", (i, l, m, n))
                gm = build_cycle("gamma", (l, m, n, i))
                assert singularity_at_infinity(dl, d) == singularity_at_zero(gm, d)

    def test_gamma_trivial_at_infinity(self):
        g = build_cycle("gamma", (1, 2, 3, 1))
        assert singularity_at_infinity(g, 4).is_zero()

    def test_lambda_swaps_indices(self):
        lam = build_cycle("lambda", (2, 3))
        swapped = build_cycle("lambda", (3, 2))
        assert singularity_at_infinity(lam, 4) == singularity_at_zero(swapped, 4)


class TestExpressInB:
    def test_gamma_quarter_pattern(self):
        cls = singularity_at_zero(build_cycle("gamma", (1, 2, 3, 1)), 4)
        res = express_in_B(cls, 4)
        assert res.in_span and res.residual.is_zero()
        # basis order: total, then (i,j) lex with l = 1..3
        expected = [Fraction(0)] * 19
        expected[1] = Fraction(1, 4)   # pair (1,2), l=1
        expected[4] = Fraction(-1, 4)  # pair (1,3), l=1
        expected[10] = Fraction(1, 4)  # pair (2,3), l=1
        assert list(res.coeffs) == expected

    def test_lambda_quarter_pattern(self):
        cls = singularity_at_zero(build_cycle("lambda", (1, 1)), 4)
        res = express_in_B(cls, 4)
        expected = [Fraction(0)] * 19
        expected[0] = Fraction(1, 4)
        expected[1] = Fraction(1, 4)   # (1,2), l=1
        expected[4] = Fraction(1, 4)   # (1,3), l=1
        expected[7] = Fraction(1, 4)   # (1,4), l=1
        assert list(res.coeffs) == expected

    def test_zero_class(self):
        res = express_in_B(H2Class(4, {}), 4)
        assert res.in_span and all(c == 0 for c in res.coeffs)

    def test_left_inverse(self):
        rng = random.Random(5)
        basis = hodge_kernel_basis(4)
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in basis]
        combo = H2Class(4, {})
        for c, b in zip(coeffs, basis):
            combo = combo + b.scale(c)
        res = express_in_B(combo, 4)
        assert res.in_span and list(res.coeffs) == coeffs

    def test_off_kernel_residual(self):
        x = H2Class(4, {("l", 1): Fraction(1)})
        res = express_in_B(x, 4)
        assert not res.in_span and res.coeffs is None
        phi = phi_matrix(4)
        assert phi.mul_vector(res.residual.vector()) == phi.mul_vector(x.vector())


class TestSpanRank:
    @pytest.mark.parametrize("d,expected", [(3, 7), (4, 19), (5, 41)])
    def test_full_family_spans(self, d, expected):
        res = span_rank(d, "both")
        assert res.rank == res.expected == expected
        assert res.spanning and res.combination_verified

    def test_lambda_only_falls_short(self):
        res = span_rank(4, "lambda")
        assert res.rank == 10 and not res.spanning

    def test_gamma_only_falls_short(self):
        res = span_rank(4, "gamma")
        assert res.rank == 9 and not res.spanning

    def test_gamma_needs_three_planes(self):
        with pytest.raises(ValueError):
            span_rank(2, "both")

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_explicit_combination_directly(self, d):
        # the corrected-sign combination reproduces each pair class
        for i, j in combinations(range(1, d + 1), 2):
            for l in range(1, d + 1):
                acc = singularity_at_zero(build_cycle("lambda", (i, l)), d)
                acc = acc - singularity_at_zero(build_cycle("lambda", (j, l)), d)
                for k in range(1, i):
                    acc = acc + singularity_at_zero(build_cycle("gamma", (k, i, j, l)), d)
                for k in range(i + 1, j):
                    acc = acc - singularity_at_zero(build_cycle("gamma", (i, k, j, l)), d)
                for k in range(j + 1, d + 1):
                    acc = acc + singularity_at_zero(build_cycle("gamma", (i, j, k, l)), d)
                assert acc == pair_kernel_class(d, i, j, l)


class TestThreefoldBoundary:
    def test_three_term_shape(self):
        tb = threefold_boundary(1, 2, 3, 1)
        assert tb.lines == (((1, 2, 1), Fraction(1)), ((2, 3, 1), Fraction(1)), ((1, 3, 1), Fraction(-1)))
        assert tb.side == "L"

    def test_coefficient_sum(self):
        assert threefold_boundary(2, 3, 5, 4).coefficient_sum() == 1

    def test_ordering(self):
        with pytest.raises(ValueError):
            threefold_boundary(2, 1, 3, 1)

    def test_mirrored_side(self):
        tb = threefold_boundary(1, 2, 4, 3, side="M")
        assert tb.side == "M"
        assert [c for _, c in tb.lines] == [1, 1, -1]
