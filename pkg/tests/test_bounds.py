import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from apfam.bounds import (
    CountsRow,
    alpha_exceeding_fraction,
    bounds_report,
    choose_alpha,
    omega_tail_count,
    omega_tail_majorant,
    omega_threshold,
    prime_power_reciprocal_sum,
    rows_to_csv,
    split_squarefull,
    squarefull_reduce,
)
from apfam.construction import ConstructionParams, build_construction
from apfam.errors import DomainError
from apfam.family import Family, Progression, verify_family
from apfam.numtheory import l_scale


def fam(pairs, x_bound):
    return Family.build([Progression(a, q) for a, q in pairs], x_bound)


def tail_coefficient(x, threshold):
    # c that puts the tail threshold exactly at the given value
    lx = math.log(x)
    return threshold / math.sqrt(lx / math.log(lx))


class TestOmegaTailCount:
    def test_zero_for_tiny_x(self):
        assert omega_tail_count(1, 1.0) == 0
        assert omega_tail_count(2, 0.001) == 0

    def test_threshold_ten_at_100(self):
        assert omega_tail_count(100, tail_coefficient(100, 10)) == 0

    def test_threshold_two_and_half_at_100(self):
        # n <= 100 with more than 2.5 prime factors: the eight 3-factor ones
        c = tail_coefficient(100, 2.5)
        assert omega_tail_count(100, c) == 8

    def test_against_sympy(self):
        c = tail_coefficient(1000, 2.5)
        expected = sum(
            1
            for n in range(1, 1001)
            if len(sympy.factorint(n)) > omega_threshold(1000, c)
        )
        assert omega_tail_count(1000, c) == expected

    def test_domain(self):
        with pytest.raises(DomainError):
            omega_tail_count(0, 1)
        with pytest.raises(DomainError):
            omega_tail_count(100, 0)


class TestMajorant:
    def test_reciprocal_sum_regression(self):
        # 12-digit regression value for the prime-power reciprocal sum at 100
        assert prime_power_reciprocal_sum(100) == pytest.approx(
            2.508094191475, rel=1e-12
        )

    def test_reciprocal_sum_matches_direct(self):
        direct = 0.0
        for n in range(2, 201):
            fact = sympy.factorint(n)
            if len(fact) == 1:
                direct += 1.0 / n
        assert prime_power_reciprocal_sum(200) == pytest.approx(direct, rel=1e-12)

    def test_dominates_count(self):
        for x in (10**3, 10**4):
            for c in (0.5, 1.0, 2.0):
                assert omega_tail_majorant(x, c) >= omega_tail_count(x, c)

    def test_huge_threshold_vanishes(self):
        assert omega_tail_majorant(10**4, 50.0) == pytest.approx(0.0, abs=1e-12)
        assert omega_tail_count(10**4, 50.0) == 0

    def test_domain(self):
        with pytest.raises(DomainError):
            omega_tail_majorant(15, 1)
        with pytest.raises(DomainError):
            omega_tail_majorant(100, -1)


class TestSplitSquarefull:
    def test_examples(self):
        assert split_squarefull(12) == (4, 3)
        assert split_squarefull(30) == (1, 30)
        assert split_squarefull(72) == (72, 1)
        assert split_squarefull(1) == (1, 1)

    @given(st.integers(min_value=1, max_value=10**5))
    def test_reconstruction(self, n):
        alpha, beta = split_squarefull(n)
        assert alpha * beta == n
        assert math.gcd(alpha, beta) == 1
        # beta squarefree, alpha squarefull
        assert all(e == 1 for e in sympy.factorint(beta).values())
        assert all(e >= 2 for e in sympy.factorint(alpha).values())


class TestSquarefullReduce:
    def test_two_member_example(self):
        # 12 = 4*3 and 60 = 4*15 share alpha 4 and the class 1 mod 4;
        # they stay disjoint because the betas share the prime 3
        f = fam([(9, 12), (25, 60)], 60)
        assert verify_family(f).ok
        reduced = squarefull_reduce(f, 4)
        assert [(pr.residue, pr.modulus) for pr in reduced.items] == [(0, 3), (10, 15)]
        assert verify_family(reduced).ok
        assert reduced.x_bound == 15

    def test_identity_on_squarefree(self):
        f = fam([(0, 2), (1, 3), (5, 6)], 6)
        reduced = squarefull_reduce(f, 1)
        # alpha 1 selects everything; largest class mod 1 is everything
        assert reduced.items == f.items

    def test_largest_class_wins(self):
        # alpha 4: classes mod 4 are {1: [12, 60], 3: [20]}
        f = fam([(9, 12), (3, 20), (25, 60)], 60)
        assert verify_family(f).ok
        reduced = squarefull_reduce(f, 4)
        assert reduced.moduli() == [3, 15]

    def test_no_members_with_alpha(self):
        f = fam([(0, 2), (1, 3)], 10)
        assert squarefull_reduce(f, 4).size == 0

    def test_member_equal_to_alpha_rejected(self):
        f = fam([(1, 4)], 10)
        with pytest.raises(DomainError):
            squarefull_reduce(f, 4)

    def test_domain(self):
        with pytest.raises(DomainError):
            squarefull_reduce(fam([], 10), 0)

    def test_choose_alpha(self):
        f = fam([(9, 12), (3, 20), (1, 18), (0, 5)], 20)
        # squarefull parts: 12 -> 4, 20 -> 4, 18 -> 9, 5 -> 1
        assert choose_alpha(f) == 4
        assert choose_alpha(fam([], 10)) == 1

    def test_reduction_recovers_scaled_family(self):
        # scale a disjoint squarefree family by alpha with one shared class
        import random

        from apfam.construction import assign_residue
        from apfam.numtheory import crt_pair

        rng = random.Random(3)
        cases = {4: [7, 21, 35, 105], 9: [7, 14, 35, 70], 8: [7, 21, 35, 105]}
        for _ in range(20):
            alpha = rng.choice((4, 8, 9))
            smooth = cases[alpha]
            b = rng.randrange(alpha)
            chain = [assign_residue(q, 7) for q in smooth]
            scaled = [
                Progression(crt_pair(pr.residue, pr.modulus, b, alpha)[0], alpha * pr.modulus)
                for pr in chain
            ]
            f = Family.build(scaled, alpha * 105)
            assert verify_family(f).ok
            reduced = squarefull_reduce(f, alpha)
            assert [(pr.residue, pr.modulus) for pr in reduced.items] == [
                (pr.residue, pr.modulus) for pr in chain
            ]
            assert verify_family(reduced).ok


class TestAlphaFraction:
    def test_squarefree_construction_is_zero(self):
        f = build_construction(ConstructionParams(x=10**4, squarefree_only=True)).family
        assert alpha_exceeding_fraction(f) == 0

    def test_report_on_default_construction(self):
        f = build_construction(ConstructionParams(x=10**4)).family
        fraction = alpha_exceeding_fraction(f)
        assert 0 <= fraction <= 1

    def test_empty(self):
        assert alpha_exceeding_fraction(fam([], 100)) == 0


class TestBoundsReport:
    def test_psi_row(self):
        rows = bounds_report([1000], [1.0], kinds=("psi",))
        assert len(rows) == 1
        row = rows[0]
        assert row.kind == "psi" and row.x == 1000 and row.exact == 461
        assert row.predicted == pytest.approx(1000 / l_scale(0.5, 1000))
        assert row.ratio == pytest.approx(row.exact / row.predicted)

    def test_all_kinds(self):
        rows = bounds_report([1000], [1.0])
        assert [r.kind for r in rows] == ["psi", "psistar", "omega_tail"]

    def test_f_lower(self):
        rows = bounds_report([100], [1 / math.sqrt(2)], kinds=("f_lower",))
        assert rows[0].exact == 6
        assert rows[0].predicted == pytest.approx(100 / l_scale(math.sqrt(2), 100))

    def test_degenerate_smallest_x(self):
        rows = bounds_report([16], [1.0])
        assert all(math.isfinite(r.predicted) and r.predicted > 0 for r in rows)

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            bounds_report([100], [1.0], kinds=("weird",))

    def test_csv_shape(self):
        rows = bounds_report([1000], [1.0], kinds=("psi", "omega_tail"))
        text = rows_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "kind,x,c,exact,predicted,ratio"
        assert len(lines) == 3
        fields = lines[1].split(",")
        assert fields[0] == "psi" and int(fields[1]) == 1000
        assert float(fields[4]) > 0
