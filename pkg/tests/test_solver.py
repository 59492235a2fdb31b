import pytest

from apfam.errors import CapacityError, DomainError
from apfam.family import density, verify_family
from apfam.solver import (
    SearchConfig,
    brute_force_oracle,
    lower_bound_from_construction,
    solve_exact,
)

# frozen from the exhaustive oracle during development
F_TABLE = {
    2: 1, 3: 1, 4: 2, 5: 2, 6: 2, 7: 2, 8: 3, 9: 3, 10: 3, 11: 3,
    12: 4, 13: 4, 14: 4, 15: 4, 16: 5, 17: 5, 18: 6, 19: 6, 20: 6,
}


class TestOracle:
    def test_frozen_table(self):
        for x in range(2, 13):
            assert brute_force_oracle(x) == F_TABLE[x]

    def test_domain(self):
        with pytest.raises(DomainError):
            brute_force_oracle(1)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            brute_force_oracle(21)


class TestSolveExact:
    def test_matches_frozen_table(self):
        for x, expected in F_TABLE.items():
            result = solve_exact(SearchConfig(x=x))
            assert result.proven_optimal
            assert result.k_max == expected

    def test_matches_oracle(self):
        for x in range(2, 13):
            assert solve_exact(SearchConfig(x=x)).k_max == brute_force_oracle(x)

    def test_witness_is_valid(self):
        for x in (4, 8, 12, 16, 20):
            result = solve_exact(SearchConfig(x=x))
            assert result.witness.size == result.k_max
            assert result.witness.x_bound == x
            assert verify_family(result.witness).ok
            assert density(result.witness) <= 1

    def test_known_witness_shape(self):
        # x=4: {0 mod 2, 1 mod 4} up to translation; 3 never joins them
        result = solve_exact(SearchConfig(x=4))
        assert result.k_max == 2
        assert result.witness.moduli() == [2, 4]

    def test_translation_fixing_does_not_change_size(self):
        for x in (6, 9, 12):
            free = solve_exact(SearchConfig(x=x, fix_translation=False))
            fixed = solve_exact(SearchConfig(x=x))
            assert free.k_max == fixed.k_max
            assert free.nodes >= fixed.nodes

    def test_prunes_are_admissible(self):
        for x in (6, 8, 10):
            reference = solve_exact(
                SearchConfig(
                    x=x, prune_density=False, prune_completion=False
                )
            )
            assert reference.k_max == F_TABLE[x]

    def test_order_does_not_change_size(self):
        for x in (6, 10, 12):
            asc = solve_exact(SearchConfig(x=x, descending=False))
            assert asc.k_max == F_TABLE[x]

    def test_budget_exhaustion(self):
        result = solve_exact(SearchConfig(x=16, node_budget=20))
        assert not result.proven_optimal
        assert result.k_max <= F_TABLE[16]
        assert verify_family(result.witness).ok

    def test_monotone_in_x(self):
        sizes = [solve_exact(SearchConfig(x=x)).k_max for x in range(2, 21)]
        assert sizes == sorted(sizes)

    def test_domain(self):
        with pytest.raises(DomainError):
            SearchConfig(x=1)
        with pytest.raises(DomainError):
            SearchConfig(x=65)
        with pytest.raises(DomainError):
            SearchConfig(x=10, node_budget=0)


class TestLowerBound:
    def test_never_exceeds_exact(self):
        for x in (16, 18, 20):
            assert lower_bound_from_construction(x) <= solve_exact(SearchConfig(x=x)).k_max

    def test_x64_budgeted_run_stays_above_construction(self):
        # exact completion at 64 is out of reach; a budgeted run must still
        # produce a valid family at least as large as the construction
        result = solve_exact(SearchConfig(x=64, node_budget=200_000))
        assert not result.proven_optimal
        assert verify_family(result.witness).ok
        assert result.k_max >= lower_bound_from_construction(64)

    def test_value_at_16(self):
        # anchor prime 3, moduli {3, 6}
        assert lower_bound_from_construction(16) == 2

    def test_domain(self):
        with pytest.raises(DomainError):
            lower_bound_from_construction(15)
