"""Index-set generation, block densities, dimension fits, text format."""

import itertools
import math

import numpy as np
import pytest

from chaoslab import (
    BlockChoice,
    DegenerateFitError,
    IndexSet,
    InvalidArgumentError,
    ResourceLimitError,
    density_certificates,
    density_count,
    dump_index_set,
    estimate_dimension,
    gen_sum_set,
    gen_triangle,
    load_index_set,
    max_density,
)


def brute_sum_set(N):
    return {(i + j, j, i) for i in range(1, N) for j in range(i + 1, N) if i + j <= N}


def brute_block_count(A_tuples, blocks):
    sets = [set(b) for b in blocks]
    return sum(1 for t in A_tuples if all(v in s for v, s in zip(t, sets)))


class TestGenerators:
    def test_triangle_2_3(self):
        A = gen_triangle(2, 3)
        assert sorted(A.tuples()) == [(2, 1), (3, 1), (3, 2)]

    def test_triangle_3_3(self):
        assert sorted(gen_triangle(3, 3).tuples()) == [(3, 2, 1)]

    def test_triangle_order_1(self):
        assert sorted(gen_triangle(1, 5).tuples()) == [(j,) for j in range(1, 6)]

    def test_triangle_cardinality(self):
        for d, J in [(2, 8), (3, 9), (4, 10)]:
            assert len(gen_triangle(d, J)) == math.comb(J, d)

    def test_triangle_invalid(self):
        with pytest.raises(InvalidArgumentError):
            gen_triangle(3, 2)

    def test_triangle_lazy_matches_explicit(self):
        for d, J in [(2, 6), (3, 7)]:
            lazy = gen_triangle(d, J)
            explicit = IndexSet.from_tuples(itertools.combinations(range(J, 0, -1), d))
            assert lazy == explicit

    def test_huge_triangle_stays_cheap(self):
        A = gen_triangle(3, 1100)
        assert len(A) == math.comb(1100, 3)
        assert A.count_leq(64) == math.comb(64, 3)
        with pytest.raises(ResourceLimitError):
            A.to_array()

    def test_sum_set_small(self):
        expect = {(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4)}
        got = {(t[2], t[1]) for t in gen_sum_set(6).tuples()}
        assert got == expect
        assert len(gen_sum_set(5)) == 4

    def test_sum_set_closed_form(self):
        for N in range(3, 61):
            A = gen_sum_set(N)
            assert len(A) == (N - 1) ** 2 // 4
            assert set(A.tuples()) == brute_sum_set(N)
        assert len(gen_sum_set(200)) == 199**2 // 4 == 9900

    def test_sum_set_inside_triangle(self):
        A = gen_sum_set(12)
        tri = gen_triangle(3, 12)
        assert all(t in tri for t in A.tuples())

    def test_sum_set_invalid(self):
        with pytest.raises(InvalidArgumentError):
            gen_sum_set(2)


class TestDensityCount:
    def test_upper_corner(self):
        assert density_count(gen_triangle(2, 4), [(3, 4), (1, 2)]) == 4

    def test_identity_blocks_sum_set(self):
        A = gen_sum_set(6)
        assert density_count(A, [range(1, 7)] * 3) == 6

    def test_disjoint_blocks(self):
        assert density_count(gen_sum_set(12), [(100, 101), (1, 2), (1, 2)]) == 0

    def test_order_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            density_count(gen_sum_set(6), [(1, 2), (1, 2)])

    def test_triangle_dp_matches_brute_force(self):
        rng = np.random.default_rng(13)
        for d, J in [(2, 9), (3, 8)]:
            A = gen_triangle(d, J)
            tuples = list(A.tuples())
            for _ in range(20):
                n = int(rng.integers(1, 5))
                blocks = [tuple(rng.choice(np.arange(1, J + 2), size=n, replace=False)) for _ in range(d)]
                assert density_count(A, blocks) == brute_block_count(tuples, blocks)

    def test_bounded_by_block_volume(self):
        rng = np.random.default_rng(29)
        A = gen_sum_set(15)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            blocks = [tuple(rng.choice(np.arange(1, 16), size=n, replace=False)) for _ in range(3)]
            c = density_count(A, blocks)
            assert c <= min(len(A), n**3)


class TestMaxDensity:
    def test_exhaustive_example(self):
        count, witness = max_density(gen_triangle(2, 4), 2, 4, "exhaustive")
        assert count == 4
        assert witness.blocks == ((3, 4), (1, 2))

    def test_identity_sum_set(self):
        count, witness = max_density(gen_sum_set(20), 6, 20, "identity-blocks")
        assert count == 25 // 4 == 6
        assert witness.blocks[0] == (1, 2, 3, 4, 5, 6)

    def test_blocks_forced_at_full_universe(self):
        A = gen_sum_set(8)
        for strategy in ("exhaustive", "greedy-swap", "identity-blocks"):
            count, _ = max_density(A, 8, 8, strategy)
            assert count == len(A)

    def test_exhaustive_dominates(self):
        A = gen_sum_set(8)
        exh, _ = max_density(A, 3, 8, "exhaustive")
        greedy, _ = max_density(A, 3, 8, "greedy-swap")
        ident, _ = max_density(A, 3, 8, "identity-blocks")
        assert exh >= greedy >= ident

    def test_greedy_improves_on_identity(self):
        # moving the top block up captures more decreasing pairs
        A = gen_triangle(2, 6)
        greedy, witness = max_density(A, 2, 6, "greedy-swap")
        ident, _ = max_density(A, 2, 6, "identity-blocks")
        assert greedy >= ident
        exh, _ = max_density(A, 2, 6, "exhaustive")
        assert greedy <= exh

    def test_budget_error(self):
        with pytest.raises(ResourceLimitError) as err:
            max_density(gen_sum_set(40), 15, 30, "exhaustive")
        assert err.value.budget == 1_000_000

    def test_invalid_strategy(self):
        with pytest.raises(InvalidArgumentError):
            max_density(gen_sum_set(6), 2, 6, "magic")

    def test_monotone_identity_counts(self):
        A = gen_sum_set(30)
        counts = [max_density(A, n, 30, "identity-blocks")[0] for n in range(3, 15)]
        assert all(a <= b for a, b in zip(counts, counts[1:]))


class TestDensityCertificates:
    def test_sum_set_super_2(self):
        # identity blocks give floor((n-1)^2/4) elements; the worst ratio on
        # {4..12} is 2/16 at n=4
        report = density_certificates(gen_sum_set(40), 2.0, 2.0, range(4, 13), 40, "identity-blocks")
        assert report.quantity("super_alpha_constant") == pytest.approx(0.125, abs=1e-12)
        assert report.verdict
        report59 = density_certificates(
            gen_sum_set(40), 2.0, 2.0, range(5, 13), 40, "identity-blocks"
        )
        assert report59.quantity("super_alpha_constant") >= 0.14

    def test_triangle_sub_3(self):
        report = density_certificates(gen_triangle(3, 30), 1.0, 3.0, [2, 3], 6, "exhaustive")
        assert report.quantity("sub_beta_constant") <= 1.0
        assert report.inputs["sub_side"] == "certificate"

    def test_sum_set_sub_2_exhaustive(self):
        report = density_certificates(gen_sum_set(30), 1.0, 2.0, [2], 6, "exhaustive")
        assert report.quantity("sub_beta_constant") <= 1.0

    def test_heuristic_labeling(self):
        report = density_certificates(gen_sum_set(20), 1.0, 2.0, [3, 4], 20, "identity-blocks")
        assert report.inputs["super_side"] == "lower-bound evidence"

    def test_parameter_order(self):
        with pytest.raises(InvalidArgumentError):
            density_certificates(gen_sum_set(20), 2.0, 1.0, [3], 20)


class TestEstimateDimension:
    N_LIST = [64, 128, 256, 512, 1024]

    def test_sum_set_slope(self):
        profile = estimate_dimension(gen_sum_set(2100), self.N_LIST, 2100)
        counts = [(n - 1) ** 2 // 4 for n in self.N_LIST]
        oracle = np.polyfit(np.log(self.N_LIST), np.log(counts), 1)[0]
        assert profile.alpha_hat == pytest.approx(oracle, abs=1e-12)
        assert 1.95 <= profile.alpha_hat <= 2.05
        assert profile.r_squared > 0.9999

    def test_triangle_order3_slope(self):
        profile = estimate_dimension(gen_triangle(3, 1100), self.N_LIST, 1100)
        counts = [math.comb(n, 3) for n in self.N_LIST]
        oracle = np.polyfit(np.log(self.N_LIST), np.log(counts), 1)[0]
        assert profile.alpha_hat == pytest.approx(oracle, abs=1e-12)
        # the local slope of log C(n,3) is 3 + ~3/n, so the fit sits just above 3
        assert 3.0 < profile.alpha_hat < 3.03

    def test_triangle_order1_slope(self):
        profile = estimate_dimension(gen_triangle(1, 1100), self.N_LIST, 1100)
        assert profile.alpha_hat == pytest.approx(1.0, abs=1e-3)

    def test_rows_capture_witnesses(self):
        profile = estimate_dimension(gen_sum_set(40), [4, 8, 16], 40)
        assert [r.best_count for r in profile.rows] == [2, 12, 56]
        assert profile.rows[0].witness.blocks[0] == (1, 2, 3, 4)

    def test_needs_three_points(self):
        with pytest.raises(InvalidArgumentError):
            estimate_dimension(gen_sum_set(40), [4, 8], 40)

    def test_degenerate_fit(self):
        A = IndexSet.from_tuples([(9, 8, 7)])
        with pytest.raises(DegenerateFitError):
            estimate_dimension(A, [3, 4, 5], 9)


class TestBlockChoice:
    def test_identity(self):
        b = BlockChoice.identity(3, 4)
        assert b.order == 3 and b.n == 4

    def test_size_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            BlockChoice(((1, 2), (3,)))

    def test_positive_entries(self):
        with pytest.raises(InvalidArgumentError):
            BlockChoice(((0, 1), (2, 3)))


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        A = gen_sum_set(9)
        path = tmp_path / "a.idx"
        dump_index_set(A, path)
        B = load_index_set(path)
        assert A == B
        # a second dump is byte-identical
        path2 = tmp_path / "b.idx"
        dump_index_set(B, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_comments_and_blanks(self, tmp_path):
        path = tmp_path / "c.idx"
        path.write_text("# header\n\n3 2 1\n# mid\n4 2 1\n\n")
        A = load_index_set(path)
        assert sorted(A.tuples()) == [(3, 2, 1), (4, 2, 1)]

    def test_line_order_irrelevant(self, tmp_path):
        p1, p2 = tmp_path / "f.idx", tmp_path / "g.idx"
        p1.write_text("3 2 1\n4 2 1\n")
        p2.write_text("4 2 1\n3 2 1\n")
        assert load_index_set(p1) == load_index_set(p2)

    def test_bad_line(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_text("3 x 1\n")
        with pytest.raises(InvalidArgumentError):
            load_index_set(path)

    def test_non_decreasing_line(self, tmp_path):
        path = tmp_path / "bad2.idx"
        path.write_text("1 2 3\n")
        with pytest.raises(InvalidArgumentError):
            load_index_set(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.idx"
        path.write_text("# nothing\n")
        with pytest.raises(InvalidArgumentError):
            load_index_set(path)


class TestIndexSetOps:
    def test_restrict_explicit(self):
        A = gen_sum_set(12)
        assert set(A.restrict(6).tuples()) == set(gen_sum_set(6).tuples())

    def test_restrict_triangle(self):
        A = gen_triangle(3, 50)
        R = A.restrict(5)
        assert R.is_triangle and len(R) == math.comb(5, 3)

    def test_membership(self):
        A = gen_sum_set(10)
        assert (3, 2, 1) in A
        assert (4, 3, 2) not in A  # 2+3=5, not 4
        assert (5, 2) not in A  # wrong order

    def test_count_leq_matches_restrict(self):
        A = gen_sum_set(33)
        for n in (3, 7, 12, 33):
            assert A.count_leq(n) == len(A.restrict(n))
