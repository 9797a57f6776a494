#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sno/stats.hpp"

using namespace sno;

TEST_CASE("midranks") {
    CHECK(midranks(std::vector<double>{3.0, 1.0, 2.0}) == std::vector<double>{3.0, 1.0, 2.0});
    CHECK(midranks(std::vector<double>{1.0, 1.0}) == std::vector<double>{1.5, 1.5});
    CHECK(midranks(std::vector<double>{5.0, 2.0, 2.0, 1.0}) ==
          std::vector<double>{4.0, 2.5, 2.5, 1.0});
}

TEST_CASE("average ranks: dominance and ties") {
    ResultTable a{"a", {{"f1_10", {1.0, 2.0}}, {"f2_10", {1.0, 1.0}}}};
    ResultTable b{"b", {{"f1_10", {3.0, 4.0}}, {"f2_10", {2.0, 2.0}}}};
    const std::vector<ResultTable> tables{a, b};

    auto ranks = average_ranks(tables, RankMode::Avg);
    CHECK(ranks[0].second == 1.0);
    CHECK(ranks[1].second == 2.0);
    ranks = average_ranks(tables, RankMode::Best);
    CHECK(ranks[0].second == 1.0);
    CHECK(ranks[1].second == 2.0);

    // An exact tie on a cell yields mid-rank 1.5 for both.
    ResultTable c{"c", {{"f1_10", {1.0, 4.0}}, {"f2_10", {1.0, 1.0}}}};
    const std::vector<ResultTable> tied{a, c};
    ranks = average_ranks(tied, RankMode::Avg);
    // cells: (1,1)->1.5/1.5, (2,4)->1/2, (1,1)->1.5/1.5, (1,1)->1.5/1.5
    CHECK(ranks[0].second == doctest::Approx((1.5 + 1.0 + 1.5 + 1.5) / 4.0));
    CHECK(ranks[1].second == doctest::Approx((1.5 + 2.0 + 1.5 + 1.5) / 4.0));
}

TEST_CASE("average ranks: three-algorithm hand fixture") {
    // 2 functions x 2 trials. Hand-ranked cells:
    //   f1 trial 0: a=1, b=2, c=3     f1 trial 1: a=2, b=1, c=3
    //   f2 trial 0: a=3, b=1.5, c=1.5 f2 trial 1: a=1, b=2, c=3
    ResultTable a{"a", {{"f1_2", {0.1, 0.5}}, {"f2_2", {9.0, 0.2}}}};
    ResultTable b{"b", {{"f1_2", {0.2, 0.4}}, {"f2_2", {4.0, 0.3}}}};
    ResultTable c{"c", {{"f1_2", {0.3, 0.6}}, {"f2_2", {4.0, 0.4}}}};
    const std::vector<ResultTable> tables{a, b, c};

    const auto ranks = average_ranks(tables, RankMode::Avg);
    CHECK(ranks[0].second == doctest::Approx((1.0 + 2.0 + 3.0 + 1.0) / 4.0));
    CHECK(ranks[1].second == doctest::Approx((2.0 + 1.0 + 1.5 + 2.0) / 4.0));
    CHECK(ranks[2].second == doctest::Approx((3.0 + 3.0 + 1.5 + 3.0) / 4.0));

    // Best mode: per function the best trials are a=(0.1, 0.2), b=(0.2, 0.3),
    // c=(0.3, 0.4) -> a first everywhere.
    const auto best = average_ranks(tables, RankMode::Best);
    CHECK(best[0].second == 1.0);
    CHECK(best[1].second == 2.0);
    CHECK(best[2].second == 3.0);
}

TEST_CASE("average ranks reject malformed inputs") {
    ResultTable a{"a", {{"f1_10", {1.0}}}};
    ResultTable b_mismatched{"b", {{"f2_10", {1.0}}}};
    ResultTable b_short{"b", {{"f1_10", {1.0, 2.0}}}};
    CHECK_THROWS_AS(average_ranks(std::vector<ResultTable>{a}, RankMode::Avg),
                    std::invalid_argument);
    CHECK_THROWS_AS(average_ranks(std::vector<ResultTable>{a, b_mismatched}, RankMode::Avg),
                    std::invalid_argument);
    CHECK_THROWS_AS(average_ranks(std::vector<ResultTable>{a, b_short}, RankMode::Avg),
                    std::invalid_argument);
}

TEST_CASE("rank conservation and monotone-transform invariance") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> error(0.0, 10.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        std::vector<ResultTable> tables(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) {
            tables[static_cast<std::size_t>(t)].algorithm = "alg" + std::to_string(t);
            for (const char* function : {"f1_10", "f2_10", "f3_10"}) {
                std::vector<double> errors(6);
                for (double& e : errors) {
                    e = error(rng);
                }
                tables[static_cast<std::size_t>(t)].errors_by_function[function] = errors;
            }
        }
        for (const RankMode mode : {RankMode::Avg, RankMode::Best}) {
            const auto ranks = average_ranks(tables, mode);
            double total = 0.0;
            for (const auto& [name, rank] : ranks) {
                total += rank;
            }
            CHECK(total / k == doctest::Approx((k + 1) / 2.0).epsilon(1e-12));
        }

        // exp() is strictly monotone: ranks must not move.
        std::vector<ResultTable> transformed = tables;
        for (ResultTable& table : transformed) {
            for (auto& [function, errors] : table.errors_by_function) {
                for (double& e : errors) {
                    e = std::exp(e / 10.0);
                }
            }
        }
        const auto before = average_ranks(tables, RankMode::Avg);
        const auto after = average_ranks(transformed, RankMode::Avg);
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].second == doctest::Approx(after[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("wilcoxon textbook fixtures (exact small-sample path)") {
    // Complete separation at n = 5: U = 0, exact two-sided p = 2/252.
    const std::vector<double> low5{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> high5{6.0, 7.0, 8.0, 9.0, 10.0};
    CHECK(rank_sum_p_value(low5, high5) == doctest::Approx(2.0 / 252.0).epsilon(1e-12));
    CHECK(wilcoxon_classify(low5, high5) == WilcoxonOutcome::Better);
    CHECK(wilcoxon_classify(high5, low5) == WilcoxonOutcome::Worse);

    // Interleaved samples: U = 10, p = 174/252, clearly not significant.
    const std::vector<double> odd{1.0, 3.0, 5.0, 7.0, 9.0};
    const std::vector<double> even{2.0, 4.0, 6.0, 8.0, 10.0};
    CHECK(rank_sum_p_value(odd, even) == doctest::Approx(0.6904761904761905).epsilon(1e-12));
    CHECK(wilcoxon_classify(odd, even) == WilcoxonOutcome::NoDifference);

    // n = 4 critical value is U = 0 at alpha = 0.05: p(U=0) = 2/70 rejects,
    // p(U=1) = 4/70 does not.
    const std::vector<double> low4{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> high4{5.0, 6.0, 7.0, 8.0};
    CHECK(rank_sum_p_value(low4, high4) == doctest::Approx(2.0 / 70.0).epsilon(1e-12));
    CHECK(wilcoxon_classify(low4, high4) == WilcoxonOutcome::Better);
    const std::vector<double> low4_u1{1.0, 2.0, 3.0, 5.0};
    const std::vector<double> high4_u1{4.0, 6.0, 7.0, 8.0};
    CHECK(rank_sum_p_value(low4_u1, high4_u1) == doctest::Approx(4.0 / 70.0).epsilon(1e-12));
    CHECK(wilcoxon_classify(low4_u1, high4_u1) == WilcoxonOutcome::NoDifference);

    // n = 5 critical value is U = 2: U = 3 stays insignificant (p = 14/252).
    const std::vector<double> u3_a{1.0, 2.0, 3.0, 4.0, 8.0};
    const std::vector<double> u3_b{5.0, 6.0, 7.0, 9.0, 10.0};
    CHECK(rank_sum_p_value(u3_a, u3_b) == doctest::Approx(14.0 / 252.0).epsilon(1e-12));
    CHECK(wilcoxon_classify(u3_a, u3_b) == WilcoxonOutcome::NoDifference);
}

TEST_CASE("wilcoxon normal-approximation path") {
    // 25 vs 25 with complete separation; reference p from the standard
    // continuity-corrected normal approximation.
    std::vector<double> a(25);
    std::vector<double> b(25);
    for (int i = 0; i < 25; ++i) {
        a[static_cast<std::size_t>(i)] = i;
        b[static_cast<std::size_t>(i)] = 100 + i;
    }
    const double p = rank_sum_p_value(a, b);
    CHECK(p == doctest::Approx(1.4156562248495537e-09).epsilon(1e-6));
    CHECK(wilcoxon_classify(a, b) == WilcoxonOutcome::Better);
    CHECK(wilcoxon_classify(b, a) == WilcoxonOutcome::Worse);
}

TEST_CASE("wilcoxon identical samples") {
    const std::vector<double> same{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(wilcoxon_classify(same, same) == WilcoxonOutcome::NoDifference);
    const std::vector<double> constant(10, 3.14);
    CHECK(wilcoxon_classify(constant, constant) == WilcoxonOutcome::NoDifference);
}

TEST_CASE("wilcoxon antisymmetry on random pairs") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> error(0.0, 1.0);
    std::uniform_int_distribution<int> size(5, 30);
    std::uniform_real_distribution<double> shift(-0.5, 0.5);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size(rng);
        const double offset = shift(rng);
        std::vector<double> a(static_cast<std::size_t>(n));
        std::vector<double> b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            a[static_cast<std::size_t>(i)] = error(rng);
            b[static_cast<std::size_t>(i)] = error(rng) + offset;
        }
        const WilcoxonOutcome forward = wilcoxon_classify(a, b);
        const WilcoxonOutcome backward = wilcoxon_classify(b, a);
        if (forward == WilcoxonOutcome::Better) {
            CHECK(backward == WilcoxonOutcome::Worse);
        } else if (forward == WilcoxonOutcome::Worse) {
            CHECK(backward == WilcoxonOutcome::Better);
        } else {
            CHECK(backward == WilcoxonOutcome::NoDifference);
        }
    }
}

TEST_CASE("signed-rank variant") {
    std::vector<double> a(20);
    std::vector<double> b(20);
    for (int i = 0; i < 20; ++i) {
        a[static_cast<std::size_t>(i)] = i;
        b[static_cast<std::size_t>(i)] = i + 1.0;  // uniformly worse partner
    }
    CHECK(wilcoxon_classify_paired(a, b) == WilcoxonOutcome::Better);
    CHECK(wilcoxon_classify_paired(b, a) == WilcoxonOutcome::Worse);
    CHECK(wilcoxon_classify_paired(a, a) == WilcoxonOutcome::NoDifference);
    CHECK(signed_rank_p_value(a, a) == 1.0);
}
