#include <doctest.h>

#include <cmath>

#include "tailrent/baselines.hpp"
#include "tailrent/solver.hpp"
#include "tailrent/structure.hpp"

using namespace tailrent;

TEST_CASE("partition intervals at gamma=2, n=9") {
    IntervalPartition p = partition_intervals(9, 2, 2);
    REQUIRE(p.intervals.size() == 3);
    CHECK(p.intervals[0] == std::pair<long, long>{1, 4});
    CHECK(p.intervals[1] == std::pair<long, long>{5, 6});
    CHECK(p.intervals[2] == std::pair<long, long>{7, 7});
}

TEST_CASE("partition identities hold exactly for gamma in {2,3,5}") {
    for (int gamma : {2, 3, 5}) {
        for (int e = 4; e <= 8; ++e) {
            long m = 1;
            for (int i = 0; i < e; ++i) m *= gamma;
            const int n = static_cast<int>(m) + 1;
            IntervalPartition p = partition_intervals(n, gamma, e - 1);
            REQUIRE(static_cast<int>(p.intervals.size()) == e);
            CHECK(p.intervals[0].second == m / gamma);  // r_0 = (n-1)/gamma
            CHECK(p.intervals[1].first == m / gamma + 1);
            long pw = gamma;
            for (int j = 0; j < e; ++j) {
                auto [lj, rj] = p.intervals[static_cast<size_t>(j)];
                CHECK(rj - lj + 1 == m / pw);  // |P_j| = (n-1)/gamma^{j+1}
                if (j > 0) {
                    auto [lprev, rprev] = p.intervals[static_cast<size_t>(j - 1)];
                    CHECK(lprev == gamma * lj - m - (gamma - 1));
                    CHECK(rprev == gamma * rj - m);
                    CHECK(lj == rprev + 1);  // disjoint and adjacent
                }
                pw *= gamma;
            }
        }
    }
    CHECK_THROWS_AS(partition_intervals(10, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(partition_intervals(9, 2, 3), std::invalid_argument);
}

TEST_CASE("analyze_structure on a gamma=2 instance with small delta") {
    const int n = 1025;  // 2^10 + 1
    const double delta = 0.05;
    ProblemInstance inst(n, {{2.0, delta}});
    SolveReport rep = binary_search_solve(inst);
    StructureReport sr = analyze_structure(rep, inst);

    const int log_m = 10;
    REQUIRE(static_cast<int>(sr.partition.intervals.size()) == log_m);
    for (double mass : sr.masses) CHECK(mass <= delta + 1e-9);

    // Leading growth segment of P_j doubles the exponent each level.
    const double base = 1.0 + 1.0 / (n - 1);
    for (int j = 0; j <= 2; ++j) {
        auto [lj, rj] = sr.partition.intervals[static_cast<size_t>(j)];
        bool found = false;
        for (const GrowthSegment& seg : sr.growth_segments) {
            if (seg.start >= lj && seg.start <= rj && !std::isnan(seg.fitted_base)) {
                const double expected = std::pow(base, std::pow(2.0, j));
                CHECK(std::abs(seg.fitted_base / expected - 1.0) <= 1e-6);
                found = true;
                break;
            }
        }
        CHECK(found);
    }

    // Zero regions run to the end of their interval: the next growth restarts
    // at l_{j+1}.
    for (int j = 0; j <= 2; ++j) {
        auto [lj, rj] = sr.partition.intervals[static_cast<size_t>(j)];
        bool found = false;
        for (const ZeroRegion& z : sr.zero_regions) {
            if (z.start >= lj && z.start <= rj) {
                CHECK(z.end == rj);
                found = true;
                break;
            }
        }
        CHECK(found);
    }

    CHECK(sr.hat_t_in_p0);
    CHECK(sr.hat_t < static_cast<double>(n) / 2);
    CHECK(sr.validity_j_max >= 2);  // delta < 1/12
    CHECK(sr.recursion_max_residual <= 1e-9);
    CHECK(count_zero_bursts(sr) >= 2);
}

TEST_CASE("block-sum identity: P_j entries sum consecutive P_0 entries") {
    const int n = 1025;
    ProblemInstance inst(n, {{2.0, 0.05}});
    SolveReport rep = binary_search_solve(inst);
    const PurchaseDistribution& f = rep.distribution;
    IntervalPartition p = partition_intervals(n, 2, 2);

    for (int j : {1, 2}) {
        auto [lj, rj] = p.intervals[static_cast<size_t>(j)];
        for (long t = lj + 1; t <= lj + 5; ++t) {
            if (f.at(static_cast<int>(t)) <= 0.0) continue;
            // Expand the recursion j levels; images of consecutive days tile,
            // so the level-j preimage of t is one consecutive block.
            long lo = t, hi = t;
            for (int level = 0; level < j; ++level) {
                lo = 2 * lo - (n - 1) - 1;
                hi = 2 * hi - (n - 1);
            }
            REQUIRE(lo >= 1);
            REQUIRE(hi <= p.intervals[0].second);
            CHECK(hi - lo + 1 == (1L << j));
            KahanSum s;
            for (long u = lo; u <= hi; ++u) s.add(f.at(static_cast<int>(u)));
            CHECK(std::abs(f.at(static_cast<int>(t)) - s.value()) <= 1e-9);
        }
    }
}

TEST_CASE("slack constraint reduces to a single classical growth segment") {
    const int n = 257;
    ProblemInstance inst(n, {{2.0, 0.5}});
    SolveReport rep = binary_search_solve(inst);
    StructureReport sr = analyze_structure(rep, inst);
    CHECK(sr.zero_regions.empty());
    REQUIRE(sr.growth_segments.size() == 1);
    CHECK(std::abs(sr.growth_segments[0].fitted_base / (1.0 + 1.0 / (n - 1)) - 1.0) <= 1e-9);
    CHECK(count_zero_bursts(sr) == 0);
    CHECK(count_nonzero_intervals(rep.distribution) == 1);
}

TEST_CASE("analyze_structure preconditions") {
    ProblemInstance two(9, {{2.0, 0.1}, {3.0, 0.1}});
    SolveReport rep = binary_search_solve(two);
    CHECK_THROWS_AS(analyze_structure(rep, two), AnalysisNotApplicable);

    ProblemInstance off(10, {{2.0, 0.1}});
    SolveReport rep2 = binary_search_solve(off);
    CHECK_THROWS_AS(analyze_structure(rep2, off), AnalysisNotApplicable);
}

TEST_CASE("pure constraint closed form") {
    PureConstraintSolution p = pure_constraint_solution(11, 3);
    CHECK(p.distribution.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
    for (int t = 1; t <= 4; ++t) CHECK(p.distribution.at(t) == 0.0);
    CHECK(p.distribution.at(5) == doctest::Approx((p.lambda - 1.0) / 2.0).epsilon(1e-12));
    for (int t = 7; t <= 11; ++t)
        CHECK(p.distribution.at(t) / p.distribution.at(t - 1) ==
              doctest::Approx(1.1).epsilon(1e-12));

    CHECK_THROWS_AS(pure_constraint_solution(12, 3), std::invalid_argument);
}

TEST_CASE("pure closed form equals the solver at delta = 0") {
    const std::pair<int, int> cases[] = {{101, 2}, {11, 3}, {21, 5}};
    for (auto [n, gamma] : cases) {
        PureConstraintSolution p = pure_constraint_solution(n, gamma);
        ProblemInstance inst(n, {{static_cast<double>(gamma), 0.0}});
        SolveReport rep = binary_search_solve(inst);
        CHECK(std::abs(rep.lambda - p.lambda) <= 1e-6);
        for (int t = 1; t <= n; ++t)
            CHECK(std::abs(rep.distribution.at(t) - p.distribution.at(t)) <= 1e-6);
    }
}

TEST_CASE("pure constraint limits") {
    // gamma = 2 limit is the deterministic ratio 2
    CHECK(pure_constraint_lambda_limit(2) == doctest::Approx(2.0).epsilon(1e-15));
    // large gamma recovers the classical randomized limit e/(e-1)
    const double e = std::exp(1.0);
    CHECK(pure_constraint_lambda_limit(1000000) == doctest::Approx(e / (e - 1.0)).epsilon(1e-5));
    // lambda(n) approaches the limit from above with shrinking gap
    double prev_gap = 1.0;
    for (int n : {101, 1001, 10001}) {
        const double gap = 2.0 - pure_constraint_solution(n, 2).lambda;
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("continuous solution pieces") {
    const double lambda = std::exp(1.0) / (std::exp(1.0) - 1.0);

    // Slack delta: t_hat = 1/2 exactly at delta*, piece 0 is the classical pdf.
    const double ds = (std::sqrt(std::exp(1.0)) - 1.0) / (std::exp(1.0) - 1.0);
    ContinuousSolution slack = continuous_solution(2, ds, lambda, 0);
    CHECK(slack.hat_t == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(slack.pieces[0].coeff == doctest::Approx(lambda - 1.0).epsilon(1e-12));
    CHECK(slack.pieces[0].zero_lo == slack.pieces[0].zero_hi);  // no zero span

    // Small delta: three valid levels, interval starts 0, 1/2, 3/4.
    const double delta = 0.04;
    ContinuousSolution cs = continuous_solution(2, delta, 1.6, 2);
    CHECK((lambda - 1.0) * std::expm1(slack.hat_t) == doctest::Approx(ds).epsilon(1e-12));
    CHECK(cs.pieces[0].lo == 0.0);
    CHECK(cs.pieces[1].lo == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cs.pieces[2].lo == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cs.pieces[0].coeff == doctest::Approx(0.6).epsilon(1e-12));
    // each growth stretch past the first carries mass exactly delta
    for (const ContinuousPiece& piece : cs.pieces) {
        const double mass = piece.coeff / piece.exponent *
                            (std::exp(piece.exponent * piece.hi) -
                             std::exp(piece.exponent * piece.lo));
        CHECK(mass == doctest::Approx(delta).epsilon(1e-12));
    }

    // validity bound rejects deep levels for large delta
    CHECK_THROWS_AS(continuous_solution(2, 0.3, 1.6, 2), AnalysisNotApplicable);
}

TEST_CASE("t2 root solves the implicit equation") {
    // lambda for (2, 0.31) at large n sits near 1.59
    ProblemInstance inst(4097, {{2.0, 0.31}});
    const double lambda = binary_search_solve(inst).lambda;
    const double t2 = t2_root(0.31, lambda);
    CHECK(t2 > 0.5);
    CHECK(t2 < 0.75);
    const double b = 0.31 / (lambda - 1.0);
    const double residual =
        ((1.0 + b) * std::log1p(b) + std::exp(2.0 * t2) / (2.0 * std::exp(1.0)) - 1.0) / t2 - b;
    CHECK(std::abs(residual) <= 1e-12);
}
