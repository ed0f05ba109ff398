#pragma once

#include <cstdint>
#include <random>

#include "tailrent/core.hpp"

namespace tailrent {

enum class StrategyKind { Deterministic, ClassicalRandomized, Interpolation, Explicit };

/// Baseline purchase strategies. Interpolation mixes the classical randomized
/// distribution (weight delta/delta_star) with the deterministic one.
struct Strategy {
    StrategyKind kind = StrategyKind::Deterministic;
    double delta = 0.0;  // interpolation only
    PurchaseDistribution explicit_f;

    static Strategy deterministic();
    static Strategy classical_randomized();
    static Strategy interpolation(double delta);
    static Strategy explicit_distribution(PurchaseDistribution f);
};

/// delta* = (sqrt(e) - 1)/(e - 1) = 1/(sqrt(e) + 1), the worst tail
/// probability of the continuous classical randomized algorithm.
double delta_star();

/// Competitive ratio of the best unconstrained distribution on [n]:
/// 1/(1 - (1 - 1/n)^n); the unique constant-alpha normalized distribution.
double classical_randomized_lambda(int n);

PurchaseDistribution materialize(const Strategy& strategy, int n);

/// Tail curve of the continuous classical algorithm at threshold gamma = 2:
/// h(x) = (e^x - 1)/(e - 1) for x <= 1/2, (e^x - e^{2x-1})/(e - 1) for
/// x >= 1/2; maximum 1/(sqrt(e) + 1) at x = 1/2.
double classical_tail_curve(double x);
double classical_tail_curve_max();

/// Inverse-CDF sampler over days 1..n with a precomputed cumulative array.
class DaySampler {
public:
    explicit DaySampler(const PurchaseDistribution& f);
    int draw(std::mt19937_64& rng) const;

private:
    std::vector<double> cdf_;
};

int sample_purchase_day(const PurchaseDistribution& f, std::mt19937_64& rng);

struct SimulationStats {
    int x = 0;
    double mean_cr = 0.0;
    double se_mean = 0.0;
    std::vector<double> exceed;     // one per instance constraint
    std::vector<double> se_exceed;  // sqrt(p(1-p)/trials)
};

struct SimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int chunks = 0;
    std::vector<double> gammas;  // thresholds the exceedance columns refer to
    std::vector<SimulationStats> per_x;
    std::vector<std::uint64_t> day_histogram;  // day_histogram[t-1] draws of day t
};

/// Monte Carlo certification of alpha_profile and tail_probability. Trials
/// split into a fixed number of chunks with SplitMix64-derived RNG streams;
/// per-chunk integer day histograms merge order-independently, so results are
/// bit-identical for a fixed (seed, chunk count) regardless of thread count.
/// Evaluates all x for n <= 2048, else 256 evenly spaced days plus
/// {1, round(n/gamma_i), n/2, n}.
SimulationResult simulate(const PurchaseDistribution& f, const ProblemInstance& inst,
                          std::uint64_t trials, std::uint64_t seed);

/// Serial reference with the identical chunk structure; kept for testing the
/// parallel path (results must match bit for bit) and for benchmarking.
SimulationResult simulate_serial(const PurchaseDistribution& f, const ProblemInstance& inst,
                                 std::uint64_t trials, std::uint64_t seed);

}  // namespace tailrent
