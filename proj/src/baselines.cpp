#include "tailrent/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tailrent {

Strategy Strategy::deterministic() { return Strategy{StrategyKind::Deterministic, 0.0, {}}; }

Strategy Strategy::classical_randomized() {
    return Strategy{StrategyKind::ClassicalRandomized, 0.0, {}};
}

Strategy Strategy::interpolation(double delta) {
    return Strategy{StrategyKind::Interpolation, delta, {}};
}

Strategy Strategy::explicit_distribution(PurchaseDistribution f) {
    return Strategy{StrategyKind::Explicit, 0.0, std::move(f)};
}

double delta_star() {
    const double e = std::exp(1.0);
    return (std::sqrt(e) - 1.0) / (e - 1.0);
}

double classical_randomized_lambda(int n) {
    return 1.0 / (1.0 - std::pow(1.0 - 1.0 / n, n));
}

namespace {

PurchaseDistribution classical_randomized_distribution(int n) {
    const double lambda = classical_randomized_lambda(n);
    PurchaseDistribution f(n);
    const double growth = 1.0 + 1.0 / (n - 1);
    double v = (lambda - 1.0) / (n - 1);
    for (int t = 1; t <= n; ++t) {
        f.at(t) = v;
        v *= growth;
    }
    return f;
}

}  // namespace

PurchaseDistribution materialize(const Strategy& strategy, int n) {
    if (n < 2) throw std::invalid_argument("materialize: n must be at least 2");
    switch (strategy.kind) {
        case StrategyKind::Deterministic: {
            PurchaseDistribution f(n);
            f.at(n) = 1.0;
            return f;
        }
        case StrategyKind::ClassicalRandomized:
            return classical_randomized_distribution(n);
        case StrategyKind::Interpolation: {
            const double ds = delta_star();
            if (strategy.delta < 0.0 || strategy.delta > ds)
                throw std::invalid_argument(
                    "materialize: interpolation delta must lie in [0, delta*]; "
                    "use the randomized strategy directly above delta*");
            const double w = strategy.delta / ds;
            PurchaseDistribution f = classical_randomized_distribution(n);
            for (int t = 1; t <= n; ++t) f.at(t) *= w;
            f.at(n) += 1.0 - w;
            return f;
        }
        case StrategyKind::Explicit:
            if (strategy.explicit_f.n() != n)
                throw std::invalid_argument("materialize: explicit distribution size mismatch");
            if (!strategy.explicit_f.finalized())
                throw std::invalid_argument("materialize: explicit distribution not finalized");
            return strategy.explicit_f;
    }
    throw std::invalid_argument("materialize: unknown strategy kind");
}

double classical_tail_curve(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("classical_tail_curve: x must lie in [0, 1]");
    const double em1 = std::exp(1.0) - 1.0;
    if (x <= 0.5) return std::expm1(x) / em1;
    return (std::exp(x) - std::exp(2.0 * x - 1.0)) / em1;
}

double classical_tail_curve_max() { return 1.0 / (std::sqrt(std::exp(1.0)) + 1.0); }

DaySampler::DaySampler(const PurchaseDistribution& f) {
    if (!f.finalized()) throw std::invalid_argument("DaySampler: distribution not finalized");
    cdf_.resize(f.probs.size());
    KahanSum s;
    for (size_t i = 0; i < f.probs.size(); ++i) {
        s.add(f.probs[i]);
        cdf_[i] = s.value();
    }
    cdf_.back() = 1.0;  // guard against accumulated rounding at the top
}

int DaySampler::draw(std::mt19937_64& rng) const {
    // 53-bit uniform in [0, 1); explicit so results do not depend on the
    // library's unspecified uniform_real_distribution algorithm.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(it - cdf_.begin()) + 1;
}

int sample_purchase_day(const PurchaseDistribution& f, std::mt19937_64& rng) {
    return DaySampler(f).draw(rng);
}

namespace {

constexpr int kChunks = 64;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::uint64_t> chunk_histogram(const DaySampler& sampler, int n,
                                           std::uint64_t chunk_seed, std::uint64_t chunk_trials) {
    std::mt19937_64 rng(chunk_seed);
    std::vector<std::uint64_t> hist(static_cast<size_t>(n), 0);
    for (std::uint64_t i = 0; i < chunk_trials; ++i)
        ++hist[static_cast<size_t>(sampler.draw(rng) - 1)];
    return hist;
}

std::vector<int> pick_days(const ProblemInstance& inst) {
    const int n = inst.n();
    std::vector<int> days;
    if (n <= 2048) {
        days.resize(static_cast<size_t>(n));
        for (int x = 1; x <= n; ++x) days[static_cast<size_t>(x - 1)] = x;
        return days;
    }
    for (int i = 1; i <= 256; ++i)
        days.push_back(static_cast<int>(std::lround(static_cast<double>(i) * n / 256.0)));
    days.push_back(1);
    days.push_back(n / 2);
    days.push_back(n);
    for (const TailConstraint& c : inst.constraints())
        days.push_back(static_cast<int>(std::lround(n / c.gamma)));
    for (int& x : days) x = std::clamp(x, 1, n);
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    return days;
}

SimulationResult assemble(const std::vector<std::uint64_t>& hist, const ProblemInstance& inst,
                          std::uint64_t trials, std::uint64_t seed) {
    const int n = inst.n();
    SimulationResult out;
    out.trials = trials;
    out.seed = seed;
    out.chunks = kChunks;
    for (const TailConstraint& c : inst.constraints()) out.gammas.push_back(c.gamma);
    out.day_histogram = hist;

    // Prefix sums over the day histogram make every per-x statistic O(1):
    // count, sum of (n+t-1) weights, and sum of squared weights.
    std::vector<double> pc(static_cast<size_t>(n) + 1, 0.0);
    std::vector<double> pw(static_cast<size_t>(n) + 1, 0.0);
    std::vector<double> pw2(static_cast<size_t>(n) + 1, 0.0);
    KahanSum sc, sw, sw2;
    for (int t = 1; t <= n; ++t) {
        const double c = static_cast<double>(hist[static_cast<size_t>(t - 1)]);
        const double w = static_cast<double>(n + t - 1);
        sc.add(c);
        sw.add(c * w);
        sw2.add(c * w * w);
        pc[static_cast<size_t>(t)] = sc.value();
        pw[static_cast<size_t>(t)] = sw.value();
        pw2[static_cast<size_t>(t)] = sw2.value();
    }

    const double T = static_cast<double>(trials);
    for (int x : pick_days(inst)) {
        SimulationStats st;
        st.x = x;
        const double bought = pc[static_cast<size_t>(x)];
        const double mean = (pw[static_cast<size_t>(x)] / x + (T - bought)) / T;
        const double mean_sq =
            (pw2[static_cast<size_t>(x)] / (static_cast<double>(x) * x) + (T - bought)) / T;
        st.mean_cr = mean;
        st.se_mean = std::sqrt(std::max(0.0, mean_sq - mean * mean) / T);
        for (const TailConstraint& c : inst.constraints()) {
            BadInterval iv = bad_interval(c, x, n);
            const double p =
                (pc[static_cast<size_t>(iv.hi)] - pc[static_cast<size_t>(iv.lo)]) / T;
            st.exceed.push_back(p);
            st.se_exceed.push_back(std::sqrt(p * (1.0 - p) / T));
        }
        out.per_x.push_back(std::move(st));
    }
    return out;
}

struct ChunkPlan {
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint64_t> counts;
};

ChunkPlan plan_chunks(std::uint64_t trials, std::uint64_t seed) {
    ChunkPlan plan;
    std::uint64_t state = seed;
    for (int c = 0; c < kChunks; ++c) {
        plan.seeds.push_back(splitmix64(state));
        plan.counts.push_back(trials / kChunks + (static_cast<std::uint64_t>(c) < trials % kChunks));
    }
    return plan;
}

int thread_budget() {
#ifdef _OPENMP
    int budget = omp_get_max_threads();
#else
    int budget = 1;
#endif
    if (const char* env = std::getenv("TAILRENT_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) budget = std::min(budget, cap);
    }
    return budget;
}

}  // namespace

SimulationResult simulate(const PurchaseDistribution& f, const ProblemInstance& inst,
                          std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate: trials must be at least 1");
    if (f.n() != inst.n()) throw std::invalid_argument("simulate: distribution size mismatch");
    const int n = inst.n();
    const DaySampler sampler(f);
    const ChunkPlan plan = plan_chunks(trials, seed);

    std::vector<std::vector<std::uint64_t>> partial(kChunks);
    const int threads = thread_budget();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int c = 0; c < kChunks; ++c)
        partial[static_cast<size_t>(c)] =
            chunk_histogram(sampler, n, plan.seeds[static_cast<size_t>(c)],
                            plan.counts[static_cast<size_t>(c)]);
    (void)threads;

    std::vector<std::uint64_t> hist(static_cast<size_t>(n), 0);
    for (const auto& h : partial)
        for (size_t i = 0; i < h.size(); ++i) hist[i] += h[i];
    return assemble(hist, inst, trials, seed);
}

SimulationResult simulate_serial(const PurchaseDistribution& f, const ProblemInstance& inst,
                                 std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_serial: trials must be at least 1");
    if (f.n() != inst.n())
        throw std::invalid_argument("simulate_serial: distribution size mismatch");
    const int n = inst.n();
    const DaySampler sampler(f);
    const ChunkPlan plan = plan_chunks(trials, seed);

    std::vector<std::uint64_t> hist(static_cast<size_t>(n), 0);
    for (int c = 0; c < kChunks; ++c) {
        std::vector<std::uint64_t> h = chunk_histogram(
            sampler, n, plan.seeds[static_cast<size_t>(c)], plan.counts[static_cast<size_t>(c)]);
        for (size_t i = 0; i < h.size(); ++i) hist[i] += h[i];
    }
    return assemble(hist, inst, trials, seed);
}

}  // namespace tailrent
