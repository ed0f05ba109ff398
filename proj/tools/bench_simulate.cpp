// Compares the serial and OpenMP Monte Carlo paths on the solved (2, 0.2)
// instance and checks they agree bit for bit while timing both.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "tailrent/baselines.hpp"
#include "tailrent/solver.hpp"

using namespace tailrent;

namespace {

template <typename F>
double time_ms(F&& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = 1000;
    std::uint64_t trials = 4000000;
    if (argc > 1) n = std::atoi(argv[1]);
    if (argc > 2) trials = std::strtoull(argv[2], nullptr, 10);

    ProblemInstance inst(n, {{2.0, 0.2}});
    PurchaseDistribution f = binary_search_solve(inst).distribution;

    SimulationResult serial, parallel;
    const double t_serial = time_ms([&] { serial = simulate_serial(f, inst, trials, 42); });
    const double t_parallel = time_ms([&] { parallel = simulate(f, inst, trials, 42); });

    bool identical = serial.day_histogram == parallel.day_histogram;
    std::printf("n=%d trials=%llu\n", n, static_cast<unsigned long long>(trials));
    std::printf("serial:   %8.1f ms\n", t_serial);
    std::printf("parallel: %8.1f ms  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);
    std::printf("histograms identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
