#pragma once

#include "tailrent/core.hpp"

namespace tailrent {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Small dense LP in the packing form used by the greedy fill:
/// maximize sum f subject to per-day competitiveness rows bounded by
/// lambda', bad-interval rows bounded by delta_i, and f >= 0.
struct LpInstance {
    int n = 0;
    double lambda_prime = 0.0;
    std::vector<std::vector<double>> rows;  // coefficient rows over f_1..f_n
    std::vector<double> rhs;

    static LpInstance build(const ProblemInstance& inst, double lambda_prime);
};

struct LpSolution {
    double value = 0.0;
    PurchaseDistribution maximizer;
};

/// Exact optimum via a self-contained dense simplex with Bland's rule.
/// Residual feasibility of the maximizer is within 1e-10.
LpSolution lp_maximize(const LpInstance& lp);

struct BruteForceResult {
    double lambda = 0.0;
    PurchaseDistribution distribution;
    // Coarse a-priori gap to the true optimum: L * grid_step with
    // L = n * (2 - 1/n), from rounding the optimum down onto the grid and
    // parking the remainder on day n.
    double lipschitz_bound = 0.0;
};

/// Exhaustive min-max search over the n-simplex at resolution grid_step,
/// restricted to exactly feasible grid points. Enumeration parallelizes over
/// the first coordinate.
BruteForceResult brute_force_opt(const ProblemInstance& inst, double grid_step);

}  // namespace tailrent
