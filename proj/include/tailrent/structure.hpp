#pragma once

#include "tailrent/core.hpp"
#include "tailrent/solver.hpp"

namespace tailrent {

struct AnalysisNotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exponentially shrinking day intervals P_j = [l_j, r_j] for one integer
/// threshold gamma; exact integer arithmetic, requires n-1 a power of gamma.
struct IntervalPartition {
    int gamma = 0;
    int n = 0;
    std::vector<std::pair<long, long>> intervals;  // (l_j, r_j), j = 0..j_max
};

IntervalPartition partition_intervals(int n, int gamma, int j_max);

struct ZeroRegion {
    int start = 0;  // first zero day
    int end = 0;    // last zero day
};

struct GrowthSegment {
    int start = 0;
    int end = 0;
    double fitted_base = 0.0;  // NaN when the run is too short to fit
};

struct StructureReport {
    IntervalPartition partition;
    std::vector<double> masses;  // per interval
    std::vector<ZeroRegion> zero_regions;
    std::vector<GrowthSegment> growth_segments;
    int hat_t = 0;  // first day the classical-exponential prefix reaches delta
    bool hat_t_in_p0 = false;
    int validity_j_max = -1;
    double recursion_max_residual = 0.0;  // over consecutive tail-tight days
    double zero_thresh = 0.0;
};

/// Verifies the recurring grow-then-zero motif on a solved single-constraint
/// instance: per-interval masses, zero regions, fitted growth exponents, and
/// the mass-transport recursion on tail-tight days.
StructureReport analyze_structure(const SolveReport& report, const ProblemInstance& inst);

/// Number of maximal zero regions followed by a positive day.
int count_zero_bursts(const StructureReport& report);

/// Number of maximal positive runs of f, with the same scale-free zero
/// threshold as analyze_structure. Works for any horizon, no partition needed.
int count_nonzero_intervals(const PurchaseDistribution& f);

struct PureConstraintSolution {
    double lambda = 0.0;
    PurchaseDistribution distribution;
};

/// Closed-form optimum under a single (gamma, 0) constraint: zeros, a spike
/// of (lambda-1)/(gamma-1) at day (n-1)/(gamma-1), then a geometric tail.
PureConstraintSolution pure_constraint_solution(int n, int gamma);

/// Limiting competitive ratio of the pure-constraint optimum as n grows.
double pure_constraint_lambda_limit(int gamma);

struct ContinuousPiece {
    int j = 0;
    double lo = 0.0;   // exclusive
    double hi = 0.0;   // inclusive end of the growth stretch
    double coeff = 0.0;
    double exponent = 0.0;  // gamma^j
    double zero_lo = 0.0;   // zero span (zero_lo, zero_hi]; empty when equal
    double zero_hi = 0.0;
};

struct ContinuousSolution {
    double hat_t = 0.0;  // ln(1 + delta/(lambda-1))
    std::vector<ContinuousPiece> pieces;
};

/// Piecewise description of the rescaled limit solution: on each P_j the
/// density is c_j * e^(gamma^j t) up to l_j + hat_t / gamma^j, then zero.
/// c_j is pinned so every piece past the first carries mass exactly delta.
ContinuousSolution continuous_solution(int gamma, double delta, double lambda, int j_max);

/// Time in (1/2, 3/4) where the competitiveness constraint re-tightens in the
/// rescaled limit, found by bracketed bisection; residual at most 1e-12.
double t2_root(double delta, double lambda);

}  // namespace tailrent
