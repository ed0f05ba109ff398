#pragma once

#include <optional>
#include <utility>

#include "tailrent/core.hpp"

namespace tailrent {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveConfig {
    double epsilon = 1e-10;  // absolute tolerance on lambda
    double lambda_lo = 0.0;  // search bounds for lambda' = lambda - 1
    double lambda_hi = 0.0;
    int max_iters = 200;

    /// Default bracket: lo is the unconstrained optimum minus one (it tends
    /// to e/(e-1) - 1 from below), hi = 1 - 1/n when every gamma is at least
    /// 2 - 1/n, else hi = n - 1.
    static SolveConfig defaults(const ProblemInstance& inst, double epsilon = 1e-10);
};

enum class TightKind { Alpha, Tail, Neither };

struct DayLedgerEntry {
    int x = 0;
    TightKind tight = TightKind::Neither;
    std::optional<int> constraint;  // index when tight == Tail
    double alpha_residual = 0.0;
    double tail_residual = 0.0;  // min over constraints; +inf-ish when k = 0
};

struct SolveReport {
    double lambda = 0.0;
    PurchaseDistribution distribution;
    std::vector<DayLedgerEntry> ledger;
    int iterations = 0;
    std::vector<std::pair<double, double>> trace;  // (lambda', sum f)
};

/// Constraint-tightening fill for a guessed lambda' = lambda - 1. Each day
/// gets the largest value keeping every competitiveness row at most lambda'
/// and every bad-interval row at most delta_i. The result maximizes the total
/// mass among all such vectors; it is sub-normalized unless lambda' + 1 is
/// exactly the achievable optimum.
PurchaseDistribution greedy_fill(const ProblemInstance& inst, double lambda_prime);

/// Bisection on lambda' using greedy_fill as the feasibility oracle:
/// total mass < 1 means the guess is too low. Runs in at most
/// ceil(log2(bracket/epsilon)) + 1 iterations.
SolveReport binary_search_solve(const ProblemInstance& inst, const SolveConfig& cfg);
SolveReport binary_search_solve(const ProblemInstance& inst);

/// Same search expressed in lambda-space (guess of the ratio itself); thin
/// wrapper since both fills coincide at the optimum.
SolveReport solve_lambda_space(const ProblemInstance& inst, const SolveConfig& cfg);

struct TightnessVerdict {
    bool ok = true;
    std::vector<DayLedgerEntry> ledger;
    double alpha_n_residual = 0.0;  // |alpha_f(n) - lambda|
};

double default_tight_tol(double lambda);

/// Classifies every day as competitiveness-tight or tail-tight within
/// tight_tol and checks alpha_f(n) = lambda. A false verdict is a result,
/// not an error.
TightnessVerdict verify_tightness(const SolveReport& report, const ProblemInstance& inst,
                                  double tight_tol);

/// Extends a prefix f_1..f_{a-1} through day x_prime so the competitiveness
/// function stays flat at alpha_f(a-1): f_a is fixed by the prefix and each
/// later day grows by (1 + 1/(n-1)). Returns a horizon-n vector (zero past
/// x_prime). Used as a test oracle for flat segments.
PurchaseDistribution keep_alpha_constant_extension(const PurchaseDistribution& f_prefix, int a,
                                                   int x_prime, int n);

}  // namespace tailrent
