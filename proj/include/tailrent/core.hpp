#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailrent {

/// Compensated (Kahan) accumulator used for every sum over days.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// One (gamma, delta) tail constraint: Pr[ratio > gamma] <= delta for every
/// adversary choice.
struct TailConstraint {
    double gamma = 0.0;
    double delta = 0.0;
};

/// Day range (lo, hi] of purchase days whose realized ratio exceeds gamma
/// when the season ends at day hi's x. Empty when lo >= hi.
struct BadInterval {
    int lo = 0;  // exclusive
    int hi = 0;  // inclusive

    bool empty() const { return lo >= hi; }
    int size() const { return empty() ? 0 : hi - lo; }
    bool contains(int t) const { return t > lo && t <= hi; }
};

/// Per-day purchase probabilities f_1..f_n. Finalized distributions sum to 1
/// within 1e-12 absolute; solver intermediates may be sub-normalized.
struct PurchaseDistribution {
    std::vector<double> probs;  // probs[t-1] = f_t

    PurchaseDistribution() = default;
    explicit PurchaseDistribution(int n) : probs(static_cast<size_t>(n), 0.0) {}

    int n() const { return static_cast<int>(probs.size()); }
    double at(int t) const { return probs[static_cast<size_t>(t - 1)]; }
    double& at(int t) { return probs[static_cast<size_t>(t - 1)]; }

    double total_mass() const {
        KahanSum s;
        for (double v : probs) s.add(v);
        return s.value();
    }
    bool finalized(double tol = 1e-12) const;

    /// Divides every entry by the current total mass.
    void normalize();
};

/// Horizon n plus the retained constraint set. Construction drops vacuous
/// constraints (delta >= 1) and rejects infeasible ones.
class ProblemInstance {
public:
    ProblemInstance(int n, std::vector<TailConstraint> constraints);

    int n() const { return n_; }
    const std::vector<TailConstraint>& constraints() const { return constraints_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    int n_;
    std::vector<TailConstraint> constraints_;
    std::vector<std::string> warnings_;
};

/// Realized competitive ratio when buying on day t and the season ends at x:
/// 1 if t > x, else (n+t-1)/x.
double alpha_single(int t, int x, int n);

/// Expected competitive ratio at season end x under purchase distribution f.
/// Depends only on f_1..f_x.
double alpha_profile(const PurchaseDistribution& f, int x);

/// All of alpha_profile(f, 1..n) in one O(n) pass.
std::vector<double> alpha_profile_all(const PurchaseDistribution& f);

/// Bad interval I_gamma(x). Membership is decided by the strict predicate
/// (n+t-1)/x > gamma per integer t, never by rounding gamma*x.
BadInterval bad_interval(const TailConstraint& c, int x, int n);

/// Mass of f on bad_interval(c, x).
double tail_probability(const PurchaseDistribution& f, const TailConstraint& c, int x);

struct Violation {
    int constraint = 0;  // index into instance constraints
    int x = 0;
    double excess = 0.0;
};

struct FeasibilityVerdict {
    bool feasible = true;
    std::vector<Violation> violations;
};

constexpr double kDefaultFeasibilityTol = 1e-9;

FeasibilityVerdict is_feasible(const PurchaseDistribution& f, const ProblemInstance& inst,
                               double tol = kDefaultFeasibilityTol);

struct WorstCaseProfile {
    double max_ratio = 0.0;
    int argmax_day = 0;
    std::vector<double> alpha;  // alpha[x-1] = alpha_f(x)
};

WorstCaseProfile worst_case_profile(const PurchaseDistribution& f);

}  // namespace tailrent
