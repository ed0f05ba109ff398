#include "tailrent/core.hpp"

#include <algorithm>
#include <cmath>

namespace tailrent {

bool PurchaseDistribution::finalized(double tol) const {
    if (probs.empty()) return false;
    for (double v : probs)
        if (v < 0.0) return false;
    return std::abs(total_mass() - 1.0) <= tol;
}

void PurchaseDistribution::normalize() {
    double m = total_mass();
    if (m <= 0.0) throw std::invalid_argument("cannot normalize a zero-mass distribution");
    for (double& v : probs) v /= m;
}

ProblemInstance::ProblemInstance(int n, std::vector<TailConstraint> constraints) : n_(n) {
    if (n < 2) throw std::invalid_argument("day count n must be at least 2");
    const double det_ratio = 2.0 - 1.0 / n;
    for (size_t i = 0; i < constraints.size(); ++i) {
        const TailConstraint& c = constraints[i];
        if (c.delta >= 1.0) {
            warnings_.push_back("constraint " + std::to_string(i) +
                                " dropped: delta >= 1 is vacuous");
            continue;
        }
        if (c.delta < 0.0) throw std::invalid_argument("delta must be non-negative");
        if (c.gamma < det_ratio) {
            // Pre-check with the distribution that buys on day n. Its only
            // nonzero tail probability is f_n = 1 at x = n, which appears as
            // soon as gamma < 2 - 1/n, so the check can only pass via delta.
            double det_tail = (alpha_single(n, n, n) > c.gamma) ? 1.0 : 0.0;
            if (det_tail > c.delta)
                throw std::invalid_argument(
                    "constraint " + std::to_string(i) +
                    " infeasible: gamma < 2 - 1/n fails the deterministic pre-check");
        }
        constraints_.push_back(c);
    }
}

double alpha_single(int t, int x, int n) {
    if (t < 1 || t > n || x < 1 || x > n)
        throw std::invalid_argument("alpha_single: day indices out of range");
    if (t > x) return 1.0;
    return static_cast<double>(n + t - 1) / x;
}

double alpha_profile(const PurchaseDistribution& f, int x) {
    const int n = f.n();
    if (x < 1 || x > n) throw std::invalid_argument("alpha_profile: x out of range");
    KahanSum weighted;  // sum of (n+t-1) f_t over t <= x
    KahanSum mass;      // sum of f_t over t <= x
    for (int t = 1; t <= x; ++t) {
        double ft = f.at(t);
        if (ft < 0.0) throw std::invalid_argument("alpha_profile: negative entry");
        weighted.add(static_cast<double>(n + t - 1) * ft);
        mass.add(ft);
    }
    return weighted.value() / x + 1.0 - mass.value();
}

std::vector<double> alpha_profile_all(const PurchaseDistribution& f) {
    const int n = f.n();
    std::vector<double> out(static_cast<size_t>(n));
    KahanSum weighted;
    KahanSum mass;
    for (int x = 1; x <= n; ++x) {
        double fx = f.at(x);
        weighted.add(static_cast<double>(n + x - 1) * fx);
        mass.add(fx);
        out[static_cast<size_t>(x - 1)] = weighted.value() / x + 1.0 - mass.value();
    }
    return out;
}

BadInterval bad_interval(const TailConstraint& c, int x, int n) {
    if (x < 1 || x > n) throw std::invalid_argument("bad_interval: x out of range");
    // The predicate (n+t-1)/x > gamma is increasing in t, so members form a
    // suffix (lo, x] of [1, x].
    auto member = [&](int t) { return static_cast<double>(n + t - 1) / x > c.gamma; };
    if (!member(x)) return BadInterval{x, x};  // empty
    if (member(1)) return BadInterval{0, x};
    // Binary search for the largest non-member; predicate is monotone in t.
    int lo = 1, hi = x;  // member(lo) == false, member(hi) == true
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (member(mid) ? hi : lo) = mid;
    }
    return BadInterval{lo, x};
}

double tail_probability(const PurchaseDistribution& f, const TailConstraint& c, int x) {
    BadInterval iv = bad_interval(c, x, f.n());
    KahanSum s;
    for (int t = iv.lo + 1; t <= iv.hi; ++t) s.add(f.at(t));
    return s.value();
}

FeasibilityVerdict is_feasible(const PurchaseDistribution& f, const ProblemInstance& inst,
                               double tol) {
    FeasibilityVerdict verdict;
    const int n = inst.n();
    // Prefix sums make each interval mass an O(1) difference.
    std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
    KahanSum s;
    for (int t = 1; t <= n; ++t) {
        s.add(f.at(t));
        prefix[static_cast<size_t>(t)] = s.value();
    }
    for (size_t i = 0; i < inst.constraints().size(); ++i) {
        const TailConstraint& c = inst.constraints()[i];
        for (int x = 1; x <= n; ++x) {
            BadInterval iv = bad_interval(c, x, n);
            double mass = prefix[static_cast<size_t>(iv.hi)] - prefix[static_cast<size_t>(iv.lo)];
            if (mass > c.delta + tol) {
                verdict.feasible = false;
                verdict.violations.push_back({static_cast<int>(i), x, mass - c.delta});
            }
        }
    }
    return verdict;
}

WorstCaseProfile worst_case_profile(const PurchaseDistribution& f) {
    WorstCaseProfile out;
    out.alpha = alpha_profile_all(f);
    out.argmax_day = 1;
    out.max_ratio = out.alpha[0];
    for (int x = 2; x <= f.n(); ++x) {
        double a = out.alpha[static_cast<size_t>(x - 1)];
        if (a > out.max_ratio) {
            out.max_ratio = a;
            out.argmax_day = x;
        }
    }
    return out;
}

}  // namespace tailrent
