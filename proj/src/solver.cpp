#include "tailrent/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailrent {

SolveConfig SolveConfig::defaults(const ProblemInstance& inst, double epsilon) {
    SolveConfig cfg;
    cfg.epsilon = epsilon;
    // The unconstrained optimum 1/(1 - (1-1/n)^n) lower-bounds every
    // constrained optimum and approaches e/(e-1) from below, so it is the
    // tightest safe bracket floor at finite n.
    cfg.lambda_lo = 1.0 / (1.0 - std::pow(1.0 - 1.0 / inst.n(), inst.n())) - 1.0;
    const double det_ratio = 2.0 - 1.0 / inst.n();
    bool all_at_least_det = true;
    for (const TailConstraint& c : inst.constraints())
        if (c.gamma < det_ratio) all_at_least_det = false;
    cfg.lambda_hi = all_at_least_det ? 1.0 - 1.0 / inst.n() : inst.n() - 1.0;
    return cfg;
}

PurchaseDistribution greedy_fill(const ProblemInstance& inst, double lambda_prime) {
    if (!(lambda_prime > 0.0)) throw std::invalid_argument("greedy_fill: lambda' must be positive");
    const int n = inst.n();
    const auto& cons = inst.constraints();
    PurchaseDistribution f(n);

    // Kahan-tracked prefix sums of f_t and (n+t-1) f_t over t < x.
    std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
    KahanSum mass;
    KahanSum weighted;

    for (int x = 1; x <= n; ++x) {
        // Largest value keeping the competitiveness row at x below lambda':
        // sum_{t<=x} ((n+t-x-1)/x) f_t <= lambda'.
        double fx = (x * lambda_prime - weighted.value() + x * mass.value()) / (n - 1);
        // Largest value keeping each bad-interval row through x below delta_i;
        // only constraints whose bad interval contains x bound f_x.
        for (size_t i = 0; i < cons.size(); ++i) {
            BadInterval iv = bad_interval(cons[i], x, n);
            if (!iv.contains(x)) continue;
            double interior = prefix[static_cast<size_t>(x - 1)] - prefix[static_cast<size_t>(iv.lo)];
            fx = std::min(fx, cons[i].delta - interior);
        }
        if (fx < 0.0) {
            if (fx < -1e-12)
                throw InternalConsistencyError("greedy_fill: negative day value " +
                                               std::to_string(fx) + " at day " + std::to_string(x));
            fx = 0.0;
        }
        f.at(x) = fx;
        mass.add(fx);
        weighted.add(static_cast<double>(n + x - 1) * fx);
        prefix[static_cast<size_t>(x)] = mass.value();
    }
    return f;
}

namespace {

std::vector<DayLedgerEntry> build_ledger(const PurchaseDistribution& f,
                                         const ProblemInstance& inst, double lambda,
                                         double tight_tol) {
    const int n = inst.n();
    const auto& cons = inst.constraints();
    std::vector<double> alpha = alpha_profile_all(f);
    std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
    KahanSum s;
    for (int t = 1; t <= n; ++t) {
        s.add(f.at(t));
        prefix[static_cast<size_t>(t)] = s.value();
    }
    std::vector<DayLedgerEntry> ledger(static_cast<size_t>(n));
    for (int x = 1; x <= n; ++x) {
        DayLedgerEntry& e = ledger[static_cast<size_t>(x - 1)];
        e.x = x;
        e.alpha_residual = std::abs(alpha[static_cast<size_t>(x - 1)] - lambda);
        e.tail_residual = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cons.size(); ++i) {
            BadInterval iv = bad_interval(cons[i], x, n);
            double m = prefix[static_cast<size_t>(iv.hi)] - prefix[static_cast<size_t>(iv.lo)];
            double r = std::abs(m - cons[i].delta);
            if (r < e.tail_residual) {
                e.tail_residual = r;
                if (r <= tight_tol) e.constraint = static_cast<int>(i);
            }
        }
        if (e.alpha_residual <= tight_tol) {
            e.tight = TightKind::Alpha;
            e.constraint.reset();
        } else if (e.tail_residual <= tight_tol) {
            e.tight = TightKind::Tail;
        } else {
            e.tight = TightKind::Neither;
            e.constraint.reset();
        }
    }
    return ledger;
}

}  // namespace

double default_tight_tol(double lambda) { return 1e-6 * lambda; }

SolveReport binary_search_solve(const ProblemInstance& inst, const SolveConfig& cfg) {
    if (!(cfg.epsilon > 0.0) || !(cfg.lambda_lo < cfg.lambda_hi))
        throw std::invalid_argument("binary_search_solve: invalid config");
    double lo = cfg.lambda_lo;
    double hi = cfg.lambda_hi;
    SolveReport report;
    const double mass_threshold = 1.0 - 1e-12;

    while (true) {
        if (report.iterations >= cfg.max_iters)
            throw ConvergenceError("binary_search_solve: iteration cap exceeded");
        const bool bracket_closed = (hi - lo) <= cfg.epsilon;
        // Once the bracket is narrow, query the upper end: the optimum never
        // exceeds it, so the fill is guaranteed to reach mass 1 there.
        const double lp = bracket_closed ? hi : 0.5 * (lo + hi);
        PurchaseDistribution f = greedy_fill(inst, lp);
        double total = f.total_mass();
        ++report.iterations;
        report.trace.emplace_back(lp, total);
        if (total < mass_threshold) {
            if (bracket_closed)
                throw ConvergenceError("binary_search_solve: mass below 1 at the upper bound");
            lo = lp;
            continue;
        }
        if ((hi - lo) <= cfg.epsilon) {
            f.normalize();
            report.distribution = std::move(f);
            report.lambda = worst_case_profile(report.distribution).max_ratio;
            report.ledger = build_ledger(report.distribution, inst, report.lambda,
                                         default_tight_tol(report.lambda));
            return report;
        }
        hi = lp;
    }
}

SolveReport binary_search_solve(const ProblemInstance& inst) {
    return binary_search_solve(inst, SolveConfig::defaults(inst));
}

SolveReport solve_lambda_space(const ProblemInstance& inst, const SolveConfig& cfg) {
    SolveConfig shifted = cfg;
    shifted.lambda_lo = cfg.lambda_lo - 1.0;
    shifted.lambda_hi = cfg.lambda_hi - 1.0;
    return binary_search_solve(inst, shifted);
}

TightnessVerdict verify_tightness(const SolveReport& report, const ProblemInstance& inst,
                                  double tight_tol) {
    TightnessVerdict v;
    v.ledger = build_ledger(report.distribution, inst, report.lambda, tight_tol);
    for (const DayLedgerEntry& e : v.ledger)
        if (e.tight == TightKind::Neither) v.ok = false;
    v.alpha_n_residual = std::abs(alpha_profile(report.distribution, inst.n()) - report.lambda);
    if (v.alpha_n_residual > tight_tol) v.ok = false;
    return v;
}

PurchaseDistribution keep_alpha_constant_extension(const PurchaseDistribution& f_prefix, int a,
                                                   int x_prime, int n) {
    if (a < 2 || a > x_prime || x_prime > n)
        throw std::invalid_argument("keep_alpha_constant_extension: bad day range");
    if (f_prefix.n() < a - 1)
        throw std::invalid_argument("keep_alpha_constant_extension: prefix too short");
    KahanSum weighted;
    KahanSum mass;
    PurchaseDistribution out(n);  // sized to the horizon so alpha sees n
    for (int t = 1; t <= a - 1; ++t) {
        double ft = f_prefix.at(t);
        out.at(t) = ft;
        weighted.add(static_cast<double>(n + t - 1) * ft);
        mass.add(ft);
    }
    if (mass.value() >= 1.0)
        throw std::domain_error("keep_alpha_constant_extension: prefix mass already at 1");
    const double fa = weighted.value() / (static_cast<double>(a - 1) * (n - 1));
    const double growth = 1.0 + 1.0 / (n - 1);
    double fx = fa;
    for (int x = a; x <= x_prime; ++x) {
        out.at(x) = fx;
        mass.add(fx);
        if (mass.value() > 1.0 && x < x_prime)
            throw std::domain_error("keep_alpha_constant_extension: mass exceeds 1 before x'");
        fx *= growth;
    }
    return out;
}

}  // namespace tailrent
