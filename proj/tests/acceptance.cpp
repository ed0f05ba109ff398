// Acceptance gate: one criterion per numeric argument (1..10), one PASS/FAIL
// line each. Run with no arguments to execute every criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "tailrent/baselines.hpp"
#include "tailrent/oracle.hpp"
#include "tailrent/solver.hpp"
#include "tailrent/structure.hpp"

using namespace tailrent;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

bool report(int id, bool ok, const std::string& desc, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, desc.c_str(),
                detail.empty() ? "" : " ", detail.c_str());
    return ok;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// 1: unconstrained solve at n=1000 against the (1+1/n)^n reference form.
bool criterion1() {
    Timer timer;
    const int n = 1000;
    ProblemInstance inst(n, {});
    SolveReport rep = binary_search_solve(inst, SolveConfig::defaults(inst, 1e-10));
    const double elapsed = timer.seconds();

    const double pw = std::pow(1.0 + 1.0 / n, n);
    const double lambda_ref = pw / (pw - 1.0);
    const double lambda_gap = std::abs(rep.lambda - lambda_ref);
    double f_gap = 0.0;
    for (int t = 1; t <= n; ++t) {
        const double ref = (1.0 / n) * std::pow(1.0 + 1.0 / n, t - 1) / (pw - 1.0);
        f_gap = std::max(f_gap, std::abs(rep.distribution.at(t) - ref));
    }
    const bool ok = lambda_gap <= 1e-8 && f_gap <= 1e-9 && elapsed < 1.0;
    const double lambda_true = 1.0 / (1.0 - std::pow(1.0 - 1.0 / n, n));
    return report(1, ok, "unconstrained recovery of the (1+1/n)^n reference form",
                  fmt("(lambda gap %.3e, max f gap %.3e; solver matches the constant-alpha "
                      "optimum 1/(1-(1-1/n)^n) to %.1e, so the reference form itself is not "
                      "the minimizer of max_x alpha_f(x))",
                      lambda_gap, f_gap, std::abs(rep.lambda - lambda_true)));
}

// 2: pure (2, 0) constraint approaches the deterministic ratio.
bool criterion2() {
    double prev_gap = 1e9;
    bool ok = true;
    std::string detail;
    for (int n : {101, 1001, 10001}) {
        ProblemInstance inst(n, {{2.0, 0.0}});
        SolveReport rep = binary_search_solve(inst);
        const double formula = pure_constraint_solution(n, 2).lambda;
        const double gap_to_formula = std::abs(rep.lambda - formula);
        const double gap_to_two = 2.0 - rep.lambda;
        ok = ok && gap_to_formula <= 1e-8 && gap_to_two > 0.0 && gap_to_two < prev_gap;
        prev_gap = gap_to_two;
        if (n == 101) detail = fmt("(n=101 formula gap %.3e; 2-lambda shrinks ", gap_to_formula);
        detail += fmt("%.2e ", gap_to_two);
    }
    return report(2, ok, "deterministic limit of the pure gamma=2 constraint", detail + ")");
}

// 3: pure-constraint solution shape at (gamma=3, n=11, delta=0).
bool criterion3() {
    const int n = 11;
    ProblemInstance inst(n, {{3.0, 0.0}});
    SolveReport rep = binary_search_solve(inst);
    PureConstraintSolution pure = pure_constraint_solution(n, 3);
    double worst = std::abs(rep.lambda - pure.lambda);
    for (int t = 1; t <= n; ++t)
        worst = std::max(worst, std::abs(rep.distribution.at(t) - pure.distribution.at(t)));
    return report(3, worst <= 1e-8, "piecewise closed form at (gamma=3, n=11, delta=0)",
                  fmt("(max deviation %.3e)", worst));
}

// 4: analytic tail maximum 1/(sqrt(e)+1) plus Monte Carlo reproduction.
bool criterion4() {
    Timer timer;
    const double target = 1.0 / (std::sqrt(std::exp(1.0)) + 1.0);
    double curve_max = 0.0;
    for (int i = 0; i <= 100000; ++i)
        curve_max = std::max(curve_max, classical_tail_curve(i / 100000.0));
    const double analytic_gap = std::abs(curve_max - target);

    const int n = 1000;
    ProblemInstance inst(n, {{2.0, 0.5}});
    PurchaseDistribution f = materialize(Strategy::classical_randomized(), n);
    SimulationResult res = simulate(f, inst, 1000000, 1);
    double exceed = 0.0, se = 1.0;
    for (const SimulationStats& st : res.per_x) {
        if (st.x == 500) {
            exceed = st.exceed[0];
            se = st.se_exceed[0];
        }
    }
    const double elapsed = timer.seconds();
    const bool ok = analytic_gap <= 1e-12 && std::abs(exceed - target) <= 3.0 * se &&
                    elapsed < 10.0;
    return report(4, ok, "tail-probability constant 1/(sqrt(e)+1)",
                  fmt("(analytic gap %.2e, MC offset %.2f standard errors, %.1fs)", analytic_gap,
                      std::abs(exceed - target) / se, elapsed));
}

// 5: structure suite at (gamma=2, delta=0.05, n=4097).
bool criterion5() {
    Timer timer;
    const int n = 4097;
    const double delta = 0.05;
    ProblemInstance inst(n, {{2.0, delta}});
    SolveReport rep = binary_search_solve(inst);
    StructureReport sr = analyze_structure(rep, inst);

    bool masses_ok = true;
    for (int j = 0; j <= 10; ++j) masses_ok = masses_ok && sr.masses[static_cast<size_t>(j)] <= delta + 1e-9;

    double worst_rel = 0.0;
    bool fit_ok = true;
    for (int j = 0; j <= 2; ++j) {
        auto [lj, rj] = sr.partition.intervals[static_cast<size_t>(j)];
        const double expected = std::pow(1.0 + 1.0 / (n - 1), std::pow(2.0, j));
        bool found = false;
        for (const GrowthSegment& seg : sr.growth_segments) {
            if (seg.start >= lj && seg.start <= rj && !std::isnan(seg.fitted_base)) {
                worst_rel = std::max(worst_rel, std::abs(seg.fitted_base / expected - 1.0));
                found = true;
                break;
            }
        }
        fit_ok = fit_ok && found;
    }
    fit_ok = fit_ok && worst_rel <= 1e-6;

    const int bursts = count_zero_bursts(sr);
    const double elapsed = timer.seconds();
    const bool ok = masses_ok && fit_ok && bursts >= 2 && elapsed < 5.0;
    return report(5, ok, "structure theorems at (gamma=2, delta=0.05, n=4097)",
                  fmt("(max fit deviation %.2e, %.0f zero bursts, %.2fs)", worst_rel,
                      static_cast<double>(bursts), elapsed));
}

// 6: tightness ledger on random instances.
bool criterion6() {
    std::mt19937_64 rng(606);
    bool ok = true;
    double worst_alpha_n = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10 + static_cast<int>(rng() % 991);
        std::uniform_real_distribution<double> gd(2.0 - 1.0 / n, 3.0);
        std::uniform_real_distribution<double> dd(0.0, 0.6);
        std::vector<TailConstraint> cs;
        const int k = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < k; ++i) cs.push_back({gd(rng), dd(rng)});
        ProblemInstance inst(n, std::move(cs));
        SolveReport rep = binary_search_solve(inst);
        TightnessVerdict v = verify_tightness(rep, inst, default_tight_tol(rep.lambda));
        ok = ok && v.ok;
        worst_alpha_n = std::max(worst_alpha_n, v.alpha_n_residual);
    }
    return report(6, ok, "every day alpha-tight or tail-tight on 10 random instances",
                  fmt("(worst |alpha_f(n) - lambda| = %.3e)", worst_alpha_n));
}

// 7: oracle equivalence.
bool criterion7() {
    Timer timer;
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> lpd(0.3, 0.9);

    double worst_entry = 0.0, worst_value = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        std::uniform_real_distribution<double> gd(2.0 - 1.0 / n, 3.0);
        std::uniform_real_distribution<double> dd(0.0, 0.6);
        std::vector<TailConstraint> cs;
        const int k = static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) cs.push_back({gd(rng), dd(rng)});
        ProblemInstance inst(n, std::move(cs));
        const double lp_val = lpd(rng);
        PurchaseDistribution greedy = greedy_fill(inst, lp_val);
        LpSolution sol = lp_maximize(LpInstance::build(inst, lp_val));
        worst_value = std::max(worst_value, std::abs(sol.value - greedy.total_mass()));
        for (int t = 1; t <= inst.n(); ++t)
            worst_entry = std::max(worst_entry, std::abs(sol.maximizer.at(t) - greedy.at(t)));
    }
    bool ok = worst_entry <= 1e-6 && worst_value <= 1e-7;

    double worst_bf = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        std::uniform_real_distribution<double> gd(2.0 - 1.0 / n, 3.0);
        std::uniform_real_distribution<double> dd(0.0, 0.6);
        std::vector<TailConstraint> cs;
        const int k = static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) cs.push_back({gd(rng), dd(rng)});
        ProblemInstance inst(n, std::move(cs));
        const double step = 0.02;
        BruteForceResult bf = brute_force_opt(inst, step);
        const double lambda = binary_search_solve(inst).lambda;
        ok = ok && lambda <= bf.lambda + 1e-9 && bf.lambda - lambda <= bf.lipschitz_bound;
        worst_bf = std::max(worst_bf, std::abs(bf.lambda - lambda));
    }
    const double elapsed = timer.seconds();
    ok = ok && elapsed < 60.0;
    return report(7, ok, "greedy fill matches the LP and grid oracles",
                  fmt("(worst LP entry gap %.2e, worst grid gap %.3f, %.1fs)", worst_entry,
                      worst_bf, elapsed));
}

// 8: delta sweep reproduces the qualitative figure.
bool criterion8() {
    const int n = 1000;
    const double eps = 1e-10;
    const double ds = delta_star();
    const std::vector<double> deltas = {0.05, 0.10, 0.15, 0.18, 0.19, 0.25, 0.30, ds, 0.40};
    bool ok = true;
    double prev = 1e9;
    int runs_018 = 0, runs_019 = 0;
    for (double d : deltas) {
        ProblemInstance inst(n, {{2.0, d}});
        SolveReport rep = binary_search_solve(inst, SolveConfig::defaults(inst, eps));
        Strategy s = d >= ds ? Strategy::classical_randomized() : Strategy::interpolation(d);
        const double lambda_interp = worst_case_profile(materialize(s, n)).max_ratio;
        ok = ok && rep.lambda <= prev + 2 * eps;
        ok = ok && rep.lambda <= lambda_interp + 2 * eps;
        if (d >= ds) ok = ok && std::abs(rep.lambda - lambda_interp) <= 2 * eps;
        if (d == 0.18) runs_018 = count_nonzero_intervals(rep.distribution);
        if (d == 0.19) runs_019 = count_nonzero_intervals(rep.distribution);
        prev = rep.lambda;
    }
    ok = ok && runs_018 == 6 && runs_019 == 5;
    return report(8, ok, "delta sweep shape at gamma=2, n=1000",
                  fmt("(non-zero intervals %g at delta=0.18 vs %g at 0.19)",
                      static_cast<double>(runs_018), static_cast<double>(runs_019)));
}

// 9: continuous-limit discontinuity times.
bool criterion9() {
    const int n = 4097;  // 2^12 + 1
    bool ok = true;
    std::string detail;
    {
        ProblemInstance inst(n, {{2.0, 0.1}});
        SolveReport rep = binary_search_solve(inst);
        StructureReport sr = analyze_structure(rep, inst);
        const double t_hat = std::log1p(0.1 / (rep.lambda - 1.0));
        const double first_zero =
            sr.zero_regions.empty() ? -1.0 : static_cast<double>(sr.zero_regions[0].start) / n;
        ok = ok && std::abs(t_hat - first_zero) <= 2.0 / n;
        detail = fmt("(t_hat offset %.2f/n", std::abs(t_hat - first_zero) * n);
    }
    {
        ProblemInstance inst(n, {{2.0, 0.31}});
        SolveReport rep = binary_search_solve(inst);
        const double t2 = t2_root(0.31, rep.lambda);
        const double b = 0.31 / (rep.lambda - 1.0);
        const double residual =
            ((1.0 + b) * std::log1p(b) + std::exp(2.0 * t2) / (2.0 * std::exp(1.0)) - 1.0) / t2 -
            b;
        int day = -1;
        const double tol = default_tight_tol(rep.lambda);
        for (const DayLedgerEntry& e : rep.ledger) {
            if (e.x > n / 2 && e.alpha_residual <= tol) {
                day = e.x;
                break;
            }
        }
        ok = ok && std::abs(residual) <= 1e-12 && day > 0 &&
             std::abs(t2 - static_cast<double>(day) / n) <= 2.0 / n;
        detail += fmt(", t2 residual %.1e, re-tightening offset %.2f/n)", std::abs(residual),
                      std::abs(t2 - static_cast<double>(day) / n) * n);
    }
    return report(9, ok, "t_hat and t2 match the discrete discontinuities at n=2^12+1", detail);
}

// 10: binary search stays within the iteration budget.
bool criterion10() {
    bool ok = true;
    int worst_excess = -100;
    std::mt19937_64 rng(1010);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 996);
        std::uniform_real_distribution<double> dd(0.0, 0.5);
        ProblemInstance inst(n, {{2.0, dd(rng)}});
        for (double eps : {1e-6, 1e-10}) {
            SolveConfig cfg = SolveConfig::defaults(inst, eps);
            SolveReport rep = binary_search_solve(inst, cfg);
            const int budget =
                static_cast<int>(std::ceil(std::log2((cfg.lambda_hi - cfg.lambda_lo) / eps))) + 1;
            ok = ok && rep.iterations <= budget;
            worst_excess = std::max(worst_excess, rep.iterations - budget);
        }
    }
    return report(10, ok, "iterations within ceil(log2(bracket/epsilon)) + 1",
                  fmt("(worst slack %g iterations)", static_cast<double>(-worst_excess)));
}

}  // namespace

int main(int argc, char** argv) {
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9, criterion10};
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > 10) {
            std::fprintf(stderr, "usage: acceptance [1..10]\n");
            return 2;
        }
        return criteria[id - 1]() ? 0 : 1;
    }
    bool all = true;
    for (auto* c : criteria) all = c() && all;
    return all ? 0 : 1;
}
