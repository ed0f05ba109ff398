#include "tailrent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tailrent {

LpInstance LpInstance::build(const ProblemInstance& inst, double lambda_prime) {
    const int n = inst.n();
    if (n > 16) throw std::invalid_argument("LpInstance: n must be at most 16");
    LpInstance lp;
    lp.n = n;
    lp.lambda_prime = lambda_prime;
    for (int x = 1; x <= n; ++x) {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        for (int t = 1; t <= x; ++t)
            row[static_cast<size_t>(t - 1)] = static_cast<double>(n + t - x - 1) / x;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(lambda_prime);
    }
    for (const TailConstraint& c : inst.constraints()) {
        for (int x = 1; x <= n; ++x) {
            BadInterval iv = bad_interval(c, x, n);
            std::vector<double> row(static_cast<size_t>(n), 0.0);
            for (int t = iv.lo + 1; t <= iv.hi; ++t) row[static_cast<size_t>(t - 1)] = 1.0;
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(c.delta);
        }
    }
    return lp;
}

LpSolution lp_maximize(const LpInstance& lp) {
    const int n = lp.n;
    const int m = static_cast<int>(lp.rows.size());
    const int cols = n + m;  // structural + slack
    const double pivot_tol = 1e-10;

    // Slack basis is feasible since every right-hand side is non-negative.
    for (double b : lp.rhs)
        if (b < 0.0) throw std::invalid_argument("lp_maximize: negative right-hand side");

    // tableau[i] = row i over [structural | slack | rhs]; last row = objective.
    std::vector<std::vector<double>> tab(static_cast<size_t>(m + 1),
                                         std::vector<double>(static_cast<size_t>(cols + 1), 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) tab[i][static_cast<size_t>(j)] = lp.rows[i][static_cast<size_t>(j)];
        tab[i][static_cast<size_t>(n + i)] = 1.0;
        tab[i][static_cast<size_t>(cols)] = lp.rhs[static_cast<size_t>(i)];
    }
    for (int j = 0; j < n; ++j) tab[m][static_cast<size_t>(j)] = 1.0;  // maximize sum f

    std::vector<int> basis(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = n + i;

    const long iter_cap = 200L * (m + cols);
    long iter = 0;
    while (true) {
        if (++iter > iter_cap) throw NumericError("lp_maximize: cycling guard tripped");
        // Bland: entering column is the lowest index with positive reduced cost.
        int enter = -1;
        for (int j = 0; j < cols; ++j) {
            if (tab[m][static_cast<size_t>(j)] > pivot_tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;  // optimal
        // Ratio test; ties broken by the lowest basis variable index.
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            double a = tab[i][static_cast<size_t>(enter)];
            if (a <= pivot_tol) continue;
            double ratio = tab[i][static_cast<size_t>(cols)] / a;
            if (ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 &&
                 (leave < 0 || basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave < 0) throw NumericError("lp_maximize: unbounded objective");
        // Pivot.
        double p = tab[leave][static_cast<size_t>(enter)];
        for (int j = 0; j <= cols; ++j) tab[leave][static_cast<size_t>(j)] /= p;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double factor = tab[i][static_cast<size_t>(enter)];
            if (factor == 0.0) continue;
            for (int j = 0; j <= cols; ++j)
                tab[i][static_cast<size_t>(j)] -= factor * tab[leave][static_cast<size_t>(j)];
        }
        basis[static_cast<size_t>(leave)] = enter;
    }

    LpSolution sol;
    sol.maximizer = PurchaseDistribution(n);
    for (int i = 0; i < m; ++i) {
        int v = basis[static_cast<size_t>(i)];
        if (v < n) sol.maximizer.at(v + 1) = std::max(0.0, tab[i][static_cast<size_t>(cols)]);
    }
    sol.value = sol.maximizer.total_mass();

    // Residual feasibility check.
    for (int i = 0; i < m; ++i) {
        KahanSum s;
        for (int j = 0; j < n; ++j)
            s.add(lp.rows[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                  sol.maximizer.at(j + 1));
        if (s.value() > lp.rhs[static_cast<size_t>(i)] + 1e-10)
            throw NumericError("lp_maximize: maximizer violates feasibility residual");
    }
    return sol;
}

namespace {

struct GridBest {
    double lambda = std::numeric_limits<double>::infinity();
    std::vector<int> ticks;

    // Ties break lexicographically so the result is thread-count independent.
    void consider(double value, const std::vector<int>& candidate) {
        if (value < lambda || (value == lambda && (ticks.empty() || candidate < ticks))) {
            lambda = value;
            ticks = candidate;
        }
    }
};

/// Evaluates one grid point; returns max alpha or +inf when infeasible.
double evaluate_grid_point(const std::vector<int>& ticks, double step,
                           const ProblemInstance& inst) {
    const int n = inst.n();
    std::vector<double> f(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) f[static_cast<size_t>(t)] = ticks[static_cast<size_t>(t)] * step;

    // Feasibility against every bad interval.
    for (size_t i = 0; i < inst.constraints().size(); ++i) {
        const TailConstraint& c = inst.constraints()[i];
        for (int x = 1; x <= n; ++x) {
            BadInterval iv = bad_interval(c, x, n);
            double mass = 0.0;
            for (int t = iv.lo + 1; t <= iv.hi; ++t) mass += f[static_cast<size_t>(t - 1)];
            if (mass > c.delta + 1e-12) return std::numeric_limits<double>::infinity();
        }
    }
    // Worst-case alpha.
    double weighted = 0.0, massum = 0.0, worst = 0.0;
    for (int x = 1; x <= n; ++x) {
        weighted += static_cast<double>(n + x - 1) * f[static_cast<size_t>(x - 1)];
        massum += f[static_cast<size_t>(x - 1)];
        worst = std::max(worst, weighted / x + 1.0 - massum);
    }
    return worst;
}

void enumerate_rest(std::vector<int>& ticks, int pos, int remaining, double step,
                    const ProblemInstance& inst, GridBest& best) {
    const int n = inst.n();
    if (pos == n - 1) {
        ticks[static_cast<size_t>(pos)] = remaining;
        best.consider(evaluate_grid_point(ticks, step, inst), ticks);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        ticks[static_cast<size_t>(pos)] = k;
        enumerate_rest(ticks, pos + 1, remaining - k, step, inst, best);
    }
}

}  // namespace

BruteForceResult brute_force_opt(const ProblemInstance& inst, double grid_step) {
    const int n = inst.n();
    if (n > 6) throw std::invalid_argument("brute_force_opt: n must be at most 6");
    if (grid_step < 1e-3) throw std::invalid_argument("brute_force_opt: grid_step below 1e-3");
    const int ticks_total = static_cast<int>(std::lround(1.0 / grid_step));
    const double step = 1.0 / ticks_total;

    std::vector<GridBest> partial(static_cast<size_t>(ticks_total) + 1);
#pragma omp parallel for schedule(dynamic)
    for (int k1 = 0; k1 <= ticks_total; ++k1) {
        std::vector<int> ticks(static_cast<size_t>(n), 0);
        ticks[0] = k1;
        GridBest local;
        enumerate_rest(ticks, 1, ticks_total - k1, step, inst, local);
        partial[static_cast<size_t>(k1)] = std::move(local);
    }
    GridBest best;
    for (const GridBest& b : partial)
        if (!b.ticks.empty()) best.consider(b.lambda, b.ticks);

    if (!std::isfinite(best.lambda)) throw InfeasibilityError("brute_force_opt: no feasible grid point");

    BruteForceResult out;
    out.lambda = best.lambda;
    out.distribution = PurchaseDistribution(n);
    for (int t = 1; t <= n; ++t) out.distribution.at(t) = best.ticks[static_cast<size_t>(t - 1)] * step;
    out.lipschitz_bound = n * (2.0 - 1.0 / n) * step;
    return out;
}

}  // namespace tailrent
