#include "tailrent/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailrent {

namespace {

/// Returns log_gamma(n-1) when n-1 is an exact power of gamma, else -1.
int exact_power_log(long base, long value) {
    int e = 0;
    long v = 1;
    while (v < value) {
        v *= base;
        ++e;
        if (v == value) return e;
    }
    return value == 1 ? 0 : -1;
}

}  // namespace

IntervalPartition partition_intervals(int n, int gamma, int j_max) {
    if (gamma < 2) throw std::invalid_argument("partition_intervals: gamma must be >= 2");
    if (j_max < 0) throw std::invalid_argument("partition_intervals: j_max must be >= 0");
    const long m = static_cast<long>(n) - 1;
    if (exact_power_log(gamma, m) < 0)
        throw std::invalid_argument("partition_intervals: n - 1 must be a power of gamma");

    IntervalPartition part;
    part.gamma = gamma;
    part.n = n;
    long pow_j = 1;  // gamma^j
    for (int j = 0; j <= j_max; ++j) {
        if (pow_j * gamma > m)
            throw std::invalid_argument("partition_intervals: interval P_" + std::to_string(j) +
                                        " is empty for this n");
        const long lj = (m - m / pow_j) / (gamma - 1) + 1;
        const long rj = (m - m / (pow_j * gamma)) / (gamma - 1);
        part.intervals.emplace_back(lj, rj);
        pow_j *= gamma;
    }
    return part;
}

StructureReport analyze_structure(const SolveReport& report, const ProblemInstance& inst) {
    if (inst.constraints().size() != 1)
        throw AnalysisNotApplicable("analyze_structure: exactly one constraint required");
    const TailConstraint& c = inst.constraints()[0];
    const int gamma = static_cast<int>(std::lround(c.gamma));
    if (std::abs(c.gamma - gamma) > 1e-12 || gamma < 2)
        throw AnalysisNotApplicable("analyze_structure: integer gamma >= 2 required");
    const int n = inst.n();
    const int log_m = exact_power_log(gamma, static_cast<long>(n) - 1);
    if (log_m < 0)
        throw AnalysisNotApplicable("analyze_structure: n - 1 must be a power of gamma");
    const PurchaseDistribution& f = report.distribution;

    StructureReport out;
    out.partition = partition_intervals(n, gamma, log_m - 1);

    for (const auto& [lj, rj] : out.partition.intervals) {
        KahanSum s;
        for (long t = lj; t <= rj; ++t) s.add(f.at(static_cast<int>(t)));
        out.masses.push_back(s.value());
    }

    double fmax = *std::max_element(f.probs.begin(), f.probs.end());
    out.zero_thresh = 1e-12 * fmax;

    // Maximal zero regions and positive runs.
    auto is_zero = [&](int t) { return f.at(t) < out.zero_thresh; };
    int t = 1;
    while (t <= n) {
        int start = t;
        bool zero = is_zero(t);
        while (t + 1 <= n && is_zero(t + 1) == zero) ++t;
        if (zero) {
            out.zero_regions.push_back({start, t});
        } else {
            GrowthSegment seg{start, t, std::numeric_limits<double>::quiet_NaN()};
            // The final day of a run is usually clipped partway by the tail
            // constraint, so it is left out of the fit when there is room.
            int fit_end = t - start + 1 >= 4 ? t - 1 : t;
            int len = fit_end - start + 1;
            if (len >= 3) {
                // Least squares of log f_t against t; slope exponentiates to
                // the per-day growth base.
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (int u = start; u <= fit_end; ++u) {
                    double x = u - start;
                    double y = std::log(f.at(u));
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                }
                double slope = (len * sxy - sx * sy) / (len * sxx - sx * sx);
                seg.fitted_base = std::exp(slope);
            }
            out.growth_segments.push_back(seg);
        }
        ++t;
    }

    // hat_t: largest day whose classical-exponential prefix stays within delta.
    {
        const double lam = report.lambda;
        const double growth = 1.0 + 1.0 / (n - 1);
        KahanSum prefix;
        double term = (lam - 1.0) / (n - 1);
        int ht = 0;
        for (int u = 1; u <= n; ++u) {
            prefix.add(term);
            if (prefix.value() > c.delta) break;
            ht = u;
            term *= growth;
        }
        out.hat_t = ht;
        out.hat_t_in_p0 = ht < static_cast<double>(n) / gamma;
    }

    // Validity index: largest i with delta < 1/(2*gamma*(i+1)) and
    // n >= 2*gamma^(i+1) + 1, capped at the last nonempty interval.
    {
        int i = -1;
        long pw = static_cast<long>(gamma);  // gamma^(j+1) for the probed j = i+1
        while (c.delta < 1.0 / (2.0 * gamma * (i + 2)) && static_cast<long>(n) >= 2 * pw + 1 &&
               i + 1 < static_cast<int>(out.partition.intervals.size())) {
            ++i;
            pw *= gamma;
        }
        out.validity_j_max = i;
    }

    // Mass-transport recursion on runs of tail-tight days.
    {
        const double tol = default_tight_tol(report.lambda);
        auto tail_tight = [&](int day) {
            const DayLedgerEntry& e = report.ledger[static_cast<size_t>(day - 1)];
            return e.tail_residual <= tol;
        };
        double worst = 0.0;
        for (int day = 2; day <= n; ++day) {
            long lo = static_cast<long>(gamma) * day - (n - 1) - (gamma - 1);
            long hi = static_cast<long>(gamma) * day - (n - 1);
            if (lo < 1 || hi > n) continue;
            if (!tail_tight(day) || !tail_tight(day - 1)) continue;
            KahanSum s;
            for (long u = lo; u <= hi; ++u) s.add(f.at(static_cast<int>(u)));
            worst = std::max(worst, std::abs(f.at(day) - s.value()));
        }
        out.recursion_max_residual = worst;
    }
    return out;
}

int count_zero_bursts(const StructureReport& report) {
    int count = 0;
    const int n = report.partition.n;
    for (const ZeroRegion& z : report.zero_regions)
        if (z.end < n) ++count;
    return count;
}

int count_nonzero_intervals(const PurchaseDistribution& f) {
    const double thresh = 1e-12 * *std::max_element(f.probs.begin(), f.probs.end());
    int count = 0;
    bool in_run = false;
    for (double v : f.probs) {
        const bool pos = v >= thresh;
        if (pos && !in_run) ++count;
        in_run = pos;
    }
    return count;
}

PureConstraintSolution pure_constraint_solution(int n, int gamma) {
    if (gamma < 2) throw std::invalid_argument("pure_constraint_solution: gamma must be >= 2");
    if ((n - 1) % (gamma - 1) != 0)
        throw std::invalid_argument("pure_constraint_solution: gamma - 1 must divide n - 1");
    const int t1 = (n - 1) / (gamma - 1);
    const double ratio = static_cast<double>(n) / (n - 1);
    const double lambda =
        1.0 + (gamma - 1.0) /
                  (1.0 + (static_cast<double>(gamma) / (n - 1)) *
                             (n * (std::pow(ratio, n - 1 - t1) - 1.0) + 1.0));

    PureConstraintSolution out;
    out.lambda = lambda;
    out.distribution = PurchaseDistribution(n);
    out.distribution.at(t1) = (lambda - 1.0) / (gamma - 1.0);
    const double base = gamma * (lambda - 1.0) / (static_cast<double>(n - 1) * (gamma - 1));
    double v = base;
    for (int t = t1 + 1; t <= n; ++t) {
        out.distribution.at(t) = v;
        v *= 1.0 + 1.0 / (n - 1);
    }
    return out;
}

double pure_constraint_lambda_limit(int gamma) {
    return 1.0 + (gamma - 1.0) /
                     (1.0 + gamma * (std::exp(1.0 - 1.0 / (gamma - 1.0)) - 1.0));
}

ContinuousSolution continuous_solution(int gamma, double delta, double lambda, int j_max) {
    if (gamma < 2) throw std::invalid_argument("continuous_solution: gamma must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("continuous_solution: delta must be positive");
    // Validity bound for the recurring structure: the stricter of
    // 1/(2*gamma*delta) - 1 and 1/(6*delta) - 1. The j = 0 piece holds by the
    // definition of hat_t alone, so it is exempt (slack delta reduces to the
    // classical solution with an empty zero span).
    const double bound = 1.0 / (std::max(2.0 * gamma, 6.0) * delta) - 1.0;
    if (j_max >= 1 && !(j_max < bound))
        throw AnalysisNotApplicable("continuous_solution: j_max outside the validity range");

    ContinuousSolution out;
    out.hat_t = std::log1p(delta / (lambda - 1.0));
    const double expm1_hat = std::expm1(out.hat_t);  // = delta / (lambda - 1)
    double pow_j = 1.0;
    for (int j = 0; j <= j_max; ++j) {
        ContinuousPiece piece;
        piece.j = j;
        piece.exponent = pow_j;
        piece.lo = (1.0 - 1.0 / pow_j) / (gamma - 1.0);
        const double l_next = (1.0 - 1.0 / (pow_j * gamma)) / (gamma - 1.0);
        const double hat_tj = out.hat_t / pow_j;
        piece.hi = std::min(piece.lo + hat_tj, l_next);
        // Mass of the growth stretch is exactly delta:
        // (c_j / gamma^j) e^(gamma^j l_j) (e^hat_t - 1) = delta.
        piece.coeff = delta * pow_j / (expm1_hat * std::exp(pow_j * piece.lo));
        piece.zero_lo = piece.hi;
        piece.zero_hi = l_next;
        out.pieces.push_back(piece);
        pow_j *= gamma;
    }
    return out;
}

double t2_root(double delta, double lambda) {
    const double b = delta / (lambda - 1.0);
    const double head = (1.0 + b) * std::log1p(b);  // mass term from the first stretch
    auto g = [&](double t) {
        return (head + std::exp(2.0 * t) / (2.0 * std::exp(1.0)) - 1.0) / t - b;
    };
    double lo = 0.5 + 1e-9;
    double hi = 0.75 - 1e-9;
    const double glo = g(lo);
    const double ghi = g(hi);
    if ((glo < 0.0) == (ghi < 0.0))
        throw AnalysisNotApplicable(
            "t2_root: no sign change in (1/2, 3/4); tail constraint stays tight");
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        ((g(mid) < 0.0) == (glo < 0.0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace tailrent
