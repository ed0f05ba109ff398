#include "tailrent/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tailrent {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json instance_to_json(const ProblemInstance& inst) {
    json cs = json::array();
    for (const TailConstraint& c : inst.constraints())
        cs.push_back({{"gamma", c.gamma}, {"delta", c.delta}});
    return {{"n", inst.n()}, {"constraints", cs}};
}

ProblemInstance instance_from_json(const json& j) {
    std::vector<TailConstraint> cs;
    for (const json& c : j.at("constraints"))
        cs.push_back({c.at("gamma").get<double>(), c.at("delta").get<double>()});
    return ProblemInstance(j.at("n").get<int>(), std::move(cs));
}

json distribution_to_json(const PurchaseDistribution& f) { return json(f.probs); }

PurchaseDistribution distribution_from_json(const json& j) {
    PurchaseDistribution f;
    f.probs = j.get<std::vector<double>>();
    return f;
}

std::string distribution_to_csv(const PurchaseDistribution& f) {
    std::ostringstream out;
    out << "t,f\n";
    for (int t = 1; t <= f.n(); ++t) out << t << ',' << format_g17(f.at(t)) << '\n';
    return out.str();
}

namespace {

const char* tight_name(TightKind k) {
    switch (k) {
        case TightKind::Alpha: return "alpha";
        case TightKind::Tail: return "tail";
        case TightKind::Neither: return "neither";
    }
    return "neither";
}

TightKind tight_from_name(const std::string& s) {
    if (s == "alpha") return TightKind::Alpha;
    if (s == "tail") return TightKind::Tail;
    return TightKind::Neither;
}

}  // namespace

json solve_report_to_json(const SolveReport& report) {
    json ledger = json::array();
    for (const DayLedgerEntry& e : report.ledger) {
        json entry = {{"x", e.x},
                      {"tight", tight_name(e.tight)},
                      {"alpha_residual", e.alpha_residual},
                      {"tail_residual", e.tail_residual}};
        entry["constraint"] = e.constraint ? json(*e.constraint) : json(nullptr);
        ledger.push_back(std::move(entry));
    }
    return {{"lambda", report.lambda},
            {"iterations", report.iterations},
            {"f", report.distribution.probs},
            {"ledger", ledger}};
}

SolveReport solve_report_from_json(const json& j) {
    SolveReport report;
    report.lambda = j.at("lambda").get<double>();
    report.iterations = j.at("iterations").get<int>();
    report.distribution.probs = j.at("f").get<std::vector<double>>();
    for (const json& e : j.at("ledger")) {
        DayLedgerEntry entry;
        entry.x = e.at("x").get<int>();
        entry.tight = tight_from_name(e.at("tight").get<std::string>());
        if (!e.at("constraint").is_null()) entry.constraint = e.at("constraint").get<int>();
        entry.alpha_residual = e.at("alpha_residual").get<double>();
        entry.tail_residual = e.at("tail_residual").get<double>();
        report.ledger.push_back(std::move(entry));
    }
    return report;
}

std::string solve_report_to_csv(const SolveReport& report) {
    std::ostringstream out;
    out << "t,f,alpha\n";
    const std::vector<double> alpha = alpha_profile_all(report.distribution);
    for (int t = 1; t <= report.distribution.n(); ++t)
        out << t << ',' << format_g17(report.distribution.at(t)) << ','
            << format_g17(alpha[static_cast<size_t>(t - 1)]) << '\n';
    return out.str();
}

namespace {

struct IntervalRow {
    double fitted_base = std::numeric_limits<double>::quiet_NaN();
    int zero_start = 0;
    int zero_end = 0;
};

// Aligns the detected growth segment and zero region with interval P_j by the
// position of their start day.
IntervalRow interval_row(const StructureReport& report, size_t j) {
    IntervalRow row;
    const auto [lj, rj] = report.partition.intervals[j];
    for (const GrowthSegment& seg : report.growth_segments) {
        if (seg.start >= lj && seg.start <= rj) {
            row.fitted_base = seg.fitted_base;
            break;
        }
    }
    for (const ZeroRegion& z : report.zero_regions) {
        if (z.start >= lj && z.start <= rj + 1) {
            row.zero_start = z.start;
            row.zero_end = z.end;
            break;
        }
    }
    return row;
}

}  // namespace

json structure_report_to_json(const StructureReport& report) {
    json intervals = json::array();
    const int n = report.partition.n;
    const double base = 1.0 + 1.0 / (n - 1);
    double pow_j = 1.0;
    for (size_t j = 0; j < report.partition.intervals.size(); ++j) {
        const auto [lj, rj] = report.partition.intervals[j];
        IntervalRow row = interval_row(report, j);
        intervals.push_back({{"j", j},
                             {"l_j", lj},
                             {"r_j", rj},
                             {"mass", report.masses[j]},
                             {"fitted_base", std::isnan(row.fitted_base)
                                                 ? json(nullptr)
                                                 : json(row.fitted_base)},
                             {"expected_base", std::pow(base, pow_j)},
                             {"zero_start", row.zero_start},
                             {"zero_end", row.zero_end}});
        pow_j *= report.partition.gamma;
    }
    return {{"gamma", report.partition.gamma},
            {"n", n},
            {"intervals", intervals},
            {"hat_t", report.hat_t},
            {"hat_t_in_p0", report.hat_t_in_p0},
            {"validity_j_max", report.validity_j_max},
            {"recursion_max_residual", report.recursion_max_residual},
            {"zero_thresh", report.zero_thresh}};
}

std::string structure_report_to_csv(const StructureReport& report) {
    std::ostringstream out;
    out << "j,l_j,r_j,mass,fitted_base,expected_base,zero_start,zero_end\n";
    const int n = report.partition.n;
    const double base = 1.0 + 1.0 / (n - 1);
    double pow_j = 1.0;
    for (size_t j = 0; j < report.partition.intervals.size(); ++j) {
        const auto [lj, rj] = report.partition.intervals[j];
        IntervalRow row = interval_row(report, j);
        out << j << ',' << lj << ',' << rj << ',' << format_g17(report.masses[j]) << ','
            << (std::isnan(row.fitted_base) ? std::string() : format_g17(row.fitted_base)) << ','
            << format_g17(std::pow(base, pow_j)) << ',' << row.zero_start << ',' << row.zero_end
            << '\n';
        pow_j *= report.partition.gamma;
    }
    return out.str();
}

json simulation_to_json(const SimulationResult& result) {
    json rows = json::array();
    for (const SimulationStats& st : result.per_x)
        rows.push_back({{"x", st.x},
                        {"mean_cr", st.mean_cr},
                        {"se_mean", st.se_mean},
                        {"exceed", st.exceed},
                        {"se_exceed", st.se_exceed}});
    return {{"trials", result.trials},
            {"seed", result.seed},
            {"chunks", result.chunks},
            {"gammas", result.gammas},
            {"per_x", rows}};
}

std::string simulation_to_csv(const SimulationResult& result) {
    std::ostringstream out;
    out << "x,mean_cr,se_mean";
    for (double g : result.gammas) {
        char head[64];
        std::snprintf(head, sizeof(head), ",exceed_g%g,se_exceed", g);
        out << head;
    }
    out << '\n';
    for (const SimulationStats& st : result.per_x) {
        out << st.x << ',' << format_g17(st.mean_cr) << ',' << format_g17(st.se_mean);
        for (size_t i = 0; i < st.exceed.size(); ++i)
            out << ',' << format_g17(st.exceed[i]) << ',' << format_g17(st.se_exceed[i]);
        out << '\n';
    }
    return out.str();
}

json brute_force_to_json(const BruteForceResult& result, double grid_step) {
    return {{"method", "brute_force"},
            {"lambda", result.lambda},
            {"iterations", 0},
            {"f", result.distribution.probs},
            {"ledger", json::array()},
            {"grid_step", grid_step},
            {"lipschitz_bound", result.lipschitz_bound}};
}

json lp_fixture_to_json(const LpInstance& lp, const LpSolution& sol) {
    return {{"method", "lp"},
            {"lambda", sol.value},
            {"iterations", 0},
            {"f", sol.maximizer.probs},
            {"ledger", json::array()},
            {"lambda_prime", lp.lambda_prime}};
}

}  // namespace tailrent
