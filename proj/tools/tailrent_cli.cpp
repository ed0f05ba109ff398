#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tailrent/baselines.hpp"
#include "tailrent/io.hpp"
#include "tailrent/oracle.hpp"
#include "tailrent/solver.hpp"
#include "tailrent/structure.hpp"

namespace {

using namespace tailrent;
using nlohmann::json;

struct CommonOpts {
    int n = 0;
    std::vector<double> constraint_values;  // flattened (gamma, delta) pairs
    std::string instance_path;
    double epsilon = 1e-10;
    std::string format = "json";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_epsilon = true) {
    cmd->add_option("--n", opts.n, "day count");
    cmd->add_option("--constraint", opts.constraint_values,
                    "gamma delta pair, repeatable")
        ->expected(-1);
    cmd->add_option("--instance", opts.instance_path, "instance JSON file")
        ->excludes("--n")
        ->excludes("--constraint");
    if (with_epsilon) cmd->add_option("--epsilon", opts.epsilon, "lambda tolerance");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opts.out_path, "output path (default stdout)");
}

ProblemInstance load_instance(const CommonOpts& opts) {
    if (!opts.instance_path.empty()) {
        std::ifstream in(opts.instance_path);
        if (!in) throw std::invalid_argument("cannot open instance file " + opts.instance_path);
        json j;
        in >> j;
        return instance_from_json(j);
    }
    if (opts.n < 2) throw std::invalid_argument("--n (at least 2) or --instance is required");
    if (opts.constraint_values.size() % 2 != 0)
        throw std::invalid_argument("--constraint takes gamma delta pairs");
    std::vector<TailConstraint> cs;
    for (size_t i = 0; i + 1 < opts.constraint_values.size(); i += 2)
        cs.push_back({opts.constraint_values[i], opts.constraint_values[i + 1]});
    return ProblemInstance(opts.n, std::move(cs));
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw std::invalid_argument("cannot open output path " + opts.out_path);
    out << text;
}

/// Worst-case ratio of the interpolation baseline; falls back to the plain
/// randomized strategy above delta*.
double interpolation_lambda(int n, double delta) {
    Strategy s = delta >= delta_star() ? Strategy::classical_randomized()
                                       : Strategy::interpolation(delta);
    return worst_case_profile(materialize(s, n)).max_ratio;
}

int run_solve(const CommonOpts& opts, const std::vector<double>& deltas) {
    if (!deltas.empty()) {
        // Delta sweep: fixed gamma taken from the single --constraint pair.
        if (opts.constraint_values.size() != 2)
            throw std::invalid_argument("--deltas requires exactly one --constraint pair "
                                        "(its delta fixes nothing, gamma is swept)");
        for (size_t i = 1; i < deltas.size(); ++i)
            if (deltas[i] < deltas[i - 1])
                throw std::invalid_argument("--deltas must be sorted ascending");
        const double gamma = opts.constraint_values[0];
        json rows = json::array();
        std::ostringstream csv;
        csv << "delta,lambda_opt,lambda_interp,nonzero_intervals\n";
        for (double d : deltas) {
            ProblemInstance inst(opts.n, {{gamma, d}});
            SolveReport rep = binary_search_solve(inst, SolveConfig::defaults(inst, opts.epsilon));
            const double li = interpolation_lambda(opts.n, d);
            const int runs = count_nonzero_intervals(rep.distribution);
            rows.push_back({{"delta", d},
                            {"lambda_opt", rep.lambda},
                            {"lambda_interp", li},
                            {"nonzero_intervals", runs}});
            csv << format_g17(d) << ',' << format_g17(rep.lambda) << ',' << format_g17(li) << ','
                << runs << '\n';
        }
        emit(opts, opts.format == "csv" ? csv.str() : json(rows).dump());
        return 0;
    }
    ProblemInstance inst = load_instance(opts);
    SolveReport rep = binary_search_solve(inst, SolveConfig::defaults(inst, opts.epsilon));
    emit(opts, opts.format == "csv" ? solve_report_to_csv(rep) : solve_report_to_json(rep).dump());
    return 0;
}

int run_analyze(const CommonOpts& opts) {
    ProblemInstance inst = load_instance(opts);
    SolveReport rep = binary_search_solve(inst, SolveConfig::defaults(inst, opts.epsilon));
    StructureReport sr = analyze_structure(rep, inst);
    emit(opts,
         opts.format == "csv" ? structure_report_to_csv(sr) : structure_report_to_json(sr).dump());
    return 0;
}

int run_simulate(const CommonOpts& opts, std::uint64_t trials, std::uint64_t seed,
                 const std::string& kind, double delta) {
    ProblemInstance inst = load_instance(opts);
    PurchaseDistribution f;
    if (kind == "solved") {
        f = binary_search_solve(inst, SolveConfig::defaults(inst, opts.epsilon)).distribution;
    } else if (kind == "deterministic") {
        f = materialize(Strategy::deterministic(), inst.n());
    } else if (kind == "randomized") {
        f = materialize(Strategy::classical_randomized(), inst.n());
    } else {
        f = materialize(Strategy::interpolation(delta), inst.n());
    }
    SimulationResult res = simulate(f, inst, trials, seed);
    emit(opts, opts.format == "csv" ? simulation_to_csv(res) : simulation_to_json(res).dump());
    return 0;
}

int run_baseline(const CommonOpts& opts, const std::string& kind, double delta) {
    ProblemInstance inst = load_instance(opts);
    Strategy s = Strategy::deterministic();
    if (kind == "randomized") s = Strategy::classical_randomized();
    if (kind == "interpolation") s = Strategy::interpolation(delta);
    PurchaseDistribution f = materialize(s, inst.n());
    const std::vector<double> alpha = alpha_profile_all(f);

    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "t,f,alpha";
        for (const TailConstraint& c : inst.constraints()) {
            char head[48];
            std::snprintf(head, sizeof(head), ",tail_g%g", c.gamma);
            csv << head;
        }
        csv << '\n';
        for (int t = 1; t <= inst.n(); ++t) {
            csv << t << ',' << format_g17(f.at(t)) << ','
                << format_g17(alpha[static_cast<size_t>(t - 1)]);
            for (const TailConstraint& c : inst.constraints())
                csv << ',' << format_g17(tail_probability(f, c, t));
            csv << '\n';
        }
        emit(opts, csv.str());
        return 0;
    }
    json tails = json::array();
    for (const TailConstraint& c : inst.constraints()) {
        std::vector<double> curve;
        for (int x = 1; x <= inst.n(); ++x) curve.push_back(tail_probability(f, c, x));
        tails.push_back({{"gamma", c.gamma}, {"tail", curve}});
    }
    emit(opts, json{{"kind", kind},
                    {"f", f.probs},
                    {"alpha", alpha},
                    {"lambda", worst_case_profile(f).max_ratio},
                    {"tails", tails}}
                   .dump());
    return 0;
}

int run_oracle(const CommonOpts& opts, double grid_step, double lambda_prime) {
    ProblemInstance inst = load_instance(opts);
    if (lambda_prime > 0.0) {
        LpInstance lp = LpInstance::build(inst, lambda_prime);
        emit(opts, lp_fixture_to_json(lp, lp_maximize(lp)).dump());
        return 0;
    }
    BruteForceResult res = brute_force_opt(inst, grid_step);
    emit(opts, brute_force_to_json(res, grid_step).dump());
    return 0;
}

void diagnostic(const std::string& message, int code) {
    std::cerr << json{{"error", message}, {"exit", code}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tailrent: optimal ski-rental purchase distributions under tail constraints"};
    app.require_subcommand(1);

    CommonOpts solve_opts, analyze_opts, sim_opts, base_opts, oracle_opts;
    std::vector<double> deltas;
    std::uint64_t trials = 1000000, seed = 12345;
    std::string sim_kind = "solved", base_kind = "randomized";
    double sim_delta = 0.0, base_delta = 0.0, grid_step = 0.01, lambda_prime = 0.0;

    CLI::App* solve = app.add_subcommand("solve", "solve an instance or sweep deltas");
    add_common(solve, solve_opts);
    solve->add_option("--deltas", deltas, "comma list of deltas to sweep")->delimiter(',');

    CLI::App* analyze = app.add_subcommand("analyze", "structural analysis of a solved instance");
    add_common(analyze, analyze_opts);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo certification");
    add_common(simulate_cmd, sim_opts);
    simulate_cmd->add_option("--trials", trials, "trial count");
    simulate_cmd->add_option("--seed", seed, "RNG seed");
    simulate_cmd->add_option("--kind", sim_kind, "distribution to simulate")
        ->check(CLI::IsMember({"solved", "deterministic", "randomized", "interpolation"}));
    simulate_cmd->add_option("--delta", sim_delta, "interpolation delta");

    CLI::App* baseline = app.add_subcommand("baseline", "materialize a baseline strategy");
    add_common(baseline, base_opts, false);
    baseline->add_option("--kind", base_kind, "strategy kind")
        ->check(CLI::IsMember({"deterministic", "randomized", "interpolation"}));
    baseline->add_option("--delta", base_delta, "interpolation delta");

    CLI::App* oracle = app.add_subcommand("oracle", "small-instance ground truth fixtures");
    add_common(oracle, oracle_opts, false);
    oracle->add_option("--grid-step", grid_step, "simplex grid resolution");
    oracle->add_option("--lambda-prime", lambda_prime,
                       "emit an LP(lambda') fixture instead of the grid search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnostic(e.what(), 2);
        return 2;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opts, deltas);
        if (analyze->parsed()) return run_analyze(analyze_opts);
        if (simulate_cmd->parsed())
            return run_simulate(sim_opts, trials, seed, sim_kind, sim_delta);
        if (baseline->parsed()) return run_baseline(base_opts, base_kind, base_delta);
        if (oracle->parsed()) return run_oracle(oracle_opts, grid_step, lambda_prime);
    } catch (const InfeasibilityError& e) {
        diagnostic(e.what(), 1);
        return 1;
    } catch (const ConvergenceError& e) {
        diagnostic(e.what(), 3);
        return 3;
    } catch (const NumericError& e) {
        diagnostic(e.what(), 3);
        return 3;
    } catch (const InternalConsistencyError& e) {
        diagnostic(e.what(), 3);
        return 3;
    } catch (const std::invalid_argument& e) {
        // Construction-time infeasibility is a modelling failure, not a usage
        // error; everything else invalid is a usage error.
        const bool infeasible = std::string(e.what()).find("infeasible") != std::string::npos;
        diagnostic(e.what(), infeasible ? 1 : 2);
        return infeasible ? 1 : 2;
    } catch (const std::exception& e) {
        diagnostic(e.what(), 2);
        return 2;
    }
    return 2;
}
