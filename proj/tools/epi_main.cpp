// epi - marginal entanglement toolkit CLI.
//
// Subcommands: analyze, sample, geometry, family, search, witness.
// Exit codes: 0 all checks satisfied, 2 a checked inequality was violated,
// 1 input/usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epi/epi.hpp"

namespace {

using epi::io::json;

struct CommonOpts {
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::int64_t trials = 100000;
    double tol = 1e-9;
    int threads = 0;  // 0 = all cores
    std::string out;
    std::string format = "json";
};

// --seed wins; otherwise EPI_SEED; otherwise the default 42
std::uint64_t effective_seed(const CommonOpts& opts) {
    if (opts.seed_given) return opts.seed;
    if (const char* env = std::getenv("EPI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("EPI_SEED is not an integer: ") + env);
        }
    }
    return opts.seed;
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write output file: " + out_path);
    f << text;
}

void emit_report(const json& j, const CommonOpts& opts, const std::string& what) {
    if (opts.format == "csv")
        write_text(opts.out, epi::io::report_csv(j, what));
    else
        write_text(opts.out, j.dump(2) + "\n");
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_trials = true) {
    auto* seed = cmd->add_option("--seed", opts.seed, "master random seed (default 42, or EPI_SEED)");
    cmd->callback([seed, &opts] { opts.seed_given = seed->count() > 0; });
    if (with_trials) cmd->add_option("--trials", opts.trials, "number of random trials/samples");
    cmd->add_option("--tol", opts.tol, "slack tolerance (default 1e-9)");
    cmd->add_option("--threads", opts.threads, "worker threads (default: all cores)");
    cmd->add_option("--out", opts.out, "output file (default: stdout)");
    cmd->add_option("--format", opts.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("--point: not a number: '" + token + "'");
        }
    }
    if (values.empty()) throw std::invalid_argument("--point: empty list");
    return values;
}

int run_analyze(const std::string& state_path, const std::string& point,
                std::vector<std::string> measure_names, const CommonOpts& opts) {
    if (state_path.empty() == point.empty())
        throw std::invalid_argument("analyze: give exactly one of --state or --point");

    if (!point.empty()) {
        epi::EntanglementVector ev;
        ev.measure = measure_names.empty() ? epi::Measure::Y : epi::parse_measure(measure_names.front());
        for (double v : parse_point(point)) {
            if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
                throw std::invalid_argument("--point: entries must lie in [0,1]");
            ev.values.push_back(std::clamp(v, 0.0, 1.0));
        }
        const epi::SlackReport slack = epi::polygon_slack(ev, opts.tol);
        json j{{"mode", "point"}, {"vector", epi::io::to_json(ev)},
               {"polygon", epi::io::to_json(slack)}};
        emit_report(j, opts, "analyze");
        return slack.satisfied ? 0 : 2;
    }

    const epi::io::StateFile sf = epi::io::load_state_file(state_path);
    const epi::PureState& state = sf.state;

    std::vector<epi::Measure> measures;
    if (measure_names.empty()) {
        if (state.all_qubits())
            measures = {epi::Measure::Y, epi::Measure::S, epi::Measure::C, epi::Measure::N};
        else
            measures = {epi::Measure::Y};
    } else {
        for (const auto& name : measure_names) measures.push_back(epi::parse_measure(name));
    }

    bool all_ok = true;
    json per_measure = json::array();
    for (epi::Measure m : measures) {
        epi::EntanglementVector ev;
        if (state.all_qubits()) {
            ev = epi::marginal_vector(state, m);
        } else {
            if (m != epi::Measure::Y)
                throw std::invalid_argument("analyze: only the Y measure is defined for qudit states");
            ev = epi::qudit_marginal_vector(state);
        }
        const epi::SlackReport slack = epi::polygon_slack(ev, opts.tol);
        all_ok = all_ok && slack.satisfied;
        per_measure.push_back(json{{"vector", epi::io::to_json(ev)},
                                   {"polygon", epi::io::to_json(slack)}});
    }

    json j{{"mode", "state"}, {"dims", state.dims}, {"measures", per_measure}};
    if (!sf.label.empty()) j["label"] = sf.label;

    // monogamy sandwich block for qubit states with at least 3 parties
    if (state.all_qubits() && state.parties() >= 3) {
        const int n = state.parties();
        json parties = json::array();
        std::vector<double> c_marg(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p)
            c_marg[static_cast<std::size_t>(p)] =
                epi::concurrence_of_y(epi::y_measure(epi::schmidt_spectrum(state, p)));
        double min_slack = std::numeric_limits<double>::infinity();
        for (int p = 0; p < n; ++p) {
            double sq = 0.0, upper = 0.0;
            json pair_c = json::array();
            for (int k = 0; k < n; ++k) {
                if (k == p) {
                    pair_c.push_back(0.0);
                    continue;
                }
                const double c = epi::pairwise_concurrence(state, p, k);
                pair_c.push_back(c);
                sq += c * c;
                upper += c_marg[static_cast<std::size_t>(k)];
            }
            const double lower_slack = c_marg[static_cast<std::size_t>(p)] - std::sqrt(sq);
            const double upper_slack = upper - c_marg[static_cast<std::size_t>(p)];
            min_slack = std::min({min_slack, lower_slack, upper_slack});
            parties.push_back(json{{"party", p},
                                   {"C_marginal", c_marg[static_cast<std::size_t>(p)]},
                                   {"C_pairwise", pair_c},
                                   {"lower_slack", lower_slack},
                                   {"upper_slack", upper_slack}});
        }
        const bool sandwich_ok = min_slack >= -1e-8;
        all_ok = all_ok && sandwich_ok;
        j["sandwich"] = json{{"parties", parties}, {"min_slack", min_slack},
                             {"satisfied", sandwich_ok}};
    }

    emit_report(j, opts, "analyze");
    return all_ok ? 0 : 2;
}

int run_sample(int parties, const std::string& measure_name, const CommonOpts& opts) {
    const epi::Measure m = epi::parse_measure(measure_name);
    const epi::SuiteReport rep = epi::verify_polygon(parties, m, opts.trials,
                                                     effective_seed(opts), opts.tol, opts.threads);
    std::cerr << rep.suite << ": " << rep.trials << " trials in " << rep.elapsed_seconds
              << " s\n";
    emit_report(epi::io::to_json(rep), opts, "sample");
    return rep.failures == 0 ? 0 : 2;
}

int run_geometry(int parties, int grid, double slab, const CommonOpts& opts) {
    if (parties < 3) throw std::invalid_argument("geometry: need --N >= 3");
    const std::uint64_t seed = effective_seed(opts);
    const epi::CapacityCurve curve = epi::sample_capacity_curve(parties, grid);

    json summary{{"N", parties},
                 {"available_volume", epi::available_volume(parties)},
                 {"excluded_simplex_volume", epi::excluded_simplex_volume(parties)},
                 {"knots", curve.knots},
                 {"peak", json{{"E_T", 2.0}, {"A", epi::capacity_general(parties, 2.0)}}}};

    const epi::McEstimate vol = epi::mc_volume(parties, opts.trials, seed, opts.threads);
    summary["mc_volume"] = epi::io::to_json(vol);
    summary["mc_volume"]["exact"] = epi::available_volume(parties);

    json caps = json::array();
    for (double t : {1.0, 2.0, static_cast<double>(parties) - 1.0}) {
        const epi::McEstimate est =
            epi::mc_capacity(parties, t, slab, opts.trials, seed + 1, opts.threads);
        json entry = epi::io::to_json(est);
        entry["E_T"] = t;
        entry["exact"] = epi::capacity_general(parties, t);
        caps.push_back(std::move(entry));
    }
    summary["mc_capacity"] = std::move(caps);

    if (opts.format == "json") {
        json doc = summary;
        json samples = json::array();
        for (const auto& [t, a] : curve.samples) samples.push_back({t, a});
        doc["curve"] = std::move(samples);
        write_text(opts.out, doc.dump(2) + "\n");
    } else {
        write_text(opts.out, epi::io::capacity_curve_csv(curve));
        std::cout << summary.dump(2) << "\n";
    }
    return 0;
}

int run_family(const std::string& family_name, int grid, const std::string& measure_name,
               const CommonOpts& opts) {
    const epi::Family family = epi::parse_family(family_name);
    const epi::Measure measure = epi::parse_measure(measure_name);
    const std::vector<epi::FamilyRow> rows = epi::family_sweep(family, grid, measure);
    bool all_ok = true;
    for (const auto& row : rows) all_ok = all_ok && row.slack.satisfied;
    if (opts.format == "csv")
        write_text(opts.out, epi::io::family_sweep_csv(family, measure, rows));
    else
        write_text(opts.out, epi::io::family_sweep_json(rows).dump(2) + "\n");
    return all_ok ? 0 : 2;
}

int run_search(int local_dim, int parties, int restarts, int iters, const CommonOpts& opts) {
    const epi::SearchResult res =
        epi::conjecture_search(local_dim, parties, restarts, iters, effective_seed(opts),
                               opts.threads);
    std::cerr << "search M=" << local_dim << " N=" << parties << ": best slack "
              << res.best_slack << " after " << res.evaluations << " evaluations\n";
    emit_report(epi::io::to_json(res), opts, "search");
    return res.best_slack >= -1e-6 ? 0 : 2;
}

int run_witness(const std::string& state_path, int parties, const CommonOpts& opts) {
    epi::PureState state;
    std::uint64_t seed = effective_seed(opts);
    if (!state_path.empty()) {
        state = epi::io::load_state_file(state_path).state;
    } else {
        if (parties < 3) throw std::invalid_argument("witness: need --N >= 3 (or --state)");
        state = epi::haar_random(std::vector<int>(static_cast<std::size_t>(parties), 2), seed);
    }
    const epi::WitnessReport rep = epi::appendix_witness(state);
    json j = epi::io::to_json(rep);
    if (state_path.empty()) j["seed"] = seed;
    emit_report(j, opts, "witness");
    return rep.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epi - marginal entanglement polygon toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    // analyze
    std::string state_path, point;
    std::vector<std::string> measure_names;
    auto* analyze = app.add_subcommand("analyze", "analyze a state file or a raw E vector");
    analyze->add_option("--state", state_path, "state file (JSON)");
    analyze->add_option("--point", point, "comma-separated E values, e.g. 1,0,0");
    analyze->add_option("--measure", measure_names, "measure(s): Y, S, C, N (repeatable)");
    add_common(analyze, opts, false);

    // sample
    int parties = 3;
    std::string measure_name = "Y";
    auto* sample = app.add_subcommand("sample", "polygon suite on Haar-random states");
    sample->add_option("--N", parties, "number of qubits")->required();
    sample->add_option("--measure", measure_name, "measure: Y, S, C or N");
    add_common(sample, opts);

    // geometry
    int grid = 301;
    double slab = 0.005;
    auto* geometry = app.add_subcommand("geometry", "capacity curve, volumes and MC cross-checks");
    geometry->add_option("--N", parties, "number of parties")->required();
    geometry->add_option("--grid", grid, "curve sample points (default 301)");
    geometry->add_option("--slab", slab, "MC slab half-width (default 0.005)");
    add_common(geometry, opts);

    // family
    std::string family_name;
    auto* family = app.add_subcommand("family", "sweep an analytic state family");
    family->add_option("--family", family_name, "ghz, w or product")->required();
    family->add_option("--grid", grid, "grid points (default 101)");
    family->add_option("--measure", measure_name, "measure: Y, S, C or N");
    add_common(family, opts, false);

    // search
    int local_dim = 3, restarts = 50, iters = 120;
    auto* search = app.add_subcommand("search", "derivative-free qudit counterexample search");
    search->add_option("--M", local_dim, "local dimension (default 3)");
    search->add_option("--N", parties, "number of parties (default 3)");
    search->add_option("--restarts", restarts, "random restarts (default 50)");
    search->add_option("--iters", iters, "refinement passes per restart (default 120)");
    add_common(search, opts, false);

    // witness
    auto* witness = app.add_subcommand("witness", "appendix identity witness for one state");
    witness->add_option("--state", state_path, "state file (JSON)");
    witness->add_option("--N", parties, "qubits for a generated state (default 3)");
    add_common(witness, opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*analyze) return run_analyze(state_path, point, measure_names, opts);
        if (*sample) return run_sample(parties, measure_name, opts);
        if (*geometry) {
            if (geometry->count("--grid") == 0) grid = 301;
            if (geometry->count("--format") == 0) opts.format = "csv";  // curve CSV + JSON block
            return run_geometry(parties, grid, slab, opts);
        }
        if (*family) {
            if (family->count("--grid") == 0) grid = 101;
            if (family->count("--format") == 0) opts.format = "csv";
            return run_family(family_name, grid, measure_name, opts);
        }
        if (*search) return run_search(local_dim, parties, restarts, iters, opts);
        if (*witness) {
            if (witness->count("--N") == 0) parties = 3;
            return run_witness(state_path, parties, opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
