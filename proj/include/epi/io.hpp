// State-file schema, report serialization (JSON via nlohmann, CSV with
// %.17g fields) and small filesystem helpers for the CLI.

#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "epi/families.hpp"
#include "epi/measures.hpp"
#include "epi/polytope.hpp"
#include "epi/state.hpp"
#include "epi/verifier.hpp"

namespace epi::io {

using nlohmann::json;

// fixed 17-significant-digit text form; round-trips any finite double
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- state files ---------------------------------------------------------
//
// { "dims": [2,2,2], "amps": [[re,im], ...], "label": "optional" }
// Amplitudes are listed in the library's mixed-radix order (party 0 most
// significant).

struct StateFile {
    PureState state;
    std::string label;
};

inline json state_to_json(const PureState& state, const std::string& label = "") {
    json amps = json::array();
    for (const cd& a : state.amps) amps.push_back({a.real(), a.imag()});
    json j{{"dims", state.dims}, {"amps", std::move(amps)}};
    if (!label.empty()) j["label"] = label;
    return j;
}

inline StateFile state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("amps"))
        throw std::invalid_argument("state file: expected an object with 'dims' and 'amps'");
    StateFile out;
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    std::vector<cd> amps;
    for (const auto& pair : j.at("amps")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("state file: each amplitude must be a [re, im] pair");
        amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    out.state = make_state(std::move(dims), std::move(amps), Normalize::reject);
    if (j.contains("label")) out.label = j.at("label").get<std::string>();
    return out;
}

inline StateFile load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("state file " + path + ": " + e.what());
    }
    return state_from_json(j);
}

inline void save_state_file(const std::string& path, const PureState& state,
                            const std::string& label = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write state file: " + path);
    out << state_to_json(state, label).dump(2) << '\n';
}

// ---- report serialization -------------------------------------------------

inline json to_json(const EntanglementVector& ev) {
    return json{{"measure", measure_name(ev.measure)}, {"values", ev.values},
                {"total", ev.total()}};
}

inline json to_json(const SlackReport& r) {
    std::vector<int> boundary;
    for (std::size_t i = 0; i < r.on_boundary.size(); ++i)
        if (r.on_boundary[i]) boundary.push_back(static_cast<int>(i));
    return json{{"measure", measure_name(r.measure)},
                {"slacks", r.slacks},
                {"sharing_slacks", r.sharing_slacks},
                {"min_slack", r.min_slack},
                {"tolerance", r.tolerance},
                {"satisfied", r.satisfied},
                {"boundary_indices", boundary}};
}

inline json to_json(const McEstimate& e) {
    return json{{"estimate", e.estimate},
                {"std_error", e.std_error},
                {"hits", e.hits},
                {"samples", e.samples}};
}

// SuiteReport: elapsed time is intentionally not serialized so identical
// runs produce identical bytes.
inline json to_json(const SuiteReport& r) {
    json j{{"suite", r.suite},
           {"trials", r.trials},
           {"failures", r.failures},
           {"min_slack", r.min_slack},
           {"tolerance", r.tolerance}};
    if (!r.stats.empty()) j["stats"] = r.stats;
    if (r.worst) {
        j["worst_case"] = json{{"trial", r.worst->trial},
                               {"stream_seed", r.worst->stream_seed},
                               {"state", state_to_json(r.worst->state)},
                               {"vector", to_json(r.worst->vector)}};
    }
    return j;
}

inline json to_json(const WitnessReport& r) {
    json j{{"vacuous", r.vacuous}, {"parties", r.parties}};
    if (!r.vacuous) {
        j["lambda1"] = r.lambda1;
        j["lambda2"] = r.lambda2;
        j["x_norm_err"] = r.x_norm_err;
        j["y_norm_err"] = r.y_norm_err;
        j["cross_err"] = r.cross_err;
        j["y1_err"] = r.y1_err;
        j["ysum_err"] = r.ysum_err;
        j["delta"] = r.delta;
        j["delta_identity_err"] = r.delta_identity_err;
        j["max_err"] = r.max_err();
        j["ok"] = r.ok();
    }
    return j;
}

inline json to_json(const SearchResult& r) {
    return json{{"dims", r.dims},
                {"local_dim", r.local_dim},
                {"parties", r.parties},
                {"best_slack", r.best_slack},
                {"restarts", r.restarts},
                {"evaluations", r.evaluations},
                {"converged", r.converged},
                {"outside_stated_conjecture", r.outside_stated_conjecture},
                {"best_state", state_to_json(r.best_state)}};
}

// ---- CSV ------------------------------------------------------------------
//
// CSV output is byte-stable apart from the leading '#' header line, which
// carries the timestamp.

inline std::string csv_header_line(const std::string& what) {
    std::time_t now = std::time(nullptr);
    char stamp[32] = "unknown";
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return "# epi " + what + " generated " + stamp + "\n";
}

inline std::string family_sweep_csv(Family family, Measure measure,
                                    const std::vector<FamilyRow>& rows) {
    std::ostringstream out;
    out << csv_header_line(std::string("family ") + family_name(family));
    const char* param_header = family == Family::w ? "pa,pb,pc" : "theta";
    out << param_header;
    const std::size_t n = rows.empty() ? 3 : rows.front().vector.size();
    for (std::size_t j = 1; j <= n; ++j) out << ',' << measure_name(measure) << j;
    out << ",total,min_slack,satisfied\n";
    for (const auto& row : rows) {
        bool first = true;
        for (double p : row.params) {
            if (!first) out << ',';
            out << format_double(p);
            first = false;
        }
        for (double v : row.vector.values) out << ',' << format_double(v);
        out << ',' << format_double(row.vector.total());
        out << ',' << format_double(row.slack.min_slack);
        out << ',' << (row.slack.satisfied ? 1 : 0) << '\n';
    }
    return out.str();
}

inline json family_sweep_json(const std::vector<FamilyRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows)
        arr.push_back(json{{"params", row.params},
                           {"vector", to_json(row.vector)},
                           {"min_slack", row.slack.min_slack},
                           {"satisfied", row.slack.satisfied}});
    return arr;
}

inline std::string capacity_curve_csv(const CapacityCurve& curve) {
    std::ostringstream out;
    out << csv_header_line("geometry N=" + std::to_string(curve.parties));
    out << "E_T,A\n";
    for (const auto& [t, a] : curve.samples)
        out << format_double(t) << ',' << format_double(a) << '\n';
    return out.str();
}

// generic key,value flattening for reports requested as CSV
inline std::string report_csv(const json& j, const std::string& what) {
    std::ostringstream out;
    out << csv_header_line(what);
    out << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        out << it.key() << ',';
        if (it->is_number_float())
            out << format_double(it->get<double>());
        else
            out << it->dump();
        out << '\n';
    }
    return out.str();
}

}  // namespace epi::io
