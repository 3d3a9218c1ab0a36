#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "majorant/config.hpp"
#include "majorant/errors.hpp"
#include "majorant/experiments.hpp"

namespace majorant {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json summary_json(const ExperimentReport& report) {
    Json j;
    j["experiment"] = report.experiment;
    j["replications"] = report.rows.size();
    j["columns"] = report.columns;
    Json stats = Json::object();
    for (const auto& [key, value] : report.summary) stats[key] = value;
    j["summary"] = stats;
    if (!report.checks.empty()) {
        Json checks = Json::object();
        for (const auto& [key, ok] : report.checks) checks[key] = ok;
        j["checks"] = checks;
        j["all_checks_pass"] = report.all_checks_pass();
    }
    if (!report.notes.empty()) j["notes"] = report.notes;
    j["wall_seconds"] = report.wall_seconds;
    return j;
}

/// One JSON object per replication; the bytes depend only on the rows, so
/// reruns with a different thread count serialize identically.
inline std::string rows_jsonl(const ExperimentReport& report) {
    std::string out;
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        Json j;
        j["rep"] = r;
        for (std::size_t c = 0; c < report.columns.size(); ++c) {
            j[report.columns[c]] = report.rows[r][c];
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

inline Json config_json(const ExperimentConfig& cfg) {
    Json j;
    j["model"] = {{"kind", to_string(cfg.model)}, {"a", cfg.lambda_a}, {"b", cfg.lambda_b}};
    if (cfg.model == ModelKind::regression) j["model"]["sigma"] = cfg.sigma;
    j["run"] = {{"n", cfg.n},          {"replications", cfg.replications}, {"p", cfg.p},
                {"t", cfg.t},          {"seed", cfg.seed},                 {"s_grid", cfg.s_grid}};
    j["weight"] = {{"c0", cfg.weight.c0}, {"c1", cfg.weight.c1}};
    j["zeta"] = {{"truncation", cfg.zeta.truncation},
                 {"step", cfg.zeta.step},
                 {"replications", cfg.zeta_replications},
                 {"s_max", cfg.s_max},
                 {"cov_spacing", cfg.cov_spacing},
                 {"cov_truncation", cfg.cov_truncation}};
    j["localization"] = {{"d_grid", cfg.d_grid}};
    j["tails"] = {{"level", cfg.tail_level}, {"x_grid", cfg.tail_x_grid}};
    j["assumptions"] = {{"q", cfg.q}};
    return j;
}

inline Json moments_json(const MomentEstimates& moments) {
    Json j;
    j["p"] = moments.p;
    j["mean_zeta0_p"] = moments.mean_zeta0_p;
    j["se"] = moments.se;
    if (!moments.cov_curve.empty()) {
        Json curve = Json::array();
        for (const auto& pt : moments.cov_curve) {
            curve.push_back({{"s", pt.s}, {"cov", pt.cov}, {"se", pt.se}});
        }
        j["cov_curve"] = curve;
        j["cov_integral"] = moments.cov_integral;
        j["cov_integral_se"] = moments.cov_integral_se;
    }
    j["config"] = {{"truncation", moments.zeta.truncation},
                   {"step", moments.zeta.step},
                   {"replications", moments.replications},
                   {"s_max", moments.s_max},
                   {"seed", moments.seed}};
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::invalid_input, "cannot open " + path + " for writing");
    out << content;
    require(out.good(), ErrorKind::invalid_input, "write to " + path + " failed");
}

} // namespace majorant
