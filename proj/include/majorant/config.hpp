#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "majorant/errors.hpp"
#include "majorant/experiments.hpp"

namespace majorant {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        require(pos == value.size(), ErrorKind::validation,
                "config key '" + key + "': trailing characters in '" + value + "'");
        return x;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::validation, "config key '" + key + "': not a number: '" + value + "'");
    } catch (const std::out_of_range&) {
        throw Error(ErrorKind::validation, "config key '" + key + "': number out of range");
    }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(key, trim(item)));
    }
    require(!out.empty(), ErrorKind::validation, "config key '" + key + "': empty list");
    return out;
}

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_number(xs[i]);
    }
    return out;
}

} // namespace detail

/// Parses the flat [section] / key = value configuration format. '#' starts
/// a comment. Unknown keys are rejected so typos fail fast.
inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
    ExperimentConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (text.front() == '[') {
            require(text.back() == ']', ErrorKind::validation, where + ": malformed section header");
            section = detail::trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        require(eq != std::string::npos, ErrorKind::validation,
                where + ": expected 'key = value'");
        const std::string key = section + "." + detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));

        if (key == "model.kind") {
            if (value == "density") {
                cfg.model = ModelKind::density;
            } else if (value == "regression") {
                cfg.model = ModelKind::regression;
            } else {
                throw Error(ErrorKind::validation,
                            where + ": model.kind must be density or regression");
            }
        } else if (key == "model.a") {
            cfg.lambda_a = detail::parse_number(key, value);
        } else if (key == "model.b") {
            cfg.lambda_b = detail::parse_number(key, value);
        } else if (key == "model.sigma") {
            cfg.sigma = detail::parse_number(key, value);
        } else if (key == "run.n") {
            cfg.n = static_cast<std::size_t>(detail::parse_number(key, value));
        } else if (key == "run.replications") {
            cfg.replications = static_cast<std::size_t>(detail::parse_number(key, value));
        } else if (key == "run.p") {
            cfg.p = detail::parse_number(key, value);
        } else if (key == "run.t") {
            cfg.t = detail::parse_number(key, value);
        } else if (key == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(detail::parse_number(key, value));
        } else if (key == "run.s_grid") {
            cfg.s_grid = detail::parse_list(key, value);
        } else if (key == "weight.c0") {
            cfg.weight.c0 = detail::parse_number(key, value);
        } else if (key == "weight.c1") {
            cfg.weight.c1 = detail::parse_number(key, value);
        } else if (key == "zeta.truncation") {
            cfg.zeta.truncation = detail::parse_number(key, value);
        } else if (key == "zeta.step") {
            cfg.zeta.step = detail::parse_number(key, value);
        } else if (key == "zeta.replications") {
            cfg.zeta_replications = static_cast<std::size_t>(detail::parse_number(key, value));
        } else if (key == "zeta.s_max") {
            cfg.s_max = detail::parse_number(key, value);
        } else if (key == "zeta.cov_spacing") {
            cfg.cov_spacing = detail::parse_number(key, value);
        } else if (key == "zeta.cov_truncation") {
            cfg.cov_truncation = detail::parse_number(key, value);
        } else if (key == "localization.d_grid") {
            cfg.d_grid = detail::parse_list(key, value);
        } else if (key == "tails.level") {
            cfg.tail_level = detail::parse_number(key, value);
        } else if (key == "tails.x_grid") {
            cfg.tail_x_grid = detail::parse_list(key, value);
        } else if (key == "assumptions.q") {
            cfg.q = detail::parse_number(key, value);
        } else {
            throw Error(ErrorKind::validation, where + ": unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::validation, "cannot open config file " + path);
    return parse_config(in, path);
}

/// Canonical serialization; load(serialize(cfg)) == cfg.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    using detail::format_list;
    using detail::format_number;
    std::string out;
    out += "[model]\n";
    out += "kind = " + to_string(cfg.model) + "\n";
    out += "a = " + format_number(cfg.lambda_a) + "\n";
    out += "b = " + format_number(cfg.lambda_b) + "\n";
    if (cfg.model == ModelKind::regression) {
        out += "sigma = " + format_number(cfg.sigma) + "\n";
    }
    out += "\n[run]\n";
    out += "n = " + std::to_string(cfg.n) + "\n";
    out += "replications = " + std::to_string(cfg.replications) + "\n";
    out += "p = " + format_number(cfg.p) + "\n";
    out += "t = " + format_number(cfg.t) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "s_grid = " + format_list(cfg.s_grid) + "\n";
    out += "\n[weight]\n";
    out += "c0 = " + format_number(cfg.weight.c0) + "\n";
    out += "c1 = " + format_number(cfg.weight.c1) + "\n";
    out += "\n[zeta]\n";
    out += "truncation = " + format_number(cfg.zeta.truncation) + "\n";
    out += "step = " + format_number(cfg.zeta.step) + "\n";
    out += "replications = " + std::to_string(cfg.zeta_replications) + "\n";
    out += "s_max = " + format_number(cfg.s_max) + "\n";
    out += "cov_spacing = " + format_number(cfg.cov_spacing) + "\n";
    out += "cov_truncation = " + format_number(cfg.cov_truncation) + "\n";
    out += "\n[localization]\n";
    out += "d_grid = " + format_list(cfg.d_grid) + "\n";
    out += "\n[tails]\n";
    out += "level = " + format_number(cfg.tail_level) + "\n";
    out += "x_grid = " + format_list(cfg.tail_x_grid) + "\n";
    out += "\n[assumptions]\n";
    out += "q = " + format_number(cfg.q) + "\n";
    return out;
}

inline bool operator==(const Weight& a, const Weight& b) {
    return a.c0 == b.c0 && a.c1 == b.c1;
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.model == b.model && a.lambda_a == b.lambda_a && a.lambda_b == b.lambda_b &&
           (a.model == ModelKind::density || a.sigma == b.sigma) && a.n == b.n &&
           a.replications == b.replications && a.p == b.p && a.t == b.t &&
           a.weight == b.weight && a.s_grid == b.s_grid && a.d_grid == b.d_grid &&
           a.tail_level == b.tail_level && a.tail_x_grid == b.tail_x_grid && a.seed == b.seed &&
           a.zeta.truncation == b.zeta.truncation && a.zeta.step == b.zeta.step &&
           a.zeta_replications == b.zeta_replications && a.s_max == b.s_max &&
           a.cov_spacing == b.cov_spacing && a.cov_truncation == b.cov_truncation && a.q == b.q;
}

} // namespace majorant
