#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "majorant/errors.hpp"

namespace majorant {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

inline void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    require(out.good(), ErrorKind::invalid_input, "cannot open " + path + " for writing");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << detail::format_double(row[i]);
        }
        out << '\n';
    }
    require(out.good(), ErrorKind::invalid_input, "write to " + path + " failed");
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::invalid_input, "cannot open " + path);
    CsvTable table;
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::invalid_input,
            path + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (auto& h : detail::split_csv_line(line)) table.header.push_back(h);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        require(fields.size() == table.header.size(), ErrorKind::invalid_input,
                path + ": row width does not match header");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(f, &pos));
                require(pos == f.size(), ErrorKind::invalid_input,
                        path + ": trailing characters in numeric field '" + f + "'");
            } catch (const std::invalid_argument&) {
                throw Error(ErrorKind::invalid_input, path + ": non-numeric field '" + f + "'");
            } catch (const std::out_of_range&) {
                throw Error(ErrorKind::invalid_input, path + ": numeric field out of range");
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace majorant
