#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "movavg/convex.hpp"
#include "movavg/errors.hpp"
#include "movavg/matrix.hpp"
#include "movavg/matrix_means.hpp"
#include "movavg/rational.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/// 17 significant digits round-trip doubles exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// -- weights: {"alphas":[..]} or {"alphas_rational":[[num,den],..]} ---------

inline nlohmann::json weights_to_json(const weights& w) {
    return {{"alphas", w.alphas()}};
}

inline nlohmann::json weights_to_json(const rational_weights& w) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const rational& a : w.alphas())
        pairs.push_back({static_cast<long long>(a.num()), static_cast<long long>(a.den())});
    return {{"alphas_rational", pairs}};
}

inline weights weights_from_json(const nlohmann::json& j) {
    if (j.contains("alphas")) {
        return weights(j.at("alphas").get<std::vector<double>>());
    }
    if (j.contains("alphas_rational")) {
        std::vector<rational> alphas;
        for (const auto& pair : j.at("alphas_rational"))
            alphas.emplace_back(pair.at(0).get<long long>(), pair.at(1).get<long long>());
        return to_double(rational_weights(std::move(alphas)));
    }
    throw error("weights JSON needs 'alphas' or 'alphas_rational'");
}

// -- matrices: {"n": m, "rows": [[..],..]}; CSV row-major -------------------

inline nlohmann::json matrix_to_json(const square_matrix<double>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return {{"n", m.n()}, {"rows", rows}};
}

inline square_matrix<double> matrix_from_json(const nlohmann::json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    square_matrix<double> m(n);
    const auto& rows = j.at("rows");
    if (rows.size() != n) throw error("matrix JSON row count does not match n");
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw error("matrix JSON row length does not match n");
        for (std::size_t j2 = 0; j2 < n; ++j2) m(i, j2) = rows[i][j2].get<double>();
    }
    return m;
}

inline std::string matrix_to_csv(const square_matrix<double>& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            if (j) os << ',';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
    return os.str();
}

// -- SPD matrices (same JSON schema, symmetric entries) ----------------------

inline nlohmann::json spd_to_json(const spd_matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return {{"n", m.n()}, {"rows", rows}};
}

inline spd_matrix spd_from_json(const nlohmann::json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : j.at("rows"))
        for (const auto& v : row) entries.push_back(v.get<double>());
    return spd_matrix(n, std::move(entries));
}

// -- grid functions: {"lo":..,"hi":..,"values":[..]}, "inf" as sentinel -----

inline nlohmann::json grid_function_to_json(const grid_function& g) {
    nlohmann::json vals = nlohmann::json::array();
    for (double v : g.values()) {
        if (std::isfinite(v))
            vals.push_back(v);
        else
            vals.push_back("inf");
    }
    return {{"lo", g.lo()}, {"hi", g.hi()}, {"values", vals}};
}

inline grid_function grid_function_from_json(const nlohmann::json& j) {
    std::vector<double> vals;
    for (const auto& v : j.at("values")) {
        if (v.is_string()) {
            if (v.get<std::string>() != "inf") throw error("unknown grid value sentinel");
            vals.push_back(plus_infinity);
        } else {
            vals.push_back(v.get<double>());
        }
    }
    return grid_function(j.at("lo").get<double>(), j.at("hi").get<double>(), std::move(vals));
}

// -- iterate traces: CSV with step then coordinates --------------------------

inline std::string trace_to_csv(const std::vector<std::vector<double>>& trace) {
    std::ostringstream os;
    os << "step";
    if (!trace.empty())
        for (std::size_t j = 0; j < trace.front().size(); ++j) os << ",y" << j;
    os << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << i;
        for (double v : trace[i]) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw error("cannot write file: " + path);
    out << content;
}

} // namespace movavg
