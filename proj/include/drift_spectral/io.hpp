#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/field.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/spherics.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace drift_spectral::io {

using nlohmann::json;

/// Shortest decimal that reads back to the same double; no locale.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_double(columns[j][i]);
        os << '\n';
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

inline json rational_to_json(const Rational& q) { return {{"num", q.numerator()}, {"den", q.denominator()}}; }

inline Rational rational_from_json(const json& j) {
    try {
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        const auto num = j.at("num").get<std::int64_t>();
        const auto den = j.value("den", std::int64_t{1});
        if (den == 0) throw DataError("lambda: zero denominator");
        return Rational(num, den);
    } catch (const json::exception& e) {
        throw DataError(std::string("lambda must be {\"num\", \"den\"}: ") + e.what());
    }
}

inline int degree_key(const std::string& k) {
    int l = 0;
    const auto res = std::from_chars(k.data(), k.data() + k.size(), l);
    if (res.ec != std::errc{} || res.ptr != k.data() + k.size() || l < 0) throw DataError("bad degree key '" + k + "'");
    return l;
}

inline json coefficients_to_json(const spherics::CoefficientMap& c) {
    json j = json::object();
    for (const auto& [l, v] : c) j[std::to_string(l)] = v;
    return j;
}

inline spherics::CoefficientMap coefficients_from_json(const json& j) {
    if (!j.is_object()) throw DataError("coefficients must be an object keyed by degree");
    spherics::CoefficientMap c;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw DataError("coefficient for degree " + k + " is not a number");
        c[degree_key(k)] = v.get<double>();
    }
    return c;
}

/// Name of the degree-0 second solution: u0, l (integer lambda) or p.
inline const char* second_solution_name(const radial::EigenParams& p) {
    if (p.lambda().numerator() == 0) return "u0";
    return p.trichotomy() == radial::Trichotomy::integer_lambda ? "l" : "p";
}

inline json field_to_json(const field::Field& f) {
    json modes = json::array();
    for (const field::FieldMode& m : f.modes())
        modes.push_back({{"degree", m.degree}, {m.kind == field::CoefficientKind::amplitude ? "amplitude" : "resonant_coeff", m.value}});
    json j{{"m", f.params().m()}, {"lambda", rational_to_json(f.params().lambda())}, {"modes", modes}};
    j["radial_extra"] = f.radial_extra()
                            ? json{{"solution", second_solution_name(f.params())}, {"coefficient", *f.radial_extra()}}
                            : json(nullptr);
    j["constant_offset"] = f.constant_offset();
    return j;
}

inline field::Field field_from_json(const json& j) {
    try {
        const radial::EigenParams p(j.at("m").get<int>(), rational_from_json(j.at("lambda")));
        std::vector<field::FieldMode> modes;
        for (const json& m : j.at("modes")) {
            const bool amp = m.contains("amplitude"), res = m.contains("resonant_coeff");
            if (amp == res) throw DataError("each mode needs exactly one of amplitude, resonant_coeff");
            modes.push_back({m.at("degree").get<int>(), amp ? field::CoefficientKind::amplitude : field::CoefficientKind::resonant,
                             m.at(amp ? "amplitude" : "resonant_coeff").get<double>()});
        }
        std::optional<double> extra;
        if (j.contains("radial_extra") && !j["radial_extra"].is_null()) {
            const json& e = j["radial_extra"];
            if (e.is_number()) {
                extra = e.get<double>();
            } else {
                if (e.contains("solution") && e["solution"].get<std::string>() != second_solution_name(p))
                    throw DataError("radial_extra names '" + e["solution"].get<std::string>() + "' but these parameters use '" +
                                    second_solution_name(p) + "'");
                extra = e.at("coefficient").get<double>();
            }
        }
        return field::Field(p, modes, extra, j.value("constant_offset", 0.0));
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed field file: ") + e.what());
    }
}

inline json samples_to_json(const field::LiouvilleSamples& s) {
    json c = json::object();
    for (const auto& [l, v] : s.coefficients) c[std::to_string(l)] = v;
    return {{"radii", s.radii}, {"coefficients", c}};
}

inline field::LiouvilleSamples samples_from_json(const json& j) {
    try {
        field::LiouvilleSamples s;
        s.radii = j.at("radii").get<std::vector<double>>();
        for (const auto& [k, v] : j.at("coefficients").items()) s.coefficients[degree_key(k)] = v.get<std::vector<double>>();
        return s;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed samples: ") + e.what());
    }
}

/// Named traces: "phi<l>", "smooth<n>" with (1+l)^-n up to max_degree, "constant".
inline spherics::CoefficientMap preset(const std::string& name, int m, int max_degree) {
    auto number_after = [&](std::size_t prefix) {
        int v = 0;
        const char* b = name.data() + prefix;
        const char* e = name.data() + name.size();
        const auto res = std::from_chars(b, e, v);
        if (b == e || res.ec != std::errc{} || res.ptr != e || v < 0) throw DataError("bad preset '" + name + "'");
        return v;
    };
    if (name == "constant") return {{0, std::sqrt(spherics::sphere_volume(m))}};
    if (name.rfind("phi", 0) == 0) return {{number_after(3), 1.0}};
    if (name.rfind("smooth", 0) == 0) {
        const int n = number_after(6);
        spherics::CoefficientMap c;
        for (int l = 0; l <= max_degree; ++l) c[l] = std::pow(1.0 + l, -n);
        return c;
    }
    throw DataError("unknown preset '" + name + "'");
}

struct RunConfig {
    int m = 3;
    Rational lambda{0};
    std::string trace_name;  ///< preset name, empty for explicit coefficients
    spherics::CoefficientMap trace;
    std::vector<double> radii{10.0, 12.0, 16.0, 20.0, 24.0};
    int max_degree = 12;
    std::string field_path;
    std::string report_path;
};

inline std::vector<double> radii_from_json(const json& j) {
    if (j.is_array()) return j.get<std::vector<double>>();
    const auto n = j.at("count").get<std::size_t>();
    if (n < 2) throw DataError("radii range needs count >= 2");
    return linspace(j.at("start").get<double>(), j.at("stop").get<double>(), n);
}

/// Parses a config; relative output paths are kept as written.
inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    try {
        c.m = j.at("m").get<int>();
        c.lambda = rational_from_json(j.at("lambda"));
        c.max_degree = j.value("max_degree", c.max_degree);
        if (j.contains("radii")) c.radii = radii_from_json(j["radii"]);
        const json& t = j.at("trace");
        if (t.is_string()) {
            c.trace_name = t.get<std::string>();
            c.trace = preset(c.trace_name, c.m, c.max_degree);
        } else {
            c.trace = coefficients_from_json(t);
        }
        if (j.contains("output")) {
            c.field_path = j["output"].value("field", "");
            c.report_path = j["output"].value("report", "");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed config: ") + e.what());
    }
    if (c.m < 2) throw DataError("config: m must be at least 2");
    if (c.lambda < Rational(0)) throw DataError("config: lambda must be non-negative");
    if (c.max_degree < 0 || c.max_degree > 64) throw DataError("config: max_degree must lie in [0, 64]");
    for (const auto& [l, v] : c.trace)
        if (l > c.max_degree) throw DataError("config: trace degree " + std::to_string(l) + " exceeds max_degree");
    return c;
}

}  // namespace drift_spectral::io
