#include "drift_spectral/field.hpp"
#include "drift_spectral/io.hpp"
#include "drift_spectral/oracle.hpp"
#include "drift_spectral/special_fn.hpp"
#include "drift_spectral/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace ds = drift_spectral;
using ds::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kRejected = 2;

ds::Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        const long long num = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
        if (slash == std::string::npos) return ds::Rational(num);
        const std::string d = s.substr(slash + 1);
        const long long den = std::stoll(d, &used);
        if (used != d.size() || den == 0) throw std::invalid_argument(s);
        return ds::Rational(num, den);
    } catch (const std::logic_error&) {
        throw ds::DataError("lambda must be an integer or p/q, got '" + s + "'");
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        ds::io::write_text_file(path, text);
}

struct KummerOpts {
    double a = 0, b = 0, x = 0;
    std::string regime = "auto";
    bool compare = false;
};

/// M(a,b;-x) for x > 0 from the optimally truncated expansion.
double asymptotic_value(double a, double b, double x) {
    const ds::special_fn::KummerParams p(a, b);
    ds::special_fn::require_nonresonant(p);
    return std::pow(x, -a) * ds::special_fn::gamma_ratio(b, b - a) * ds::special_fn::asymptotic_sum(a, b, x).sum;
}

bool asymptotic_applies(double a, double b, double x) {
    if (x > -40.0) return false;
    if (ds::special_fn::detail::is_nonpositive_integer(b - a)) return false;
    return ds::special_fn::asymptotic_sum(a, b, -x).min_term <= 1e-16;
}

int cmd_kummer(const KummerOpts& o) {
    const ds::special_fn::KummerParams p(o.a, o.b);
    const bool asym_ok = asymptotic_applies(o.a, o.b, o.x);
    if (o.compare) {
        if (!asym_ok) throw ds::DomainError("kummer: --compare needs x <= -40 with a usable asymptotic expansion");
        const double s = ds::special_fn::kummer_series(p, o.x), v = asymptotic_value(o.a, o.b, -o.x);
        std::cout << "series: " << g17(s) << "\nasymptotic: " << g17(v) << "\nrelative_delta: " << g17(std::abs(s - v) / std::abs(s))
                  << "\n";
        return kOk;
    }
    std::string regime = o.regime;
    if (regime == "auto") regime = asym_ok ? "asymptotic" : "series";
    double v;
    if (regime == "series") {
        v = ds::special_fn::kummer_series(p, o.x);
    } else {
        if (!(o.x < 0)) throw ds::DomainError("kummer: the asymptotic regime needs x < 0");
        v = asymptotic_value(o.a, o.b, -o.x);
    }
    std::cout << "regime: " << regime << "\nvalue: " << g17(v) << "\n";
    return kOk;
}

struct ConstructOpts {
    std::string config, field_out, report_out;
};

int cmd_construct(const ConstructOpts& o) {
    ds::io::RunConfig cfg = ds::io::config_from_json(ds::io::read_json_file(o.config));
    if (!o.field_out.empty()) cfg.field_path = o.field_out;
    if (!o.report_out.empty()) cfg.report_path = o.report_out;
    const ds::radial::EigenParams p(cfg.m, cfg.lambda);
    const ds::field::Field f = ds::field::construct_from_trace(cfg.trace, p);
    const ds::field::TraceReport rep = ds::field::trace_convergence(f, cfg.trace, cfg.radii);
    if (!cfg.field_path.empty()) ds::io::write_text_file(cfg.field_path, ds::io::field_to_json(f).dump(2) + "\n");
    std::ostringstream csv;
    ds::io::write_csv(csv, {"r", "sup_error"}, {rep.radii, rep.sup_errors});
    emit(cfg.report_path, csv.str());
    std::cerr << "fitted slope " << g17(rep.fitted_slope) << "\n";
    return kOk;
}

int cmd_verify(const std::string& scope) {
    const auto& table = ds::verify::suites();
    std::vector<std::string> names;
    if (scope == "all") {
        for (const auto& [k, v] : table) names.push_back(k);
    } else if (table.count(scope)) {
        names.push_back(scope);
    } else {
        std::string known;
        for (const auto& [k, v] : table) known += " " + k;
        throw ds::DataError("unknown scope '" + scope + "'; known:" + known + " all");
    }
    bool ok = true;
    for (const std::string& n : names)
        for (const ds::verify::Check& c : table.at(n)()) {
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " | " << c.detail << "\n";
            ok &= c.passed;
        }
    return ok ? kOk : kVerifyFailed;
}

struct LiouvilleOpts {
    std::string samples, synthetic, report;
    double epsilon = 1.0;
    int m = 3;
    std::string lambda = "0";
    std::vector<double> radii{8, 12, 16, 20};
    int max_degree = 6;
};

ds::field::Field synthetic_field(const std::string& name) {
    using ds::field::CoefficientKind;
    if (name == "constant") return ds::field::Field({3, ds::Rational(0)}, {}, std::nullopt, 1.0);
    if (name == "paraboloid")
        return ds::field::Field({4, ds::Rational(1)}, {{0, CoefficientKind::resonant, std::sqrt(ds::spherics::sphere_volume(4))}});
    if (name == "planted")
        return ds::field::Field({3, ds::Rational(0)}, {{3, CoefficientKind::amplitude, 1e-6}}, std::nullopt, 5.0);
    throw ds::DataError("unknown synthetic field '" + name + "' (constant, paraboloid, planted)");
}

int cmd_liouville(const LiouvilleOpts& o, bool m_given, bool lambda_given) {
    if (o.samples.empty() == o.synthetic.empty()) throw ds::DataError("liouville: give exactly one of --samples, --synthetic");
    ds::field::LiouvilleSamples s;
    std::optional<ds::radial::EigenParams> params;
    if (!o.synthetic.empty()) {
        const ds::field::Field f = synthetic_field(o.synthetic);
        params = f.params();
        s = ds::field::sample_coefficients(f, o.radii, o.max_degree);
    } else {
        const json j = ds::io::read_json_file(o.samples);
        s = ds::io::samples_from_json(j);
        int m = o.m;
        ds::Rational lam = parse_rational(o.lambda);
        if (!m_given && j.contains("m")) m = j["m"].get<int>();
        if (!lambda_given && j.contains("lambda")) lam = ds::io::rational_from_json(j["lambda"]);
        params.emplace(m, lam);
    }
    const ds::field::LiouvilleReport rep = ds::field::liouville_classify(s, *params, o.epsilon);
    std::cout << rep.verdict << "\n";
    json degrees = json::array();
    for (const auto& d : rep.degrees)
        degrees.push_back({{"degree", d.degree},
                           {"envelope", d.envelope},
                           {"slope", std::isfinite(d.slope) ? json(d.slope) : json(nullptr)},
                           {"bounded", d.bounded}});
    json out{{"verdict", rep.verdict},
             {"violating_degree", rep.violating_degree ? json(*rep.violating_degree) : json(nullptr)},
             {"epsilon", o.epsilon},
             {"samples", ds::io::samples_to_json(s)},
             {"degrees", degrees}};
    emit(o.report, out.dump(2) + "\n");
    return kOk;
}

struct FieldOpts {
    std::string field, out;
    std::vector<double> radii;
    std::vector<double> thetas{0.0};
};

int cmd_frequency(const FieldOpts& o) {
    const ds::field::Field f = ds::io::field_from_json(ds::io::read_json_file(o.field));
    const ds::oracle::FrequencyReport rep = ds::oracle::frequency(f, o.radii);
    std::ostringstream csv;
    ds::io::write_csv(csv, {"r", "I", "log_I", "U"}, {rep.radii, rep.I_values, rep.log_I, rep.U_values});
    emit(o.out, csv.str());
    return kOk;
}

int cmd_evaluate(const FieldOpts& o) {
    const ds::field::Field f = ds::io::field_from_json(ds::io::read_json_file(o.field));
    std::vector<double> rs, ts, us, scaled;
    for (double r : o.radii)
        for (double t : o.thetas) {
            rs.push_back(r);
            ts.push_back(t);
            us.push_back(f.evaluate(r, t));
            scaled.push_back(f.evaluate_scaled(r, t));
        }
    std::ostringstream csv;
    ds::io::write_csv(csv, {"r", "theta", "u", "u_scaled"}, {rs, ts, us, scaled});
    emit(o.out, csv.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solutions of the drift Laplacian on Euclidean space"};
    app.require_subcommand(1);

    KummerOpts ko;
    auto* kummer = app.add_subcommand("kummer", "Evaluate Kummer's function M(a, b; x)");
    kummer->add_option("--a", ko.a)->required();
    kummer->add_option("--b", ko.b)->required();
    kummer->add_option("--x", ko.x)->required();
    kummer->add_option("--regime", ko.regime)->check(CLI::IsMember({"auto", "series", "asymptotic"}));
    kummer->add_flag("--compare", ko.compare, "print both regimes and their relative gap");

    ConstructOpts co;
    auto* construct = app.add_subcommand("construct", "Build the field with a given trace at infinity");
    construct->add_option("--config", co.config)->required();
    construct->add_option("--field", co.field_out, "field JSON output");
    construct->add_option("--report", co.report_out, "trace-convergence CSV output ('-' for stdout)");

    std::string scope = "all";
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--scope", scope, "suite name or 'all'");

    LiouvilleOpts lo;
    auto* liouville = app.add_subcommand("liouville", "Classify a field from sampled harmonic coefficients");
    liouville->add_option("--samples", lo.samples, "samples JSON");
    liouville->add_option("--synthetic", lo.synthetic, "constant | paraboloid | planted");
    liouville->add_option("--epsilon", lo.epsilon);
    auto* m_opt = liouville->add_option("--m", lo.m);
    auto* lambda_opt = liouville->add_option("--lambda", lo.lambda, "rational, e.g. 3/2");
    liouville->add_option("--radii", lo.radii, "radii for synthetic sampling")->delimiter(',');
    liouville->add_option("--max-degree", lo.max_degree);
    liouville->add_option("--report", lo.report, "JSON report output");

    FieldOpts fo;
    auto* frequency = app.add_subcommand("frequency", "Frequency function U(r) of a field file");
    frequency->add_option("--field", fo.field)->required();
    frequency->add_option("--radii", fo.radii)->required()->delimiter(',');
    frequency->add_option("--out", fo.out);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a field file on a polar grid");
    evaluate->add_option("--field", fo.field)->required();
    evaluate->add_option("--radii", fo.radii)->required()->delimiter(',');
    evaluate->add_option("--theta", fo.thetas)->delimiter(',');
    evaluate->add_option("--out", fo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kRejected;
    }

    try {
        if (*kummer) return cmd_kummer(ko);
        if (*construct) return cmd_construct(co);
        if (*verify) return cmd_verify(scope);
        if (*liouville) return cmd_liouville(lo, m_opt->count() > 0, lambda_opt->count() > 0);
        if (*frequency) return cmd_frequency(fo);
        if (*evaluate) return cmd_evaluate(fo);
    } catch (const ds::AdmissibilityError& e) {
        std::cerr << "rejected: " << e.what() << "\noffending degrees:";
        for (int d : e.degrees) std::cerr << " " << d;
        std::cerr << "\n";
        return kRejected;
    } catch (const ds::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRejected;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRejected;
    }
    return kRejected;
}
