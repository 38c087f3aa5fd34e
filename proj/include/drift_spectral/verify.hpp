#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/field.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/oracle.hpp"
#include "drift_spectral/parallel.hpp"
#include "drift_spectral/radial.hpp"
#include "drift_spectral/special_fn.hpp"
#include "drift_spectral/spherics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace drift_spectral::verify {

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

using Suite = std::vector<Check>;

inline bool all_passed(const Suite& s) {
    for (const Check& c : s)
        if (!c.passed) return false;
    return true;
}

inline const std::vector<int> kDims = {2, 3, 4, 6};
inline const std::vector<Rational> kLambdas = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2)};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

inline std::string cell(int m, const Rational& lam, int l) {
    std::ostringstream s;
    s << "m=" << m << " lambda=" << lam.numerator();
    if (lam.denominator() != 1) s << "/" << lam.denominator();
    s << " l=" << l;
    return s.str();
}

/// Non-resonant (m, lambda, l) cells of the test matrix with l <= max_degree.
struct Cell {
    int m;
    Rational lambda;
    int degree;
};

inline std::vector<Cell> matrix(int max_degree) {
    std::vector<Cell> out;
    for (int m : kDims)
        for (const Rational& lam : kLambdas)
            for (int l = 0; l <= max_degree; ++l)
                if (!radial::is_resonant(l, {m, lam})) out.push_back({m, lam, l});
    return out;
}

inline Check guarded(const std::string& name, const std::function<Check()>& body) {
    try {
        Check c = body();
        if (c.name.empty()) c.name = name;
        return c;
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace detail

/// The polynomial 1 - r^2/8 at m = 4, lambda = 1, plus exact residuals of resonant polynomials.
inline Suite resonant_suite() {
    Suite s;
    s.push_back(detail::guarded("resonant: u = 1 - r^2/8 solves m=4, lambda=1", [] {
        const double c = std::sqrt(spherics::sphere_volume(4));
        const field::Field u({4, Rational(1)}, {{0, field::CoefficientKind::resonant, c}});
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> ur(0.5, 10.0), ut(0.0, std::numbers::pi);
        std::vector<std::pair<double, double>> pts;
        double shape = 0;
        for (int i = 0; i < 200; ++i) {
            pts.emplace_back(ur(rng), ut(rng));
            const double r = pts.back().first;
            shape = std::max(shape, std::abs(u.evaluate(r, pts.back().second) - (1.0 - r * r / 8.0)));
        }
        const double res = oracle::pde_residual(u, pts);
        return Check{"", res <= 1e-8 && shape <= 1e-12, "max residual " + detail::fmt(res) + ", shape error " + detail::fmt(shape)};
    }));
    s.push_back(detail::guarded("resonant: exact polynomial residuals", [] {
        using boost::multiprecision::cpp_rational;
        for (int m : {2, 3, 4, 5, 6})
            for (int twice = 0; twice <= 8; ++twice) {
                const Rational lam(twice, 2);
                for (int l = 0; l <= 8; ++l) {
                    if (!special_fn::resonant(l, lam)) continue;
                    const auto q = special_fn::resonant_polynomial(l, m, lam);
                    const int deg = static_cast<int>(q.exact.size()) - 1;
                    // r^2 q'' + ((m-1) r - r^3/2) q' - (l(l+m-2) - lambda r^2) q, coefficientwise
                    std::vector<cpp_rational> res(deg + 3, cpp_rational(0));
                    const cpp_rational lv(lam.numerator(), lam.denominator());
                    const cpp_rational ll(l * (l + m - 2));
                    for (int p = 0; p <= deg; ++p) {
                        const cpp_rational& c = q.exact[p];
                        res[p] += c * (cpp_rational(p * (p - 1)) + cpp_rational((m - 1) * p) - ll);
                        res[p + 2] += c * (lv - cpp_rational(p, 2));
                    }
                    for (const cpp_rational& v : res)
                        if (v != 0) return Check{"", false, "nonzero residual at " + detail::cell(m, lam, l)};
                }
            }
        return Check{"", true, "every resonant polynomial with l <= 8, 2 lambda <= 8 is annihilated exactly"};
    }));
    return s;
}

/// Closed-form modes against adaptive ODE integration, pointwise relative error.
inline Suite oracle_suite(double tol = 1e-7) {
    const std::vector<detail::Cell> cells = detail::matrix(8);
    const std::vector<double> radii = linspace(0.5, 10.0, 96);
    std::vector<double> worst(cells.size(), 0.0);
    std::vector<std::string> failure(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& c = cells[i];
        try {
            const radial::EigenParams p(c.m, c.lambda);
            const auto mode = spherics::make_mode(c.degree, c.m);
            const oracle::OdeSolution s = oracle::integrate_radial_ode(c.degree, p, 0.02, 10.0, 1e-11, radii);
            const double at1 = oracle::integrate_radial_ode(c.degree, p, 0.02, 1.0, 1e-11, {1.0}).values[0];
            const double k = radial::mode_solution(mode, p, 1.0, 1.0) / at1;
            for (std::size_t j = 0; j < radii.size(); ++j) {
                const double want = radial::mode_solution(mode, p, 1.0, radii[j]);
                worst[i] = std::max(worst[i], std::abs(k * s.values[j] - want) / std::abs(want));
            }
        } catch (const std::exception& e) {
            failure[i] = e.what();
            worst[i] = HUGE_VAL;
        }
    });
    std::size_t arg = 0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (worst[i] > worst[arg]) arg = i;
    const auto& c = cells[arg];
    std::string detail = std::to_string(cells.size()) + " modes; worst " + detail::fmt(worst[arg]) + " at " +
                         detail::cell(c.m, c.lambda, c.degree);
    if (!failure[arg].empty()) detail += " (" + failure[arg] + ")";
    return {{"oracle: Kummer modes vs ODE on [0.5, 10]", worst[arg] <= tol, detail}};
}

/// Fitted remainder slopes for three parameter pairs and N = 0..3.
inline Suite remainder_suite() {
    Suite s;
    const std::vector<double> xs = logspace(50.0, 400.0, 12);
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1.25, 3.5}, {2.5, 4.0}, {5.5, 9.0}})
        for (int n = 0; n <= 3; ++n) {
            const std::string name = "remainder: a=" + detail::fmt(a) + " b=" + detail::fmt(b) + " N=" + std::to_string(n);
            s.push_back(detail::guarded(name, [&] {
                const double slope = oracle::remainder_probe({a, b}, n, xs).slope;
                return Check{name, std::abs(slope + (n + 1.0)) <= 0.1 * (n + 1.0),
                             "slope " + detail::fmt(slope) + ", expected " + detail::fmt(-(n + 1.0))};
            }));
        }
    return s;
}

/// Trace convergence for phi_5 and the (1+l)^-7 trace at m = 3, lambda = 0.
inline Suite trace_suite() {
    Suite s;
    const radial::EigenParams p(3, Rational(0));
    const std::vector<double> radii = {10.0, 12.0, 16.0, 20.0, 24.0};
    spherics::CoefficientMap smooth;
    for (int l = 0; l <= 12; ++l) smooth[l] = std::pow(1.0 + l, -7.0);
    for (const auto& [label, g] : std::vector<std::pair<std::string, spherics::CoefficientMap>>{{"phi5", {{5, 1.0}}}, {"smooth7", smooth}}) {
        const std::string name = "trace: " + label + " converges like r^-2";
        s.push_back(detail::guarded(name, [&] {
            const field::TraceReport rep = field::trace_convergence(field::construct_from_trace(g, p), g, radii);
            bool monotone = true;
            for (std::size_t i = 1; i < rep.sup_errors.size(); ++i) monotone &= rep.sup_errors[i] < rep.sup_errors[i - 1];
            std::ostringstream d;
            d << "sup errors";
            for (double e : rep.sup_errors) d << " " << detail::fmt(e);
            d << "; slope " << detail::fmt(rep.fitted_slope);
            return Check{name, monotone && std::abs(rep.fitted_slope + 2.0) <= 0.4, d.str()};
        }));
    }
    return s;
}

/// Traces with mass at forbidden degrees are rejected with the degree named.
inline Suite admissibility_suite() {
    Suite s;
    auto expect_reject = [&](const std::string& name, int m, Rational lam, spherics::CoefficientMap g, int degree) {
        s.push_back(detail::guarded(name, [&] {
            try {
                field::construct_from_trace(g, {m, lam});
            } catch (const AdmissibilityError& e) {
                const std::string msg = e.what();
                const bool named = msg.find("degree " + std::to_string(degree)) != std::string::npos;
                const bool listed = e.degrees == std::vector<int>{degree};
                return Check{name, named && listed, msg};
            }
            return Check{name, false, "accepted"};
        }));
    };
    expect_reject("admissibility: lambda=1 rejects degree-0 mass", 3, Rational(1), {{0, 1.0}, {3, 0.5}}, 0);
    expect_reject("admissibility: lambda=3/2 rejects degree-1 mass", 3, Rational(3, 2), {{1, 1.0}, {2, 0.5}}, 1);
    s.push_back(detail::guarded("admissibility: lambda=1/4 accepts every degree", [] {
        field::construct_from_trace({{0, 1.0}, {1, 0.5}, {2, 0.25}}, {3, Rational(1, 4)});
        return Check{"admissibility: lambda=1/4 accepts every degree", true, "accepted"};
    }));
    return s;
}

/// Liouville verdicts on constant, polynomial and planted-growth samples.
inline Suite liouville_suite() {
    Suite s;
    const std::vector<double> radii = {8.0, 12.0, 16.0, 20.0};
    auto expect = [&](const std::string& name, const field::Field& f, const std::string& verdict) {
        s.push_back(detail::guarded(name, [&] {
            const field::LiouvilleReport rep =
                field::liouville_classify(field::sample_coefficients(f, radii, 6), f.params(), 1.0);
            return Check{name, rep.verdict == verdict, "verdict \"" + rep.verdict + "\""};
        }));
    };
    expect("liouville: constant field", field::Field({3, Rational(0)}, {}, std::nullopt, 2.0), "constant");
    expect("liouville: 1 - r^2/8 at m=4, lambda=1",
           field::Field({4, Rational(1)}, {{0, field::CoefficientKind::resonant, std::sqrt(spherics::sphere_volume(4))}}),
           "polynomial of degree 2");
    expect("liouville: planted degree-3 mode",
           field::Field({3, Rational(0)}, {{3, field::CoefficientKind::amplitude, 1e-6}}, std::nullopt, 5.0),
           "bound violated: degree 3");
    return s;
}

/// U = 1 for the coordinate mode and U(12) >= 72 - m - 2 lambda - 1 for every growing mode.
inline Suite frequency_suite() {
    Suite s;
    s.push_back(detail::guarded("frequency: coordinate mode has U = 1", [] {
        double worst = 0;
        for (int m : kDims) {
            const field::Field xj({m, Rational(1, 2)}, {{1, field::CoefficientKind::resonant, 1.0}});
            for (double u : oracle::frequency(xj, linspace(1.0, 12.0, 12)).U_values) worst = std::max(worst, std::abs(u - 1.0));
        }
        return Check{"frequency: coordinate mode has U = 1", worst <= 1e-3, "max |U - 1| " + detail::fmt(worst)};
    }));
    s.push_back(detail::guarded("frequency: growing modes exceed r^2/2 - m - 2 lambda - 1 at r = 12", [] {
        double margin = HUGE_VAL;
        std::string where;
        for (const detail::Cell& c : detail::matrix(8)) {
            const radial::EigenParams p(c.m, c.lambda);
            const field::Field f(p, {{c.degree, field::CoefficientKind::amplitude, 1.0}});
            const double u = oracle::frequency(f, {12.0}).U_values[0];
            const double d = u - (72.0 - c.m - 2.0 * p.lambda_value() - 1.0);
            if (d < margin) {
                margin = d;
                where = detail::cell(c.m, c.lambda, c.degree);
            }
        }
        return Check{"", margin >= 0, "smallest margin " + detail::fmt(margin) + " at " + where};
    }));
    return s;
}

/// Gamma recurrence and the Kummer transformation checked against a 50-digit direct series.
inline Suite special_suite() {
    Suite s;
    s.push_back(detail::guarded("special: gamma recurrence on [0.1, 50]", [] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(0.1, 50.0);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const double x = u(rng), g1 = special_fn::gamma(x + 1);
            worst = std::max(worst, std::abs(g1 - x * special_fn::gamma(x)) / std::abs(g1));
        }
        return Check{"special: gamma recurrence on [0.1, 50]", worst <= 1e-12, "max relative defect " + detail::fmt(worst)};
    }));
    s.push_back(detail::guarded("special: Kummer transformation", [] {
        using Big = boost::multiprecision::cpp_bin_float_50;
        double worst = 0;
        for (double a : {0.5, 1.0, 2.5})
            for (double b : {2.0, 4.0, 6.5})
                for (double x : linspace(0.1, 30.0, 40)) {
                    // alternating series for M(a,b;-x) in 50 digits
                    Big sum = 1, term = 1;
                    for (int n = 0; n < 400; ++n) {
                        term *= Big(a + n) * Big(-x) / (Big(b + n) * (n + 1));
                        sum += term;
                    }
                    const double direct = static_cast<double>(sum);
                    const double swapped = std::exp(-x) * special_fn::kummer_series({b - a, b}, x);
                    worst = std::max(worst, std::abs(direct - swapped) / std::abs(direct));
                }
        return Check{"special: Kummer transformation", worst <= 1e-11, "max relative gap " + detail::fmt(worst)};
    }));
    return s;
}

/// W(first, second) / (e^{r^2/4} r^{1-m}) stays constant.
inline Suite wronskian_suite() {
    Suite s;
    for (int m : kDims)
        for (const Rational& lam : kLambdas) {
            const std::string name = "wronskian: " + detail::cell(m, lam, 0);
            s.push_back(detail::guarded(name, [&] {
                const radial::EigenParams p(m, lam);
                const std::vector<double> k = oracle::wronskian_constants(p, linspace(0.5, 10.0, 23));
                double spread = 0;
                for (double v : k) spread = std::max(spread, std::abs(v - k.front()) / std::abs(k.front()));
                return Check{name, spread <= 1e-8 && k.front() != 0.0,
                             "kappa " + detail::fmt(k.front()) + ", spread " + detail::fmt(spread)};
            }));
        }
    return s;
}

/// PDE residuals of assembled fields.
inline Suite residual_suite() {
    Suite s;
    s.push_back(detail::guarded("residual: constant field", [] {
        const double r = oracle::pde_residual(field::Field({3, Rational(0)}, {}, std::nullopt, 3.0), {{1.0, 0.2}, {6.0, 1.5}});
        return Check{"residual: constant field", r == 0.0, "residual " + detail::fmt(r)};
    }));
    s.push_back(detail::guarded("residual: five-mode field", [] {
        const field::Field f({3, Rational(1, 4)}, {{0, field::CoefficientKind::amplitude, 1.0},
                                                   {1, field::CoefficientKind::amplitude, -0.5},
                                                   {2, field::CoefficientKind::amplitude, 0.25},
                                                   {4, field::CoefficientKind::amplitude, 2.0},
                                                   {7, field::CoefficientKind::amplitude, -1e-3}});
        std::vector<std::pair<double, double>> pts;
        for (double r : linspace(0.5, 10.0, 20))
            for (double t : {0.1, 1.0, 2.0, 3.0}) pts.emplace_back(r, t);
        const double res = oracle::pde_residual(f, pts);
        return Check{"residual: five-mode field", res <= 1e-6, "max residual " + detail::fmt(res)};
    }));
    return s;
}

inline const std::map<std::string, std::function<Suite()>>& suites() {
    static const std::map<std::string, std::function<Suite()>> table = {
        {"admissibility", admissibility_suite}, {"frequency", frequency_suite}, {"liouville", liouville_suite},
        {"oracle", [] { return oracle_suite(); }}, {"remainder", remainder_suite}, {"residual", residual_suite},
        {"resonant", resonant_suite}, {"special", special_suite}, {"trace", trace_suite},
        {"wronskian", wronskian_suite}};
    return table;
}

}  // namespace drift_spectral::verify
