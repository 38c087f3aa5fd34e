#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/field.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/radial.hpp"
#include "drift_spectral/special_fn.hpp"
#include "drift_spectral/spherics.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace drift_spectral::oracle {

using radial::EigenParams;
using radial::RadialValue;

struct OdeSolution {
    int degree;
    EigenParams params;
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> derivative_values;
    double estimated_error;
};

/// Three leading terms of the regular Frobenius series r^l (1 + a1 r^2 + a2 r^4).
inline RadialValue frobenius_seed(int degree, const EigenParams& p, double r) {
    const double l = degree, m = p.m(), lam = p.lambda_value();
    double a[3] = {1.0, 0.0, 0.0};
    for (int j = 0; j < 2; ++j) a[j + 1] = a[j] * (l / 2 + j - lam) / ((2.0 * j + 2) * (2.0 * j + 2 * l + m));
    double v = 0, d = 0;
    for (int j = 0; j < 3; ++j) {
        const double e = l + 2.0 * j;
        v += a[j] * std::pow(r, e);
        if (e > 0) d += a[j] * e * std::pow(r, e - 1);
    }
    return {v, d};
}

namespace detail {

inline std::vector<double> run(int degree, const EigenParams& p, RadialValue seed, double r0, const std::vector<double>& at,
                               double tol, std::vector<double>* deriv) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double m = p.m(), lam = p.lambda_value(), ll = spherics::angular_eigenvalue(degree, p.m());
    auto rhs = [m, lam, ll](const State& y, State& dy, double r) {
        dy[0] = y[1];
        dy[1] = -((m - 1.0) / r - r / 2.0) * y[1] + (ll / (r * r) - lam) * y[0];
    };
    std::vector<double> times{r0};
    times.insert(times.end(), at.begin(), at.end());
    std::vector<double> vals;
    if (deriv) deriv->clear();
    auto observe = [&](const State& y, double) {
        vals.push_back(y[0]);
        if (deriv) deriv->push_back(y[1]);
    };
    State y{seed.value, seed.derivative};
    auto stepper = odeint::make_controlled(0.0, tol, odeint::runge_kutta_fehlberg78<State>());
    try {
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), (at.front() - r0) / 100.0 + 1e-6 * r0, observe,
                                odeint::max_step_checker(100000));
    } catch (const std::exception& e) {
        throw SeedError(std::string("integrate_radial_ode: integration stalled (") + e.what() +
                        "); try a larger r_start");
    }
    vals.erase(vals.begin());
    if (deriv) deriv->erase(deriv->begin());
    return vals;
}

}  // namespace detail

/// Adaptive RK7(8) integration of the radial equation from a regular seed.
/// With no explicit radii the solution is reported on 101 equispaced points.
inline OdeSolution integrate_radial_ode(int degree, const EigenParams& p, double r_start, double r_end, double tol,
                                        std::vector<double> radii = {}, std::optional<RadialValue> seed = std::nullopt) {
    spherics::check_degree(degree, p.m());
    if (!(r_start > 0) || !(r_end > r_start)) throw PreconditionError("integrate_radial_ode: need 0 < r_start < r_end");
    if (!(tol > 0)) throw PreconditionError("integrate_radial_ode: tol must be positive");
    if (radii.empty()) radii = linspace(r_start, r_end, 101);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < r_start || radii[i] > r_end) throw PreconditionError("integrate_radial_ode: radius outside range");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw PreconditionError("integrate_radial_ode: radii must increase");
    }
    const RadialValue y0 = seed.value_or(frobenius_seed(degree, p, r_start));
    if (!std::isfinite(y0.value) || !std::isfinite(y0.derivative) || (y0.value == 0 && y0.derivative == 0))
        throw SeedError("integrate_radial_ode: degenerate seed at r_start");

    // The first observation point must lie past r0 for integrate_times.
    std::vector<double> at = radii;
    const bool starts_at_seed = at.front() == r_start;
    if (starts_at_seed) at.erase(at.begin());

    OdeSolution out{degree, p, radii, {}, {}, 0.0};
    if (!at.empty()) {
        std::vector<double> d, d_fine;
        const std::vector<double> coarse = detail::run(degree, p, y0, r_start, at, tol / 10, &d);
        const std::vector<double> fine = detail::run(degree, p, y0, r_start, at, tol / 160, &d_fine);
        // error relative to the running maximum so isolated nodes do not dominate
        double scale = std::abs(y0.value), err = 0;
        for (std::size_t i = 0; i < fine.size(); ++i) {
            scale = std::max(scale, std::abs(fine[i]));
            err = std::max(err, std::abs(coarse[i] - fine[i]) / scale);
        }
        out.values = fine;
        out.derivative_values = d_fine;
        out.estimated_error = err;
    }
    if (starts_at_seed) {
        out.values.insert(out.values.begin(), y0.value);
        out.derivative_values.insert(out.derivative_values.begin(), y0.derivative);
    }
    if (!(out.estimated_error <= tol))
    {
        std::ostringstream msg;
        msg << "integrate_radial_ode: estimated error " << out.estimated_error << " exceeds tolerance " << tol;
        throw AccuracyError(msg.str());
    }
    return out;
}

/// max over points of |Delta u - (r/2) u_r + lambda u|, per component with
/// sixth-order differences in r, divided by 1 + sum of component magnitudes.
inline double pde_residual(const field::Field& f, const std::vector<std::pair<double, double>>& points) {
    const int m = f.params().m();
    const double lam = f.params().lambda_value();
    const std::vector<field::Component> comps = f.components();
    double worst = 0.0;
    for (const auto& [r, theta] : points) {
        if (!(r > 0)) throw DomainError("pde_residual: radius must be positive");
        const double t = std::cos(theta), h = 0.01 * std::min(1.0, r);
        double res = 0.0, mag = 0.0;
        for (const field::Component& c : comps) {
            auto g = [&](double s) { return c.radial(s).value; };
            const double fm3 = g(r - 3 * h), fm2 = g(r - 2 * h), fm1 = g(r - h), f0 = g(r), fp1 = g(r + h), fp2 = g(r + 2 * h),
                         fp3 = g(r + 3 * h);
            const double d1 = (-fm3 + 9 * fm2 - 45 * fm1 + 45 * fp1 - 9 * fp2 + fp3) / (60 * h);
            const double d2 = (2 * fm3 - 27 * fm2 + 270 * fm1 - 490 * f0 + 270 * fp1 - 27 * fp2 + 2 * fp3) / (180 * h * h);
            const double ang = c.zonal ? spherics::zonal_value(c.degree, m, t) : 1.0;
            res += ang * (d2 + ((m - 1.0) / r - r / 2.0) * d1 - (c.angular_eigenvalue / (r * r) - lam) * f0);
            mag += std::abs(ang * f0);
        }
        worst = std::max(worst, std::abs(res) / (1.0 + mag));
    }
    return worst;
}

struct RemainderProbe {
    std::vector<double> x;
    std::vector<double> remainder;
    double slope;
};

/// Normalised remainder |x^a Gamma(b-a)/Gamma(b) M(a,b;-x) - S_N(x)| against
/// the series oracle, with its log-log slope.
inline RemainderProbe remainder_probe(const special_fn::KummerParams& p, int order, const std::vector<double>& x_grid) {
    special_fn::require_nonresonant(p);
    if (order < 0) throw PreconditionError("remainder_probe: order must be non-negative");
    if (x_grid.size() < 2) throw PreconditionError("remainder_probe: need at least two points");
    const double a = p.a(), b = p.b();
    const special_fn::KummerParams q(b - a, b);
    const special_fn::AsymptoticExpansion e = special_fn::asymptotic_expansion(p, order);
    const double g = 1.0 / e.leading_amplitude;
    RemainderProbe out{x_grid, {}, 0.0};
    for (double x : x_grid) {
        if (x < 50.0 || x > 400.0) throw PreconditionError("remainder_probe: x must lie in [50, 400]");
        const double series = g * special_fn::scale_exp(special_fn::kummer_series_scaled(q, x, 1e-17), -x + a * std::log(x));
        double s = 1.0, xp = 1.0;
        for (int n = 1; n <= order; ++n) {
            xp /= x;
            s += e.terms[n - 1] * xp;
        }
        out.remainder.push_back(std::abs(series - s));
    }
    out.slope = loglog_slope(out.x, out.remainder);
    return out;
}

struct FrequencyReport {
    std::vector<double> radii;
    std::vector<double> I_values;
    std::vector<double> U_values;
    std::vector<double> log_I;  ///< finite where I itself overflows
};

namespace detail {

inline double log_I(const field::Field& f, double r) {
    const std::vector<double> s = f.scaled_radial(r);
    const std::size_t n = f.modes().size();
    std::map<int, double> coef;
    for (std::size_t i = 0; i < n; ++i) coef[f.modes()[i].degree] += s[i];
    const double root_vol = std::sqrt(spherics::sphere_volume(f.params().m()));
    for (std::size_t i = n; i < s.size(); ++i) coef[0] += root_vol * s[i];
    std::vector<double> sq;
    for (const auto& [l, c] : coef) sq.push_back(c * c);
    const double is = pairwise_sum(sq);
    if (!(is > 0)) throw ZeroFieldError("frequency: I vanishes at r = " + std::to_string(r));
    return std::log(is) + 2.0 * (r * r / 4.0 - f.params().growth_power() * std::log(r));
}

}  // namespace detail

/// I(r) = sum of squared harmonic coefficients and U = (r/2)(log I)'.
inline FrequencyReport frequency(const field::Field& f, const std::vector<double>& radii) {
    constexpr double h = 1e-4;
    FrequencyReport out{radii, {}, {}, {}};
    for (double r : radii) {
        if (!(r > 0)) throw DomainError("frequency: radius must be positive");
        const double li = detail::log_I(f, r);
        out.log_I.push_back(li);
        out.I_values.push_back(std::exp(li));
        out.U_values.push_back((detail::log_I(f, r * std::exp(h)) - detail::log_I(f, r * std::exp(-h))) / (4.0 * h));
    }
    return out;
}

/// e^{r^2/4} r^{1-m}: the Abel factor every Wronskian is proportional to.
inline double abel_factor(int m, double r) { return std::exp(r * r / 4.0 + (1.0 - m) * std::log(r)); }

inline double wronskian(const RadialValue& f, const RadialValue& g) { return f.value * g.derivative - f.derivative * g.value; }

/// W(first, second) / abel_factor at each radius for the degree-0 pair.
inline std::vector<double> wronskian_constants(const EigenParams& p, const std::vector<double>& radii) {
    std::vector<double> k;
    for (double r : radii)
        k.push_back(wronskian(radial::degree0_first_solution(p, r), radial::second_solution_with_derivative(p, r)) /
                    abel_factor(p.m(), r));
    return k;
}

}  // namespace drift_spectral::oracle
