#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/special_fn.hpp"
#include "drift_spectral/spherics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace drift_spectral::radial {

enum class Trichotomy { non_integer_2lambda, integer_lambda, half_integer_lambda };

inline const char* to_string(Trichotomy t) {
    switch (t) {
    case Trichotomy::non_integer_2lambda: return "non_integer_2lambda";
    case Trichotomy::integer_lambda: return "integer_lambda";
    case Trichotomy::half_integer_lambda: return "half_integer_lambda";
    }
    return "";
}

/// Dimension m >= 2 and eigenvalue lambda >= 0, the latter kept exact.
class EigenParams {
public:
    EigenParams(int m, Rational lambda) : m_(m), lambda_(lambda) {
        if (m < 2) throw PreconditionError("EigenParams: m must be at least 2, got " + std::to_string(m));
        if (lambda < 0) throw PreconditionError("EigenParams: lambda must be non-negative");
        if (lambda.denominator() == 1)
            trichotomy_ = Trichotomy::integer_lambda;
        else if (lambda.denominator() == 2)
            trichotomy_ = Trichotomy::half_integer_lambda;
        else
            trichotomy_ = Trichotomy::non_integer_2lambda;
    }
    int m() const { return m_; }
    const Rational& lambda() const { return lambda_; }
    double lambda_value() const { return to_double(lambda_); }
    Trichotomy trichotomy() const { return trichotomy_; }
    /// m + 2 lambda, the power in the growth envelope e^{r^2/4} r^{-(m+2 lambda)}
    double growth_power() const { return m_ + 2.0 * lambda_value(); }
    bool operator==(const EigenParams& o) const { return m_ == o.m_ && lambda_ == o.lambda_; }

private:
    int m_;
    Rational lambda_;
    Trichotomy trichotomy_;
};

inline bool is_resonant(int degree, const EigenParams& p) {
    return special_fn::resonant(degree, p.lambda());
}

/// Degrees l with lambda - l/2 a non-negative integer, ascending.
inline std::vector<int> resonant_degrees(const EigenParams& p) {
    std::vector<int> out;
    const Rational two = p.lambda() * 2;
    if (two.denominator() != 1) return out;
    for (std::int64_t l = two.numerator() % 2; l <= two.numerator(); l += 2) out.push_back(static_cast<int>(l));
    return out;
}

enum class RadialKind { kummer_regular, resonant_polynomial, second_solution };
enum class Regime { automatic, series, asymptotic };

struct RadialValue {
    double value;
    double derivative;
};

/// Kummer parameters a = l/2 + m/2 + lambda, b = l + m/2 of the degree-l mode.
inline special_fn::KummerParams kummer_parameters(int degree, const EigenParams& p) {
    spherics::check_degree(degree, p.m());
    return {degree / 2.0 + p.m() / 2.0 + p.lambda_value(), degree + p.m() / 2.0};
}

inline void require_kummer_branch(int degree, const EigenParams& p) {
    if (is_resonant(degree, p))
        throw ResonanceError("degree " + std::to_string(degree) +
                             " is resonant for this lambda; use resonant_mode_solution");
}

/// c / amplitude = 4^{-a} Gamma(b-a)/Gamma(b) for f = c r^l M(b-a, b; r^2/4).
inline double series_coefficient(int degree, const EigenParams& p) {
    require_kummer_branch(degree, p);
    const auto k = kummer_parameters(degree, p);
    return std::pow(4.0, -k.a()) * special_fn::gamma_ratio(k.b() - k.a(), k.b());
}

/// Smallest x >= 40 past which the optimally truncated expansion is accurate
/// to about 1e-12 relative for this mode.
inline double switch_point(int degree, const EigenParams& p) {
    require_kummer_branch(degree, p);
    static std::mutex mu;
    static std::map<std::tuple<int, int, std::int64_t, std::int64_t>, double> memo;
    const auto key = std::make_tuple(degree, p.m(), p.lambda().numerator(), p.lambda().denominator());
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const auto k = kummer_parameters(degree, p);
    const double a = k.a(), b = k.b();
    const bool a_pole = special_fn::detail::is_nonpositive_integer(a);
    const double log_ratio = a_pole ? 0.0 : special_fn::log_gamma(b - a).value - special_fn::log_gamma(a).value;
    double x = 40.0;
    for (; x < 5000.0; x *= 1.1) {
        const double stokes = a_pole ? 0.0 : std::exp(-x + (2 * a - b) * std::log(x) + log_ratio);
        if (stokes <= 1e-12 && special_fn::asymptotic_sum(a, b, x).min_term <= 1e-16) break;
    }
    x = std::min(x, 5000.0);
    std::lock_guard lock(mu);
    memo[key] = x;
    return x;
}

/// N(r) = f(r) e^{-r^2/4} r^{m+2 lambda} / amplitude, and dN/dx with x = r^2/4.
struct Envelope {
    double value;
    double dvalue_dx;
    Regime regime;
};

inline Envelope mode_envelope(int degree, const EigenParams& p, double r, Regime regime = Regime::automatic) {
    if (!(r > 0)) throw DomainError("radius must be positive");
    require_kummer_branch(degree, p);
    const auto k = kummer_parameters(degree, p);
    const double a = k.a(), b = k.b(), alpha = b - a;
    const double x = r * r / 4.0;
    if (regime == Regime::automatic) regime = (x <= 40.0 || x <= switch_point(degree, p)) ? Regime::series : Regime::asymptotic;

    if (regime == Regime::asymptotic) {
        const special_fn::TruncatedSum s = special_fn::asymptotic_sum(a, b, x);
        double t = 1.0, d = 0.0;
        for (int n = 1; n <= s.order; ++n) {
            t *= (a + n - 1) * (1.0 + a - b + n - 1) / (n * x);
            d -= n * t / x;
        }
        return {s.sum, d, Regime::asymptotic};
    }
    const special_fn::SignedLog g1 = special_fn::log_gamma(alpha), g2 = special_fn::log_gamma(b);
    const int sign = g1.sign * g2.sign;
    const long double log_pref = static_cast<long double>(a) * std::log(static_cast<long double>(x)) +
                                 static_cast<long double>(g1.value - g2.value) - static_cast<long double>(x);
    const double m0 = special_fn::scale_exp(special_fn::kummer_series_scaled({alpha, b}, x), static_cast<double>(log_pref));
    const double m1 = special_fn::scale_exp(special_fn::kummer_series_scaled({alpha + 1, b + 1}, x), static_cast<double>(log_pref));
    return {sign * m0, sign * ((a / x - 1.0) * m0 + alpha / b * m1), Regime::series};
}

/// Regular Kummer-form mode with f e^{-r^2/4} r^{m+2 lambda} -> amplitude.
inline RadialValue mode_solution_with_derivative(const spherics::ModeIndex& mode, const EigenParams& p, double amplitude,
                                                 double r, Regime regime = Regime::automatic) {
    const Envelope e = mode_envelope(mode.degree, p, r, regime);
    const double k = p.growth_power();
    const double g = amplitude * std::exp(r * r / 4.0 - k * std::log(r));
    return {g * e.value, g * (e.dvalue_dx * r / 2.0 + e.value * (r / 2.0 - k / r))};
}

inline double mode_solution(const spherics::ModeIndex& mode, const EigenParams& p, double amplitude, double r,
                            Regime regime = Regime::automatic) {
    return mode_solution_with_derivative(mode, p, amplitude, r, regime).value;
}

inline special_fn::ResonantPolynomial resonant_polynomial_for(int degree, const EigenParams& p) {
    return special_fn::resonant_polynomial(degree, p.m(), p.lambda());
}

inline RadialValue resonant_mode_solution_with_derivative(const spherics::ModeIndex& mode, const EigenParams& p, double c,
                                                          double r) {
    if (!(r > 0)) throw DomainError("radius must be positive");
    const auto q = resonant_polynomial_for(mode.degree, p);
    return {c * q(r), c * q.derivative(r)};
}

inline double resonant_mode_solution(const spherics::ModeIndex& mode, const EigenParams& p, double c, double r) {
    return resonant_mode_solution_with_derivative(mode, p, c, r).value;
}

namespace detail {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double integrate(F f, double lo, double hi) {
    if (lo == hi) return 0.0;
    return gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-13);
}

/// Lower limit below which e^{(s^2 - r^2)/4} < e^{-50}.
inline double gaussian_cut(double lo, double r) {
    return r * r > 200.0 ? std::max(lo, std::sqrt(r * r - 200.0)) : lo;
}

/// Integrates the degree-0 radial equation from r0 to r1.
inline RadialValue continue_degree0(const EigenParams& p, double r0, RadialValue y0, double r1) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double m = p.m(), lam = p.lambda_value();
    auto rhs = [m, lam](const State& y, State& dy, double r) {
        dy[0] = y[1];
        dy[1] = -((m - 1.0) / r - r / 2.0) * y[1] - lam * y[0];
    };
    State y{y0.value, y0.derivative};
    auto stepper = odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, y, r0, r1, (r1 - r0) / 50.0);
    return {y[0], y[1]};
}

}  // namespace detail

/// u0 e^{-r^2/4} r^m, which tends to 1.
inline double u0_harmonic_scaled(int m, double r) {
    if (!(r > 0)) throw DomainError("radius must be positive");
    const double mm = m;
    auto f = [r, mm](double s) { return std::exp((s * s - r * r) / 4.0) * std::pow(s, 1.0 - mm); };
    return 0.5 * std::pow(r, mm) * detail::integrate(f, r > 1.0 ? detail::gaussian_cut(1.0, r) : 1.0, r);
}

/// u0(r) = 1/2 integral_1^r e^{s^2/4} s^{1-m} ds.
inline double u0_harmonic(int m, double r) {
    if (!(r > 0)) throw DomainError("radius must be positive");
    if (r <= 2.0) {
        const double mm = m;
        return 0.5 * detail::integrate([mm](double s) { return std::exp(s * s / 4.0) * std::pow(s, 1.0 - mm); }, 1.0, r);
    }
    return u0_harmonic_scaled(m, r) * std::exp(r * r / 4.0 - m * std::log(r));
}

inline double u0_derivative(int m, double r) {
    return 0.5 * std::exp(r * r / 4.0) * std::pow(r, 1.0 - m);
}

/// Regular degree-0 solution: the polynomial for integer lambda, otherwise the
/// Kummer mode of unit amplitude.
inline RadialValue degree0_first_solution(const EigenParams& p, double r) {
    const auto mode = spherics::make_mode(0, p.m());
    if (is_resonant(0, p)) return resonant_mode_solution_with_derivative(mode, p, 1.0, r);
    return mode_solution_with_derivative(mode, p, 1.0, r);
}

/// Second degree-0 solution by reduction of order, valid on [r_ref, inf) and
/// continued inward through the ODE.
class SecondSolution {
public:
    explicit SecondSolution(const EigenParams& p) : p_(p) {
        if (p.lambda().numerator() == 0) {
            r_ref_ = 1.0;
            return;
        }
        if (is_resonant(0, p)) {
            q0_ = resonant_polynomial_for(0, p);
            c_top_ = q0_.coefficients.back();
        }
        double last = 0.0;
        const double r_max = std::sqrt(4.0 * (4.0 * p.lambda_value() + 2.0 * p.m() + 40.0));
        double prev = first_scaled(1e-3);
        for (double r = 0.01; r <= r_max; r += 0.01) {
            const double v = first_scaled(r);
            if ((v < 0) != (prev < 0) || v == 0.0) last = r;
            prev = v;
        }
        largest_node_ = last;
        r_ref_ = std::max(3.0, last + 1.0);
        anchor_ = outer(r_ref_);
    }

    double r_ref() const { return r_ref_; }
    double largest_node() const { return largest_node_; }
    const EigenParams& params() const { return p_; }

    RadialValue operator()(double r) const {
        if (!(r > 0)) throw DomainError("second_solution: radius must be positive");
        const int m = p_.m();
        if (p_.lambda().numerator() == 0) return {u0_harmonic(m, r), u0_derivative(m, r)};
        if (r >= r_ref_) return outer(r);
        return detail::continue_degree0(p_, r_ref_, anchor_, r);
    }

    /// l e^{-r^2/4} r^{m+2 lambda} for integer lambda, p / r^{2 lambda} otherwise.
    double scaled(double r) const {
        if (!(r > 0)) throw DomainError("second_solution: radius must be positive");
        const double x = r * r / 4.0, k = p_.growth_power();
        if (p_.lambda().numerator() == 0) return u0_harmonic_scaled(p_.m(), r);
        if (r < r_ref_) {
            const double v = (*this)(r).value;
            return integer_case() ? v * std::exp(-x + k * std::log(r)) : v * std::pow(r, -2.0 * p_.lambda_value());
        }
        if (integer_case()) return 0.5 * c_top_ * q0_(r) * std::pow(r, k) * scaled_integral_l(r);
        return 0.5 * envelope0(r).value * std::pow(r, -k - 2.0 * p_.lambda_value()) * integral_j(r);
    }

    /// Reduction-of-order integral of W / f1^2 between r0 and r1, refusing to
    /// cross a node of the first solution.
    double reduction_integral(double r0, double r1) const {
        const double lo = std::min(r0, r1), hi = std::max(r0, r1);
        if (p_.lambda().numerator() != 0 && lo <= largest_node_ + 1e-9 && has_node_in(lo, hi))
            throw PathError("second_solution: first solution has a node in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]; continue segment-wise from r_ref = " + std::to_string(r_ref_));
        const double m = p_.m();
        auto f = [&](double s) {
            const double f1 = degree0_first_solution(p_, s).value;
            return std::exp(s * s / 4.0) * std::pow(s, 1.0 - m) / (f1 * f1);
        };
        return detail::integrate(f, r0, r1);
    }

private:
    bool integer_case() const { return is_resonant(0, p_); }

    Envelope envelope0(double r) const { return mode_envelope(0, p_, r); }

    double first_scaled(double r) const { return integer_case() ? q0_(r) : envelope0(r).value; }

    bool has_node_in(double lo, double hi) const {
        double prev = first_scaled(lo);
        for (int i = 1; i <= 2000; ++i) {
            const double v = first_scaled(lo + (hi - lo) * i / 2000.0);
            if (v == 0.0 || (v < 0) != (prev < 0)) return true;
            prev = v;
        }
        return false;
    }

    // integral_{r_ref}^r e^{(s^2 - r^2)/4} s^{1-m} / q0(s)^2 ds
    double scaled_integral_l(double r) const {
        const double m = p_.m();
        auto f = [&](double s) {
            const double q = q0_(s);
            return std::exp((s * s - r * r) / 4.0) * std::pow(s, 1.0 - m) / (q * q);
        };
        return detail::integrate(f, r > r_ref_ ? detail::gaussian_cut(r_ref_, r) : r_ref_, r);
    }

    // integral_r^inf e^{(r^2 - s^2)/4} s^{1+m+4 lambda} / N0(s)^2 ds
    double integral_j(double r) const {
        const double e = 1.0 + p_.m() + 4.0 * p_.lambda_value();
        auto f = [&](double s) {
            const double n = envelope0(s).value;
            return std::exp((r * r - s * s) / 4.0) * std::pow(s, e) / (n * n);
        };
        // the integrand is below e^{-60} relative past this point
        const double tail = std::sqrt(r * r + 4.0 * (60.0 + e * std::log(1.0 + r + e))) + 4.0;
        return detail::integrate(f, r, tail);
    }

    RadialValue outer(double r) const {
        const double x = r * r / 4.0, m = p_.m(), k = p_.growth_power();
        if (integer_case()) {
            const double i = scaled_integral_l(r);
            const double q = q0_(r), dq = q0_.derivative(r);
            const double ex = std::exp(x);
            return {0.5 * c_top_ * q * i * ex,
                    0.5 * c_top_ * (dq * i * ex + ex * std::pow(r, 1.0 - m) / q)};
        }
        const Envelope n = envelope0(r);
        const double j = integral_j(r);
        const double rk = std::pow(r, -k);
        return {0.5 * n.value * rk * j,
                0.5 * (rk * (n.value * (r / 2.0 - k / r) + n.dvalue_dx * r / 2.0) * j - std::pow(r, 1.0 - m + k) / n.value)};
    }

    EigenParams p_;
    special_fn::ResonantPolynomial q0_{};
    double c_top_ = 1.0;
    double r_ref_ = 3.0;
    double largest_node_ = 0.0;
    RadialValue anchor_{0.0, 0.0};
};

/// Shared, lazily built second solution for the given parameters.
inline std::shared_ptr<const SecondSolution> second_solution_for(const EigenParams& p) {
    static std::mutex mu;
    static std::map<std::tuple<int, std::int64_t, std::int64_t>, std::shared_ptr<const SecondSolution>> cache;
    const auto key = std::make_tuple(p.m(), p.lambda().numerator(), p.lambda().denominator());
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto s = std::make_shared<const SecondSolution>(p);
    std::lock_guard lock(mu);
    return cache.emplace(key, s).first->second;
}

/// u0 for lambda = 0; l(r) ~ e^{r^2/4} r^{-(m+2 lambda)} for integer lambda;
/// p(r) ~ r^{2 lambda} otherwise.
inline double second_solution(const EigenParams& p, double r) {
    return (*second_solution_for(p))(r).value;
}

inline RadialValue second_solution_with_derivative(const EigenParams& p, double r) {
    return (*second_solution_for(p))(r);
}

inline double second_solution_scaled(const EigenParams& p, double r) {
    return second_solution_for(p)->scaled(r);
}

/// One radial factor together with its normalisation.
struct RadialMode {
    spherics::ModeIndex mode;
    EigenParams params;
    RadialKind kind;
    double amplitude;

    static RadialMode make(int degree, const EigenParams& p, RadialKind kind, double amplitude) {
        const auto mode = spherics::make_mode(degree, p.m());
        const bool res = is_resonant(degree, p);
        if (kind == RadialKind::kummer_regular && res)
            throw ResonanceError("degree " + std::to_string(degree) + " is resonant; Kummer branch unavailable");
        if (kind == RadialKind::resonant_polynomial && !res)
            throw PreconditionError("degree " + std::to_string(degree) + " is not resonant");
        if (kind == RadialKind::second_solution && degree != 0)
            throw PreconditionError("second solutions exist only at degree 0");
        return {mode, p, kind, amplitude};
    }

    RadialValue evaluate(double r) const {
        switch (kind) {
        case RadialKind::kummer_regular: return mode_solution_with_derivative(mode, params, amplitude, r);
        case RadialKind::resonant_polynomial: return resonant_mode_solution_with_derivative(mode, params, amplitude, r);
        case RadialKind::second_solution: {
            const RadialValue v = second_solution_with_derivative(params, r);
            return {amplitude * v.value, amplitude * v.derivative};
        }
        }
        return {0, 0};
    }

    /// value * e^{-r^2/4} r^{m+2 lambda}, finite for large r.
    double scaled(double r) const {
        if (!(r > 0)) throw DomainError("radius must be positive");
        const double x = r * r / 4.0, k = params.growth_power();
        switch (kind) {
        case RadialKind::kummer_regular: return amplitude * mode_envelope(mode.degree, params, r).value;
        case RadialKind::resonant_polynomial:
            return amplitude * resonant_polynomial_for(mode.degree, params)(r) * std::exp(-x + k * std::log(r));
        case RadialKind::second_solution:
            if (is_resonant(0, params)) return amplitude * second_solution_scaled(params, r);
            return amplitude * second_solution_scaled(params, r) *
                   std::exp(-x + (k + 2.0 * params.lambda_value()) * std::log(r));
        }
        return 0.0;
    }
};

}  // namespace drift_spectral::radial
