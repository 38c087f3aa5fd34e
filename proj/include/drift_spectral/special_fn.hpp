#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace drift_spectral::special_fn {

namespace detail {

inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double lanczos_g = 7.0;

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

/// sin(pi x) with exact argument reduction.
inline double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -sin_pi(r - 1.0);
    if (r > 0.5) r = 1.0 - r;
    return std::sin(std::numbers::pi * r);
}

inline double lanczos_series(double z) {
    double s = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) s += lanczos_coef[i] / (z + static_cast<double>(i));
    return s;
}

}  // namespace detail

/// Gamma function. Relative error about 1e-14 for |x| <= 170.
inline double gamma(double x) {
    if (std::isnan(x)) throw DomainError("gamma: NaN argument");
    if (detail::is_nonpositive_integer(x))
        throw DomainError("gamma: pole at x = " + std::to_string(static_cast<long long>(x)));
    if (x > 171.6) throw OverflowError("gamma: overflow for x = " + std::to_string(x));
    if (x < 0.5) {
        const double s = detail::sin_pi(x);
        return std::numbers::pi / (s * gamma(1.0 - x));
    }
    if (x > 30.0) {
        // The Lanczos fit drifts to ~1e-13 near 170; shift down with the recurrence.
        const double k = std::floor(x - 20.0);
        long double prod = 1.0L;
        for (double j = 1.0; j <= k; ++j) prod *= static_cast<long double>(x) - j;
        return static_cast<double>(prod * gamma(x - k));
    }
    const double z = x - 1.0;
    const long double t = static_cast<long double>(z) + detail::lanczos_g + 0.5L;
    const long double half = std::pow(t, (static_cast<long double>(z) + 0.5L) / 2.0L);
    return static_cast<double>(std::sqrt(2.0L * std::numbers::pi_v<long double>) * half * (half * std::exp(-t)) *
                               detail::lanczos_series(z));
}

struct SignedLog {
    double value;  ///< log|f|
    int sign;      ///< +1 or -1
};

/// log|Gamma(x)| together with the sign of Gamma(x).
inline SignedLog log_gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw DomainError("log_gamma: pole at x = " + std::to_string(static_cast<long long>(x)));
    if (x < 0.5) {
        const double s = detail::sin_pi(x);
        const SignedLog g = log_gamma(1.0 - x);
        return {std::log(std::numbers::pi / std::abs(s)) - g.value, (s < 0 ? -1 : 1) * g.sign};
    }
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return {0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
                std::log(detail::lanczos_series(z)),
            1};
}

/// Gamma(num) / Gamma(den); log differences once either argument reaches 100.
inline double gamma_ratio(double num, double den) {
    if (std::abs(num) < 100.0 && std::abs(den) < 100.0) return gamma(num) / gamma(den);
    const SignedLog n = log_gamma(num), d = log_gamma(den);
    return n.sign * d.sign * std::exp(n.value - d.value);
}

/// Rising factorial (a)_n.
inline double pochhammer(double a, int n) {
    if (n < 0) throw PreconditionError("pochhammer: n must be non-negative");
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + k;
    return p;
}

/// Value stored as mantissa * 2^exp2 so that very large sums stay finite.
struct Scaled {
    double mantissa = 0.0;
    long exp2 = 0;
};

/// mantissa * 2^exp2 * e^y, evaluated without intermediate overflow.
inline double scale_exp(const Scaled& s, double y) {
    if (s.mantissa == 0.0) return 0.0;
    constexpr long double ln2 = 0.693147180559945309417232121458176568L;
    const long double k = std::nearbyint(static_cast<long double>(y) / ln2);
    const double rem = static_cast<double>(static_cast<long double>(y) - k * ln2);
    const long double total = static_cast<long double>(s.exp2) + k;
    if (total > 1e6) return std::copysign(HUGE_VAL, s.mantissa);
    if (total < -1e6) return 0.0;
    return std::ldexp(s.mantissa * std::exp(rem), static_cast<int>(total));
}

class KummerParams {
public:
    KummerParams(double a, double b) : a_(a), b_(b) {
        if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("KummerParams: non-finite parameter");
        if (detail::is_nonpositive_integer(b))
            throw DomainError("KummerParams: b = " + std::to_string(b) + " is a pole of the series");
    }
    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_;
    double b_;
};

inline constexpr int kummer_iteration_cap = 10000;

/// Direct power series for x >= 0, rescaled by powers of two as it grows.
inline Scaled kummer_series_scaled(const KummerParams& p, double x, double rel_tol = 1e-14) {
    if (x < 0) throw PreconditionError("kummer_series_scaled: x must be non-negative");
    if (!(rel_tol > 0)) throw PreconditionError("kummer_series: rel_tol must be positive");
    const double a = p.a(), b = p.b();
    double sum = 1.0, term = 1.0;
    long exp2 = 0;
    for (int n = 0; n < kummer_iteration_cap; ++n) {
        const double ratio = (a + n) * x / ((b + n) * (n + 1.0));
        term *= ratio;
        sum += term;
        if (term == 0.0) return {sum, exp2};
        if (std::abs(sum) > 0x1p600) {
            sum = std::ldexp(sum, -600);
            term = std::ldexp(term, -600);
            exp2 += 600;
        }
        const double next = std::abs((a + n + 1) * x / ((b + n + 1) * (n + 2.0)));
        if (next < 1.0) {
            const double tail = std::abs(term) * next / (1.0 - next);
            if (tail <= rel_tol * std::abs(sum)) return {sum, exp2};
        }
    }
    throw ConvergenceError("kummer_series: no convergence within iteration cap", std::ldexp(sum, static_cast<int>(exp2)),
                           std::abs(std::ldexp(term, static_cast<int>(exp2))));
}

/// Kummer's function M(a,b;x). Negative arguments go through M(a,b;x) = e^x M(b-a,b;-x).
inline double kummer_series(const KummerParams& p, double x, double rel_tol = 1e-14) {
    if (x == 0.0) return 1.0;
    if (x > 0) return scale_exp(kummer_series_scaled(p, x, rel_tol), 0.0);
    const KummerParams q(p.b() - p.a(), p.b());
    return scale_exp(kummer_series_scaled(q, -x, rel_tol), x);
}

struct AsymptoticExpansion {
    double leading_amplitude;   ///< Gamma(b)/Gamma(b-a)
    std::vector<double> terms;  ///< terms[n-1] = (a)_n (1+a-b)_n / n!
    int truncation_order;
};

inline void require_nonresonant(const KummerParams& p) {
    if (detail::is_nonpositive_integer(p.b() - p.a()))
        throw ResonanceError("b - a = " + std::to_string(p.b() - p.a()) +
                             " is a non-positive integer; use resonant_polynomial");
}

inline AsymptoticExpansion asymptotic_expansion(const KummerParams& p, int order) {
    require_nonresonant(p);
    if (order < 0) throw PreconditionError("asymptotic_expansion: order must be non-negative");
    AsymptoticExpansion e{gamma_ratio(p.b(), p.b() - p.a()), {}, order};
    const double a = p.a(), c = 1.0 + p.a() - p.b();
    double t = 1.0;
    for (int n = 1; n <= order; ++n) {
        t *= (a + n - 1) * (c + n - 1) / n;
        e.terms.push_back(t);
    }
    return e;
}

struct AsymptoticValue {
    double value;
    double first_omitted_term;  ///< magnitude of term N+1, in the same units as value
};

/// Truncated large-argument expansion of M(a,b;-x), x > 0.
inline AsymptoticValue kummer_asymptotic(const KummerParams& p, double x, int order) {
    if (!(x > 0)) throw DomainError("kummer_asymptotic: x must be positive");
    const AsymptoticExpansion e = asymptotic_expansion(p, order + 1);
    double s = 1.0, xp = 1.0;
    for (int n = 1; n <= order; ++n) {
        xp /= x;
        s += e.terms[n - 1] * xp;
    }
    const double omitted = std::abs(e.terms[order] * xp / x);
    const double pref = std::pow(x, -p.a()) * e.leading_amplitude;
    return {pref * s, std::abs(pref) * omitted};
}

struct TruncatedSum {
    double sum;       ///< 1 + sum of retained terms
    double min_term;  ///< smallest term magnitude reached (error scale)
    int order;
};

/// Optimally truncated normalised expansion 1 + sum (a)_n(1+a-b)_n/n! x^-n.
inline TruncatedSum asymptotic_sum(double a, double b, double x, int max_order = 400) {
    const double c = 1.0 + a - b;
    double s = 1.0, t = 1.0, best = 1.0;
    for (int n = 1; n <= max_order; ++n) {
        const double next = t * (a + n - 1) * (c + n - 1) / (n * x);
        if (next == 0.0) return {s, 0.0, n - 1};
        if (std::abs(next) >= best) return {s, best, n - 1};
        t = next;
        best = std::abs(t);
        s += t;
        if (best <= 1e-17 * std::abs(s)) return {s, best, n};
    }
    return {s, best, max_order};
}

/// Polynomial radial solution at a resonant degree.
struct ResonantPolynomial {
    int low_power;                   ///< the degree l
    int degree;                      ///< 2*lambda
    std::vector<double> coefficients;  ///< coefficients[p] multiplies r^p
    std::vector<boost::multiprecision::cpp_rational> exact;

    double operator()(double r) const {
        double v = 0.0;
        for (int p = degree; p >= 0; --p) v = v * r + coefficients[p];
        return v;
    }
    double derivative(double r) const {
        double v = 0.0;
        for (int p = degree; p >= 1; --p) v = v * r + p * coefficients[p];
        return v;
    }
};

inline bool resonant(int degree, const Rational& lambda) {
    const Rational i = lambda - Rational(degree, 2);
    return i >= 0 && i.denominator() == 1;
}

/// q(r) = r^l M(-i, l + m/2; r^2/4) with i = lambda - l/2.
inline ResonantPolynomial resonant_polynomial(int degree, int m, const Rational& lambda) {
    using boost::multiprecision::cpp_rational;
    if (degree < 0 || m < 2) throw PreconditionError("resonant_polynomial: need degree >= 0 and m >= 2");
    if (!resonant(degree, lambda))
        throw PreconditionError("resonant_polynomial: degree " + std::to_string(degree) +
                                " is not resonant for this lambda");
    const std::int64_t i = (lambda - Rational(degree, 2)).numerator();
    const cpp_rational b = cpp_rational(2 * degree + m, 2);
    ResonantPolynomial q;
    q.low_power = degree;
    q.degree = static_cast<int>(degree + 2 * i);
    q.exact.assign(q.degree + 1, cpp_rational(0));
    q.coefficients.assign(q.degree + 1, 0.0);
    cpp_rational c = 1;
    for (std::int64_t j = 0; j <= i; ++j) {
        q.exact[degree + 2 * j] = c;
        q.coefficients[degree + 2 * j] = static_cast<double>(c);
        c *= cpp_rational(j - i) / ((b + j) * (j + 1) * 4);
    }
    return q;
}

}  // namespace drift_spectral::special_fn
