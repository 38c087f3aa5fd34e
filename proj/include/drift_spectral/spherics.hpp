#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace drift_spectral::spherics {

struct ModeIndex {
    int degree;
    double eigenvalue;       ///< degree (degree + m - 2)
    double radial_exponent;  ///< degree / 2
};

inline void check_degree(int degree, int m) {
    if (degree < 0) throw PreconditionError("degree must be non-negative, got " + std::to_string(degree));
    if (m < 2) throw PreconditionError("dimension m must be at least 2, got " + std::to_string(m));
}

inline double angular_eigenvalue(int degree, int m) {
    check_degree(degree, m);
    return static_cast<double>(degree) * (degree + m - 2);
}

/// Returns degree/2 after checking it against (-(m-2) + sqrt((m-2)^2 + 4 lambda_l)) / 4.
inline double radial_exponent(int degree, int m) {
    const double closed = degree / 2.0;
    const double d = m - 2.0;
    const double root = (-d + std::sqrt(d * d + 4.0 * angular_eigenvalue(degree, m))) / 4.0;
    if (std::abs(root - closed) > 1e-12 * std::max(1.0, closed))
        throw AccuracyError("radial_exponent: closed form and root formula disagree at degree " +
                            std::to_string(degree));
    return closed;
}

inline ModeIndex make_mode(int degree, int m) {
    return {degree, angular_eigenvalue(degree, m), radial_exponent(degree, m)};
}

/// Surface area of the unit sphere S^{m-1} in R^m.
inline double sphere_volume(int m) {
    if (m < 1) throw PreconditionError("sphere_volume: m must be positive");
    return 2.0 * std::pow(std::numbers::pi, m / 2.0) / special_fn::gamma(m / 2.0);
}

struct PolyValue {
    double value;
    double derivative;
};

/// Gegenbauer C_n^alpha(t) and its derivative by three-term recurrence (alpha > 0).
inline PolyValue gegenbauer(int n, double alpha, double t) {
    double c0 = 1.0, d0 = 0.0;
    if (n == 0) return {c0, d0};
    double c1 = 2.0 * alpha * t, d1 = 2.0 * alpha;
    for (int k = 1; k < n; ++k) {
        const double c2 = (2.0 * (k + alpha) * t * c1 - (k + 2.0 * alpha - 1.0) * c0) / (k + 1.0);
        const double d2 = (2.0 * (k + alpha) * (c1 + t * d1) - (k + 2.0 * alpha - 1.0) * d0) / (k + 1.0);
        c0 = c1;
        d0 = d1;
        c1 = c2;
        d1 = d2;
    }
    return {c1, d1};
}

/// Squared norm of C_n^alpha under the weight (1-t^2)^(alpha-1/2) on [-1,1].
inline double gegenbauer_norm2(int n, double alpha) {
    const double log_ratio = special_fn::log_gamma(n + 2.0 * alpha).value - special_fn::log_gamma(n + 1.0).value;
    return std::numbers::pi * std::pow(2.0, 1.0 - 2.0 * alpha) * std::exp(log_ratio) /
           ((n + alpha) * std::pow(special_fn::gamma(alpha), 2));
}

/// L2(S^{m-1})-normalised zonal harmonic of the given degree at t = cos(theta).
inline double zonal_value(int degree, int m, double t) {
    check_degree(degree, m);
    if (m == 2) {
        const double theta = std::acos(std::clamp(t, -1.0, 1.0));
        return degree == 0 ? 1.0 / std::sqrt(2.0 * std::numbers::pi)
                           : std::cos(degree * theta) / std::sqrt(std::numbers::pi);
    }
    const double alpha = (m - 2) / 2.0;
    return gegenbauer(degree, alpha, t).value / std::sqrt(sphere_volume(m - 1) * gegenbauer_norm2(degree, alpha));
}

enum class Representation { zonal, fourier, spherical };
enum class Phase { cos, sin };

/// One unit-norm basis function on S^{m-1}.
struct AngularFunction {
    Representation representation = Representation::zonal;
    int degree = 0;
    int m = 3;
    Phase phase = Phase::cos;  ///< fourier only
    int order = 0;             ///< spherical only, in [-degree, degree]

    static AngularFunction zonal(int degree, int m) {
        check_degree(degree, m);
        return {Representation::zonal, degree, m, Phase::cos, 0};
    }
    static AngularFunction fourier(int frequency, Phase phase) {
        check_degree(frequency, 2);
        if (frequency == 0 && phase == Phase::sin) throw PreconditionError("sin phase needs frequency >= 1");
        return {Representation::fourier, frequency, 2, phase, 0};
    }
    static AngularFunction spherical(int degree, int order) {
        check_degree(degree, 3);
        if (std::abs(order) > degree) throw PreconditionError("spherical harmonic order exceeds degree");
        return {Representation::spherical, degree, 3, Phase::cos, order};
    }
};

/// Evaluates f at polar angle theta (and azimuth phi for the m = 3 full basis).
inline double evaluate_angular(const AngularFunction& f, double theta, double phi = 0.0) {
    constexpr double pi = std::numbers::pi;
    if (!std::isfinite(theta)) throw DomainError("evaluate_angular: non-finite angle");
    switch (f.representation) {
    case Representation::fourier: {
        if (theta < 0.0 || theta >= 2.0 * pi) throw DomainError("evaluate_angular: m = 2 angle must lie in [0, 2pi)");
        if (f.degree == 0) return 1.0 / std::sqrt(2.0 * pi);
        const double v = f.phase == Phase::cos ? std::cos(f.degree * theta) : std::sin(f.degree * theta);
        return v / std::sqrt(pi);
    }
    case Representation::zonal:
        if (f.m == 2) {
            if (theta < 0.0 || theta >= 2.0 * pi) throw DomainError("evaluate_angular: m = 2 angle must lie in [0, 2pi)");
        } else if (theta < 0.0 || theta > pi) {
            throw DomainError("evaluate_angular: polar angle must lie in [0, pi]");
        }
        return zonal_value(f.degree, f.m, std::cos(theta));
    case Representation::spherical: {
        if (theta < 0.0 || theta > pi) throw DomainError("evaluate_angular: polar angle must lie in [0, pi]");
        if (phi < 0.0 || phi >= 2.0 * pi) throw DomainError("evaluate_angular: azimuth must lie in [0, 2pi)");
        const unsigned l = f.degree, k = std::abs(f.order);
        const double log_fact = std::lgamma(l - k + 1.0) - std::lgamma(l + k + 1.0);
        const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * pi) * std::exp(log_fact));
        const double p = std::assoc_legendre(l, k, std::cos(theta));
        if (f.order == 0) return norm * p;
        const double az = f.order > 0 ? std::cos(k * phi) : std::sin(k * phi);
        return std::numbers::sqrt2 * norm * p * az;
    }
    }
    return 0.0;
}

/// Gauss nodes in t = cos(theta); weights include the S^{m-2} factor so that
/// sum w_i f(t_i) integrates a zonal f over S^{m-1}.
struct GaussTable {
    int m;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussTable build_gauss_table(int m, int n) {
    GaussTable g{m, std::vector<double>(n), std::vector<double>(n)};
    constexpr double pi = std::numbers::pi;
    if (m == 2) {
        for (int i = 0; i < n; ++i) {
            g.nodes[i] = std::cos((2.0 * i + 1.0) * pi / (2.0 * n));
            g.weights[i] = 2.0 * pi / n;
        }
        return g;
    }
    const double alpha = (m - 2) / 2.0;
    // Bracket sign changes on a fine grid in theta, then polish with Newton.
    const int grid = 16 * n + 64;
    int found = 0;
    double prev_t = 1.0, prev_v = gegenbauer(n, alpha, 1.0).value;
    for (int j = 1; j <= grid && found < n; ++j) {
        const double t = std::cos(pi * j / grid);
        const double v = gegenbauer(n, alpha, t).value;
        if (v == 0.0 || (v < 0) != (prev_v < 0)) {
            double lo = t, hi = prev_t, x = 0.5 * (lo + hi);
            for (int it = 0; it < 100; ++it) {
                const PolyValue pv = gegenbauer(n, alpha, x);
                if (pv.value == 0.0) break;
                if ((pv.value < 0) == (gegenbauer(n, alpha, lo).value < 0)) lo = x; else hi = x;
                double nx = x - pv.value / pv.derivative;
                if (!(nx > std::min(lo, hi) && nx < std::max(lo, hi))) nx = 0.5 * (lo + hi);
                if (std::abs(nx - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
                    x = nx;
                    break;
                }
                x = nx;
            }
            g.nodes[found++] = x;
        }
        prev_t = t;
        prev_v = v;
    }
    if (found != n)
        throw AccuracyError("gauss_table: located " + std::to_string(found) + " of " + std::to_string(n) + " nodes");
    // Christoffel numbers from the orthonormal polynomials.
    std::vector<double> inv_norm(n);
    for (int k = 0; k < n; ++k) inv_norm[k] = 1.0 / gegenbauer_norm2(k, alpha);
    const double omega = sphere_volume(m - 1);
    for (int i = 0; i < n; ++i) {
        double c0 = 1.0, c1 = 2.0 * alpha * g.nodes[i];
        double s = c0 * c0 * inv_norm[0];
        for (int k = 1; k < n; ++k) {
            s += c1 * c1 * inv_norm[k];
            const double c2 = (2.0 * (k + alpha) * g.nodes[i] * c1 - (k + 2.0 * alpha - 1.0) * c0) / (k + 1.0);
            c0 = c1;
            c1 = c2;
        }
        g.weights[i] = omega / s;
    }
    return g;
}

}  // namespace detail

/// Cached n-point table for dimension m; built once, shared read-only.
inline std::shared_ptr<const GaussTable> gauss_table(int m, int n) {
    if (m < 2 || n < 1) throw PreconditionError("gauss_table: need m >= 2 and n >= 1");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const GaussTable>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({m, n}); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const GaussTable>(detail::build_gauss_table(m, n));
    std::lock_guard lock(mu);
    return cache.emplace(std::pair{m, n}, table).first->second;
}

using CoefficientMap = std::map<int, double>;
/// A trace given either by its coefficients or as a zonal function of the polar angle.
using TraceSpec = std::variant<CoefficientMap, std::function<double(double)>>;

namespace detail {

inline CoefficientMap project(const std::function<double(double)>& g, int m, int max_degree, int n) {
    const auto table = gauss_table(m, n);
    std::vector<double> gv(n);
    for (int i = 0; i < n; ++i) gv[i] = g(std::acos(table->nodes[i]));
    CoefficientMap out;
    std::vector<double> terms(n);
    for (int l = 0; l <= max_degree; ++l) {
        for (int i = 0; i < n; ++i) terms[i] = table->weights[i] * gv[i] * zonal_value(l, m, table->nodes[i]);
        out[l] = pairwise_sum(terms);
    }
    return out;
}

}  // namespace detail

/// Zonal Fourier coefficients <g, phi_l> for l <= max_degree.
inline CoefficientMap fourier_coefficients(const TraceSpec& g, int m, int max_degree) {
    if (max_degree < 0) throw PreconditionError("fourier_coefficients: max_degree must be non-negative");
    check_degree(0, m);
    if (const auto* c = std::get_if<CoefficientMap>(&g)) return *c;
    const auto& fn = std::get<std::function<double(double)>>(g);
    const int n = 2 * max_degree + 8;
    CoefficientMap coarse = detail::project(fn, m, max_degree, n);
    CoefficientMap fine = detail::project(fn, m, max_degree, 2 * n);
    double scale = 1.0;
    for (const auto& [l, v] : fine) scale = std::max(scale, std::abs(v));
    for (const auto& [l, v] : fine)
        if (std::abs(v - coarse[l]) > 1e-8 * scale)
            throw AccuracyError("fourier_coefficients: quadrature unresolved at degree " + std::to_string(l));
    return fine;
}

/// Decay proxy for sum lambda_l^order C_l^2 < infinity: the terms must fall
/// faster than 1/l over the upper half of the supplied range.
inline bool sobolev_admissible(const CoefficientMap& coeffs, int m, int order) {
    double cmax = 0.0;
    for (const auto& [l, c] : coeffs) {
        if (!std::isfinite(c)) throw PreconditionError("sobolev_admissible: non-finite coefficient");
        cmax = std::max(cmax, std::abs(c));
    }
    std::vector<double> ls, terms;
    for (const auto& [l, c] : coeffs) {
        if (l < 1 || std::abs(c) <= 1e-14 * cmax) continue;
        ls.push_back(l);
        terms.push_back(std::pow(angular_eigenvalue(l, m), order) * c * c);
    }
    if (ls.size() < 4) return true;
    const std::size_t h = ls.size() / 2;
    const double slope = loglog_slope(std::span(ls).subspan(h), std::span(terms).subspan(h));
    return slope < -1.0;
}

}  // namespace drift_spectral::spherics
