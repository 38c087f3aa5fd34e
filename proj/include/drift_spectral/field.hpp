#pragma once

#include "drift_spectral/errors.hpp"
#include "drift_spectral/numeric.hpp"
#include "drift_spectral/radial.hpp"
#include "drift_spectral/spherics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace drift_spectral::field {

using radial::EigenParams;
using radial::RadialKind;
using radial::RadialMode;
using radial::RadialValue;
using spherics::CoefficientMap;

enum class CoefficientKind { amplitude, resonant };

/// One degree of a field: either the asymptotic amplitude of a growing mode or
/// the coefficient of a resonant polynomial.
struct FieldMode {
    int degree;
    CoefficientKind kind;
    double value;
    bool operator==(const FieldMode&) const = default;
};

/// One separated term: radial factor times either a zonal harmonic or 1.
struct Component {
    int degree;
    double angular_eigenvalue;
    bool zonal;  ///< false for purely radial terms
    std::function<RadialValue(double)> radial;
};

class Field {
public:
    Field(EigenParams params, std::vector<FieldMode> modes, std::optional<double> radial_extra = std::nullopt,
          double constant_offset = 0.0)
        : params_(params), modes_(std::move(modes)), radial_extra_(radial_extra), constant_offset_(constant_offset) {
        std::sort(modes_.begin(), modes_.end(), [](const FieldMode& a, const FieldMode& b) { return a.degree < b.degree; });
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            const FieldMode& f = modes_[i];
            if (i > 0 && modes_[i - 1].degree == f.degree)
                throw PreconditionError("Field: degree " + std::to_string(f.degree) + " appears twice");
            if (!std::isfinite(f.value)) throw PreconditionError("Field: non-finite coefficient");
            radial_modes_.push_back(make_radial(f));
        }
        if (constant_offset_ != 0.0 && params_.lambda().numerator() != 0)
            throw PreconditionError("Field: a constant offset solves the equation only for lambda = 0");
    }

    const EigenParams& params() const { return params_; }
    const std::vector<FieldMode>& modes() const { return modes_; }
    const std::optional<double>& radial_extra() const { return radial_extra_; }
    double constant_offset() const { return constant_offset_; }
    int max_degree() const { return modes_.empty() ? 0 : modes_.back().degree; }

    /// u(r, theta) for the zonal representation.
    double evaluate(double r, double theta) const {
        check_point(r, theta);
        std::vector<double> terms;
        terms.reserve(modes_.size() + 2);
        const double t = std::cos(theta);
        for (const RadialMode& rm : radial_modes_)
            terms.push_back(rm.evaluate(r).value * spherics::zonal_value(rm.mode.degree, params_.m(), t));
        if (radial_extra_) terms.push_back(*radial_extra_ * radial::second_solution(params_, r));
        if (constant_offset_ != 0.0) terms.push_back(constant_offset_);
        return pairwise_sum(terms);
    }

    /// u(r, theta) e^{-r^2/4} r^{m+2 lambda}; finite where u itself overflows.
    double evaluate_scaled(double r, double theta) const {
        check_point(r, theta);
        const std::vector<double> radial = scaled_radial(r);
        return combine(radial, std::cos(theta));
    }

    /// Scaled radial factors in degree order, followed by the radial terms.
    std::vector<double> scaled_radial(double r) const {
        if (!(r > 0)) throw DomainError("Field: radius must be positive");
        std::vector<double> out;
        for (const RadialMode& rm : radial_modes_) out.push_back(rm.scaled(r));
        const double x = r * r / 4.0, k = params_.growth_power();
        if (radial_extra_) out.push_back(RadialMode::make(0, params_, RadialKind::second_solution, *radial_extra_).scaled(r));
        if (constant_offset_ != 0.0) out.push_back(constant_offset_ * std::exp(-x + k * std::log(r)));
        return out;
    }

    /// Combines factors from scaled_radial with the angular part at t = cos(theta).
    double combine(const std::vector<double>& radial, double t) const {
        std::vector<double> terms(radial.size());
        for (std::size_t i = 0; i < radial.size(); ++i)
            terms[i] = i < radial_modes_.size() ? radial[i] * spherics::zonal_value(radial_modes_[i].mode.degree, params_.m(), t)
                                                : radial[i];
        return pairwise_sum(terms);
    }

    std::vector<Component> components() const {
        std::vector<Component> out;
        for (const RadialMode& rm : radial_modes_)
            out.push_back({rm.mode.degree, rm.mode.eigenvalue, true, [rm](double r) { return rm.evaluate(r); }});
        if (radial_extra_) {
            const double c = *radial_extra_;
            const EigenParams p = params_;
            out.push_back({0, 0.0, false, [c, p](double r) {
                               const RadialValue v = radial::second_solution_with_derivative(p, r);
                               return RadialValue{c * v.value, c * v.derivative};
                           }});
        }
        if (constant_offset_ != 0.0) {
            const double c = constant_offset_;
            out.push_back({0, 0.0, false, [c](double) { return RadialValue{c, 0.0}; }});
        }
        return out;
    }

    /// Sum of two fields with the same parameters; coefficients of equal kind add.
    Field operator+(const Field& o) const {
        if (!(params_ == o.params_)) throw NotComparableError("Field: cannot add fields with different parameters");
        std::map<int, FieldMode> merged;
        for (const FieldMode& f : modes_) merged[f.degree] = f;
        for (const FieldMode& f : o.modes_) {
            auto it = merged.find(f.degree);
            if (it == merged.end()) {
                merged[f.degree] = f;
            } else if (it->second.kind != f.kind) {
                throw NotComparableError("Field: degree " + std::to_string(f.degree) + " carries different coefficient kinds");
            } else {
                it->second.value += f.value;
            }
        }
        std::vector<FieldMode> modes;
        for (const auto& [d, f] : merged) modes.push_back(f);
        std::optional<double> extra = radial_extra_;
        if (o.radial_extra_) extra = extra.value_or(0.0) + *o.radial_extra_;
        return Field(params_, modes, extra, constant_offset_ + o.constant_offset_);
    }

private:
    RadialMode make_radial(const FieldMode& f) const {
        const bool res = radial::is_resonant(f.degree, params_);
        if (f.kind == CoefficientKind::resonant) {
            if (!res) throw PreconditionError("Field: degree " + std::to_string(f.degree) + " is not resonant");
            return RadialMode::make(f.degree, params_, RadialKind::resonant_polynomial, f.value);
        }
        if (!res) return RadialMode::make(f.degree, params_, RadialKind::kummer_regular, f.value);
        if (f.degree == 0) return RadialMode::make(0, params_, RadialKind::second_solution, f.value);
        throw AdmissibilityError("Field: resonant degree " + std::to_string(f.degree) + " cannot carry a growing amplitude",
                                 {f.degree});
    }

    void check_point(double r, double theta) const {
        if (!(r > 0)) throw DomainError("Field: radius must be positive");
        const double hi = params_.m() == 2 ? 2.0 * std::numbers::pi : std::numbers::pi;
        if (!(theta >= 0.0) || theta > hi || (params_.m() == 2 && theta == hi))
            throw DomainError("Field: angle out of range");
    }

    EigenParams params_;
    std::vector<FieldMode> modes_;
    std::vector<RadialMode> radial_modes_;
    std::optional<double> radial_extra_;
    double constant_offset_;
};

/// Degrees whose trace coefficient must vanish for these parameters.
inline std::vector<int> forbidden_trace_degrees(const EigenParams& p) {
    std::vector<int> out;
    for (int d : radial::resonant_degrees(p))
        if (!(d == 0 && p.lambda().numerator() == 0)) out.push_back(d);
    return out;
}

/// Field whose growing-mode amplitudes equal the trace coefficients, so that
/// u(r, .) / u0(r) tends to g.
inline Field construct_from_trace(const CoefficientMap& g, const EigenParams& p) {
    std::vector<int> bad;
    const std::vector<int> forbidden = forbidden_trace_degrees(p);
    for (const auto& [l, c] : g) {
        if (l < 0) throw PreconditionError("construct_from_trace: negative degree");
        if (c != 0.0 && std::find(forbidden.begin(), forbidden.end(), l) != forbidden.end()) bad.push_back(l);
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "trace has mass at resonant degree" << (bad.size() > 1 ? "s" : "");
        for (std::size_t i = 0; i < bad.size(); ++i) msg << (i ? ", " : " ") << bad[i];
        msg << "; these coefficients must be zero for lambda = " << p.lambda().numerator();
        if (p.lambda().denominator() != 1) msg << "/" << p.lambda().denominator();
        throw AdmissibilityError(msg.str(), bad);
    }
    const int order = (p.m() + 1) / 2 + 2;
    if (!spherics::sobolev_admissible(g, p.m(), order))
        throw RegularityError("construct_from_trace: coefficients do not decay like an H^" + std::to_string(order) +
                              " function");
    std::vector<FieldMode> modes;
    for (const auto& [l, c] : g)
        if (c != 0.0) modes.push_back({l, CoefficientKind::amplitude, c});
    return Field(p, modes);
}

struct TraceReport {
    std::vector<double> radii;
    std::vector<double> sup_errors;
    double fitted_slope;
};

/// sup over a 256-point polar grid of |u/u0 - g| at each radius.
inline TraceReport trace_convergence(const Field& f, const CoefficientMap& g, const std::vector<double>& radii) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] >= 8.0)) throw PreconditionError("trace_convergence: radii must be at least 8");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw PreconditionError("trace_convergence: radii must increase");
    }
    const int m = f.params().m();
    constexpr int n_theta = 256;
    std::vector<double> ts(n_theta), gv(n_theta);
    for (int j = 0; j < n_theta; ++j) {
        ts[j] = std::cos(std::numbers::pi * j / (n_theta - 1));
        std::vector<double> terms;
        for (const auto& [l, c] : g) terms.push_back(c * spherics::zonal_value(l, m, ts[j]));
        gv[j] = pairwise_sum(terms);
    }
    TraceReport rep{radii, {}, std::numeric_limits<double>::quiet_NaN()};
    for (double r : radii) {
        const std::vector<double> rad = f.scaled_radial(r);
        const double u0 = f.params().lambda().numerator() == 0 ? radial::u0_harmonic_scaled(m, r) : 1.0;
        double sup = 0.0;
        for (int j = 0; j < n_theta; ++j) sup = std::max(sup, std::abs(f.combine(rad, ts[j]) / u0 - gv[j]));
        rep.sup_errors.push_back(sup);
    }
    std::size_t positive = 0;
    for (double e : rep.sup_errors) positive += e > 0;
    if (positive >= 2) rep.fitted_slope = loglog_slope(rep.radii, rep.sup_errors);
    return rep;
}

enum class GapClass { constant, pure_radial_p, polynomial_plus_l, polynomial_plus_p };

inline const char* to_string(GapClass c) {
    switch (c) {
    case GapClass::constant: return "constant";
    case GapClass::pure_radial_p: return "pure radial p(r)";
    case GapClass::polynomial_plus_l: return "polynomial q(r,theta) + l(r)";
    case GapClass::polynomial_plus_p: return "polynomial q(r,theta) + p(r)";
    }
    return "";
}

/// Structure of f1 - f2 for two fields with the same growing amplitudes.
struct Gap {
    GapClass kind;
    double constant = 0.0;                   ///< constant part (lambda = 0)
    double radial_coefficient = 0.0;         ///< coefficient of p(r) or l(r)
    std::map<int, double> polynomial;        ///< resonant coefficients by degree
    std::string description;
};

inline Gap uniqueness_gap(const Field& f1, const Field& f2) {
    if (!(f1.params() == f2.params())) throw NotComparableError("uniqueness_gap: parameters differ");
    std::map<int, double> a1, a2, poly;
    for (const FieldMode& f : f1.modes()) (f.kind == CoefficientKind::amplitude ? a1 : poly)[f.degree] += f.value;
    for (const FieldMode& f : f2.modes()) {
        if (f.kind == CoefficientKind::amplitude)
            a2[f.degree] += f.value;
        else
            poly[f.degree] -= f.value;
    }
    if (a1 != a2) throw NotComparableError("uniqueness_gap: growing-mode amplitudes differ");
    for (auto it = poly.begin(); it != poly.end();) it = it->second == 0.0 ? poly.erase(it) : std::next(it);

    const EigenParams& p = f1.params();
    Gap gap{};
    gap.radial_coefficient = f1.radial_extra().value_or(0.0) - f2.radial_extra().value_or(0.0);
    gap.constant = f1.constant_offset() - f2.constant_offset();
    std::ostringstream d;
    if (p.lambda().numerator() == 0) {
        // degree-0 resonant coefficients are constants times phi_0
        if (auto it = poly.find(0); it != poly.end()) {
            gap.constant += it->second * spherics::zonal_value(0, p.m(), 1.0);
            poly.erase(it);
        }
        if (gap.radial_coefficient == 0.0) {
            gap.kind = GapClass::constant;
            d << "constant " << gap.constant;
        } else {
            gap.kind = GapClass::polynomial_plus_l;
            gap.polynomial[0] = gap.constant;
            d << "constant " << gap.constant << " + " << gap.radial_coefficient << " u0(r)";
        }
    } else if (p.trichotomy() == radial::Trichotomy::integer_lambda) {
        gap.kind = GapClass::polynomial_plus_l;
        gap.polynomial = poly;
        d << "polynomial part on " << poly.size() << " degree(s) + " << gap.radial_coefficient << " l(r)";
    } else if (poly.empty()) {
        gap.kind = GapClass::pure_radial_p;
        d << "pure radial " << gap.radial_coefficient << " p(r)";
    } else {
        gap.kind = GapClass::polynomial_plus_p;
        gap.polynomial = poly;
        d << "polynomial part on " << poly.size() << " degree(s) + " << gap.radial_coefficient << " p(r)";
    }
    gap.description = d.str();
    return gap;
}

/// Per-degree coefficients <u(r_i, .), phi_l> at sample radii r_i.
struct LiouvilleSamples {
    std::vector<double> radii;
    std::map<int, std::vector<double>> coefficients;
};

struct DegreeDiagnostic {
    int degree;
    std::vector<double> envelope;  ///< |c_l(r_i)| e^{-r_i^2/4} r_i^{m+2 lambda}
    double slope;                  ///< fitted log-log slope, NaN if the degree is identically zero
    bool bounded;
};

struct LiouvilleReport {
    std::string verdict;
    std::optional<int> violating_degree;
    std::vector<DegreeDiagnostic> degrees;
};

inline std::string rigid_verdict(const EigenParams& p) {
    if (p.lambda().numerator() == 0) return "constant";
    const Rational two = p.lambda() * 2;
    if (two.denominator() == 1) return "polynomial of degree " + std::to_string(two.numerator());
    return "p(r) radial";
}

/// Mode-wise growth test: a degree is bounded when its Gaussian envelope decays
/// at least like r^-epsilon across the samples.
inline LiouvilleReport liouville_classify(const LiouvilleSamples& s, const EigenParams& p, double epsilon) {
    if (!(epsilon > 0)) throw PreconditionError("liouville_classify: epsilon must be positive");
    const std::size_t n = s.radii.size();
    if (n < 3) throw PreconditionError("liouville_classify: at least 3 radii are required");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.radii[i] > 0) || !std::isfinite(s.radii[i])) throw DataError("liouville_classify: radii must be positive");
        if (i > 0 && !(s.radii[i] > s.radii[i - 1])) throw DataError("liouville_classify: radii must increase");
    }
    if (s.radii.back() < 2.0 * s.radii.front())
        throw PreconditionError("liouville_classify: radii must span a factor of at least 2");
    const double k = p.growth_power();
    LiouvilleReport rep;
    std::vector<double> floor(n, 0.0);
    for (const auto& [l, c] : s.coefficients) {
        if (l < 0) throw DataError("liouville_classify: negative degree");
        if (c.size() != n)
            throw DataError("liouville_classify: degree " + std::to_string(l) + " has " + std::to_string(c.size()) +
                            " samples for " + std::to_string(n) + " radii");
        DegreeDiagnostic d{l, {}, std::numeric_limits<double>::quiet_NaN(), true};
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(c[i])) throw DataError("liouville_classify: non-finite coefficient");
            const double r = s.radii[i];
            d.envelope.push_back(std::abs(c[i]) * std::exp(-r * r / 4.0 + k * std::log(r)));
            floor[i] = std::max(floor[i], 1e-12 * d.envelope.back());
        }
        rep.degrees.push_back(std::move(d));
    }
    // Extraction leaks about 1e-16 of the dominant degree into the others;
    // envelopes under the per-radius floor count as zero.
    for (DegreeDiagnostic& d : rep.degrees) {
        std::vector<double> rs, env;
        for (std::size_t i = 0; i < n; ++i)
            if (d.envelope[i] > floor[i]) {
                rs.push_back(s.radii[i]);
                env.push_back(d.envelope[i]);
            }
        if (rs.size() >= 2) {
            d.slope = loglog_slope(rs, env);
            d.bounded = d.slope <= -epsilon;
        }
        if (!d.bounded && !rep.violating_degree) rep.violating_degree = d.degree;
    }
    rep.verdict = rep.violating_degree ? "bound violated: degree " + std::to_string(*rep.violating_degree) : rigid_verdict(p);
    return rep;
}

/// Extracts <u(r, .), phi_l> by quadrature for l <= max_degree.
inline LiouvilleSamples sample_coefficients(const Field& f, const std::vector<double>& radii, int max_degree) {
    const int m = f.params().m();
    const int n = 2 * std::max(max_degree, f.max_degree()) + 8;
    const auto table = spherics::gauss_table(m, n);
    LiouvilleSamples s{radii, {}};
    for (int l = 0; l <= max_degree; ++l) s.coefficients[l].resize(radii.size());
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::vector<double> u(n);
        for (int j = 0; j < n; ++j) u[j] = f.evaluate(radii[i], std::acos(table->nodes[j]));
        for (int l = 0; l <= max_degree; ++l) {
            for (int j = 0; j < n; ++j) terms[j] = table->weights[j] * u[j] * spherics::zonal_value(l, m, table->nodes[j]);
            s.coefficients[l][i] = pairwise_sum(terms);
        }
    }
    return s;
}

}  // namespace drift_spectral::field
