#include "drift_spectral/radial.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drift_spectral;
using namespace drift_spectral::radial;
using spherics::make_mode;

namespace {

const std::vector<Rational> kLambdas = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2)};
const std::vector<int> kDims = {2, 3, 4, 6};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// 6th-order central differences of a scalar function.
struct Fd {
    double d1, d2;
};
template <class F>
Fd fd6(F f, double r, double h) {
    const double fm3 = f(r - 3 * h), fm2 = f(r - 2 * h), fm1 = f(r - h), f0 = f(r), fp1 = f(r + h), fp2 = f(r + 2 * h),
                 fp3 = f(r + 3 * h);
    return {(-fm3 + 9 * fm2 - 45 * fm1 + 45 * fp1 - 9 * fp2 + fp3) / (60 * h),
            (2 * fm3 - 27 * fm2 + 270 * fm1 - 490 * f0 + 270 * fp1 - 27 * fp2 + 2 * fp3) / (180 * h * h)};
}

}  // namespace

TEST(EigenParams, Trichotomy) {
    EXPECT_EQ(EigenParams(3, Rational(0)).trichotomy(), Trichotomy::integer_lambda);
    EXPECT_EQ(EigenParams(3, Rational(2)).trichotomy(), Trichotomy::integer_lambda);
    EXPECT_EQ(EigenParams(3, Rational(3, 2)).trichotomy(), Trichotomy::half_integer_lambda);
    EXPECT_EQ(EigenParams(3, Rational(2, 4)).trichotomy(), Trichotomy::half_integer_lambda);
    EXPECT_EQ(EigenParams(3, Rational(1, 4)).trichotomy(), Trichotomy::non_integer_2lambda);
    EXPECT_EQ(EigenParams(3, Rational(5, 3)).trichotomy(), Trichotomy::non_integer_2lambda);
    EXPECT_THROW(EigenParams(1, Rational(0)), PreconditionError);
    EXPECT_THROW(EigenParams(3, Rational(-1, 2)), PreconditionError);
}

TEST(EigenParams, ResonantDegrees) {
    EXPECT_EQ(resonant_degrees({4, Rational(1)}), (std::vector<int>{0, 2}));
    EXPECT_EQ(resonant_degrees({4, Rational(3, 2)}), (std::vector<int>{1, 3}));
    EXPECT_EQ(resonant_degrees({3, Rational(0)}), (std::vector<int>{0}));
    EXPECT_TRUE(resonant_degrees({3, Rational(1, 4)}).empty());
}

TEST(ModeSolution, ReferenceValues) {
    // 30-digit reference values of the unit-amplitude modes
    EXPECT_LT(rel(mode_solution(make_mode(2, 4), {4, Rational(1, 4)}, 1.0, 3.0), 0.033880687954398711769), 1e-12);
    EXPECT_LT(rel(mode_solution(make_mode(1, 3), {3, Rational(0)}, 1.0, 2.0), 0.20870917615781244888), 1e-12);
    EXPECT_LT(rel(mode_solution(make_mode(3, 3), {3, Rational(0)}, 1.0, 10.0), 67491237.112222155471), 1e-12);
    EXPECT_LT(rel(mode_solution(make_mode(0, 6), {6, Rational(3, 2)}, 1.0, 14.0), 118729469950.82833033), 1e-11);
    EXPECT_LT(rel(mode_solution(make_mode(7, 2), {2, Rational(1, 4)}, 1.0, 20.0), 1.3478404249939364261e40), 1e-11);
    EXPECT_LT(rel(mode_envelope(4, {6, Rational(3, 2)}, 25.0).value, 1.02158466869192820997), 1e-12);
}

TEST(ModeSolution, Errors) {
    EXPECT_THROW(mode_solution(make_mode(0, 4), {4, Rational(1)}, 1.0, 2.0), ResonanceError);
    EXPECT_THROW(mode_solution(make_mode(1, 4), {4, Rational(1, 2)}, 1.0, 2.0), ResonanceError);
    EXPECT_THROW(mode_solution(make_mode(1, 4), {4, Rational(0)}, 1.0, 0.0), DomainError);
    EXPECT_THROW(mode_solution(make_mode(1, 4), {4, Rational(0)}, 1.0, -1.0), DomainError);
}

TEST(ModeSolution, NormalisationApproachesAmplitude) {
    const EigenParams p(3, Rational(0));
    // N(r) - 1 at r = 10 is 0.04419 (30-digit reference); it falls like r^-2.
    EXPECT_NEAR(mode_envelope(1, p, 10.0).value - 1.0, 0.0441889781905930368, 1e-12);
    EXPECT_LT(std::abs(mode_envelope(1, p, 30.0).value - 1.0), 1e-2);
    EXPECT_NEAR(mode_solution(make_mode(1, 3), p, 2.5, 20.0) * std::exp(-100.0) * std::pow(20.0, 3), 2.5 * 1.0102328470730413458, 1e-12);
    for (int m : kDims)
        for (const Rational& lam : kLambdas) {
            const EigenParams q(m, lam);
            for (int l = 0; l <= 6; ++l) {
                if (is_resonant(l, q)) continue;
                const auto k = kummer_parameters(l, q);
                if (std::abs(k.a() * (1 + k.a() - k.b())) < 1e-12) continue;  // leading correction vanishes
                std::vector<double> rs, err;
                for (double r : linspace(12.0, 40.0, 8)) {
                    rs.push_back(r);
                    err.push_back(std::abs(mode_envelope(l, q, r).value - 1.0));
                }
                EXPECT_NEAR(loglog_slope(rs, err), -2.0, 0.4) << "m=" << m << " l=" << l;
            }
        }
}

TEST(ModeSolution, VanishesLikeRPowerAtOrigin) {
    for (int l = 1; l <= 5; ++l) {
        const EigenParams p(3, Rational(1, 4));
        const double f1 = mode_solution(make_mode(l, 3), p, 1.0, 1e-3);
        const double f2 = mode_solution(make_mode(l, 3), p, 1.0, 2e-3);
        EXPECT_NEAR(f2 / f1, std::pow(2.0, l), 1e-4 * std::pow(2.0, l));
        EXPECT_LT(std::abs(f1), 1e-2);
    }
}

TEST(ModeSolution, OdeResidualAcrossMatrix) {
    for (int m : kDims)
        for (const Rational& lam : kLambdas) {
            const EigenParams p(m, lam);
            const double lv = p.lambda_value();
            for (int l = 0; l <= 10; ++l) {
                if (is_resonant(l, p)) continue;
                const auto mode = make_mode(l, m);
                for (double r : logspace(0.2, 12.0, 50)) {
                    auto f = [&](double s) { return mode_solution(mode, p, 1.0, s); };
                    const double h = 1e-3 * r;
                    const Fd d = fd6(f, r, h);
                    const double v = f(r);
                    const double c1 = (m - 1.0) / r - r / 2.0, c0 = mode.eigenvalue / (r * r) - lv;
                    const double res = d.d2 + c1 * d.d1 - c0 * v;
                    const double scale = std::abs(d.d2) + std::abs(c1 * d.d1) + std::abs(c0 * v);
                    EXPECT_LE(std::abs(res), 1e-6 * scale) << "m=" << m << " lambda=" << lv << " l=" << l << " r=" << r;
                }
            }
        }
}

TEST(ModeSolution, AnalyticDerivativeMatchesDifferences) {
    const EigenParams p(4, Rational(1, 4));
    for (double r : {0.5, 3.0, 9.0, 13.5, 20.0}) {
        auto f = [&](double s) { return mode_solution(make_mode(3, 4), p, 1.0, s); };
        const RadialValue v = mode_solution_with_derivative(make_mode(3, 4), p, 1.0, r);
        EXPECT_LT(rel(fd6(f, r, 1e-4 * r).d1, v.derivative), 1e-9) << r;
    }
}

TEST(ModeSolution, BranchesAgreeAroundSwitch) {
    for (int m : kDims)
        for (const Rational& lam : kLambdas) {
            const EigenParams p(m, lam);
            for (int l = 0; l <= 10; ++l) {
                if (is_resonant(l, p)) continue;
                const double xs = switch_point(l, p);
                EXPECT_GE(xs, 40.0);
                for (double f : {1.0, 1.05, 1.2, 1.5}) {
                    const double r = 2.0 * std::sqrt(f * xs);
                    const double s = mode_envelope(l, p, r, Regime::series).value;
                    const double a = mode_envelope(l, p, r, Regime::asymptotic).value;
                    EXPECT_LE(std::abs(s - a), 1e-9 * std::abs(s)) << "m=" << m << " l=" << l << " x=" << f * xs;
                }
            }
        }
}

TEST(ResonantMode, Examples) {
    EXPECT_DOUBLE_EQ(resonant_mode_solution(make_mode(0, 4), {4, Rational(1)}, 1.0, 2.0), 0.5);
    EXPECT_DOUBLE_EQ(resonant_mode_solution(make_mode(1, 3), {3, Rational(1, 2)}, 3.0, 2.0), 6.0);
    EXPECT_DOUBLE_EQ(resonant_mode_solution(make_mode(2, 4), {4, Rational(2)}, 1.0, 2.0), 3.0);
    EXPECT_THROW(resonant_mode_solution(make_mode(1, 4), {4, Rational(1)}, 1.0, 2.0), PreconditionError);
}

TEST(U0, Examples) {
    EXPECT_EQ(u0_harmonic(3, 1.0), 0.0);
    const double h = 1e-5;
    const double fd = (u0_harmonic(3, 2 + h) - u0_harmonic(3, 2 - h)) / (2 * h);
    EXPECT_NEAR(fd, 0.5 * std::exp(1.0) / 4.0, 1e-8);
    // 30-digit quadrature reference values for m = 3
    EXPECT_LT(rel(u0_harmonic(3, 0.5), -0.56732157234370013969), 1e-12);
    EXPECT_LT(rel(u0_harmonic(3, 2.0), 0.42127457209088912577), 1e-12);
    EXPECT_LT(rel(u0_harmonic(3, 5.0), 6.3483512181582976582), 1e-12);
    EXPECT_LT(rel(u0_harmonic(3, 8.0), 19318.779282379397701), 1e-12);
    EXPECT_LT(rel(u0_harmonic(3, 12.0), 2606906096034.6267054), 1e-12);
    EXPECT_LT(rel(u0_harmonic(3, 16.0), 1.5594067558123327257e24), 1e-12);
}

TEST(U0, ScaledFormTendsToOneLikeInverseSquare) {
    // scaled u0 is 1.1131 at r = 8 and 1.0244 at r = 16
    EXPECT_NEAR(u0_harmonic_scaled(3, 8.0), 1.11310960738, 1e-10);
    EXPECT_NEAR(u0_harmonic_scaled(3, 16.0), 1.02440695307, 1e-10);
    std::vector<double> rs, err;
    for (double r : linspace(16.0, 40.0, 7)) {
        rs.push_back(r);
        err.push_back(u0_harmonic_scaled(3, r) - 1.0);
    }
    EXPECT_NEAR(loglog_slope(rs, err), -2.0, 0.4);
}

TEST(SecondSolution, LambdaZeroIsU0) {
    const EigenParams p(5, Rational(0));
    for (double r : {0.5, 1.0, 3.0, 9.0}) EXPECT_EQ(second_solution(p, r), u0_harmonic(5, r));
}

TEST(SecondSolution, MatchesTricomiReference) {
    // p(r) = 4^lambda U(-lambda, m/2, r^2/4), 30-digit reference values
    struct Case {
        int m;
        Rational lam;
        std::vector<double> want;
    };
    const std::vector<double> radii = {0.5, 1, 2, 3, 5, 10};
    const std::vector<Case> cases = {
        {3, Rational(1, 4), {-0.82660742226947895866, 0.36125859096030485185, 1.1654629462796582267, 1.5924808686263080099, 2.1698962328096781138, 3.1386470693827038762}},
        {3, Rational(1, 2), {-3.5, -1, 1, 2.3333333333333333333, 4.6, 9.8}},
        {2, Rational(1, 4), {0.39535246129087348039, 0.83636315291613532709, 1.3402110345362026643, 1.6883402879917698996, 2.2145844618074923699, 3.1544575210752748547}},
        {4, Rational(3, 2), {68.763688811204129729, 13.922146448632404057, -9.9257639699451988832, -10.240362944868944887, 54.558378078671598611, 852.25744534697199835}},
    };
    for (const Case& c : cases) {
        const EigenParams p(c.m, c.lam);
        for (std::size_t i = 0; i < radii.size(); ++i)
            EXPECT_LT(rel(second_solution(p, radii[i]), c.want[i]), 1e-10) << c.m << " r=" << radii[i];
    }
}

TEST(SecondSolution, PowerGrowthForNonInteger) {
    const EigenParams p(3, Rational(1, 4));
    EXPECT_NEAR(second_solution_scaled(p, 10.0), 1.0, 1e-2);
    EXPECT_NEAR(second_solution(p, 10.0) / std::pow(10.0, 0.5), second_solution_scaled(p, 10.0), 1e-12);
}

TEST(SecondSolution, IntegerLambdaGrowth) {
    const EigenParams p(4, Rational(1));
    const auto s = second_solution_for(p);
    EXPECT_NEAR(s->largest_node(), std::sqrt(8.0), 0.01);
    EXPECT_NEAR(s->r_ref(), std::sqrt(8.0) + 1.0, 0.01);
    std::vector<double> rs, err;
    for (double r : linspace(10.0, 30.0, 6)) {
        rs.push_back(r);
        err.push_back(std::abs(second_solution_scaled(p, r) - 1.0));
    }
    EXPECT_NEAR(loglog_slope(rs, err), -2.0, 0.4);
}

TEST(SecondSolution, WronskianFollowsAbel) {
    struct Case {
        int m;
        Rational lam;
        double lo, hi;
    };
    for (const Case& c : {Case{4, Rational(1), 0.5, 6.0}, Case{3, Rational(1, 4), 0.5, 10.0}, Case{6, Rational(3, 2), 0.5, 10.0},
                          Case{2, Rational(1, 2), 0.5, 10.0}, Case{3, Rational(0), 0.5, 10.0}}) {
        const EigenParams p(c.m, c.lam);
        std::vector<double> kappa;
        for (double r : linspace(c.lo, c.hi, 23)) {
            const RadialValue f = degree0_first_solution(p, r), g = second_solution_with_derivative(p, r);
            const double w = f.value * g.derivative - f.derivative * g.value;
            kappa.push_back(w / (std::exp(r * r / 4) * std::pow(r, 1.0 - c.m)));
        }
        for (double k : kappa) EXPECT_LE(std::abs(k - kappa.front()), 1e-8 * std::abs(kappa.front())) << c.m;
        EXPECT_NE(kappa.front(), 0.0);
    }
}

TEST(SecondSolution, RefusesToCrossNodes) {
    const EigenParams p(4, Rational(1));
    const auto s = second_solution_for(p);
    EXPECT_THROW(s->reduction_integral(2.0, 4.0), PathError);
    EXPECT_NO_THROW(s->reduction_integral(4.0, 5.0));
    EXPECT_THROW(second_solution(p, 0.0), DomainError);
}

TEST(RadialMode, Invariants) {
    const EigenParams p(4, Rational(1));
    EXPECT_THROW(RadialMode::make(0, p, RadialKind::kummer_regular, 1.0), ResonanceError);
    EXPECT_THROW(RadialMode::make(1, p, RadialKind::resonant_polynomial, 1.0), PreconditionError);
    EXPECT_THROW(RadialMode::make(1, p, RadialKind::second_solution, 1.0), PreconditionError);
    const RadialMode q = RadialMode::make(0, p, RadialKind::resonant_polynomial, 2.0);
    EXPECT_DOUBLE_EQ(q.evaluate(2.0).value, 1.0);
    const RadialMode k = RadialMode::make(1, p, RadialKind::kummer_regular, 3.0);
    EXPECT_NEAR(k.scaled(7.0), k.evaluate(7.0).value * std::exp(-49.0 / 4) * std::pow(7.0, 6.0), 1e-12 * std::abs(k.scaled(7.0)));
}
