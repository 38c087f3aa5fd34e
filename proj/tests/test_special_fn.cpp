#include "drift_spectral/special_fn.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace drift_spectral;
using namespace drift_spectral::special_fn;
namespace sf = drift_spectral::special_fn;

TEST(Gamma, KnownValues) {
    EXPECT_NEAR(sf::gamma(5.0), 24.0, 24.0 * 1e-13);
    EXPECT_NEAR(sf::gamma(0.5), 1.7724538509055160, 1e-13);
    EXPECT_NEAR(sf::gamma(-0.5), -3.5449077018110320, 1e-13);
    EXPECT_NEAR(sf::gamma(170.5) / 5.5620924145599996107e305, 1.0, 1e-13);
    EXPECT_NEAR(sf::gamma(-3.7) / 0.25164399590242268129, 1.0, 1e-13);
}

TEST(Gamma, PolesAndOverflow) {
    EXPECT_THROW(sf::gamma(0.0), DomainError);
    EXPECT_THROW(sf::gamma(-3.0), DomainError);
    EXPECT_THROW(sf::gamma(172.0), OverflowError);
    try {
        sf::gamma(-2.0);
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("-2"), std::string::npos);
    }
}

TEST(Gamma, Recurrence) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double g1 = sf::gamma(x + 1);
        EXPECT_LE(std::abs(g1 - x * sf::gamma(x)), 1e-12 * std::abs(g1)) << x;
    }
}

TEST(Gamma, LogGammaAndRatio) {
    const SignedLog lg = log_gamma(-2.5);
    EXPECT_EQ(lg.sign, -1);
    EXPECT_NEAR(std::exp(lg.value), std::abs(sf::gamma(-2.5)), 1e-13);
    EXPECT_NEAR(log_gamma(300.0).value, 1409.2020674704117875, 1e-10);
    EXPECT_NEAR(gamma_ratio(3.5, 1.5), 3.75, 1e-13);
    // reference values from 30-digit arithmetic
    EXPECT_NEAR(gamma_ratio(250.5, 250.0) / 15.803484588053453475, 1.0, 1e-11);
}

TEST(Pochhammer, Examples) {
    EXPECT_EQ(pochhammer(7.3, 0), 1.0);
    EXPECT_EQ(pochhammer(2.0, 3), 24.0);
    EXPECT_EQ(pochhammer(-1.0, 3), 0.0);
    EXPECT_THROW(pochhammer(1.0, -1), PreconditionError);
}

TEST(KummerParams, RejectsPoles) {
    EXPECT_THROW(KummerParams(1.0, 0.0), DomainError);
    EXPECT_THROW(KummerParams(1.0, -2.0), DomainError);
    EXPECT_NO_THROW(KummerParams(1.0, -2.5));
}

TEST(KummerSeries, Examples) {
    EXPECT_EQ(kummer_series({3.7, 5.1}, 0.0), 1.0);
    EXPECT_NEAR(kummer_series({1, 1}, 1.0), 2.718281828459045, 3e-15);
    EXPECT_NEAR(kummer_series({1, 2}, -1.0), 0.6321205588285577, 1e-15);
    EXPECT_NEAR(kummer_series({2.5, 4}, -50.0) / 0.00037323430699195882944, 1.0, 1e-13);
    EXPECT_NEAR(kummer_series({1, 2}, -100.0), 0.01, 1e-16);
}

TEST(KummerSeries, LargeArgumentsStayFinite) {
    // M(1,2;-900) = (1 - e^-900)/900
    EXPECT_NEAR(kummer_series({1, 2}, -900.0) * 900.0, 1.0, 1e-13);
    const Scaled s = kummer_series_scaled({1, 2}, 900.0);
    EXPECT_GT(s.exp2, 0);
    EXPECT_NEAR(scale_exp(s, -900.0) * 900.0, 1.0, 1e-13);
}

TEST(KummerSeries, TransformationConsistency) {
    for (double a : {0.5, 1.0, 2.5})
        for (double b : {2.0, 4.0, 6.5})
            for (double x : linspace(0.1, 30.0, 40)) {
                // alternating series summed in 50 digits
                using Big = boost::multiprecision::cpp_bin_float_50;
                Big sum = 1, term = 1;
                for (int n = 0; n < 400; ++n) {
                    term *= Big(a + n) * Big(-x) / (Big(b + n) * (n + 1));
                    sum += term;
                }
                const double direct = static_cast<double>(sum);
                const double swapped = kummer_series({a, b}, -x);
                EXPECT_LE(std::abs(direct - swapped), 1e-11 * std::abs(direct)) << a << " " << b << " " << x;
            }
}

TEST(KummerAsymptotic, Examples) {
    const AsymptoticValue v = kummer_asymptotic({1, 2}, 100.0, 0);
    EXPECT_NEAR(v.value, 0.01, 1e-16);
    EXPECT_THROW(kummer_asymptotic({2, 2}, 10.0, 1), ResonanceError);
    EXPECT_THROW(kummer_asymptotic({3, 1}, 10.0, 1), ResonanceError);

    const AsymptoticValue w = kummer_asymptotic({2.5, 4}, 50.0, 3);
    const double exact = kummer_series({2.5, 4}, -50.0);
    EXPECT_LE(std::abs(w.value - exact), 2.0 * w.first_omitted_term);
}

TEST(KummerAsymptotic, TermsArePochhammerProducts) {
    const AsymptoticExpansion e = asymptotic_expansion({2.5, 4}, 6);
    ASSERT_EQ(e.terms.size(), 6u);
    double fact = 1;
    for (int n = 1; n <= 6; ++n) {
        fact *= n;
        EXPECT_NEAR(e.terms[n - 1], pochhammer(2.5, n) * pochhammer(-0.5, n) / fact, 1e-12 * std::abs(e.terms[n - 1]));
    }
    EXPECT_NEAR(e.leading_amplitude, sf::gamma(4.0) / sf::gamma(1.5), 1e-13);
}

TEST(ResonantPolynomial, Examples) {
    const ResonantPolynomial q = resonant_polynomial(0, 4, Rational(1));
    EXPECT_EQ(q.degree, 2);
    EXPECT_EQ(q.low_power, 0);
    EXPECT_EQ(q.exact[0], 1);
    EXPECT_EQ(q.exact[2], boost::multiprecision::cpp_rational(-1, 8));
    EXPECT_DOUBLE_EQ(q(2.0), 0.5);

    for (int m : {2, 3, 7}) {
        const ResonantPolynomial r = resonant_polynomial(1, m, Rational(1, 2));
        EXPECT_EQ(r.degree, 1);
        EXPECT_DOUBLE_EQ(r(2.0), 2.0);
    }

    const ResonantPolynomial s = resonant_polynomial(2, 4, Rational(2));
    EXPECT_EQ(s.exact[2], 1);
    EXPECT_EQ(s.exact[4], boost::multiprecision::cpp_rational(-1, 16));
    EXPECT_DOUBLE_EQ(s(2.0), 3.0);

    EXPECT_THROW(resonant_polynomial(1, 4, Rational(1)), PreconditionError);
    EXPECT_THROW(resonant_polynomial(4, 4, Rational(1)), PreconditionError);
    EXPECT_THROW(resonant_polynomial(0, 4, Rational(1, 4)), PreconditionError);
}

// Substitutes q into f'' + ((m-1)/r - r/2) f' - (L/r^2 - lambda) f using exact rationals.
TEST(ResonantPolynomial, ExactOdeResidualIsZero) {
    using boost::multiprecision::cpp_rational;
    for (int m = 2; m <= 7; ++m)
        for (int twice_lambda = 0; twice_lambda <= 9; ++twice_lambda)
            for (int l = 0; l <= twice_lambda; ++l) {
                const Rational lambda(twice_lambda, 2);
                if (!resonant(l, lambda)) continue;
                const ResonantPolynomial q = resonant_polynomial(l, m, lambda);
                const int n = q.degree;
                std::vector<cpp_rational> res(n + 3, cpp_rational(0));  // coefficient of r^(p) shifted by 2
                const cpp_rational L = l * (l + m - 2);
                const cpp_rational lam(lambda.numerator(), lambda.denominator());
                for (int p = 0; p <= n; ++p) {
                    const cpp_rational c = q.exact[p];
                    if (c == 0) continue;
                    // r^(p-2) terms
                    res[p] += c * (cpp_rational(p * (p - 1)) + cpp_rational((m - 1) * p) - L);
                    // r^p terms
                    res[p + 2] += c * (cpp_rational(-p, 2) + lam);
                }
                for (const auto& c : res) EXPECT_EQ(c, 0) << "m=" << m << " 2lambda=" << twice_lambda << " l=" << l;
                EXPECT_EQ(q.exact[n] != 0, true);
            }
}
