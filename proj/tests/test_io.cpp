#include "drift_spectral/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace drift_spectral;
using namespace drift_spectral::io;
using field::CoefficientKind;
using field::Field;

TEST(FieldJson, RoundTripReevaluatesIdentically) {
    const Field f({4, Rational(3, 2)}, {{1, CoefficientKind::resonant, 0.1}, {2, CoefficientKind::amplitude, 1.0 / 3.0},
                                        {5, CoefficientKind::amplitude, -2.718281828459045e-3}},
                  0.7);
    const std::string text = field_to_json(f).dump(2);
    const Field g = field_from_json(json::parse(text));
    EXPECT_EQ(g.modes(), f.modes());
    EXPECT_EQ(g.radial_extra(), f.radial_extra());
    for (double r : {0.3, 2.0, 9.5})
        for (double t : {0.0, 1.1, 3.0}) EXPECT_EQ(g.evaluate(r, t), f.evaluate(r, t));
    EXPECT_EQ(field_to_json(g).dump(2), text);

    const json j = field_to_json(f);
    EXPECT_EQ(j["modes"][0], json::parse(R"({"degree": 1, "resonant_coeff": 0.1})"));
    EXPECT_EQ(j["radial_extra"]["solution"], "p");
    EXPECT_EQ(j["radial_extra"]["coefficient"], 0.7);

    const Field c({3, Rational(0)}, {}, std::nullopt, 1.25);
    EXPECT_EQ(field_from_json(field_to_json(c)).constant_offset(), 1.25);
}

TEST(FieldJson, Malformed) {
    EXPECT_THROW(field_from_json(json::parse(R"({"m": 3})")), DataError);
    EXPECT_THROW(field_from_json(json::parse(R"({"m": 3, "lambda": {"num": 0, "den": 1},
        "modes": [{"degree": 1, "weird": 1}]})")),
                 DataError);
    EXPECT_THROW(field_from_json(json::parse(R"({"m": 3, "lambda": {"num": 1, "den": 4}, "modes": [],
        "radial_extra": {"solution": "l", "coefficient": 1}})")),
                 DataError);
    EXPECT_THROW(field_from_json(json::parse(R"({"m": 3, "lambda": {"num": 1, "den": 0}, "modes": []})")), DataError);
}

TEST(SamplesJson, RoundTrip) {
    field::LiouvilleSamples s{{8, 12, 16}, {{0, {1, 2, 3}}, {4, {0.5, -0.25, 1e-300}}}};
    const field::LiouvilleSamples t = samples_from_json(json::parse(samples_to_json(s).dump()));
    EXPECT_EQ(t.radii, s.radii);
    EXPECT_EQ(t.coefficients, s.coefficients);
    EXPECT_THROW(samples_from_json(json::parse(R"({"radii": [1,2,3], "coefficients": {"x": [1,2,3]}})")), DataError);
}

TEST(Config, PresetsAndRanges) {
    const RunConfig c = config_from_json(json::parse(
        R"({"m": 3, "lambda": {"num": 0, "den": 1}, "trace": "smooth7", "max_degree": 12,
            "radii": {"start": 10, "stop": 24, "count": 8}, "output": {"field": "f.json"}})"));
    EXPECT_EQ(c.trace.size(), 13u);
    EXPECT_DOUBLE_EQ(c.trace.at(12), std::pow(13.0, -7.0));
    EXPECT_EQ(c.radii.size(), 8u);
    EXPECT_EQ(c.field_path, "f.json");
    EXPECT_TRUE(c.report_path.empty());

    EXPECT_EQ(preset("phi5", 3, 12), (spherics::CoefficientMap{{5, 1.0}}));
    EXPECT_NEAR(preset("constant", 3, 4).at(0), std::sqrt(4 * std::numbers::pi), 1e-15);
    EXPECT_THROW(preset("phi", 3, 4), DataError);
    EXPECT_THROW(preset("wiggle", 3, 4), DataError);

    const RunConfig e = config_from_json(json::parse(R"({"m": 4, "lambda": {"num": 3, "den": 2}, "trace": {"2": 0.5}})"));
    EXPECT_EQ(e.lambda, Rational(3, 2));
    EXPECT_EQ(e.trace, (spherics::CoefficientMap{{2, 0.5}}));
}

TEST(Config, Rejections) {
    EXPECT_THROW(config_from_json(json::parse(R"({"m": 1, "lambda": {"num": 0, "den": 1}, "trace": "constant"})")), DataError);
    EXPECT_THROW(config_from_json(json::parse(R"({"m": 3, "lambda": {"num": -1, "den": 2}, "trace": "constant"})")), DataError);
    EXPECT_THROW(config_from_json(json::parse(R"({"m": 3, "lambda": {"num": 0, "den": 1}, "trace": "phi3", "max_degree": 65})")),
                 DataError);
    EXPECT_THROW(config_from_json(json::parse(R"({"m": 3, "lambda": {"num": 0, "den": 1}, "trace": "phi9", "max_degree": 4})")),
                 DataError);
    EXPECT_THROW(config_from_json(json::parse(R"({"m": 3, "lambda": {"num": 0, "den": 1}, "trace": {"-1": 2}})")), DataError);
}

TEST(Csv, HeaderAndShortestDecimals) {
    std::ostringstream os;
    write_csv(os, {"r", "value"}, {{1.0, 0.1}, {1.0 / 3.0, -2.5e-300}});
    EXPECT_EQ(os.str(), "r,value\n1,0.3333333333333333\n0.1,-2.5e-300\n");
    EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}
