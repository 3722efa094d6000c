#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lle/levy_driver.hpp"
#include "oracles.hpp"

using namespace lle;

TEST(CharacteristicExponent, BrownianIsQuadratic) {
    const auto d = LevyDescriptor::brownian(6);
    EXPECT_EQ(characteristic_exponent<Rational>(d, 1), 3);
    EXPECT_EQ(characteristic_exponent<Rational>(d, 3), 27);
    EXPECT_DOUBLE_EQ(characteristic_exponent(d, -2), 12.0);
}

TEST(CharacteristicExponent, ZeroModeVanishesForEveryProcess) {
    for (const char* text : {"brownian:2", "uniform:3", "tabulated:2:[1/2;1/4]", "mix(brownian:1,uniform:5)"}) {
        EXPECT_EQ(characteristic_exponent<Rational>(parse_descriptor(text), 0), 0) << text;
    }
}

TEST(CharacteristicExponent, UniformJumpsAgainstQuadrature) {
    const auto d = LevyDescriptor::uniform(3);
    const auto flat = [](double) { return 1.0 / (2.0 * std::numbers::pi); };
    for (int m = 1; m <= 6; ++m) {
        EXPECT_NEAR(characteristic_exponent(d, m), oracle::jump_exponent(3.0, flat, m), 1e-10) << "m=" << m;
    }
    EXPECT_EQ(characteristic_exponent<Rational>(d, 2), 3);
}

TEST(CharacteristicExponent, TabulatedJumpsAgainstQuadrature) {
    const std::vector<double> j = {0.5, 0.25, -0.1};
    const auto d = parse_descriptor("tabulated:2:[1/2;1/4;-1/10]");
    auto density = [&](double phi) {
        double s = 1.0;
        for (std::size_t m = 1; m <= j.size(); ++m) s += 2.0 * j[m - 1] * std::cos(static_cast<double>(m) * phi);
        return s / (2.0 * std::numbers::pi);
    };
    for (int m = 1; m <= 6; ++m) {
        EXPECT_NEAR(characteristic_exponent(d, m), oracle::jump_exponent(2.0, density, m), 1e-10) << "m=" << m;
    }
    EXPECT_EQ(characteristic_exponent<Rational>(d, 1), 1);
}

TEST(CharacteristicExponent, SymmetricAndNonnegative) {
    const auto d = parse_descriptor("mix(brownian:2/3,uniform:1,tabulated:1:[-1;1])");
    for (long m = 1; m <= 40; ++m) {
        const Rational e = characteristic_exponent<Rational>(d, m);
        EXPECT_EQ(e, characteristic_exponent<Rational>(d, -m));
        EXPECT_GE(e, 0);
    }
    // mixture is the sum of its components
    EXPECT_EQ(characteristic_exponent<Rational>(d, 2), Rational(4, 3) + 1 + 0);
}

TEST(Descriptor, RoundTripsThroughText) {
    for (const char* text : {"brownian:6", "uniform:3/2", "tabulated:2:[1/2;1/4]", "tabulated:1:[]",
                             "mix(brownian:2,mix(uniform:1,tabulated:3:[-1/3]))"}) {
        EXPECT_EQ(to_string(parse_descriptor(text)), text);
    }
    EXPECT_EQ(to_string(parse_descriptor(" brownian:0.25 ")), "brownian:1/4");
}

TEST(Descriptor, RejectsMalformedOrInvalidInput) {
    for (const char* text : {"", "brownian", "brownian:-1", "uniform:0", "levy:2", "mix()", "mix(brownian:1",
                             "tabulated:1:[2]", "tabulated:1:1/2", "brownian:abc"}) {
        EXPECT_THROW(parse_descriptor(text), ValidationError) << text;
    }
}

TEST(Descriptor, TabulatedLawMustHaveNonnegativeDensity) {
    // j_1 = j_2 = -1 gives 1 - 2cos(phi) - 2cos(2phi), negative at phi = 0
    const auto d = parse_descriptor("tabulated:1:[-1;-1]");
    EXPECT_THROW(sample_path(d, 1.0, 0.1, 1), ValidationError);
}

TEST(SamplePath, StartsAtZeroAndCoversHorizon) {
    const auto d = parse_descriptor("mix(brownian:2,uniform:4)");
    const auto path = sample_path(d, 3.0, 0.01, 11);
    EXPECT_EQ(path.level_at(0.0), 0.0);
    double total = 0.0;
    for (const auto& s : path.segments) {
        EXPECT_GT(s.duration, 0.0);
        EXPECT_LE(s.duration, 0.01 * (1 + 1e-12));
        total += s.duration;
    }
    EXPECT_NEAR(total, 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(path.total_duration, 3.0);
}

TEST(SamplePath, ReproducibleBySeedAndStream) {
    const auto d = parse_descriptor("mix(brownian:2,uniform:4)");
    const auto a = sample_path(d, 1.0, 0.05, 99, 3);
    const auto b = sample_path(d, 1.0, 0.05, 99, 3);
    const auto c = sample_path(d, 1.0, 0.05, 99, 4);
    ASSERT_EQ(a.segments.size(), b.segments.size());
    for (std::size_t k = 0; k < a.segments.size(); ++k) {
        EXPECT_EQ(a.segments[k].level, b.segments[k].level);
        EXPECT_EQ(a.segments[k].duration, b.segments[k].duration);
    }
    EXPECT_NE(a.end_level, c.end_level);
}

TEST(SamplePath, RejectsBadArguments) {
    const auto d = LevyDescriptor::brownian(1);
    EXPECT_THROW(sample_path(d, 0.0, 0.1, 1), ValidationError);
    EXPECT_THROW(sample_path(d, 1.0, 0.0, 1), ValidationError);
    EXPECT_THROW(sample_path(d, INFINITY, 0.1, 1), ValidationError);
}

TEST(SamplePathStatistics, BrownianVarianceIsKappaT) {
    const auto d = LevyDescriptor::brownian(6);
    std::vector<double> ends;
    for (std::uint64_t i = 0; i < 100000; ++i) ends.push_back(sample_path(d, 1.0, 0.25, 7, i).end_level);
    const auto m = oracle::moments(ends);
    EXPECT_LT(std::abs(m.variance - 6.0), 3.0 * m.variance_se());
    EXPECT_LT(std::abs(m.mean), 3.0 * m.mean_se());
}

TEST(SamplePathStatistics, UniformJumpCountIsPoisson) {
    const auto d = LevyDescriptor::uniform(3);
    std::vector<double> counts;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        counts.push_back(static_cast<double>(sample_path(d, 2.0, 0.1, 8, i).segments.size() - 1));
    }
    const auto m = oracle::moments(counts);
    EXPECT_LT(std::abs(m.mean - 6.0), 3.0 * m.mean_se());
    EXPECT_LT(std::abs(m.variance - 6.0), 3.0 * m.variance_se());
}

TEST(SamplePathStatistics, DriftlessMixture) {
    const auto d = parse_descriptor("mix(brownian:1,uniform:2,tabulated:1:[1/2])");
    std::vector<double> ends;
    for (std::uint64_t i = 0; i < 20000; ++i) ends.push_back(sample_path(d, 1.5, 0.1, 9, i).end_level);
    const auto m = oracle::moments(ends);
    EXPECT_LT(std::abs(m.mean), 3.0 * m.mean_se());
}

TEST(SamplePathStatistics, CharacteristicFunctionMatchesExponent) {
    const auto d = parse_descriptor("mix(brownian:1/2,tabulated:2:[1/2;1/5])");
    const double t = 1.0;
    std::vector<std::vector<double>> cosines(3);
    for (std::uint64_t i = 0; i < 40000; ++i) {
        const double level = sample_path(d, t, 0.5, 10, i).end_level;
        for (int m = 1; m <= 3; ++m) cosines[m - 1].push_back(std::cos(m * level));
    }
    for (int m = 1; m <= 3; ++m) {
        const auto s = oracle::moments(cosines[m - 1]);
        const double expected = std::exp(-t * characteristic_exponent(d, m));
        EXPECT_LT(std::abs(s.mean - expected), 3.0 * s.mean_se()) << "m=" << m;
    }
}

TEST(DriverPath, CsvHasHeaderAndOneRowPerSegment) {
    const auto path = sample_path(LevyDescriptor::uniform(2), 1.0, 0.1, 5);
    std::ostringstream os;
    write_path_csv(os, path);
    const auto text = os.str();
    EXPECT_EQ(text.rfind("duration,level\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), path.segments.size() + 1);
}
