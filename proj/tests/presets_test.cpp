#include "fwopt/errors.hpp"
#include "fwopt/presets.hpp"

#include "preset_reference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace fwopt;

namespace {

PresetConstants heavy(double p) {
    PresetConstants c;
    c.D = 2.0;
    c.L = 3.0;
    c.G = 1.5;
    c.sigma = 0.7;
    c.p = p;
    c.delta = 0.1;
    return c;
}

} // namespace

TEST(Preset, Thm33Example) {
    PresetConstants c;
    c.D = 2.0;
    const Preset p = make_preset(PresetName::thm33, 10000, c);
    EXPECT_NEAR(p.eta, 0.005, 1e-15);
    EXPECT_EQ(p.gamma, 0.01);
    EXPECT_EQ(p.beta1, 0.9);
    EXPECT_FALSE(p.clip.has_value());
    EXPECT_FALSE(p.variance_reduction);
    EXPECT_EQ(p.batch.at(1), 1u);
}

TEST(Preset, Cor31UsesHorizonBatch) {
    PresetConstants c;
    c.D = 4.0;
    c.gamma = 0.2;
    c.beta1 = 0.5;
    const Preset p = make_preset(PresetName::cor31, 400, c);
    EXPECT_NEAR(p.eta, 1.0 / 80.0, 1e-15);
    EXPECT_EQ(p.batch.at(1), 400u);
    EXPECT_EQ(p.batch.at(9), 400u);
    EXPECT_EQ(p.gamma, 0.2);
    EXPECT_EQ(p.beta1, 0.5);
}

TEST(Preset, Thm41AndCor42) {
    PresetConstants c;
    c.D = 1.0;
    for (std::size_t T : {1000u, 1000000u}) {
        const long double Tl = T;
        const Preset p = make_preset(PresetName::thm41, T, c);
        const long double t23 = std::exp(2.0L / 3.0L * std::log(Tl));
        EXPECT_NEAR(p.eta, 1.0L / t23, 1e-14);
        EXPECT_NEAR(p.gamma, 1.0L / t23, 1e-14);
        EXPECT_NEAR(p.beta1, 1.0L - std::exp(-std::log(Tl) / 3.0L), 1e-14);
        EXPECT_TRUE(p.variance_reduction);
        const Preset q = make_preset(PresetName::cor42, T, c);
        EXPECT_EQ(q.batch.at(1), T == 1000u ? 10u : 100u);
        EXPECT_EQ(q.batch.at(2), 1u);
        EXPECT_EQ(q.eta, p.eta);
    }
}

TEST(Preset, Thm43GammaAtPEqualsTwo) {
    for (std::size_t T : {1000u, 1000000u}) {
        const Preset p = make_preset(PresetName::thm43, T, heavy(2.0));
        EXPECT_NEAR(p.gamma, 1.0 / std::sqrt(static_cast<double>(T)), 1e-15);
    }
}

TEST(Preset, Thm44GammaExample) {
    const Preset p = make_preset(PresetName::thm44, 4096, heavy(2.0));
    EXPECT_NEAR(p.gamma, 1.0 / 256.0, 1e-15);
    EXPECT_NEAR(p.gamma, 3.906e-3, 1e-6);
    EXPECT_TRUE(p.variance_reduction);
}

TEST(Preset, HeavyTailAgainstIndependentArithmetic) {
    for (bool vr : {false, true}) {
        for (double pe : {1.2, 1.5, 2.0}) {
            for (std::size_t T : {1000u, 1000000u}) {
                const PresetConstants c = heavy(pe);
                const Preset p = make_preset(vr ? PresetName::thm44 : PresetName::thm43, T, c);
                const oracle::HeavyReference r = oracle::heavy_reference(vr, T, c);
                EXPECT_NEAR(p.gamma, r.gamma, 1e-12 * r.gamma);
                EXPECT_NEAR(p.beta1, r.beta, 1e-12);
                ASSERT_TRUE(p.clip.has_value());
                EXPECT_NEAR(*p.clip, r.M, 1e-12 * r.M);
                EXPECT_NEAR(p.eta, r.eta, 1e-12 * r.eta);
                EXPECT_EQ(p.eta_terms.size(), 5u);
            }
        }
    }
}

TEST(Preset, ClipFallsBackToTwiceG) {
    PresetConstants c = heavy(2.0);
    c.sigma = 0.0;
    const Preset p = make_preset(PresetName::thm43, 1000, c);
    EXPECT_EQ(*p.clip, 3.0);
}

TEST(Preset, EtaClampedIntoUnitInterval) {
    PresetConstants c;
    c.D = 0.01;
    const Preset p = make_preset(PresetName::thm33, 4, c);
    EXPECT_EQ(p.eta_raw, 50.0);
    EXPECT_EQ(p.eta, 1.0);
    EXPECT_NO_THROW(p.params().validate_at(1));
}

TEST(Preset, ParamsCarryScheduleAndFlags) {
    const Preset p = make_preset(PresetName::thm44, 1000, heavy(1.5));
    const SfwParams s = p.params();
    EXPECT_EQ(s.eta.at(1), p.eta);
    EXPECT_EQ(s.eta.at(999), p.eta);
    EXPECT_EQ(s.gamma.at(5), p.gamma);
    EXPECT_EQ(s.beta1.at(5), p.beta1);
    EXPECT_EQ(s.clip, p.clip);
    EXPECT_TRUE(s.variance_reduction);
    EXPECT_NO_THROW(s.validate_at(1));
}

TEST(Preset, Errors) {
    PresetConstants c;
    EXPECT_THROW(make_preset(PresetName::thm33, 100, c), ConfigError); // D missing
    c.D = 1.0;
    EXPECT_THROW(make_preset(PresetName::thm33, 1, c), ConfigError);
    c.D = -1.0;
    EXPECT_THROW(make_preset(PresetName::thm41, 100, c), ConfigError);
    c.D = 1.0;
    EXPECT_THROW(make_preset(PresetName::thm43, 100, c), ConfigError); // L, G, sigma missing
    PresetConstants h = heavy(2.5);
    EXPECT_THROW(make_preset(PresetName::thm43, 100, h), ConfigError);
    h = heavy(2.0);
    h.delta = 1.0;
    EXPECT_THROW(make_preset(PresetName::thm44, 100, h), ConfigError);
    c.beta1 = 0.995;
    EXPECT_THROW(make_preset(PresetName::thm33, 100, c), ConfigError);
    EXPECT_THROW(parse_preset_name("thm99"), ConfigError);
    EXPECT_EQ(parse_preset_name("cor42"), PresetName::cor42);
}

TEST(Preset, DescribeListsEveryTerm) {
    const std::string text = make_preset(PresetName::thm43, 1000, heavy(2.0)).describe();
    for (const char* key : {"eta.smooth", "eta.momentum", "eta.bias", "eta.tail", "eta.clip", "eta_raw", "gamma",
                            "beta1", "clip", "batch.initial"}) {
        EXPECT_NE(text.find(key), std::string::npos) << key;
    }
}
