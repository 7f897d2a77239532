// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

namespace fermiqi {
namespace {

using testing::random_mixture;
using testing::random_sparse_state;
using testing::random_state;

Json parse(const char* text) { return Json::parse(text); }

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("fermiqi_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::filesystem::path dir_;
};

TEST(StateJson, ParsesMinimalFile) {
    const StateFile f = state_from_json(parse(R"({"modes": 3, "terms": [{"occ": [], "re": 0.6},
        {"occ": [1, 3], "im": -0.8}], "normalized": true})"));
    EXPECT_TRUE(f.declared_normalized);
    EXPECT_EQ(f.state.modes(), 3);
    EXPECT_EQ(f.state.amplitude(0), Complex(0.6));
    EXPECT_EQ(f.state.amplitude(0b101), Complex(0.0, -0.8));
}

TEST(StateJson, RejectsMalformedTerms) {
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 2, "terms": [{"occ": [1], "re": 1}, {"occ": [1], "re": 0}]})")),
                 ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 3, "terms": [{"occ": [2, 1], "re": 1}]})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 3, "terms": [{"occ": [1, 1], "re": 1}]})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 3, "terms": [{"occ": [4], "re": 1}]})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 0, "terms": []})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"terms": []})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 2, "terms": [{"re": 1}]})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 2, "terms": [{"occ": [], "re": "x"}]})")), ParseError);
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 2, "terms": [], "normalized": 1})")), ParseError);
}

TEST(StateJson, NormalizedFlagIsChecked) {
    EXPECT_THROW((void)state_from_json(parse(R"({"modes": 1, "terms": [{"occ": [], "re": 0.9}], "normalized": true})")),
                 ParseError);
    const StateFile loose = state_from_json(parse(R"({"modes": 1, "terms": [{"occ": [], "re": 0.9}], "normalized": false})"));
    EXPECT_FALSE(loose.declared_normalized);
    const double r = 1.0 / std::numbers::sqrt2;
    Json ok = {{"modes", 1},
               {"terms", Json::array({Json{{"occ", Json::array()}, {"re", r}}, Json{{"occ", {1}}, {"re", r}}})},
               {"normalized", true}};
    EXPECT_NO_THROW((void)state_from_json(ok));
}

TEST(StateJson, ModeCapIsEnforced) {
    const Json j = parse(R"({"modes": 6, "terms": [{"occ": [], "re": 1}]})");
    EXPECT_THROW((void)state_from_json(j, 5), ParseError);
    EXPECT_NO_THROW((void)state_from_json(j, 6));
}

TEST(StateJson, RoundTripIsExact) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 6;
        const FermionicState psi = trial % 2 ? random_state(n, rng) : random_sparse_state(n, rng);
        const Json j = state_to_json(psi);
        const StateFile back = state_from_json(Json::parse(j.dump()));
        EXPECT_EQ(back.state.modes(), n);
        EXPECT_EQ(back.state.amplitudes(), psi.amplitudes());
        EXPECT_EQ(j.at("normalized").get<bool>(), psi.is_normalized(kNormalizationTolerance));
    }
}

TEST(DensityJson, RoundTripIsExact) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 40; ++trial) {
        const DensityOperator rho = random_mixture(1 + trial % 4, 2, rng);
        const DensityOperator back = density_from_json(Json::parse(density_to_json(rho).dump()));
        EXPECT_EQ(back.modes, rho.modes);
        EXPECT_EQ(back.mat, rho.mat);
    }
}

TEST(DensityJson, RejectsBadShapes) {
    EXPECT_THROW((void)density_from_json(parse(R"({"modes": [1], "matrix_re": [[1]], "matrix_im": [[0]]})")), ParseError);
    EXPECT_THROW((void)density_from_json(parse(R"({"modes": [2, 1], "matrix_re": [], "matrix_im": []})")), ParseError);
    EXPECT_THROW((void)density_from_json(parse(R"({"modes": [1], "matrix_re": [[1, 0], [0]], "matrix_im": [[0, 0], [0, 0]]})")),
                 ParseError);
}

TEST_F(TempDir, FilesRoundTrip) {
    std::mt19937_64 rng(53);
    const FermionicState psi = random_state(3, rng);
    write_state_file(dir_ / "s.json", psi);
    EXPECT_EQ(read_state_file(dir_ / "s.json").state.amplitudes(), psi.amplitudes());
    const DensityOperator rho = random_mixture(2, 2, rng);
    write_density_file(dir_ / "r.json", rho);
    EXPECT_EQ(read_density_file(dir_ / "r.json").mat, rho.mat);
    EXPECT_THROW((void)read_state_file(dir_ / "missing.json"), ParseError);
    write_text_file(dir_ / "bad.json", "{not json");
    EXPECT_THROW((void)read_state_file(dir_ / "bad.json"), ParseError);
}

TEST(ModeList, ParsesAndValidates) {
    EXPECT_EQ(parse_mode_list("3, 1,4", 4), (std::vector<int>{1, 3, 4}));
    EXPECT_TRUE(parse_mode_list("", 4).empty());
    EXPECT_THROW((void)parse_mode_list("1,1", 4), ParseError);
    EXPECT_THROW((void)parse_mode_list("5", 4), ParseError);
    EXPECT_THROW((void)parse_mode_list("0", 4), ParseError);
    EXPECT_THROW((void)parse_mode_list("a", 4), ParseError);
    EXPECT_THROW((void)parse_mode_list("1,,2", 4), ParseError);
}

TEST(Cut, ParsesBipartition) {
    const ModePartition c = parse_cut("1,3|2,4", 4);
    EXPECT_EQ(c.kept(), (std::vector<int>{1, 3}));
    EXPECT_EQ(c.traced(), (std::vector<int>{2, 4}));
    EXPECT_EQ(c.label(), "1,3|2,4");
    EXPECT_THROW((void)parse_cut("1,2", 4), ParseError);
    EXPECT_THROW((void)parse_cut("1|2", 4), ParseError);
    EXPECT_THROW((void)parse_cut("|1,2,3,4", 4), ParseError);
    EXPECT_THROW((void)parse_cut("1,2|2,3,4", 4), ParseError);
}

TEST(ComplexList, ParsesExpressions) {
    const auto v = parse_complex_list("1/√2, 0, 0.5+0.5i, sqrt(2)/2, -i, (1+2i)*2, 0.25i, 1e-3");
    ASSERT_EQ(v.size(), 8u);
    EXPECT_NEAR(std::abs(v[0] - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
    EXPECT_EQ(v[1], Complex(0.0));
    EXPECT_NEAR(std::abs(v[2] - Complex(0.5, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[3] - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[4] - Complex(0.0, -1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[5] - Complex(2.0, 4.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[6] - Complex(0.0, 0.25)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[7] - 1e-3), 0.0, 1e-18);
    EXPECT_THROW((void)parse_complex_list("1,,2"), ParseError);
    EXPECT_THROW((void)parse_complex_list("1+"), ParseError);
    EXPECT_THROW((void)parse_complex_list("foo"), ParseError);
}

TEST(Format, SignificantDigits) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0, 4), "0.3333");
    EXPECT_EQ(format_number(2.5e-15), "2.5e-15");
}

TEST(Reports, CampaignJsonKeys) {
    CampaignReport r;
    r.n = 3;
    r.trials = 1;
    r.per_trial = {{0, 1e-16, "1|2,3"}};
    r.runtime_seconds = 12.0;
    const Json j = campaign_to_json(r);
    for (const char* key : {"modes", "trials", "seed", "sector", "tolerance", "cut_count", "max_mismatch",
                            "worst_trial", "worst_cut", "violations", "noise_flags", "per_trial"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_FALSE(j.contains("runtime_seconds"));
    EXPECT_EQ(j.at("sector"), "even");
}

}  // namespace
}  // namespace fermiqi
