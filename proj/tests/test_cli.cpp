// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/cli.hpp"
#include "fermiqi/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace fermiqi {
namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("fermiqi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
        uniform_ = (dir_ / "uniform.json").string();
        write_text_file(uniform_, R"({"modes": 2, "terms": [{"occ": [], "re": 0.5}, {"occ": [1], "re": 0.5},
            {"occ": [2], "re": 0.5}, {"occ": [1, 2], "re": 0.5}], "normalized": true})");
        cat_ = (dir_ / "cat.json").string();
        write_text_file(cat_, R"({"modes": 4, "terms": [{"occ": [], "re": 1}, {"occ": [1, 2, 3, 4], "re": 1}]})");
    }
    void TearDown() override {
        std::filesystem::remove_all(dir_);
        unsetenv("FERMI_MAX_MODES");
    }
    std::filesystem::path dir_;
    std::string uniform_;
    std::string cat_;
};

TEST_F(Cli, ReduceUniformStateTracingModeTwo) {
    const CliRun r = run({"reduce", uniform_, "--trace", "2", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("kept"), Json::array({1}));
    for (const auto& row : j.at("density").at("matrix_re")) {
        for (const auto& v : row) EXPECT_NEAR(v.get<double>(), 0.5, 1e-15);
    }
    EXPECT_NEAR(j.at("spectrum")[0].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j.at("spectrum")[1].get<double>(), 0.0, 1e-12);
}

TEST_F(Cli, ReduceWithEmptyTraceKeepsEverything) {
    const CliRun r = run({"reduce", uniform_, "--trace", "", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(Json::parse(r.out).at("density").at("modes"), Json::array({1, 2}));
}

TEST_F(Cli, ReduceWritesDensityFile) {
    const std::string out = (dir_ / "rho.json").string();
    const std::string before = read_text_file(uniform_);
    const CliRun r = run({"reduce", uniform_, "--keep", "2", "--out", out});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const DensityOperator rho = read_density_file(out);
    EXPECT_EQ(rho.modes, std::vector<int>{2});
    EXPECT_NEAR(rho.mat(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho.mat(0, 1)), 0.0, 1e-15);
    EXPECT_EQ(read_text_file(uniform_), before);
}

TEST_F(Cli, ReduceRejectsBadModes) {
    EXPECT_EQ(run({"reduce", uniform_, "--trace", "3"}).code, kExitUsage);
    EXPECT_EQ(run({"reduce", uniform_, "--trace", "1", "--keep", "2"}).code, kExitUsage);
    EXPECT_EQ(run({"reduce", (dir_ / "missing.json").string(), "--trace", "1"}).code, kExitUsage);
}

TEST_F(Cli, AnalyzeReportsMismatchForMixedParity) {
    const CliRun r = run({"analyze", uniform_, "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("parity"), "mixed");
    ASSERT_EQ(j.at("cuts").size(), 1u);
    EXPECT_NEAR(j.at("cuts")[0].at("mismatch").get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, AnalyzeCsvHasOneRowPerCut) {
    const CliRun r = run({"analyze", cat_, "--cut", "1,2|3,4", "--cut", "1|2,3,4", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "state_id,cut,spec_A,spec_B,mismatch,entropy_A,entropy_B,mutual_info,parity");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        EXPECT_EQ(line.rfind("cat,", 0), 0u) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 2);
}

TEST_F(Cli, AnalyzeNormalizesWithNote) {
    const CliRun r = run({"analyze", cat_, "--cut", "1,2|3,4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("normalis"), std::string::npos) << r.err;
    EXPECT_NE(r.out.find("0.69314718056"), std::string::npos) << r.out;
}

TEST_F(Cli, ModeCapFromEnvironment) {
    setenv("FERMI_MAX_MODES", "3", 1);
    EXPECT_EQ(max_modes_from_env(), 3);
    EXPECT_EQ(run({"analyze", cat_}).code, kExitUsage);
    setenv("FERMI_MAX_MODES", "4", 1);
    EXPECT_EQ(run({"analyze", cat_}).code, kExitOk);
    unsetenv("FERMI_MAX_MODES");
    EXPECT_EQ(max_modes_from_env(), 14);
}

TEST_F(Cli, VerifyPassesAndIsDeterministic) {
    const std::vector<std::string> base = {"verify", "--modes", "4", "--trials", "12", "--seed", "5", "--format", "json"};
    auto with_threads = [&](const char* t) {
        std::vector<std::string> a = base;
        a.insert(a.end(), {"--threads", t});
        return run(a);
    };
    const CliRun a = with_threads("1");
    const CliRun b = with_threads("3");
    const CliRun c = with_threads("1");
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_EQ(Json::parse(a.out).at("violations"), 0);
}

TEST_F(Cli, VerifyWritesReports) {
    const std::string out = (dir_ / "report.json").string();
    const std::string csv = (dir_ / "trials.csv").string();
    const CliRun r = run({"verify", "--modes", "3", "--trials", "4", "--sector", "odd", "--out", out, "--csv", csv});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(Json::parse(read_text_file(out)).at("sector"), "odd");
    EXPECT_EQ(read_text_file(csv).rfind("trial,", 0), 0u);
}

TEST_F(Cli, VerifyUsageErrors) {
    EXPECT_EQ(run({"verify"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", "--modes", "3", "--sector", "unrestricted"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", "--modes", "1"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", "--modes", "3", "--trials", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
}

TEST_F(Cli, CounterexampleFindsUnitMismatch) {
    const CliRun r = run({"counterexample", "--modes", "2", "--trials", "20", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_GE(j.at("best_mismatch").get<double>(), 1.0 - 1e-6);
}

TEST_F(Cli, JwCheckRestrictedStateIsSolvable) {
    const CliRun r = run({"jw-check", "--alpha", "1/√2,0,0,0,0,0,0,1/√2", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("verdict"), "solvable");
    EXPECT_TRUE(j.at("verified").get<bool>());
}

TEST_F(Cli, JwCheckGenericSystem) {
    const CliRun r = run({"jw-check", "--generic", "--alpha", "1,0,0,0,0,0,0,1"});
    EXPECT_NE(r.out.find("contradiction"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("(i) - (iii) - (v)"), std::string::npos) << r.out;
}

TEST_F(Cli, JwCheckRejectsWrongAlphaCount) {
    EXPECT_EQ(run({"jw-check", "--alpha", "1,0"}).code, kExitUsage);
}

TEST_F(Cli, AppendixDemoShowsContradictionWitness) {
    const CliRun r = run({"appendix-demo"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("(i) - (iii) - (v)"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, ExamplesJsonAllPass) {
    const CliRun r = run({"examples", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(Json::parse(r.out).at("all_pass").get<bool>());
}

TEST_F(Cli, HelpExitsCleanly) {
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}

}  // namespace
}  // namespace fermiqi
