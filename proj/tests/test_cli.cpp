#include "spdde/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult run(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"spdde"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.status = spdde::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string config(const std::string& name) { return std::string(SPDDE_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("spdde_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("SPDDE_SEED");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("SPDDE_SEED");
    }
    std::string sub(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateWritesTrajectoryAndMoments) {
    const CliResult r = run({"simulate", "--config", config("linear_stable.json"), "--trajectories", "20", "--out", sub("a")});
    ASSERT_EQ(r.status, spdde::kExitPass) << r.err;
    const std::string traj = slurp(dir_ / "a" / "trajectory_0000.csv");
    EXPECT_EQ(traj.substr(0, traj.find('\n')), "time,mode_1,mode_2,mode_3,mode_4,mode_5,mode_6,mode_7,mode_8,active_index");
    const std::string moments = slurp(dir_ / "a" / "moments.csv");
    EXPECT_EQ(moments.substr(0, moments.find('\n')), "time,mean_norm_sq,std_error");
}

TEST_F(CliTest, RerunIsByteIdentical) {
    ASSERT_EQ(run({"simulate", "--config", config("linear_stable.json"), "--trajectories", "20", "--out", sub("a")}).status, 0);
    ASSERT_EQ(run({"simulate", "--config", config("linear_stable.json"), "--trajectories", "20", "--threads", "3",
                   "--out", sub("b")})
                  .status,
              0);
    for (const char* f : {"trajectory_0000.csv", "moments.csv"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
}

TEST_F(CliTest, SeedPrecedence) {
    const std::string cfg = config("linear_stable.json");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--trajectories", "5", "--seed", "5", "--out", sub("flag")}).status, 0);
    setenv("SPDDE_SEED", "5", 1);
    ASSERT_EQ(run({"simulate", "--config", cfg, "--trajectories", "5", "--out", sub("env")}).status, 0);
    ASSERT_EQ(run({"simulate", "--config", cfg, "--trajectories", "5", "--seed", "6", "--out", sub("both")}).status, 0);
    unsetenv("SPDDE_SEED");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--trajectories", "5", "--out", sub("cfg")}).status, 0);
    const std::string flag = slurp(dir_ / "flag" / "moments.csv");
    EXPECT_EQ(flag, slurp(dir_ / "env" / "moments.csv"));
    EXPECT_NE(flag, slurp(dir_ / "both" / "moments.csv"));
    EXPECT_NE(flag, slurp(dir_ / "cfg" / "moments.csv"));
}

TEST_F(CliTest, BadSeedInEnvironmentIsConfigError) {
    setenv("SPDDE_SEED", "abc", 1);
    EXPECT_EQ(run({"simulate", "--config", config("linear_stable.json"), "--out", sub("a")}).status,
              spdde::kExitConfigError);
}

TEST_F(CliTest, UnknownSubcommandAndMissingConfig) {
    EXPECT_EQ(run({"frobnicate"}).status, spdde::kExitConfigError);
    EXPECT_EQ(run({}).status, spdde::kExitConfigError);
    EXPECT_EQ(run({"simulate", "--config", sub("missing.json")}).status, spdde::kExitConfigError);
    EXPECT_EQ(run({"--help"}).status, spdde::kExitPass);
}

TEST_F(CliTest, UnknownConfigKeyIsNamed) {
    std::string text = slurp(config("linear_stable.json"));
    const auto pos = text.find("\"run\"");
    ASSERT_NE(pos, std::string::npos);
    const auto brace = text.find('{', pos);
    text.insert(brace + 1, "\"bogus_knob\": 3,");
    const fs::path path = dir_ / "bad.json";
    std::ofstream(path) << text;
    const CliResult r = run({"simulate", "--config", path.string(), "--out", sub("a")});
    EXPECT_EQ(r.status, spdde::kExitConfigError);
    EXPECT_NE(r.err.find("run.bogus_knob"), std::string::npos) << r.err;
}

TEST_F(CliTest, Halanay) {
    const CliResult r = run({"halanay", "--a1", "-3", "--a2", "1", "--tau", "1", "--mu", "2"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("lambda_star=0.7920"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("threshold=0.875"), std::string::npos) << r.out;
    EXPECT_EQ(run({"halanay", "--a1", "-1", "--a2", "2", "--tau", "1"}).status, spdde::kExitConfigError);
}

TEST_F(CliTest, AdtVerifyAndGenerate) {
    const CliResult bad = run({"adt", "verify", "--signal", config("adt_violating_signal.json")});
    EXPECT_EQ(bad.status, spdde::kExitCertificateFailure);
    EXPECT_NE(bad.out.find("adt violated: window ["), std::string::npos) << bad.out;

    const CliResult gen = run({"adt", "generate", "--indices", "0", "1", "--tau-a", "0.5", "--n0", "1", "--horizon", "10",
                         "--grid-step", "0.05", "--seed", "3", "--out", sub("g")});
    ASSERT_EQ(gen.status, 0) << gen.err;
    const std::string signal = (dir_ / "g" / "signal.json").string();
    const CliResult ok = run({"adt", "verify", "--signal", signal});
    EXPECT_EQ(ok.status, 0) << ok.out << ok.err;
    EXPECT_NE(ok.out.find("adt holds"), std::string::npos);
}

TEST_F(CliTest, CertifyComparisonWritesReport) {
    const CliResult r = run({"certify", "comparison", "--config", config("linear_stable.json"), "--trajectories", "200",
                       "--out", sub("c")});
    EXPECT_EQ(r.status, 0) << r.out << r.err;
    const std::string report = slurp(dir_ / "c" / "report_comparison.json");
    EXPECT_NE(report.find("\"verdict\""), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "c" / "comparison_curve.csv"));
}
