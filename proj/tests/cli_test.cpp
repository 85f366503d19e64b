#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "src/cli/commands.hpp"

using namespace fbsdde;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Data lines of a CSV (manifest comments and header removed).
std::vector<std::string> data_rows(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::vector<std::string> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) continue;
        if (header) {
            header = false;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fbsdde_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_spec(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    std::string out_dir(const std::string& sub = "out") const { return (dir_ / sub).string(); }

    fs::path dir_;
};

const char* kBsde = "[problem]\nmode = bsde\nT = 1\nxi = constant(5)\n[f]\nfn = zero\nlipschitz_K = 0.01\n";
const char* kUnitDriver =
    "[problem]\nmode = bsde\nT = 1\nxi = constant(0)\n[f]\nfn = constant\nparams = 1\nlipschitz_K = 0.01\n";
const char* kBrownian = "[problem]\nmode = bsde\nT = 1\nxi = affine(0, 1, 0)\n[f]\nfn = zero\nlipschitz_K = 0.01\n";
const char* kUncertified =
    "[problem]\nmode = fbsdde\nT = 2\nx = 1\nxi = affine(0, 0, 1)\n[f]\nfn = zero\nlipschitz_K = 0.01\n";

}  // namespace

TEST_F(CliTest, CertifySatisfied) {
    const auto spec = write_spec("a.ini", kBsde);
    const auto r = run({"certify", spec.string(), "--out", out_dir()});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("rho=0.08 SATISFIED"), std::string::npos) << r.out;
    const auto rows = data_rows(fs::path(out_dir()) / "certificate.csv");
    ASSERT_EQ(rows.size(), 1U);
    EXPECT_EQ(rows[0], "declared,bsde,0.01,0.08,true");
}

TEST_F(CliTest, CertifyNotSatisfied) {
    const auto spec = write_spec("b.ini", kUncertified);
    const auto r = run({"certify", spec.string(), "--out", out_dir()});
    EXPECT_EQ(r.code, kExitUnsatisfied);
    EXPECT_NE(r.out.find("rho=2.6095"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("NOT SATISFIED"), std::string::npos);
}

TEST_F(CliTest, CertifyMissingLipschitz) {
    const auto spec = write_spec("c.ini", "[problem]\nmode = bsde\nT = 1\nxi = constant(1)\n[f]\nfn = zero\n");
    const auto r = run({"certify", spec.string(), "--out", out_dir()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("lipschitz_K"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("c.ini:5"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"solve"}).code, kExitUsage);
    EXPECT_EQ(run({"solve", (dir_ / "missing.ini").string()}).code, kExitUsage);
    const auto spec = write_spec("a.ini", kBsde);
    EXPECT_EQ(run({"solve", spec.string(), "--paths", "1"}).code, kExitUsage);
    EXPECT_EQ(run({"solve", spec.string(), "--steps", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, SolveConstantSpec) {
    const auto spec = write_spec("a.ini", kBsde);
    const auto r = run({"solve", spec.string(), "--steps", "8", "--paths", "500", "--out", out_dir(),
                        "--timestamp", "2026-01-01T00:00:00Z"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto y0 = data_rows(fs::path(out_dir()) / "Y0.csv");
    ASSERT_EQ(y0.size(), 1U);
    const auto cells = split(y0[0]);
    EXPECT_EQ(cells[0], "5");
    EXPECT_EQ(cells[1], "0");
    EXPECT_EQ(cells[4], "certified");
    EXPECT_EQ(data_rows(fs::path(out_dir()) / "paths.csv").size(), 10U * 9U);
    EXPECT_EQ(data_rows(fs::path(out_dir()) / "diagnostics.csv").size(), 2U);
    EXPECT_EQ(data_rows(fs::path(out_dir()) / "residuals.csv").size(), 9U);
}

TEST_F(CliTest, SolveUnitDriverGivesHorizon) {
    const auto spec = write_spec("a.ini", kUnitDriver);
    const auto r = run({"solve", spec.string(), "--steps", "16", "--paths", "200", "--out", out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(split(data_rows(fs::path(out_dir()) / "Y0.csv")[0])[0], "1");
}

TEST_F(CliTest, ManifestReproducesFile) {
    const auto spec = write_spec("a.ini", kBrownian);
    const auto r = run({"solve", spec.string(), "--steps", "4", "--paths", "3000", "--seed", "17", "--out",
                        out_dir("first"), "--timestamp", "2026-02-03T04:05:06Z"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const std::string text = slurp(fs::path(out_dir("first")) / "Y0.csv");
    ASSERT_TRUE(text.starts_with("# command: fbsdde solve "));
    std::string command = text.substr(std::string("# command: fbsdde ").size());
    command = command.substr(0, command.find('\n'));
    std::vector<std::string> args;
    std::istringstream in(command);
    for (std::string a; in >> a;) args.push_back(a);
    EXPECT_NE(command.find("--seed 17"), std::string::npos);
    const std::string before = slurp(fs::path(out_dir("first")) / "paths.csv");
    fs::remove_all(out_dir("first"));
    ASSERT_EQ(run(args).code, kExitOk);
    EXPECT_EQ(slurp(fs::path(out_dir("first")) / "Y0.csv"), text);
    EXPECT_EQ(slurp(fs::path(out_dir("first")) / "paths.csv"), before);
}

TEST_F(CliTest, UncertifiedSolveWarns) {
    const auto spec = write_spec("b.ini", kUncertified);
    const auto r = run({"solve", spec.string(), "--steps", "4", "--paths", "200", "--out", out_dir()});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.err.find("uncertified"), std::string::npos);
    EXPECT_EQ(split(data_rows(fs::path(out_dir()) / "Y0.csv")[0])[4], "uncertified");
}

TEST_F(CliTest, SolverFailureWritesDiagnostics) {
    // X = W makes the (W, X) design singular; there is no flag to disable
    // ridge damping, so trigger a non-finite terminal value instead.
    const auto spec = write_spec("n.ini", "[problem]\nmode = fbsdde\nT = 1\nx = 0\nxi = quadratic(0, 0, 0, 0, 0, 1)\n"
                                          "[f]\nfn = zero\nlipschitz_K = 0.01\n[b]\nfn = constant\nparams = 1e200\n"
                                          "lipschitz_K = 0.01\n");
    const auto r = run({"solve", spec.string(), "--steps", "4", "--paths", "100", "--out", out_dir()});
    EXPECT_EQ(r.code, kExitSolverFailure) << r.err;
    EXPECT_NE(r.err.find("not finite"), std::string::npos) << r.err;
    EXPECT_TRUE(fs::exists(fs::path(out_dir()) / "diagnostics.csv"));
}

TEST_F(CliTest, ConvergenceStudyRows) {
    const auto spec = write_spec("a.ini", kBrownian);
    const auto r = run({"convergence-study", spec.string(), "--steps-list", "4,8", "--paths-list", "1000,10000",
                        "--oracle", "--out", out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = data_rows(fs::path(out_dir()) / "study.csv");
    ASSERT_EQ(rows.size(), 4U);
    for (const auto& row : rows) {
        const auto c = split(row);
        ASSERT_EQ(c.size(), 8U);
        EXPECT_EQ(c[4], "0");   // tree value of E[W(T)]
        EXPECT_FALSE(c[5].empty());
    }
    // For each N: the reported standard error shrinks ~ sqrt(10) between the two M.
    for (std::size_t k = 0; k < 4; k += 2) {
        const double se_small = std::stod(split(rows[k])[3]);
        const double se_large = std::stod(split(rows[k + 1])[3]);
        EXPECT_GT(se_small / se_large, 2.0);
        EXPECT_LE(std::stod(split(rows[k + 1])[5]), 4.0 * se_large);
    }
}

TEST_F(CliTest, ConvergenceStudyConstantAndCap) {
    const auto spec = write_spec("a.ini", kBsde);
    auto r = run({"convergence-study", spec.string(), "--steps-list", "4,8", "--paths-list", "100,1000", "--oracle",
                  "--out", out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const auto& row : data_rows(fs::path(out_dir()) / "study.csv")) EXPECT_EQ(split(row)[5], "0");

    r = run({"convergence-study", spec.string(), "--steps-list", "20", "--paths-list", "100", "--oracle", "--out",
             out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("warning: N=20 exceeds the oracle cap"), std::string::npos) << r.err;
    const auto c = split(data_rows(fs::path(out_dir()) / "study.csv")[0]);
    EXPECT_TRUE(c[4].empty());
    EXPECT_TRUE(c[5].empty());
}

TEST_F(CliTest, CompareOracle) {
    const auto spec = write_spec("a.ini", kBsde);
    auto r = run({"compare-oracle", spec.string(), "--steps", "6", "--paths", "1000", "--out", out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto summary = split(data_rows(fs::path(out_dir()) / "compare_summary.csv")[0]);
    EXPECT_EQ(summary[3], "0");
    EXPECT_FALSE(data_rows(fs::path(out_dir()) / "compare.csv").empty());

    const auto brownian = write_spec("w.ini", kBrownian);
    r = run({"compare-oracle", brownian.string(), "--steps", "8", "--paths", "100000", "--out", out_dir()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto s = split(data_rows(fs::path(out_dir()) / "compare_summary.csv")[0]);
    EXPECT_LE(std::stod(s[3]), 3.0 * std::stod(s[1]));

    r = run({"compare-oracle", spec.string(), "--steps", "13", "--paths", "100", "--out", out_dir()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("cap"), std::string::npos);
}
