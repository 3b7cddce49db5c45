#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "holosep/cli.hpp"
#include "holosep/errors.hpp"
#include "test_support.hpp"

namespace holosep::cli {
namespace {

using namespace holosep::testing;
using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kSourceDir = HOLOSEP_SOURCE_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("holosep_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const json& j) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

json lambda_config(const char* which, std::size_t steps = 4096) {
  json j;
  j["system"]["lambda"] = {{"omega0", std::sqrt(3.0)}, {"delta", 1.0}, {"eta", kPi / 3}};
  j["subspace"] = {{"lambda_case", which}};
  j["section"] = "auto";
  j["grid"] = {{"tau", kPi / 2}, {"steps", steps}};
  return j;
}

json resonant_case_i_config() {
  json j;
  j["system"]["lambda"] = {{"omega0", 1.0}, {"delta", 0.0}};
  j["subspace"] = {{"lambda_case", "i"}};
  j["section"] = "fixed";
  j["grid"] = {{"tau", kPi}, {"steps", 4096}};
  return j;
}

json generic_config(std::uint64_t seed, std::size_t steps = 2048) {
  json j;
  j["system"]["random_driven"] = {{"dimension", 4}};
  j["subspace"] = {{"random", {{"columns", 2}}}};
  j["section"] = "phase_anchored";
  j["grid"] = {{"tau", 1.0}, {"steps", steps}};
  j["seed"] = seed;
  return j;
}

TEST(MatrixJson, NestedAndFlatLayouts) {
  ComplexMatrix m(2, 2);
  m << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8);
  const json nested = matrix_to_json(m);
  EXPECT_EQ(nested[1][0][1], 6.0);
  EXPECT_EQ(matrix_from_json(nested, "m"), m);
  const json flat = json::array({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  EXPECT_EQ(matrix_from_json(flat, "m", 2, 2), m);
  EXPECT_THROW(matrix_from_json(flat, "m"), ConfigError);
  EXPECT_THROW(matrix_from_json(json::array({{{1, 2}}, {{3, 4}, {5, 6}}}), "m"), ConfigError);
  EXPECT_THROW(matrix_from_json(json::array({{{1, 2, 3}}}), "m"), ConfigError);
}

TEST_F(CliTest, ParsesLambdaConfigWithOverrides) {
  const auto path = write("c.json", lambda_config("ii"));
  const RunConfig c = load_config(path, Overrides{std::size_t{128}, 1.0, std::nullopt});
  EXPECT_EQ(c.steps, 128u);
  EXPECT_DOUBLE_EQ(c.tau, 1.0);
  EXPECT_EQ(c.system.dimension(), 3);
  EXPECT_EQ(c.initial_frame.cols(), 2);
  EXPECT_TRUE(std::holds_alternative<PhaseAnchoredSection>(c.section));
}

TEST_F(CliTest, StrictParsingRejectsBadConfigs) {
  auto expect_config_error = [&](json j) {
    EXPECT_THROW(load_config(write("bad.json", j)), ConfigError) << j.dump();
  };
  auto j = lambda_config("ii");
  j["unexpected"] = 1;
  expect_config_error(j);

  j = lambda_config("ii");
  j["grid"]["steps"] = 1;
  expect_config_error(j);

  j = lambda_config("ii");
  j["grid"]["tau"] = -1.0;
  expect_config_error(j);

  j = lambda_config("ii");
  j["system"]["lambda"]["omega2"] = {1.0, 0.0};  // breaks normalization
  expect_config_error(j);

  j = lambda_config("iv");
  expect_config_error(j);

  j = lambda_config("ii");
  j["subspace"] = {{"matrix", json::array({{{1, 0}}, {{0, 0}}})}};  // 2 rows for a 3-level system
  expect_config_error(j);

  j = lambda_config("ii");
  j["system"]["constant"] = json::array({{{0, 0}}});  // two system descriptors
  expect_config_error(j);

  j = generic_config(1);
  j["subspace"] = {{"lambda_case", "i"}};
  expect_config_error(j);

  j = lambda_config("ii");
  j["tolerances"] = {{"structure_tol", -1.0}};
  expect_config_error(j);

  EXPECT_THROW(load_config(dir_ / "missing.json"), ConfigError);
  std::ofstream(dir_ / "garbage.json") << "{not json";
  EXPECT_THROW(load_config(dir_ / "garbage.json"), ConfigError);
}

TEST_F(CliTest, SampledHamiltonianAndCustomSectionFiles) {
  // Constant drive given as two samples; the section is the Schroedinger frame itself.
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 2) = h(2, 0) = 1.0;
  json sampled = {{"dimension", 3}, {"times", {0.0, 1.0}},
                  {"matrices", {matrix_to_json(h), matrix_to_json(h)}}};
  write("h.json", sampled);
  ComplexMatrix psi0 = ComplexMatrix::Zero(3, 1);
  psi0(1, 0) = 1.0;  // decoupled level
  json frames = {{"dimension", 3}, {"columns", 1}, {"times", json::array()}, {"matrices", json::array()}};
  for (int k = 0; k <= 4; ++k) {
    frames["times"].push_back(0.25 * k);
    frames["matrices"].push_back(json::array({{0, 0}, {1, 0}, {0, 0}}));  // flat layout
  }
  write("l.json", frames);
  json config = {{"system", {{"sampled", "h.json"}}},
                 {"subspace", {{"matrix", matrix_to_json(psi0)}}},
                 {"section", {{"custom", "l.json"}}},
                 {"grid", {{"tau", 1.0}, {"steps", 4}}}};
  const RunConfig c = load_config(write("c.json", config));
  const auto run = run_pipeline(c);
  const auto report = separability_report(run.section, run.schrodinger, c.system);
  EXPECT_EQ(report.classification, Classification::case_i);
  EXPECT_TRUE(matrix_near(report.w_direct, ComplexMatrix::Identity(1, 1), 1e-14));

  sampled["matrices"].push_back(matrix_to_json(h));  // count mismatch
  write("h.json", sampled);
  EXPECT_THROW(load_config(dir_ / "c.json"), ConfigError);
}

TEST(ReportJson, RoundTrip) {
  DecompositionReport r;
  r.overlap = diag2(1.0, 0.5);
  r.w_final = diag2(1.0, kI);
  r.w_direct = diag2(1.0, Complex(0.1, 0.3));
  r.holonomic_factor = diag2(-kI, 1.0);
  r.dynamical_factor = matkit::pauli_x();
  r.g_factor = matkit::pauli_y();
  r.d_factor = matkit::pauli_z();
  r.max_commutator = 1.0 / 3.0;
  r.separation_residual = 1e-300;
  r.product_residual = 2.5e-7;
  r.classification = Classification::case_iii;
  r.time_evolution = diag2(Complex(0.7, -0.7), 2.0);
  r.in_phase_margin = -0.125;
  r.tau = kPi;
  r.steps = 4096;
  const json j = report_to_json(r);
  const DecompositionReport back = report_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.overlap, r.overlap);
  EXPECT_EQ(back.w_final, r.w_final);
  EXPECT_EQ(back.w_direct, r.w_direct);
  EXPECT_EQ(back.holonomic_factor, r.holonomic_factor);
  EXPECT_EQ(back.dynamical_factor, r.dynamical_factor);
  EXPECT_EQ(back.g_factor, r.g_factor);
  EXPECT_EQ(back.d_factor, r.d_factor);
  EXPECT_EQ(back.max_commutator, r.max_commutator);
  EXPECT_EQ(back.separation_residual, r.separation_residual);
  EXPECT_EQ(back.product_residual, r.product_residual);
  EXPECT_EQ(back.classification, r.classification);
  EXPECT_EQ(back.time_evolution, r.time_evolution);
  EXPECT_EQ(back.in_phase_margin, r.in_phase_margin);
  EXPECT_EQ(back.tau, r.tau);
  EXPECT_EQ(back.steps, r.steps);
  EXPECT_EQ(report_to_json(back).dump(), j.dump());

  json extra = j;
  extra["note"] = "x";
  EXPECT_THROW(report_from_json(extra), ConfigError);
  json missing = j;
  missing.erase("overlap");
  EXPECT_THROW(report_from_json(missing), ConfigError);
}

TEST_F(CliTest, DecomposeCaseTwoReport) {
  const auto config = write("c.json", lambda_config("ii"));
  const auto out = dir_ / "report.json";
  std::ostringstream so, se;
  ASSERT_EQ(cmd_decompose(config, out, {}, so, se), kExitOk) << se.str();
  const auto r = report_from_json(json::parse(slurp(out)));
  EXPECT_EQ(r.classification, Classification::case_ii);
  EXPECT_TRUE(matrix_near(r.w_final, diag2(1.0, kI), 1e-6));
  EXPECT_EQ(r.steps, 4096u);
}

TEST_F(CliTest, DecomposeCaseOneToStdout) {
  const auto config = write("c.json", resonant_case_i_config());
  std::ostringstream so, se;
  ASSERT_EQ(cmd_decompose(config, {}, {}, so, se), kExitOk) << se.str();
  const auto r = report_from_json(json::parse(so.str()));
  EXPECT_TRUE(matrix_near(r.time_evolution, -ComplexMatrix::Identity(2, 2), 1e-8));
}

TEST_F(CliTest, DecomposeExitCodes) {
  std::ostringstream so, se;
  auto moving = lambda_config("ii", 256);
  moving["section"] = "fixed";
  EXPECT_EQ(cmd_decompose(write("m.json", moving), {}, {}, so, se), kExitConfig);
  EXPECT_NE(se.str().find("constant subspace"), std::string::npos);

  EXPECT_EQ(cmd_decompose(dir_ / "none.json", {}, {}, so, se), kExitConfig);

  // A generic instance whose endpoint overlap is not positive definite.
  int in_phase_code = -1;
  for (std::uint64_t seed = 0; seed < 20 && in_phase_code != kExitInPhase; ++seed) {
    in_phase_code = cmd_decompose(write("g.json", generic_config(seed, 256)), dir_ / "g_out.json",
                                  {}, so, se);
  }
  EXPECT_EQ(in_phase_code, kExitInPhase);

  EXPECT_EQ(cmd_decompose(write("ok.json", lambda_config("ii", 64)), dir_ / "no" / "such" / "r.json",
                          {}, so, se),
            kExitIo);
}

TEST(Demo, CasesMatchClosedForms) {
  for (auto which : {lambda::Case::i, lambda::Case::ii, lambda::Case::iii}) {
    std::ostringstream so, se;
    EXPECT_EQ(cmd_demo(which, {}, so, se), kExitOk) << so.str() << se.str();
    EXPECT_NE(so.str().find("max deviation"), std::string::npos);
  }
}

TEST(Demo, ResonantCaseOneOverride) {
  DemoOptions opt;
  opt.delta = 0.0;
  const auto p = demo_params(lambda::Case::i, opt);
  EXPECT_DOUBLE_EQ(p.omega0, 1.0);
  EXPECT_DOUBLE_EQ(p.tau, kPi);
  std::ostringstream so, se;
  EXPECT_EQ(cmd_demo(lambda::Case::i, opt, so, se), kExitOk);
  const auto pos = so.str().find("max deviation");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(so.str().substr(pos + 13)), 1e-8);
}

TEST(Demo, CaseThreeReportsVanishingCommutator) {
  std::ostringstream so, se;
  ASSERT_EQ(cmd_demo(lambda::Case::iii, {}, so, se), kExitOk);
  const auto pos = so.str().find("max_commutator");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(so.str().substr(pos + 14)), 1e-8);
}

TEST(Demo, InvalidCaseName) { EXPECT_THROW(parse_case("iv"), ConfigError); }

TEST_F(CliTest, SeparabilityExitCodes) {
  std::ostringstream so, se;
  EXPECT_EQ(cmd_separability(write("i.json", resonant_case_i_config()), {}, so, se), kExitOk);
  EXPECT_NE(so.str().find("case_i"), std::string::npos);
  so.str("");
  EXPECT_EQ(cmd_separability(write("iii.json", lambda_config("iii")), {}, so, se), kExitOk);
  EXPECT_NE(so.str().find("case_iii"), std::string::npos);
  so.str("");
  EXPECT_EQ(cmd_separability(write("g.json", generic_config(7)), {}, so, se), kExitNonSeparable);
  EXPECT_NE(so.str().find("non_separable"), std::string::npos);
  EXPECT_EQ(cmd_separability(dir_ / "none.json", {}, so, se), kExitConfig);
}

TEST_F(CliTest, ExportCaseTwoCsv) {
  const auto csv = dir_ / "ii.csv";
  std::ostringstream so, se;
  ASSERT_EQ(cmd_export(write("c.json", lambda_config("ii", 512)), csv, {}, so, se), kExitOk);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  ASSERT_EQ(header.size(), 1u + 4u * 8u);
  auto column = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const std::size_t k22 = column("K_22_re");
  const std::size_t o22 = column("O_22_re");
  const std::size_t w11 = column("W_11_re");
  ASSERT_LT(k22, header.size());
  const double phidot = 2.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), header.size());
    EXPECT_LE(std::abs(v[k22]), 1e-10);
    const double s = std::sin(phidot * v[0]);
    EXPECT_NEAR(v[o22], std::sqrt(1.0 - 0.75 * s * s), 1e-8);
    if (rows == 0) {
      EXPECT_EQ(v[0], 0.0);
      for (std::size_t c = w11; c < w11 + 8; ++c) EXPECT_EQ(v[c], (c == w11 || c == w11 + 6) ? 1.0 : 0.0);
    }
    ++rows;
  }
  EXPECT_EQ(rows, 513u);
  EXPECT_EQ(cmd_export(dir_ / "c.json", dir_ / "missing" / "x.csv", {}, so, se), kExitIo);
}

TEST_F(CliTest, OutputsAreDeterministic) {
  const auto config = write("g.json", generic_config(3, 512));
  std::ostringstream so, se;
  ASSERT_EQ(cmd_export(config, dir_ / "a.csv", {}, so, se), kExitOk);
  ASSERT_EQ(cmd_export(config, dir_ / "b.csv", {}, so, se), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  const auto ii = write("ii.json", lambda_config("ii", 512));
  ASSERT_EQ(cmd_decompose(ii, dir_ / "a.json", {}, so, se), kExitOk);
  ASSERT_EQ(cmd_decompose(ii, dir_ / "b.json", {}, so, se), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
}

TEST_F(CliTest, GaugeCheckHoldsForLambdaCases) {
  for (const char* which : {"i", "ii", "iii"}) {
    const auto config = write(std::string(which) + ".json", lambda_config(which, 2048));
    for (std::uint64_t seed : {1u, 2u}) {
      std::ostringstream so, se;
      EXPECT_EQ(cmd_gauge_check(config, seed, {}, so, se), kExitOk) << so.str() << se.str();
    }
  }
}

TEST_F(CliTest, GaugeCheckVerdictsAgreeAcrossSeedsOnGenericInstance) {
  const auto config = write("g.json", generic_config(11, 4096));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::ostringstream so, se;
    EXPECT_EQ(cmd_gauge_check(config, seed, {}, so, se), kExitOk) << so.str() << se.str();
    EXPECT_NE(so.str().find("non_separable -> non_separable"), std::string::npos);
  }
}

TEST(ShippedConfigs, AllParse) {
  for (const auto& entry : fs::directory_iterator(kSourceDir / "configs")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HOLOSEP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Process, ExitCodes) {
  const std::string configs = (kSourceDir / "configs").string();
  EXPECT_EQ(run_cli("demo --case ii --steps 4096"), 0);
  EXPECT_EQ(run_cli("demo --case iv"), kExitConfig);
  EXPECT_EQ(run_cli("separability --config " + configs + "/lambda_case_iii.json"), 0);
  EXPECT_EQ(run_cli("separability --config " + configs + "/generic_driven.json --steps 1024"),
            kExitNonSeparable);
  EXPECT_EQ(run_cli("decompose --config " + configs + "/fixed_moving.json"), kExitConfig);
  EXPECT_EQ(run_cli("decompose --config " + configs + "/generic_driven.json --steps 256"),
            kExitInPhase);
  EXPECT_EQ(run_cli("decompose"), kExitConfig);
  EXPECT_EQ(run_cli("no-such-command"), kExitConfig);
  EXPECT_EQ(run_cli("--help"), 0);
}

}  // namespace
}  // namespace holosep::cli
