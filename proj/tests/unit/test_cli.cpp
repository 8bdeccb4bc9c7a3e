#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "simcost/cli.hpp"

using namespace simcost;

namespace {

std::string cfg_path(const std::string& name) { return std::string(SIMCOST_SOURCE_DIR) + "/configs/" + name; }

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "simcost");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(int(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

std::filesystem::path scratch(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("simcost_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
  std::vector<double> t, y;
  for (int i = 0; i < 8; ++i) {
    t.push_back(std::pow(10.0, -3.0 + i * 0.25));
    y.push_back(7.0 * std::pow(t.back(), 3));
  }
  const auto f = fit_loglog(t, y);
  EXPECT_NEAR(f.slope, 3.0, 1e-6);
  EXPECT_NEAR(f.intercept, std::log(7.0), 1e-6);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_THROW(fit_loglog({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(fit_loglog({1, 2, 3, 4}, {1, 0, 3, 4}), std::invalid_argument);
}

TEST(Simulate, EmptyGridGivesHeaderOnly) {
  auto cfg = load_config(cfg_path("pauli1.yaml"));
  cfg.sweep_t.clear();
  const auto r = cmd_simulate(cfg, "symmetric", 2);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(rows_to_csv(r), "t,error,bound,depth,ratio\n");
}

TEST(Simulate, PoissonBelowTail) {
  const auto cfg = load_config(cfg_path("pauli1.yaml"));
  const auto r = cmd_simulate(cfg, "poisson", 2);
  ASSERT_EQ(r.rows.size(), 18u);
  for (const auto& row : r.rows) EXPECT_LE(row.error, row.bound + 1e-14) << row.t << " " << *row.N;
}

TEST(Simulate, ExactAmplitudeDamping) {
  const auto cfg = load_config(cfg_path("amplitude_damping.yaml"));
  const auto r = cmd_simulate(cfg, "exact-ad", 1);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.error, 1e-8);
    EXPECT_LE(row.depth, long(std::ceil(M_PI)));
  }
}

TEST(Simulate, SchemeMismatch) {
  const auto cfg = load_config(cfg_path("pauli.yaml"));
  EXPECT_THROW(cmd_simulate(cfg, "exact-ad", 1), std::invalid_argument);
  EXPECT_THROW(cmd_simulate(cfg, "exact-pauli", 1), std::invalid_argument);
  EXPECT_THROW(cmd_simulate(cfg, "bogus", 1), std::invalid_argument);
  const auto ad = load_config(cfg_path("amplitude_damping.yaml"));
  EXPECT_THROW(cmd_simulate(ad, "symmetric", 1), std::invalid_argument);
  EXPECT_THROW(cmd_simulate(ad, "poisson", 1), std::invalid_argument);
}

TEST(Simulate, OrderSlopes) {
  auto cfg = load_config(cfg_path("pauli.yaml"));
  const auto sym = cmd_simulate(cfg, "symmetric", 2);
  ASSERT_TRUE(sym.fit.has_value());
  EXPECT_GE(sym.fit->slope, 2.7);
  EXPECT_LE(sym.fit->slope, 3.3);
  for (const auto& row : sym.rows) EXPECT_LE(row.ratio(), 1.0);

  auto ad = load_config(cfg_path("amplitude_damping.yaml"));
  ad.sweep_t.clear();
  for (int i = 0; i < 8; ++i) ad.sweep_t.push_back(1e-3 * std::pow(100.0, i / 7.0));
  const auto dil = cmd_simulate(ad, "dilated", 2);
  ASSERT_TRUE(dil.fit.has_value());
  EXPECT_GE(dil.fit->slope, 1.8);
  EXPECT_LE(dil.fit->slope, 2.2);
  for (const auto& row : dil.rows) EXPECT_LE(row.ratio(), 1.0);
}

TEST(Simulate, DeterministicAcrossWorkers) {
  auto cfg = load_config(cfg_path("custom_dephasing.yaml"));
  const std::string one = rows_to_csv(cmd_simulate(cfg, "symmetric", 1));
  const std::string many = rows_to_csv(cmd_simulate(cfg, "symmetric", 4));
  EXPECT_EQ(one, many);
}

TEST(Bound, PauliMatchesClosedForm) {
  auto cfg = load_config(cfg_path("pauli.yaml"));
  const auto b = cmd_bound(cfg, "uniform", false);
  EXPECT_TRUE(b.assumptions.all_pass());
  EXPECT_NEAR(b.report.kappa_lower, 1.0, 1e-9);
  EXPECT_NEAR(b.report.kappa_upper, 2.0, 1e-12);
  EXPECT_NEAR(b.report.t_mix, std::log(2.0) / 2.0, 1e-12);
  EXPECT_NEAR(b.report.lower_bound, pauli_lower_bound_closed_form(2.0, 2.0, 2, 1.0), 1e-12);
  ASSERT_TRUE(b.report.upper_bound.has_value());
  EXPECT_GE(*b.report.upper_bound, b.report.lower_bound);
  EXPECT_NE(bound_text(b).find("sandwich"), std::string::npos);
  EXPECT_NE(bound_json(b).find("\"lower_bound\""), std::string::npos);
}

TEST(Bound, AmplitudeDampingSandwich) {
  const auto cfg = load_config(cfg_path("amplitude_damping.yaml"));
  const auto b = cmd_bound(cfg, "uniform", false);
  EXPECT_TRUE(b.assumptions.all_pass());
  EXPECT_DOUBLE_EQ(b.report.params.D, 7.0);
  EXPECT_GE(b.report.kappa_lower, 0.5 - 1e-12);
  EXPECT_LE(b.report.kappa_lower, b.report.kappa_upper);
  ASSERT_TRUE(b.report.upper_bound.has_value());
  EXPECT_LE(*b.report.upper_bound, M_PI);
  EXPECT_GE(b.report.lower_bound, b.report.c_alpha_beta * 0.5 / 7.0 - 1e-15);
  EXPECT_LE(b.report.lower_bound, *b.report.upper_bound);
}

TEST(Bound, FixedKinds) {
  const auto cfg = load_config(cfg_path("pauli.yaml"));
  const auto ft = cmd_bound(cfg, "fixed-time", false);
  ASSERT_TRUE(ft.report.fixed.has_value());
  EXPECT_TRUE(ft.report.fixed->applicable);
  EXPECT_NEAR(ft.report.lower_bound, 0.05 * ft.report.kappa_lower / (8.0 * ft.report.params.D * ft.report.t_mix), 1e-15);
  const auto fp = cmd_bound(cfg, "fixed-precision", false);
  EXPECT_TRUE(fp.report.fixed->applicable);
  EXPECT_THROW(cmd_bound(cfg, "sideways", false), std::invalid_argument);
  auto no_target = cfg;
  no_target.bound.tau_target.reset();
  EXPECT_THROW(cmd_bound(no_target, "fixed-time", false), ConfigError);
}

TEST(Bound, AssumptionFailureNeedsForce) {
  const auto cfg = parse_config(
      "name: noy\nsystem: {qubits: 1}\nmodel: {preset: pauli}\nresources: {members: [\"X1\"]}\n");
  EXPECT_THROW(cmd_bound(cfg, "uniform", false), AssumptionFailure);
}

TEST(Verify, ShippedConfigsPass) {
  for (const char* name : {"pauli.yaml", "amplitude_damping.yaml", "custom_dephasing.yaml"}) {
    for (const auto& c : cmd_verify(load_config(cfg_path(name)))) EXPECT_TRUE(c.pass) << name << " " << c.name;
  }
}

TEST(Cli, ExitCodesAndOutputs) {
  const auto dir = scratch("cli");
  EXPECT_EQ(run({"simulate", "--config", cfg_path("pauli1.yaml"), "--scheme", "exact-pauli", "--out", dir.string(),
                 "--workers", "2"}),
            kExitOk);
  const std::string csv = slurp(dir / "pauli1-exact-pauli.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,error,bound,depth,ratio");
  EXPECT_EQ(run({"simulate", "--config", cfg_path("pauli1.yaml"), "--scheme", "exact-pauli", "--out",
                 (dir / "again").string()}),
            kExitOk);
  EXPECT_EQ(slurp(dir / "again" / "pauli1-exact-pauli.csv"), csv);

  EXPECT_EQ(run({"bound", "--config", cfg_path("amplitude_damping.yaml"), "--out", dir.string()}), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "amplitude_damping-bound.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "amplitude_damping-bound.json"));
  EXPECT_EQ(run({"verify", "--config", cfg_path("amplitude_damping.yaml")}), kExitOk);

  EXPECT_EQ(run({"simulate", "--config", cfg_path("pauli1.yaml")}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"verify", "--config", "/nonexistent.yaml"}), kExitUsage);

  const auto bad = dir / "noy.yaml";
  std::ofstream(bad) << "name: noy\nsystem: {qubits: 1}\nmodel: {preset: pauli}\nresources: {members: [\"X1\"]}\n";
  EXPECT_EQ(run({"bound", "--config", bad.string(), "--out", dir.string()}), kExitAssumption);
  EXPECT_EQ(run({"verify", "--config", bad.string()}), kExitAssumption);

  EXPECT_EQ(run({"simulate", "--config", cfg_path("custom_dephasing.yaml"), "--scheme", "symmetric", "--out",
                 dir.string()}),
            kExitOk);
  EXPECT_EQ(run({"fit", (dir / "custom_dephasing-symmetric.csv").string(), "--x", "t", "--y", "error"}), kExitOk);
  EXPECT_EQ(run({"fit", (dir / "custom_dephasing-symmetric.csv").string(), "--y", "nope"}), kExitUsage);
}
