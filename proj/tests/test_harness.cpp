#include <gtest/gtest.h>

#include <sstream>

#include "ldg/harness.hpp"

using namespace ldg;

namespace {

std::string run_to_string(const RunConfig& cfg) {
  std::ostringstream os;
  run_mode(cfg, os);
  return os.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string l;
  while (std::getline(is, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  const auto cfg = parse_config(
      "# comment\n"
      "theta = 0.8\n"
      "problem = ex1_cubic   # trailing\n"
      "degree = 2\n"
      "cells = 10,20,40,80\n"
      "variant = flux2\n"
      "cfl = 0.004\n"
      "t_end = 0.5\n"
      "b_hat = rank_one\n");
  EXPECT_EQ(cfg.problem, "ex1_cubic");
  EXPECT_EQ(cfg.degree, 2);
  ASSERT_EQ(cfg.thetas.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.thetas[0], 0.8);
  EXPECT_EQ(cfg.cells, (std::vector<int>{10, 20, 40, 80}));
  EXPECT_EQ(cfg.variant, FluxVariant::flux2);
  EXPECT_DOUBLE_EQ(*cfg.cfl, 0.004);
  EXPECT_DOUBLE_EQ(cfg.t_end, 0.5);
  EXPECT_EQ(cfg.b_hat, BHatMode::rank_one);
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, ConvectiveWeight) {
  const auto cfg = parse_config("theta = 0.8\ntheta_convective = 1.0\n");
  ASSERT_TRUE(cfg.theta_convective.has_value());
  const FluxConfig fc = flux_config(cfg, 0.8);
  EXPECT_DOUBLE_EQ(fc.theta, 0.8);
  EXPECT_DOUBLE_EQ(fc.theta_f(), 1.0);
  EXPECT_DOUBLE_EQ(flux_config(parse_config("theta = 0.8\n"), 0.8).theta_f(), 0.8);
  EXPECT_THROW(parse_config("theta_convective = 0\n"), ConfigError);
}

TEST(Config, UnknownKeyNamesKeyAndLine) {
  try {
    parse_config("problem = ex1_cubic\nth\xd0\xb5ta = 0.8\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("th\xd0\xb5ta"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("cells = 20,10\n"), ConfigError);
  EXPECT_THROW(parse_config("cells = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("degree = 8\n"), ConfigError);
  EXPECT_THROW(parse_config("degree = two\n"), ConfigError);
  EXPECT_THROW(parse_config("theta = 1\ntheta = 0.8\n"), ConfigError);
  EXPECT_THROW(parse_config("theta = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("problem = ex9\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = plot\n"), ConfigError);
  EXPECT_THROW(parse_config("just text\n"), ConfigError);
  EXPECT_THROW(parse_config("cfl = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("boundary = robin\n"), ConfigError);
}

TEST(Config, ThetaListAndWarning) {
  const auto cfg = parse_config("theta = 0.8, 1.0, 1.6\n");
  EXPECT_EQ(cfg.thetas.size(), 3u);
  EXPECT_EQ(cfg.warnings.size(), 1u);
}

TEST(Config, ResolveProblemHonoursBoundary) {
  auto cfg = parse_config("problem = ex4_mixed\nboundary = dirichlet\n");
  EXPECT_EQ(resolve_problem(cfg).id, "ex4_dirichlet");
  cfg = parse_config("problem = ex1_cubic\nboundary = dirichlet\n");
  EXPECT_THROW(resolve_problem(cfg), InputError);
}

TEST(Config, TableOneCflDefaults) {
  EXPECT_DOUBLE_EQ(default_cfl("ex1_cubic", 0), 0.005);
  EXPECT_DOUBLE_EQ(default_cfl("ex1_cubic", 2), 0.005);
  EXPECT_DOUBLE_EQ(default_cfl("ex1_cubic", 3), 0.002);
  EXPECT_DOUBLE_EQ(default_cfl("ex1_cubic", 4), 0.001);
  EXPECT_DOUBLE_EQ(default_cfl("ex6_buckley", 1), 0.05);
  EXPECT_DOUBLE_EQ(default_cfl("ex6_buckley", 2), 0.01);
  RunConfig cfg;
  cfg.cfl = 0.123;
  EXPECT_DOUBLE_EQ(effective_cfl(cfg), 0.123);
}

TEST(Csv, Formatting) {
  EXPECT_EQ(fmt_sci(1.0), "1.00000e+00");
  EXPECT_EQ(fmt_sci(5.55e-3), "5.55000e-03");
  EXPECT_EQ(fmt_opt(std::nullopt), "");
  std::vector<ConvergenceRow> rows{{1, 1.0, 10, 0.04, std::nullopt}, {1, 1.0, 20, 0.01, std::nullopt}};
  fill_orders(rows);
  ASSERT_TRUE(rows[1].order.has_value());
  EXPECT_DOUBLE_EQ(*rows[1].order, 2.0);
  std::ostringstream os;
  write_convergence_csv(os, rows);
  EXPECT_EQ(os.str(), "k,theta,N,error,order\n1,1.00000e+00,10,4.00000e-02,\n1,1.00000e+00,20,1.00000e-02,2.00000e+00\n");
}

TEST(Drivers, ConvergenceLadderMatchesTableTwo) {
  auto cfg = parse_config("mode = convergence\nproblem = ex1_cubic\ndegree = 1\ncells = 10,20,40\ntheta = 1.0\n");
  const auto rows = run_convergence(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].order.has_value());
  EXPECT_NEAR(rows[2].error, 5.55e-3, 0.15 * 5.55e-3);
  EXPECT_NEAR(*rows[2].order, 2.00, 0.15);
}

TEST(Drivers, CsvIsByteStable) {
  const auto cfg = parse_config("mode = convergence\nproblem = ex5_nonlindiff\ndegree = 1\ncells = 8,16\nt_end = 0.05\n");
  const std::string a = run_to_string(cfg), b = run_to_string(cfg);
  EXPECT_EQ(a, b);
  const auto ls = lines_of(a);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "k,theta,N,error,order");
}

TEST(Drivers, HistoryRowsAndInitialError) {
  auto cfg = parse_config("mode = history\nproblem = ex3_longtime\ndegree = 1\ncells = 8\nt_end = 0.01\ndt_override = 0.001\n");
  const auto rows = run_history(cfg);
  ASSERT_EQ(rows.size(), 11u);  // t = 0 plus one row per step
  EXPECT_EQ(rows.front().t, 0.0);
  EXPECT_DOUBLE_EQ(rows.back().t, 0.01);
  const auto p = resolve_problem(cfg);
  const auto part = problem_mesh(p, 8);
  EXPECT_DOUBLE_EQ(rows.front().error, exact_error(l2_project(p.initial, part, 1), p, part, 0.0));
  cfg.history_stride = 4;
  const auto sparse = run_history(cfg);
  ASSERT_EQ(sparse.size(), 4u);  // steps 0, 4, 8, 10
  EXPECT_DOUBLE_EQ(sparse.back().t, 0.01);
  const auto ls = lines_of(run_to_string(cfg));
  EXPECT_EQ(ls[0], "theta,t,error");
  EXPECT_EQ(ls.size(), 5u);
}

TEST(Drivers, SnapshotSchema) {
  const auto cfg = parse_config("mode = run\nproblem = ex6_buckley\ndegree = 1\ncells = 12\nt_end = 0.001\n");
  const auto ls = lines_of(run_to_string(cfg));
  EXPECT_EQ(ls[0], "x,u1,u2");
  EXPECT_EQ(ls.size(), 121u);
  const auto p = builtin("ex6_buckley");
  const auto part = problem_mesh(p, 30);
  const auto rows = sample_field(l2_project(p.initial, part, 1), part);
  ASSERT_EQ(rows.size(), 300u);
  double worst = 0.0;
  for (const auto& r : rows)
    if (std::abs(r.x - 1.0 / 3.0) > part.h_max()) worst = std::max(worst, (r.u - p.initial(r.x)).norm());
  EXPECT_LE(worst, 1e-12);
}

TEST(Drivers, StudyModes) {
  auto cfg = parse_config("mode = projtest\nproblem = ex1_cubic\ndegree = 1\ncells = 16,32\ntheta = 0.8\n");
  const auto ls = lines_of(run_to_string(cfg));
  EXPECT_EQ(ls[0], "kind,k,theta,N,error,order");
  const auto rows = run_projtest(cfg);
  EXPECT_EQ(rows.size(), 10u);
  for (const auto& r : rows)
    if (r.order) EXPECT_NEAR(*r.order, 2.0, 0.2) << r.kind;
  cfg = parse_config("mode = fluxtest\nproblem = ex5_nonlindiff\ndegree = 1\ncells = 16,32\ntheta = 0.8\n");
  const auto fr = run_fluxtest(cfg);
  EXPECT_EQ(fr.size(), 6u);
  EXPECT_THROW(run_convergence(parse_config("problem = ex6_buckley\ncells = 4\n")), InputError);
}
