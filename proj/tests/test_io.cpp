#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "impact/io.hpp"

using namespace impact;

TEST(Format, DoublesRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng) * std::pow(10.0, static_cast<double>(i % 20) - 10.0);
    EXPECT_EQ(io::parse_double(io::format_double(v), "v"), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Parse, Errors) {
  EXPECT_THROW(io::parse_double("abc", "x"), ConfigError);
  EXPECT_THROW(io::parse_double("1.5x", "x"), ConfigError);
  EXPECT_THROW(io::parse_count("2.5", "m"), ConfigError);
  EXPECT_THROW(io::parse_count("-3", "m"), ConfigError);
  EXPECT_THROW(io::parse_state("1 2", "left"), ConfigError);
  EXPECT_THROW(io::parse_bool("maybe", "entropy_fix"), ConfigError);
  EXPECT_THROW(io::parse_flux("hll"), ConfigError);
  EXPECT_THROW(io::parse_final_step("round"), ConfigError);
  EXPECT_EQ(io::parse_count("401", "m"), 401u);
  EXPECT_EQ(io::parse_list("5, 5.5 6", "n"), (std::vector<double>{5.0, 5.5, 6.0}));
  EXPECT_EQ(io::parse_state("1,-2,0.5", "s"), (PrimitiveState{1.0, -2.0, 0.5}));
}

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in(
      "# impact run\n"
      "m = 801\n"
      "steps_per_cell = 5   # locked\n"
      "shock_speed = 0.76205\n"
      "flux = exact\n"
      "final_step = overshoot\n"
      "\n"
      "left = 1 2 0.7\n");
  RunConfig cfg;
  io::parse_config(in).apply(cfg);
  EXPECT_EQ(cfg.m, 801u);
  const auto& lock = std::get<ShockLocked>(cfg.policy);
  EXPECT_EQ(lock.steps_per_cell, 5.0);
  EXPECT_EQ(*lock.shock_speed, 0.76205);
  EXPECT_EQ(cfg.flux, FluxKind::exact);
  EXPECT_EQ(cfg.final_step, FinalStep::overshoot);
  EXPECT_EQ(cfg.left_state, (PrimitiveState{1.0, 2.0, 0.7}));
  EXPECT_EQ(cfg.right_state, RunConfig{}.right_state);
}

TEST(Config, RejectsBadInput) {
  RunConfig cfg;
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::parse_config(in);
  };
  EXPECT_THROW(parse("speed = 3\n"), ConfigError);
  EXPECT_THROW(parse("m 401\n"), ConfigError);
  EXPECT_THROW(parse("cfl = 0.9\ndt = 1e-3\n").apply(cfg), ConfigError);
  EXPECT_THROW(parse("shock_speed = 0.7\n").apply(cfg), ConfigError);
  EXPECT_THROW(io::load_config("/nonexistent/impact.cfg"), ConfigError);
}

TEST(Config, LayersOverride) {
  std::istringstream file("m = 801\ncfl = 0.5\n");
  io::ConfigOverrides flags;
  flags.set("steps_per_cell", "5.5");
  RunConfig cfg;
  io::parse_config(file).apply(cfg);
  flags.apply(cfg);
  EXPECT_EQ(cfg.m, 801u);
  EXPECT_EQ(std::get<ShockLocked>(cfg.policy).steps_per_cell, 5.5);
}

TEST(Config, WriteReadRoundTrip) {
  RunConfig cfg;
  cfg.m = 1601;
  cfg.t_final = 0.3;
  cfg.gas.gamma = 5.0 / 3.0;
  cfg.policy = ShockLocked{5.5, 0.76205};
  cfg.flux = FluxKind::roe_fds;
  cfg.entropy_fix = {true, 0.15};
  cfg.final_step = FinalStep::overshoot;
  cfg.left_state = {1.1, 0.1, 1.0 / 3.0};
  std::ostringstream os;
  io::write_config(os, cfg);
  std::istringstream in(os.str());
  RunConfig back;
  io::parse_config(in).apply(back);
  EXPECT_EQ(back.m, cfg.m);
  EXPECT_EQ(back.t_final, cfg.t_final);
  EXPECT_EQ(back.gas.gamma, cfg.gas.gamma);
  EXPECT_EQ(std::get<ShockLocked>(back.policy).steps_per_cell, 5.5);
  EXPECT_EQ(std::get<ShockLocked>(back.policy).shock_speed, 0.76205);
  EXPECT_EQ(back.flux, cfg.flux);
  EXPECT_EQ(back.entropy_fix.enabled, true);
  EXPECT_EQ(back.entropy_fix.delta_fraction, 0.15);
  EXPECT_EQ(back.final_step, cfg.final_step);
  EXPECT_EQ(back.left_state, cfg.left_state);
  EXPECT_EQ(back.right_state, cfg.right_state);
}

TEST(Config, MetadataReproducesRun) {
  RunConfig cfg;
  cfg.m = 201;
  cfg.policy = FixedDt{1.3e-3};
  const SimulationResult r = run(cfg);
  std::ostringstream os;
  io::write_run_metadata(os, cfg, r);
  EXPECT_NE(os.str().find("# steps_taken = " + std::to_string(r.steps_taken)), std::string::npos);
  std::istringstream in(os.str());
  RunConfig back;
  io::parse_config(in).apply(back);
  const SimulationResult again = run(back);
  EXPECT_EQ(again.final_states, r.final_states);
}

TEST(Csv, ProfileSchema) {
  RunConfig cfg;
  cfg.m = 51;
  const SimulationResult r = run(cfg);
  const ImpactSolution sol = build_impact_solution(cfg);
  std::ostringstream os;
  io::write_profile_csv(os, r, final_primitives(r, cfg.gas), sol, Field::rho);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,numerical,exact");
  std::size_t rows = 0;
  double sum = 0.0;
  while (std::getline(in, line)) {
    const auto f = io::split_csv_line(line);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(io::parse_double(f[0], "x"), r.grid.centers[rows]);
    sum += std::abs(io::parse_double(f[1], "n") - io::parse_double(f[2], "e"));
    ++rows;
  }
  EXPECT_EQ(rows, 51u);
  EXPECT_DOUBLE_EQ(sum * r.grid.dx, l1_error(r, sol, Field::rho));
}

TEST(Csv, ConvergenceRoundTrip) {
  const std::vector<ErrorSample> s = {{51, 5.444e-2, 2.199e-2, 9.267e-2},
                                      {101, 2.838e-2, 1.146e-2, 4.357e-2},
                                      {201, 1.517e-2, 0.0, 1.841e-2}};
  const auto rows = convergence_table(s);
  std::ostringstream os;
  io::write_convergence_csv(os, rows);
  std::istringstream in(os.str());
  const auto back = io::read_convergence_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(back[k].m, rows[k].m);
    EXPECT_EQ(back[k].e_rho, rows[k].e_rho);
    EXPECT_EQ(back[k].kappa_rho, rows[k].kappa_rho);
    EXPECT_EQ(back[k].kappa_u, rows[k].kappa_u);
    EXPECT_EQ(back[k].kappa_p, rows[k].kappa_p);
  }
  std::istringstream bad("m,e\n");
  EXPECT_THROW(io::read_convergence_csv(bad), ConfigError);
}

TEST(Csv, SweepSchema) {
  io::SweepRow row{5.0, 6.5e-4, 0.787, {}};
  row.report.cluster_count = 1;
  std::ostringstream os;
  const std::vector<io::SweepRow> rows{row};
  io::write_sweep_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "N,dt,effective_cfl,band_width,total_variation,alternation_fraction,cluster_count");
  EXPECT_EQ(io::split_csv_line(os.str().substr(os.str().find('\n') + 1)).size(), 7u);
}
