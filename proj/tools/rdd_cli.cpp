// Copyright 2026 The rdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rdd: decoupling sweeps to CSV, and log-log slopes from CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "rdd/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_grid(const std::string& text) {
  const auto f = rdd::detail::split_fields(text);
  if (f.size() != 3) throw rdd::PreconditionError("--grid expects lo,hi,n");
  const double lo = rdd::detail::parse_number<double>(f[0], "grid lo", 1);
  const double hi = rdd::detail::parse_number<double>(f[1], "grid hi", 1);
  const int n = rdd::detail::parse_number<int>(f[2], "grid n", 1);
  return rdd::log_grid(lo, hi, n);
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (std::string_view item : rdd::detail::split_fields(text)) {
    out.push_back(rdd::detail::parse_number<int>(item, "orders", 1));
  }
  return out;
}

void emit(const std::vector<rdd::SweepRecord>& records, const std::string& out) {
  if (out.empty() || out == "-") {
    rdd::write_csv(std::cout, records);
  } else {
    rdd::write_csv(out, records);
  }
}

struct Common {
  int states = 20;
  std::uint64_t seed = 1;
  std::string out;
  std::string grid;
  bool resample = false;
  bool sampled = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--states", c.states, "random initial states per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
  cmd->add_option("--out", c.out, "output CSV path (stdout if omitted)");
  cmd->add_option("--grid", c.grid, "log grid lo,hi,n");
  cmd->add_flag("--resample-bath", c.resample, "draw a fresh bath model for every trial");
  cmd->add_flag("--sampled", c.sampled, "sample one randomization branch per trial");
}

void print_slopes(const std::vector<rdd::SweepRecord>& records, double floor, const std::string& x,
                  double x_max) {
  std::optional<rdd::SweepAxis> axis;
  if (x == "j") axis = rdd::SweepAxis::j;
  if (x == "tau") axis = rdd::SweepAxis::tau;
  if (x == "t") axis = rdd::SweepAxis::total_t;
  std::printf("%-12s %-12s %-8s %10s %12s %9s %6s\n", "protocol", "error_kind", "x", "slope",
              "intercept", "r2", "points");
  for (const rdd::Curve& c : rdd::aggregate(records, axis)) {
    const std::string label = rdd::curve_label(c.key);
    const std::string kind(rdd::to_string(c.key.error_kind));
    const std::string ax(rdd::to_string(c.axis));
    try {
      const rdd::SlopeFit fit = rdd::fit_curve(c, floor, x_max);
      std::printf("%-12s %-12s %-8s %10.4f %12.4f %9.6f %6d\n", label.c_str(), kind.c_str(),
                  ax.c_str(), fit.slope, fit.intercept, fit.r_squared, fit.points_used);
    } catch (const rdd::PreconditionError&) {
      std::printf("%-12s %-12s %-8s %10s %12s %9s %6s\n", label.c_str(), kind.c_str(), ax.c_str(),
                  "n/a", "n/a", "n/a", "<3");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-randomized dynamical decoupling sweeps"};
  app.require_subcommand(1);

  Common f1c;
  std::string f1_axis = "j";
  std::string f1_protocols = "xy4,xy8,cdd2,cdd3,cdd4,rand-xy4";
  double f1_tau = 1e-3, f1_j = 1e-3;
  std::size_t f1_nsys = 4, f1_nbath = 4;
  auto* fig1 = app.add_subcommand("fig1", "joint-state error vs J or tau on the 4+4 qubit model");
  fig1->add_option("--axis", f1_axis, "swept parameter")->check(CLI::IsMember({"j", "tau"}))->capture_default_str();
  fig1->add_option("--protocols", f1_protocols, "comma-separated protocol list")->capture_default_str();
  fig1->add_option("--tau", f1_tau, "fixed tau for the J sweep")->capture_default_str();
  fig1->add_option("--j", f1_j, "fixed J for the tau sweep")->capture_default_str();
  fig1->add_option("--n-sys", f1_nsys, "system qubits")->capture_default_str();
  fig1->add_option("--n-bath", f1_nbath, "bath qubits")->capture_default_str();
  add_common(fig1, f1c);

  Common f2c;
  std::string f2_axis = "t";
  std::string f2_orders = "1,2,3";
  double f2_j = 1.0, f2_t = 0.1;
  auto* fig2 = app.add_subcommand("fig2", "UDD subsystem error vs T or J on the dephasing model");
  fig2->add_option("--axis", f2_axis, "swept parameter")->check(CLI::IsMember({"t", "j"}))->capture_default_str();
  fig2->add_option("--orders", f2_orders, "comma-separated UDD orders")->capture_default_str();
  fig2->add_option("--j", f2_j, "fixed J for the T sweep")->capture_default_str();
  fig2->add_option("--t", f2_t, "fixed T for the J sweep")->capture_default_str();
  add_common(fig2, f2c);

  Common hc;
  rdd::HahnConfig hahn_defaults;
  double h_j = hahn_defaults.j;
  std::size_t h_nsys = hahn_defaults.n_sys, h_nbath = hahn_defaults.n_bath;
  auto* hahn = app.add_subcommand("hahn", "Hahn echo joint-state error vs tau");
  hahn->add_option("--j", h_j, "coupling strength")->capture_default_str();
  hahn->add_option("--n-sys", h_nsys, "system qubits")->capture_default_str();
  hahn->add_option("--n-bath", h_nbath, "bath qubits")->capture_default_str();
  add_common(hahn, hc);

  std::string s_in, s_x;
  double s_floor = 1e-11;
  double s_xmax = std::numeric_limits<double>::infinity();
  auto* slopes = app.add_subcommand("slopes", "fit log-log slopes per protocol from a CSV");
  slopes->add_option("--in", s_in, "input CSV")->required();
  slopes->add_option("--floor", s_floor, "exclude mean errors at or below this")->capture_default_str();
  slopes->add_option("--x", s_x, "x axis (default: first varying of j, tau, t)")
      ->check(CLI::IsMember({"j", "tau", "t"}));
  slopes->add_option("--x-max", s_xmax, "exclude points with x above this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fig1) {
      rdd::Fig1Config cfg;
      cfg.axis = f1_axis == "j" ? rdd::SweepAxis::j : rdd::SweepAxis::tau;
      cfg.protocols = rdd::parse_protocol_list(f1_protocols);
      cfg.grid = f1c.grid.empty() ? rdd::default_fig1_grid(cfg.axis) : parse_grid(f1c.grid);
      cfg.tau = f1_tau;
      cfg.j = f1_j;
      cfg.n_states = f1c.states;
      cfg.seed = f1c.seed;
      cfg.n_sys = f1_nsys;
      cfg.n_bath = f1_nbath;
      cfg.resample_bath = f1c.resample;
      cfg.mode = f1c.sampled ? rdd::BranchMode::sampled : rdd::BranchMode::exact;
      emit(rdd::run_fig1_sweep(cfg), f1c.out);
    } else if (*fig2) {
      rdd::Fig2Config cfg;
      cfg.axis = f2_axis == "t" ? rdd::SweepAxis::total_t : rdd::SweepAxis::j;
      cfg.orders = parse_orders(f2_orders);
      cfg.grid = f2c.grid.empty() ? rdd::default_fig2_grid(cfg.axis) : parse_grid(f2c.grid);
      cfg.j = f2_j;
      cfg.total_t = f2_t;
      cfg.n_states = f2c.states;
      cfg.seed = f2c.seed;
      cfg.resample_bath = f2c.resample;
      cfg.mode = f2c.sampled ? rdd::BranchMode::sampled : rdd::BranchMode::exact;
      emit(rdd::run_fig2_sweep(cfg), f2c.out);
    } else if (*hahn) {
      rdd::HahnConfig cfg;
      cfg.grid = hc.grid.empty() ? rdd::default_hahn_grid() : parse_grid(hc.grid);
      cfg.j = h_j;
      cfg.n_states = hc.states;
      cfg.seed = hc.seed;
      cfg.n_sys = h_nsys;
      cfg.n_bath = h_nbath;
      cfg.resample_bath = hc.resample;
      cfg.mode = hc.sampled ? rdd::BranchMode::sampled : rdd::BranchMode::exact;
      emit(rdd::run_hahn_sweep(cfg), hc.out);
    } else if (*slopes) {
      print_slopes(rdd::read_csv(s_in), s_floor, s_x, s_xmax);
    }
  } catch (const rdd::NumericalContractError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rdd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
