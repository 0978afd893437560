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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "rdd/experiments.hpp"

namespace rdd {
namespace {

std::vector<XY> power_law(double c, double p, const std::vector<double>& xs) {
  std::vector<XY> out;
  for (double x : xs) out.push_back({x, c * std::pow(x, p)});
  return out;
}

TEST(FitSlope, ExactSquare) {
  const auto fit = fit_loglog_slope(power_law(1.0, 2.0, {0.1, 0.2, 0.5, 1.0, 3.0}), 0.0);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.points_used, 5);
}

TEST(FitSlope, Constant) {
  const auto fit = fit_loglog_slope(power_law(0.3, 0.0, {1.0, 2.0, 4.0}), 0.0);
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(0.3), 1e-12);
}

TEST(FitSlope, QuarticWithPrefactor) {
  const auto fit = fit_loglog_slope(power_law(3.0, 4.0, log_grid(1e-3, 1e-1, 5)), 0.0);
  EXPECT_NEAR(fit.slope, 4.0, 1e-10);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
}

TEST(FitSlope, FloorExcludesSmallPoints) {
  std::vector<XY> pts = power_law(1.0, 1.0, {1.0, 2.0, 4.0, 8.0});
  pts.push_back({16.0, 1e-20});  // would wreck the slope if kept
  const auto fit = fit_loglog_slope(pts, 1e-11);
  EXPECT_EQ(fit.points_used, 4);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(fit.filter_floor, 1e-11);
}

TEST(FitSlope, Errors) {
  EXPECT_THROW(fit_loglog_slope(power_law(1.0, 1.0, {1.0, 2.0}), 0.0), PreconditionError);
  EXPECT_THROW(fit_loglog_slope(power_law(1e-12, 1.0, {1.0, 2.0, 3.0}), 1e-11), PreconditionError);
  const std::vector<XY> bad_x = {{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}};
  EXPECT_THROW(fit_loglog_slope(bad_x, 0.0), PreconditionError);
}

TEST(LogGrid, EndpointsAndRatios) {
  const auto g = log_grid(1e-4, 1e-1, 8);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.front(), 1e-4);
  EXPECT_EQ(g.back(), 1e-1);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(1e3, 1.0 / 7), 1e-12);
  EXPECT_THROW(log_grid(0.0, 1.0, 4), PreconditionError);
  EXPECT_THROW(log_grid(1.0, 0.5, 4), PreconditionError);
  EXPECT_THROW(log_grid(1.0, 2.0, 1), PreconditionError);
}

TEST(DefaultGrids, Ranges) {
  EXPECT_EQ(default_fig1_grid(SweepAxis::j).front(), 1e-4);
  EXPECT_EQ(default_fig1_grid(SweepAxis::j).back(), 1e-1);
  EXPECT_EQ(default_fig1_grid(SweepAxis::tau).back(), 1e-2);
  EXPECT_EQ(default_fig2_grid(SweepAxis::total_t).front(), 0.05);
  EXPECT_EQ(default_fig2_grid(SweepAxis::total_t).back(), 0.8);
  EXPECT_EQ(default_fig2_grid(SweepAxis::j).front(), 1e-3);
  EXPECT_EQ(default_fig2_grid(SweepAxis::j).size(), 8u);
}

TEST(RequireGrid, RejectsBadGrids) {
  EXPECT_NO_THROW(require_grid(std::vector<double>{0.1, 0.2}, "t"));
  EXPECT_THROW(require_grid(std::vector<double>{}, "t"), PreconditionError);
  EXPECT_THROW(require_grid(std::vector<double>{0.2, 0.1}, "t"), PreconditionError);
  EXPECT_THROW(require_grid(std::vector<double>{0.1, 0.1}, "t"), PreconditionError);
  EXPECT_THROW(require_grid(std::vector<double>{-0.1, 0.1}, "t"), PreconditionError);
}

TEST(ParseProtocol, Names) {
  EXPECT_EQ(parse_protocol("xy4"), (ProtocolSpec{Protocol::xy4, false, 0}));
  EXPECT_EQ(parse_protocol("rand-xy4"), (ProtocolSpec{Protocol::xy4, true, 0}));
  EXPECT_EQ(parse_protocol("cdd3"), (ProtocolSpec{Protocol::cdd, false, 3}));
  EXPECT_EQ(parse_protocol("rand-udd2"), (ProtocolSpec{Protocol::udd, true, 2}));
  EXPECT_EQ(parse_protocol("hahn"), (ProtocolSpec{Protocol::hahn, false, 0}));
  for (const char* s : {"xy4", "rand-xy8", "cdd4", "udd1", "rand-hahn"}) {
    EXPECT_EQ(parse_protocol(s).label(), s);
  }
}

TEST(ParseProtocol, Errors) {
  for (const char* s : {"", "foo", "rand-", "cdd", "cdd0", "cdd7", "udd-1", "xy4x", "cdd2a"}) {
    EXPECT_THROW(parse_protocol(s), PreconditionError) << s;
  }
  EXPECT_THROW(parse_protocol_list("xy4,,cdd2"), PreconditionError);
  EXPECT_EQ(parse_protocol_list("xy4,xy8,cdd2,cdd3,cdd4,rand-xy4").size(), 6u);
}

TEST(BuildSequence, NaturalTotalTimes) {
  EXPECT_DOUBLE_EQ(build_sequence(parse_protocol("xy4"), 2, 1e-3).total_time(), 4e-3);
  EXPECT_DOUBLE_EQ(build_sequence(parse_protocol("xy8"), 2, 1e-3).total_time(), 8e-3);
  EXPECT_NEAR(build_sequence(parse_protocol("cdd3"), 2, 1e-3).total_time(), 64e-3, 1e-15);
  EXPECT_DOUBLE_EQ(build_sequence(parse_protocol("hahn"), 2, 1e-3).total_time(), 2e-3);
  EXPECT_NEAR(build_sequence(parse_protocol("udd2"), 1, 0.0, 0.3).total_time(), 0.3, 1e-15);
  EXPECT_EQ(randomizing_group(parse_protocol("rand-udd2"), 1).size(), 2u);
  EXPECT_EQ(randomizing_group(parse_protocol("rand-xy4"), 3).size(), 4u);
}

SweepRecord sample_record(int trial, double error) {
  SweepRecord r;
  r.protocol = Protocol::cdd;
  r.randomized = trial % 2 == 1;
  r.order_k = 2;
  r.j = 1e-3;
  r.tau = 0.1 + 1e-17 * trial;
  r.total_t = 1.6;
  r.seed = 18446744073709551615ull;
  r.trial = trial;
  r.error = error;
  return r;
}

TEST(Csv, EmptyIsHeaderOnly) {
  std::ostringstream os;
  write_csv(os, {});
  EXPECT_EQ(os.str(), "protocol,randomized,order_k,j,tau,total_t,seed,trial,error_kind,error\n");
  std::istringstream is(os.str());
  EXPECT_TRUE(read_csv(is).empty());
}

TEST(Csv, RoundTripIsLossless) {
  std::vector<SweepRecord> records;
  for (int t = 0; t < 6; ++t) records.push_back(sample_record(t, 0.123456789012345678 / (t + 1)));
  records[3].error_kind = ErrorKind::subsystem;
  records[4].error = 1e-300;
  records[5].error = 1.0;
  std::ostringstream os;
  write_csv(os, records);
  std::istringstream is(os.str());
  const auto back = read_csv(is);
  sort_records(records);
  EXPECT_EQ(back, records);
}

TEST(Csv, ErrorColumnKeepsTwelveDigits) {
  std::ostringstream os;
  write_csv(os, {sample_record(0, 0.12345678901234)});
  EXPECT_NE(os.str().find(",0.12345678901234\n"), std::string::npos);
  EXPECT_NE(os.str().find("cdd,0,2,0.001,0.1,1.6,18446744073709551615,0,joint_state,"),
            std::string::npos);
}

TEST(Csv, RowsAreSorted) {
  std::vector<SweepRecord> records;
  for (int t = 5; t >= 0; --t) records.push_back(sample_record(t, 0.1));
  std::ostringstream a, b;
  write_csv(a, records);
  std::reverse(records.begin(), records.end());
  write_csv(b, records);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream is(a.str());
  const auto back = read_csv(is);
  EXPECT_TRUE(std::is_sorted(back.begin(), back.end(), record_less));
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    read_csv(is);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Csv, MalformedInputReportsLine) {
  const std::string header(kCsvHeader);
  const std::string good = "xy4,0,0,0.001,0.001,0.004,1,0,joint_state,1e-9\n";
  EXPECT_EQ(parse_error_line(""), 1u);
  EXPECT_EQ(parse_error_line("protocol,randomized\n"), 1u);
  EXPECT_EQ(parse_error_line(header + "\n" + good + "xy4,0,0,0.001\n"), 3u);
  EXPECT_EQ(parse_error_line(header + "\n" + good + good + "xy4,0,0,abc,0.001,0.004,1,0,joint_state,1e-9\n"), 4u);
  EXPECT_EQ(parse_error_line(header + "\nzz4,0,0,0.001,0.001,0.004,1,0,joint_state,1e-9\n"), 2u);
  EXPECT_EQ(parse_error_line(header + "\nxy4,2,0,0.001,0.001,0.004,1,0,joint_state,1e-9\n"), 2u);
  EXPECT_EQ(parse_error_line(header + "\nxy4,0,0,0.001,0.001,0.004,1,0,mixed,1e-9\n"), 2u);
  EXPECT_EQ(parse_error_line(header + "\nxy4,0,0,0.001,0.001,0.004,1,0,joint_state,1.5\n"), 2u);
  EXPECT_EQ(parse_error_line(header + "\nxy4,0,0,0.001,0.001,0.004,1,0,joint_state,1e-9 \n"), 2u);
}

TEST(Csv, AcceptsCrlfAndBlankLines) {
  std::istringstream is(std::string(kCsvHeader) +
                        "\r\nxy4,0,0,0.001,0.001,0.004,1,0,joint_state,1e-9\r\n\n");
  const auto records = read_csv(is);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].error, 1e-9);
}

TEST(Aggregate, MeansPerGridPoint) {
  std::vector<SweepRecord> records;
  for (double j : {1e-3, 1e-2, 1e-1}) {
    for (int t = 0; t < 4; ++t) {
      SweepRecord r;
      r.protocol = Protocol::xy4;
      r.j = j;
      r.tau = 1e-3;
      r.total_t = 4e-3;
      r.trial = t;
      r.error = j * (t + 1);
      records.push_back(r);
    }
  }
  const auto curves = aggregate(records);
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves[0].axis, SweepAxis::j);
  ASSERT_EQ(curves[0].points.size(), 3u);
  EXPECT_DOUBLE_EQ(curves[0].points[0].mean, 2.5e-3);
  EXPECT_EQ(curves[0].points[1].count, 4);
  EXPECT_NEAR(fit_curve(curves[0], 0.0).slope, 1.0, 1e-12);
  EXPECT_THROW(find_curve(curves, Protocol::cdd, false, 2), PreconditionError);
}

TEST(Aggregate, IndependentOfRowOrder) {
  Rng rng(5);
  std::vector<SweepRecord> records;
  for (int t = 0; t < 50; ++t) {
    SweepRecord r;
    r.protocol = Protocol::udd;
    r.order_k = 2;
    r.randomized = true;
    r.j = 1.0;
    r.total_t = 0.1 * (1 + t % 5);
    r.tau = r.total_t / 3;
    r.trial = t / 5;
    r.error = rng.uniform01() * 1e-3;
    records.push_back(r);
  }
  const auto a = aggregate(records);
  std::reverse(records.begin(), records.end());
  const auto b = aggregate(records);
  ASSERT_EQ(a[0].points.size(), 5u);
  EXPECT_EQ(a[0].axis, SweepAxis::tau);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a[0].points[i].mean, b[0].points[i].mean);
  EXPECT_EQ(aggregate(records, SweepAxis::total_t)[0].axis, SweepAxis::total_t);
}

Fig1Config tiny_fig1() {
  Fig1Config cfg;
  cfg.axis = SweepAxis::j;
  cfg.protocols = parse_protocol_list("xy4,xy8,cdd2,rand-xy4");
  cfg.grid = {1e-3, 1e-2, 1e-1};
  cfg.n_states = 3;
  cfg.seed = 9;
  cfg.n_sys = 2;
  cfg.n_bath = 1;
  return cfg;
}

TEST(Fig1Sweep, RecordLayout) {
  const auto records = run_fig1_sweep<double>(tiny_fig1());
  EXPECT_EQ(records.size(), 4u * 3u * 3u);
  std::set<std::tuple<int, bool, int, double, double, int>> keys;
  for (const auto& r : records) {
    keys.insert({static_cast<int>(r.protocol), r.randomized, r.order_k, r.j, r.tau, r.trial});
    EXPECT_GE(r.error, 0.0);
    EXPECT_LE(r.error, 1.0);
    EXPECT_EQ(r.error_kind, ErrorKind::joint_state);
    EXPECT_EQ(r.seed, 9u);
    EXPECT_EQ(r.tau, 1e-3);
  }
  EXPECT_EQ(keys.size(), records.size());
  EXPECT_TRUE(std::is_sorted(records.begin(), records.end(), record_less));
}

TEST(Fig1Sweep, ZeroCouplingGivesZeroError) {
  Fig1Config cfg = tiny_fig1();
  cfg.axis = SweepAxis::tau;
  cfg.j = 0.0;
  cfg.grid = {1e-3, 1e-2};
  for (const auto& r : run_fig1_sweep<double>(cfg)) EXPECT_LE(r.error, 1e-10);
}

TEST(Fig1Sweep, Deterministic) {
  std::ostringstream a, b;
  write_csv(a, run_fig1_sweep<double>(tiny_fig1()));
  write_csv(b, run_fig1_sweep<double>(tiny_fig1()));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Fig1Sweep, RandomizedMatchesChannelRoute) {
  // Oracle: dense mixed-unitary channel on the density matrix.
  Fig1Config cfg = tiny_fig1();
  cfg.protocols = {parse_protocol("rand-xy4"), parse_protocol("xy8")};
  cfg.grid = {0.3};
  cfg.tau = 0.05;
  const auto records = run_fig1_sweep<double>(cfg);
  const auto model = build_local_bath_model<double>(2, 1, 0.3, detail::model_seed(cfg.seed, false, 0));
  for (const auto& r : records) {
    const PulseSequence seq = build_sequence({r.protocol, r.randomized, r.order_k}, 2, r.tau);
    const auto ch = r.randomized ? randomized_channel<double>(seq, DecouplingGroup::xy4(2), model)
                                 : deterministic_channel<double>(seq, model);
    const auto rho = random_product_state<double>(4, 2, detail::state_seed(cfg.seed, r.trial));
    EXPECT_NEAR(r.error, state_error(ch, model, rho, seq.total_time()), 1e-12);
  }
}

TEST(Fig1Sweep, SampledBranchesAreSingleBranchErrors) {
  Fig1Config cfg = tiny_fig1();
  cfg.protocols = {parse_protocol("rand-xy4")};
  cfg.grid = {0.2};
  cfg.tau = 0.05;
  cfg.n_states = 6;
  cfg.mode = BranchMode::sampled;
  const auto records = run_fig1_sweep<double>(cfg);
  const auto model = build_local_bath_model<double>(2, 1, 0.2, detail::model_seed(cfg.seed, false, 0));
  const auto ch = randomized_channel<double>(seq_xy4(2, 0.05), DecouplingGroup::xy4(2), model);
  for (const auto& r : records) {
    const auto rho = random_product_state<double>(4, 2, detail::state_seed(cfg.seed, r.trial));
    bool matched = false;
    for (const auto& b : ch.branches()) {
      const MixedUnitaryChannel<double> one({{1.0, b.unitary}});
      matched = matched || std::abs(state_error(one, model, rho, 0.2) - r.error) <= 1e-12;
    }
    EXPECT_TRUE(matched) << "trial " << r.trial;
  }
}

TEST(Fig1Sweep, ResampledBathIsDeterministicAndDifferent) {
  Fig1Config cfg = tiny_fig1();
  cfg.protocols = {parse_protocol("xy4")};
  const auto fixed = run_fig1_sweep<double>(cfg);
  cfg.resample_bath = true;
  const auto a = run_fig1_sweep<double>(cfg);
  const auto b = run_fig1_sweep<double>(cfg);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, fixed);
}

TEST(Fig1Sweep, Preconditions) {
  Fig1Config cfg = tiny_fig1();
  cfg.grid = {1e-2, 1e-3};
  EXPECT_THROW(run_fig1_sweep<double>(cfg), PreconditionError);
  cfg = tiny_fig1();
  cfg.axis = SweepAxis::total_t;
  EXPECT_THROW(run_fig1_sweep<double>(cfg), PreconditionError);
  cfg = tiny_fig1();
  cfg.n_states = 0;
  EXPECT_THROW(run_fig1_sweep<double>(cfg), PreconditionError);
  EXPECT_THROW(parse_protocol_list("xy4,cdd9"), PreconditionError);
}

TEST(Fig2Sweep, LayoutAndSubsystemOracle) {
  Fig2Config cfg;
  cfg.axis = SweepAxis::total_t;
  cfg.orders = {1, 2};
  cfg.grid = {0.1, 0.4};
  cfg.n_states = 2;
  cfg.seed = 4;
  const auto records = run_fig2_sweep<double>(cfg);
  EXPECT_EQ(records.size(), 2u * 2u * 2u * 2u);
  const auto model = build_dephasing_model<double>(1.0, detail::model_seed(cfg.seed, false, 0));
  for (const auto& r : records) {
    EXPECT_EQ(r.protocol, Protocol::udd);
    EXPECT_EQ(r.error_kind, ErrorKind::subsystem);
    EXPECT_NEAR(r.tau * (r.order_k + 1), r.total_t, 1e-15);
    const PulseSequence seq = seq_udd(r.order_k, r.total_t);
    const auto ch = r.randomized ? randomized_channel<double>(seq, DecouplingGroup::flip(1), model)
                                 : deterministic_channel<double>(seq, model);
    if (r.randomized) {
      EXPECT_EQ(ch.size(), 2u);
    }
    const auto rho0 = random_product_state<double>(2, 4, detail::state_seed(cfg.seed, r.trial));
    EXPECT_NEAR(r.error, subsystem_error(ch, rho0, 2, 4), 1e-12);
  }
}

TEST(Fig2Sweep, JAxisUsesFixedTime) {
  Fig2Config cfg;
  cfg.axis = SweepAxis::j;
  cfg.orders = {3};
  cfg.grid = {0.01, 0.1, 1.0};
  cfg.total_t = 0.1;
  cfg.n_states = 1;
  for (const auto& r : run_fig2_sweep<double>(cfg)) EXPECT_EQ(r.total_t, 0.1);
  cfg.orders = {0};
  EXPECT_THROW(run_fig2_sweep<double>(cfg), PreconditionError);
}

TEST(HahnSweep, SmallTauTailIsMonotone) {
  HahnConfig cfg;
  cfg.grid = log_grid(1e-3, 1e-2, 4);
  cfg.n_states = 3;
  cfg.n_sys = 2;
  cfg.n_bath = 1;
  const auto curves = aggregate(run_hahn_sweep<double>(cfg));
  ASSERT_EQ(curves.size(), 2u);
  for (const Curve& c : curves) {
    for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_LT(c.points[i - 1].mean, c.points[i].mean);
  }
}

}  // namespace
}  // namespace rdd
