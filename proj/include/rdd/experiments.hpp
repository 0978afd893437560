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

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rdd/analysis.hpp"
#include "rdd/engine.hpp"
#include "rdd/model.hpp"
#include "rdd/records.hpp"
#include "rdd/sequences.hpp"

namespace rdd {

/** A protocol name such as "xy4", "cdd3" or "rand-udd2". */
struct ProtocolSpec {
  Protocol protocol = Protocol::xy4;
  bool randomized = false;
  int order_k = 0;

  std::string label() const { return protocol_label(protocol, randomized, order_k); }
  bool operator==(const ProtocolSpec&) const = default;
};

inline ProtocolSpec parse_protocol(std::string_view text) {
  ProtocolSpec spec;
  std::string_view s = text;
  if (s.starts_with("rand-")) {
    spec.randomized = true;
    s.remove_prefix(5);
  }
  for (Protocol p : {Protocol::cdd, Protocol::udd}) {
    const std::string_view name = to_string(p);
    if (s.starts_with(name) && s.size() > name.size()) {
      const std::string_view digits = s.substr(name.size());
      int k = 0;
      const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || k < 1) {
        throw PreconditionError("bad protocol order in '" + std::string(text) + "'");
      }
      if (p == Protocol::cdd && k > kMaxCddOrder) {
        throw PreconditionError("CDD order " + std::to_string(k) + " exceeds the limit of " +
                                std::to_string(kMaxCddOrder));
      }
      spec.protocol = p;
      spec.order_k = k;
      return spec;
    }
  }
  if (s == "cdd" || s == "udd") {
    throw PreconditionError("protocol '" + std::string(text) + "' needs an order, e.g. cdd2");
  }
  try {
    spec.protocol = parse_protocol_name(s);
  } catch (const PreconditionError&) {
    throw PreconditionError("unknown protocol '" + std::string(text) + "'");
  }
  return spec;
}

inline std::vector<ProtocolSpec> parse_protocol_list(std::string_view text) {
  std::vector<ProtocolSpec> out;
  for (std::string_view item : detail::split_fields(text)) {
    if (item.empty()) throw PreconditionError("empty entry in protocol list");
    out.push_back(parse_protocol(item));
  }
  return out;
}

/// n points from lo to hi, equally spaced in log; endpoints exact.
inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi) || n < 2) {
    throw PreconditionError("log_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

inline void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw PreconditionError(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw PreconditionError(std::string(what) + ": grid values must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw PreconditionError(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

/// Sequence for `spec` with interval tau; UDD uses total_t instead.
inline PulseSequence build_sequence(const ProtocolSpec& spec, std::size_t n, double tau,
                                    double total_t = 0.0) {
  switch (spec.protocol) {
    case Protocol::hahn: return seq_hahn(n, tau);
    case Protocol::xy4: return seq_xy4(n, tau);
    case Protocol::xy8: return seq_xy8(n, tau);
    case Protocol::cdd: return seq_cdd(n, spec.order_k, tau);
    case Protocol::udd: return seq_udd(spec.order_k, total_t > 0.0 ? total_t : tau * (spec.order_k + 1), n);
  }
  throw PreconditionError("build_sequence: unknown protocol");
}

/// {I, X^n} for the single-axis protocols, XY4 otherwise.
inline DecouplingGroup randomizing_group(const ProtocolSpec& spec, std::size_t n) {
  if (spec.protocol == Protocol::hahn || spec.protocol == Protocol::udd) {
    return DecouplingGroup::flip(n);
  }
  return DecouplingGroup::xy4(n);
}

/// exact: average over every group element; sampled: one random element per trial.
enum class BranchMode { exact, sampled };

struct Fig1Config {
  SweepAxis axis = SweepAxis::j;
  std::vector<ProtocolSpec> protocols;
  std::vector<double> grid;
  double tau = 1e-3;
  double j = 1e-3;
  int n_states = 20;
  std::uint64_t seed = 1;
  std::size_t n_sys = 4;
  std::size_t n_bath = 4;
  bool resample_bath = false;
  BranchMode mode = BranchMode::exact;
};

struct Fig2Config {
  SweepAxis axis = SweepAxis::total_t;
  std::vector<int> orders = {1, 2, 3};
  std::vector<double> grid;
  double j = 1.0;
  double total_t = 0.1;
  int n_states = 20;
  std::uint64_t seed = 1;
  bool resample_bath = false;
  BranchMode mode = BranchMode::exact;
};

struct HahnConfig {
  std::vector<double> grid;
  double j = 0.05;
  int n_states = 20;
  std::uint64_t seed = 1;
  std::size_t n_sys = 2;
  std::size_t n_bath = 2;
  bool resample_bath = false;
  BranchMode mode = BranchMode::exact;
};

inline std::vector<ProtocolSpec> default_fig1_protocols() {
  return parse_protocol_list("xy4,xy8,cdd2,cdd3,cdd4,rand-xy4");
}

inline std::vector<double> default_fig1_grid(SweepAxis axis) {
  return axis == SweepAxis::j ? log_grid(1e-4, 1e-1, 8) : log_grid(1e-4, 1e-2, 8);
}

inline std::vector<double> default_fig2_grid(SweepAxis axis) {
  return axis == SweepAxis::total_t ? log_grid(0.05, 0.8, 8) : log_grid(1e-3, 1.0, 8);
}

inline std::vector<double> default_hahn_grid() { return log_grid(1e-3, 1e-2, 8); }

namespace detail {

/** One (protocol, parameter point) of a sweep. */
struct Cell {
  ProtocolSpec spec;
  double j = 0.0;
  double tau = 0.0;
  double total_t = 0.0;
  std::size_t index = 0;
};

struct SweepPlan {
  std::vector<Cell> cells;
  std::size_t n_sys = 1;
  int n_states = 0;
  std::uint64_t seed = 0;
  bool resample_bath = false;
  BranchMode mode = BranchMode::exact;
  ErrorKind kind = ErrorKind::joint_state;
};

template <typename Real>
using ModelFactory = std::function<HamiltonianModel<Real>(double j, std::uint64_t seed)>;

inline std::uint64_t model_seed(std::uint64_t seed, bool resample, int trial) {
  return resample ? derive_seed(seed, 0, static_cast<std::uint64_t>(trial) + 1) : derive_seed(seed, 0, 0);
}

inline std::uint64_t state_seed(std::uint64_t seed, int trial) {
  return derive_seed(seed, 1, static_cast<std::uint64_t>(trial));
}

/// Column c of the result is g_c D g_c^dagger states.col(c).
template <typename Real>
Matrix<Real> evolve_conjugated(const PulseSequence& seq, SegmentPropagator<Real>& prop,
                               const Matrix<Real>& states, const std::vector<PauliWord>& elements) {
  Matrix<Real> in(states.rows(), states.cols());
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    in.col(c) = PauliAction<Real>(elements[static_cast<std::size_t>(c)].dagger()).left(states.col(c));
  }
  Matrix<Real> out = propagate(seq, prop, std::move(in));
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    out.col(c) = PauliAction<Real>(elements[static_cast<std::size_t>(c)]).left(out.col(c));
  }
  return out;
}

/// rho_S = tr_B |v><v| with the system on the leading tensor factor.
template <typename Real>
Matrix<Real> reduced_system(const Vector<Real>& v, Eigen::Index dim_sys) {
  const Eigen::Index dim_bath = v.size() / dim_sys;
  Matrix<Real> m(dim_sys, dim_bath);
  for (Eigen::Index s = 0; s < dim_sys; ++s) m.row(s) = v.segment(s * dim_bath, dim_bath).transpose();
  return m * m.adjoint();
}

inline double checked_error(long double value, const Cell& cell) {
  const double e = static_cast<double>(value);
  if (!std::isfinite(e) || e < 0.0 || e > 1.0 + tol::kTrace) {
    throw NumericalContractError("trace distance " + std::to_string(e) + " out of range for " +
                                 cell.spec.label());
  }
  return std::min(e, 1.0);
}

template <typename Real>
std::vector<SweepRecord> run_plan(const SweepPlan& plan, const ModelFactory<Real>& factory) {
  if (plan.n_states < 1) throw PreconditionError("number of states must be >= 1");
  std::map<double, std::vector<const Cell*>> by_j;
  for (const Cell& c : plan.cells) by_j[c.j].push_back(&c);

  // Trials sharing a bath model are evaluated as one batch of state columns.
  std::vector<std::vector<int>> batches;
  if (plan.resample_bath) {
    for (int t = 0; t < plan.n_states; ++t) batches.push_back({t});
  } else {
    batches.emplace_back();
    for (int t = 0; t < plan.n_states; ++t) batches.back().push_back(t);
  }

  std::vector<SweepRecord> records;
  for (const auto& [j, cells] : by_j) {
    for (const std::vector<int>& trials : batches) {
      const HamiltonianModel<Real> model =
          factory(j, model_seed(plan.seed, plan.resample_bath, trials.front()));
      if (model.n_sys != plan.n_sys) throw DimensionError("run_plan: model has the wrong system size");
      SegmentPropagator<Real> prop(model.total());
      const HermitianEigen<Real> h0(model.h0());
      const Eigen::Index ds = model.dim_sys();
      const Eigen::Index m = static_cast<Eigen::Index>(trials.size());
      Matrix<Real> states(model.dim(), m);
      for (Eigen::Index i = 0; i < m; ++i) {
        states.col(i) = random_product_vector<Real>(ds, model.dim_bath(), state_seed(plan.seed, trials[static_cast<std::size_t>(i)]));
      }

      for (const Cell* cell : cells) {
        const PulseSequence seq = build_sequence(cell->spec, plan.n_sys, cell->tau, cell->total_t);
        std::vector<PauliWord> branch_set = {PauliWord::identity(plan.n_sys)};
        if (cell->spec.randomized) branch_set = randomizing_group(cell->spec, plan.n_sys).elements();
        const bool sampled = cell->spec.randomized && plan.mode == BranchMode::sampled;
        const std::size_t per_state = sampled ? 1 : branch_set.size();

        // Column layout: state i occupies [i * per_state, (i + 1) * per_state).
        Matrix<Real> inputs(states.rows(), m * static_cast<Eigen::Index>(per_state));
        std::vector<PauliWord> elements;
        for (Eigen::Index i = 0; i < m; ++i) {
          const int trial = trials[static_cast<std::size_t>(i)];
          if (sampled) {
            Rng rng(derive_seed(derive_seed(plan.seed, 2, cell->index), 3, static_cast<std::uint64_t>(trial)));
            elements.push_back(branch_set[rng.next() % branch_set.size()]);
          } else {
            elements.insert(elements.end(), branch_set.begin(), branch_set.end());
          }
          for (std::size_t b = 0; b < per_state; ++b) {
            inputs.col(i * static_cast<Eigen::Index>(per_state) + static_cast<Eigen::Index>(b)) = states.col(i);
          }
        }
        const Matrix<Real> outputs = evolve_conjugated(seq, prop, inputs, elements);
        const std::vector<Real> weights(per_state, Real(1) / Real(per_state));
        const Real total_t = Real(seq.total_time());
        const Matrix<Real> ideal =
            plan.kind == ErrorKind::joint_state ? h0.apply(total_t, states) : Matrix<Real>();

        for (Eigen::Index i = 0; i < m; ++i) {
          const Matrix<Real> block =
              outputs.middleCols(i * static_cast<Eigen::Index>(per_state), static_cast<Eigen::Index>(per_state));
          Real err;
          if (plan.kind == ErrorKind::joint_state) {
            err = trace_distance_pure_mixture<Real>(block, weights, ideal.col(i));
          } else {
            Matrix<Real> rho = Matrix<Real>::Zero(ds, ds);
            for (Eigen::Index b = 0; b < block.cols(); ++b) {
              rho += weights[static_cast<std::size_t>(b)] * reduced_system<Real>(block.col(b), ds);
            }
            err = trace_distance<Real>(rho, reduced_system<Real>(states.col(i), ds));
          }
          SweepRecord r;
          r.protocol = cell->spec.protocol;
          r.randomized = cell->spec.randomized;
          r.order_k = cell->spec.order_k;
          r.j = cell->j;
          r.tau = cell->tau;
          r.total_t = cell->total_t;
          r.seed = plan.seed;
          r.trial = trials[static_cast<std::size_t>(i)];
          r.error_kind = plan.kind;
          r.error = checked_error(static_cast<long double>(err), *cell);
          records.push_back(r);
        }
      }
    }
  }
  sort_records(records);
  return records;
}

inline void add_cells(SweepPlan& plan, const ProtocolSpec& spec, double j, double tau, double total_t) {
  plan.cells.push_back({spec, j, tau, total_t, plan.cells.size()});
}

}  // namespace detail

/**
 * Joint-state errors of each protocol on the local-bath model, sweeping
 * either J (tau fixed) or tau (J fixed). Each protocol runs for its
 * natural duration (4 tau for XY4, 8 tau for XY8, 4^K tau for CDD_K).
 */
template <typename Real = long double>
std::vector<SweepRecord> run_fig1_sweep(const Fig1Config& cfg) {
  if (cfg.axis != SweepAxis::j && cfg.axis != SweepAxis::tau) {
    throw PreconditionError("run_fig1_sweep: axis must be j or tau");
  }
  require_grid(cfg.grid, "run_fig1_sweep");
  if (cfg.protocols.empty()) throw PreconditionError("run_fig1_sweep: no protocols");
  detail::SweepPlan plan;
  plan.n_sys = cfg.n_sys;
  plan.n_states = cfg.n_states;
  plan.seed = cfg.seed;
  plan.resample_bath = cfg.resample_bath;
  plan.mode = cfg.mode;
  plan.kind = ErrorKind::joint_state;
  for (const ProtocolSpec& spec : cfg.protocols) {
    for (double x : cfg.grid) {
      const double j = cfg.axis == SweepAxis::j ? x : cfg.j;
      const double tau = cfg.axis == SweepAxis::tau ? x : cfg.tau;
      const double total_t = build_sequence(spec, cfg.n_sys, tau).total_time();
      detail::add_cells(plan, spec, j, tau, total_t);
    }
  }
  const std::size_t n_sys = cfg.n_sys, n_bath = cfg.n_bath;
  return detail::run_plan<Real>(plan, [=](double j, std::uint64_t seed) {
    return build_local_bath_model<Real>(n_sys, n_bath, j, seed);
  });
}

/**
 * Subsystem errors of deterministic and randomized UDD_K on the dephasing
 * model, sweeping the total time T (J fixed) or J (T fixed).
 */
template <typename Real = long double>
std::vector<SweepRecord> run_fig2_sweep(const Fig2Config& cfg) {
  if (cfg.axis != SweepAxis::total_t && cfg.axis != SweepAxis::j) {
    throw PreconditionError("run_fig2_sweep: axis must be total_t or j");
  }
  require_grid(cfg.grid, "run_fig2_sweep");
  if (cfg.orders.empty()) throw PreconditionError("run_fig2_sweep: no orders");
  detail::SweepPlan plan;
  plan.n_sys = 1;
  plan.n_states = cfg.n_states;
  plan.seed = cfg.seed;
  plan.resample_bath = cfg.resample_bath;
  plan.mode = cfg.mode;
  plan.kind = ErrorKind::subsystem;
  for (int k : cfg.orders) {
    if (k < 1) throw PreconditionError("run_fig2_sweep: UDD order must be >= 1");
    for (bool randomized : {false, true}) {
      const ProtocolSpec spec{Protocol::udd, randomized, k};
      for (double x : cfg.grid) {
        const double j = cfg.axis == SweepAxis::j ? x : cfg.j;
        const double t = cfg.axis == SweepAxis::total_t ? x : cfg.total_t;
        detail::add_cells(plan, spec, j, t / (k + 1), t);
      }
    }
  }
  return detail::run_plan<Real>(plan, [](double j, std::uint64_t seed) {
    return build_dephasing_model<Real>(j, seed);
  });
}

/** Deterministic and randomized Hahn echo on the dephasing chain model. */
template <typename Real = long double>
std::vector<SweepRecord> run_hahn_sweep(const HahnConfig& cfg) {
  require_grid(cfg.grid, "run_hahn_sweep");
  detail::SweepPlan plan;
  plan.n_sys = cfg.n_sys;
  plan.n_states = cfg.n_states;
  plan.seed = cfg.seed;
  plan.resample_bath = cfg.resample_bath;
  plan.mode = cfg.mode;
  plan.kind = ErrorKind::joint_state;
  for (bool randomized : {false, true}) {
    for (double tau : cfg.grid) {
      detail::add_cells(plan, {Protocol::hahn, randomized, 0}, cfg.j, tau, 2.0 * tau);
    }
  }
  const std::size_t n_sys = cfg.n_sys, n_bath = cfg.n_bath;
  return detail::run_plan<Real>(plan, [=](double j, std::uint64_t seed) {
    return build_dephasing_chain_model<Real>(n_sys, n_bath, j, seed);
  });
}

}  // namespace rdd
