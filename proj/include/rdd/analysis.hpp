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

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rdd/records.hpp"

namespace rdd {

/** Least-squares line through (log x, log y). */
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  double filter_floor = 0.0;
};

struct XY {
  double x = 0.0;
  double y = 0.0;
};

/// Fits log y = slope log x + intercept over points with y > floor.
inline SlopeFit fit_loglog_slope(std::span<const XY> points, double floor) {
  std::vector<std::pair<double, double>> logs;
  for (const XY& p : points) {
    if (!(p.x > 0.0)) throw PreconditionError("fit_loglog_slope: x values must be positive");
    if (p.y > floor) logs.emplace_back(std::log(p.x), std::log(p.y));
  }
  if (logs.size() < 3) {
    throw PreconditionError("fit_loglog_slope: " + std::to_string(logs.size()) +
                            " points above floor, need at least 3");
  }
  const double n = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit_loglog_slope: x values are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = static_cast<int>(logs.size());
  fit.filter_floor = floor;
  return fit;
}

enum class SweepAxis { j, tau, total_t };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::j: return "j";
    case SweepAxis::tau: return "tau";
    case SweepAxis::total_t: return "total_t";
  }
  return "?";
}

inline double axis_value(const SweepRecord& r, SweepAxis a) {
  switch (a) {
    case SweepAxis::j: return r.j;
    case SweepAxis::tau: return r.tau;
    case SweepAxis::total_t: return r.total_t;
  }
  return 0.0;
}

/** Identifies one plotted curve. */
struct CurveKey {
  Protocol protocol = Protocol::xy4;
  bool randomized = false;
  int order_k = 0;
  ErrorKind error_kind = ErrorKind::joint_state;

  auto tie() const { return std::tie(protocol, randomized, order_k, error_kind); }
  bool operator<(const CurveKey& o) const { return tie() < o.tie(); }
  bool operator==(const CurveKey& o) const { return tie() == o.tie(); }
};

/// "xy4", "rand-xy4", "cdd3", "udd2", "rand-hahn", ...
inline std::string protocol_label(Protocol p, bool randomized, int order_k) {
  std::string out = randomized ? "rand-" : "";
  out += to_string(p);
  if (p == Protocol::cdd || p == Protocol::udd) out += std::to_string(order_k);
  return out;
}

inline std::string curve_label(const CurveKey& k) {
  return protocol_label(k.protocol, k.randomized, k.order_k);
}

struct MeanPoint {
  double x = 0.0;
  double mean = 0.0;
  int count = 0;
};

struct Curve {
  CurveKey key;
  SweepAxis axis = SweepAxis::j;
  std::vector<MeanPoint> points;  // ascending x
};

/// The first of j, tau, total_t that takes more than one value.
inline SweepAxis detect_axis(std::span<const SweepRecord> rows) {
  for (SweepAxis a : {SweepAxis::j, SweepAxis::tau, SweepAxis::total_t}) {
    for (const SweepRecord& r : rows) {
      if (axis_value(r, a) != axis_value(rows.front(), a)) return a;
    }
  }
  return SweepAxis::total_t;
}

/**
 * Groups records into curves and averages the error over trials at each
 * x value. Summation runs in ascending trial order, so the means do not
 * depend on the input row order.
 */
inline std::vector<Curve> aggregate(std::vector<SweepRecord> records,
                                    std::optional<SweepAxis> axis = std::nullopt) {
  sort_records(records);
  std::map<CurveKey, std::vector<SweepRecord>> groups;
  for (const SweepRecord& r : records) {
    groups[{r.protocol, r.randomized, r.order_k, r.error_kind}].push_back(r);
  }
  std::vector<Curve> curves;
  for (auto& [key, rows] : groups) {
    Curve c;
    c.key = key;
    c.axis = axis ? *axis : detect_axis(rows);
    std::stable_sort(rows.begin(), rows.end(), [&](const SweepRecord& a, const SweepRecord& b) {
      return std::tuple(axis_value(a, c.axis), a.trial, a.seed) <
             std::tuple(axis_value(b, c.axis), b.trial, b.seed);
    });
    for (const SweepRecord& r : rows) {
      const double x = axis_value(r, c.axis);
      if (c.points.empty() || c.points.back().x != x) c.points.push_back({x, 0.0, 0});
      c.points.back().mean += r.error;
      ++c.points.back().count;
    }
    for (MeanPoint& p : c.points) p.mean /= p.count;
    curves.push_back(std::move(c));
  }
  return curves;
}

/// Slope of one curve, keeping points with x <= x_max.
inline SlopeFit fit_curve(const Curve& c, double floor,
                          double x_max = std::numeric_limits<double>::infinity()) {
  std::vector<XY> pts;
  for (const MeanPoint& p : c.points) {
    if (p.x <= x_max) pts.push_back({p.x, p.mean});
  }
  return fit_loglog_slope(pts, floor);
}

inline const Curve& find_curve(std::span<const Curve> curves, Protocol p, bool randomized,
                               int order_k) {
  for (const Curve& c : curves) {
    if (c.key.protocol == p && c.key.randomized == randomized && c.key.order_k == order_k) return c;
  }
  throw PreconditionError("no curve for " + protocol_label(p, randomized, order_k));
}

}  // namespace rdd
