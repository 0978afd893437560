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
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rdd/common.hpp"

namespace rdd {

enum class Protocol { hahn, xy4, xy8, cdd, udd };
enum class ErrorKind { joint_state, subsystem };

inline std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::hahn: return "hahn";
    case Protocol::xy4: return "xy4";
    case Protocol::xy8: return "xy8";
    case Protocol::cdd: return "cdd";
    case Protocol::udd: return "udd";
  }
  return "?";
}

inline std::string_view to_string(ErrorKind k) {
  return k == ErrorKind::joint_state ? "joint_state" : "subsystem";
}

inline Protocol parse_protocol_name(std::string_view s) {
  for (Protocol p : {Protocol::hahn, Protocol::xy4, Protocol::xy8, Protocol::cdd, Protocol::udd}) {
    if (s == to_string(p)) return p;
  }
  throw PreconditionError("unknown protocol '" + std::string(s) + "'");
}

inline ErrorKind parse_error_kind(std::string_view s) {
  if (s == "joint_state") return ErrorKind::joint_state;
  if (s == "subsystem") return ErrorKind::subsystem;
  throw PreconditionError("unknown error kind '" + std::string(s) + "'");
}

/// One (protocol, parameter point, initial state) measurement.
struct SweepRecord {
  Protocol protocol = Protocol::xy4;
  bool randomized = false;
  int order_k = 0;
  double j = 0.0;
  double tau = 0.0;
  double total_t = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  ErrorKind error_kind = ErrorKind::joint_state;
  double error = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

inline bool record_less(const SweepRecord& a, const SweepRecord& b) {
  return std::tie(a.protocol, a.randomized, a.order_k, a.j, a.total_t, a.tau, a.seed, a.trial,
                  a.error_kind) <
         std::tie(b.protocol, b.randomized, b.order_k, b.j, b.total_t, b.tau, b.seed, b.trial,
                  b.error_kind);
}

inline void sort_records(std::vector<SweepRecord>& records) {
  std::stable_sort(records.begin(), records.end(), record_less);
}

inline constexpr std::string_view kCsvHeader =
    "protocol,randomized,order_k,j,tau,total_t,seed,trial,error_kind,error";

namespace detail {

template <typename T>
void append_number(std::string& out, T value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view field, const char* column, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("column " + std::string(column) + ": cannot parse '" + std::string(field) + "'",
                     line);
  }
  return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

inline std::string format_record(const SweepRecord& r) {
  std::string out;
  out += to_string(r.protocol);
  out += r.randomized ? ",1," : ",0,";
  detail::append_number(out, r.order_k);
  for (double v : {r.j, r.tau, r.total_t}) {
    out += ',';
    detail::append_number(out, v);
  }
  out += ',';
  detail::append_number(out, r.seed);
  out += ',';
  detail::append_number(out, r.trial);
  out += ',';
  out += to_string(r.error_kind);
  out += ',';
  detail::append_number(out, r.error);
  return out;
}

/// Writes header plus sorted rows; numbers use the shortest round-trip form.
inline void write_csv(std::ostream& os, std::vector<SweepRecord> records) {
  sort_records(records);
  os << kCsvHeader << '\n';
  for (const SweepRecord& r : records) os << format_record(r) << '\n';
  if (!os) throw Error("write_csv: stream write failed");
}

inline void write_csv(const std::string& path, std::vector<SweepRecord> records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("write_csv: cannot open '" + path + "' for writing");
  write_csv(os, std::move(records));
}

inline SweepRecord parse_record(std::string_view text, std::size_t line) {
  const auto f = detail::split_fields(text);
  if (f.size() != 10) {
    throw ParseError("expected 10 fields, found " + std::to_string(f.size()), line);
  }
  SweepRecord r;
  try {
    r.protocol = parse_protocol_name(f[0]);
    r.error_kind = parse_error_kind(f[8]);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), line);
  }
  if (f[1] != "0" && f[1] != "1") throw ParseError("column randomized must be 0 or 1", line);
  r.randomized = f[1] == "1";
  r.order_k = detail::parse_number<int>(f[2], "order_k", line);
  r.j = detail::parse_number<double>(f[3], "j", line);
  r.tau = detail::parse_number<double>(f[4], "tau", line);
  r.total_t = detail::parse_number<double>(f[5], "total_t", line);
  r.seed = detail::parse_number<std::uint64_t>(f[6], "seed", line);
  r.trial = detail::parse_number<int>(f[7], "trial", line);
  r.error = detail::parse_number<double>(f[9], "error", line);
  if (!(r.error >= 0.0 && r.error <= 1.0)) throw ParseError("error outside [0, 1]", line);
  return r;
}

inline std::vector<SweepRecord> read_csv(std::istream& is) {
  std::string line;
  std::size_t number = 1;
  if (!std::getline(is, line)) throw ParseError("missing header", number);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError("unexpected header '" + line + "'", number);
  std::vector<SweepRecord> records;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(parse_record(line, number));
  }
  return records;
}

inline std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw PreconditionError("read_csv: cannot open '" + path + "'");
  return read_csv(is);
}

}  // namespace rdd
