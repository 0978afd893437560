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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rdd/pauli.hpp"

namespace rdd {

/** Instantaneous pulse followed by free evolution for `duration`. */
struct Segment {
  PauliWord pulse;
  double duration = 0.0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/**
 * Ordered segments plus one pulse applied at the very end.
 *
 * The propagator is final_pulse * prod_l [exp(-i H duration_l) * pulse_l]
 * with segment 0 acting first.
 */
class PulseSequence {
 public:
  PulseSequence(std::vector<Segment> segments, PauliWord final_pulse)
      : segments_(std::move(segments)), final_pulse_(std::move(final_pulse)) {
    if (segments_.empty()) throw PreconditionError("PulseSequence: no segments");
    for (const Segment& s : segments_) {
      if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
        throw PreconditionError("PulseSequence: segment durations must be positive and finite");
      }
      if (s.pulse.size() != final_pulse_.size()) {
        throw DimensionError("PulseSequence: pulses act on different qubit counts");
      }
    }
  }

  const std::vector<Segment>& segments() const { return segments_; }
  const PauliWord& final_pulse() const { return final_pulse_; }
  std::size_t qubit_count() const { return final_pulse_.size(); }
  std::size_t segment_count() const { return segments_.size(); }

  double total_time() const {
    double t = 0.0;
    for (const Segment& s : segments_) t += s.duration;
    return t;
  }

  /// Non-identity pulses among the segment pulses and the final pulse.
  std::size_t pulse_count() const {
    std::size_t count = final_pulse_.is_identity() ? 0 : 1;
    for (const Segment& s : segments_) count += s.pulse.is_identity() ? 0 : 1;
    return count;
  }

  bool equal_intervals() const {
    for (const Segment& s : segments_) {
      if (s.duration != segments_.front().duration) return false;
    }
    return true;
  }

  /**
   * Toggling frame g_l of each segment, i.e. the sequence equals
   * prod_l g_l exp(-i H duration_l) g_l^dagger followed by
   * final_pulse * g_{L-1}^dagger (identity for a closed sequence).
   */
  std::vector<PauliWord> toggling_frames() const {
    std::vector<PauliWord> frames;
    PauliWord accumulated = PauliWord::identity(qubit_count());
    for (const Segment& s : segments_) {
      accumulated = s.pulse * accumulated;
      frames.push_back(accumulated.dagger());
    }
    return frames;
  }

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  std::vector<Segment> segments_;
  PauliWord final_pulse_;
};

/**
 * Sequence realizing prod_l g_l exp(-i H d_l) g_l^dagger: the pulse before
 * segment l is g_l^dagger g_{l-1} (g_{-1} = I) and the final pulse is g_{L-1}.
 */
inline PulseSequence from_frames(std::span<const PauliWord> frames,
                                 std::span<const double> durations) {
  if (frames.empty() || frames.size() != durations.size()) {
    throw PreconditionError("from_frames: need one duration per frame");
  }
  std::vector<Segment> segments;
  segments.reserve(frames.size());
  PauliWord previous = PauliWord::identity(frames.front().size());
  for (std::size_t l = 0; l < frames.size(); ++l) {
    segments.push_back({frames[l].dagger() * previous, durations[l]});
    previous = frames[l];
  }
  return PulseSequence(std::move(segments), frames.back());
}

inline PulseSequence from_frames(std::span<const PauliWord> frames, double tau) {
  const std::vector<double> durations(frames.size(), tau);
  return from_frames(frames, durations);
}

/**
 * A set of Pauli words, containing the identity and closed under
 * multiplication up to phase.
 */
class DecouplingGroup {
 public:
  explicit DecouplingGroup(std::vector<PauliWord> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw PreconditionError("DecouplingGroup: empty");
    bool has_identity = false;
    for (const PauliWord& g : elements_) {
      if (g.size() != elements_.front().size()) {
        throw DimensionError("DecouplingGroup: elements act on different qubit counts");
      }
      has_identity = has_identity || g.is_identity();
    }
    if (!has_identity) throw PreconditionError("DecouplingGroup: identity missing");
    for (const PauliWord& a : elements_) {
      for (const PauliWord& b : elements_) {
        if (!contains_up_to_phase(a * b)) {
          throw PreconditionError("DecouplingGroup: not closed (" + a.to_string() + " * " +
                                  b.to_string() + ")");
        }
      }
    }
  }

  /// {I, X^n, Y^n, Z^n}
  static DecouplingGroup xy4(std::size_t n) {
    return DecouplingGroup({PauliWord::identity(n), PauliWord::uniform(n, Pauli::X),
                            PauliWord::uniform(n, Pauli::Y), PauliWord::uniform(n, Pauli::Z)});
  }

  /// {I, p^n}
  static DecouplingGroup flip(std::size_t n, Pauli p = Pauli::X) {
    return DecouplingGroup({PauliWord::identity(n), PauliWord::uniform(n, p)});
  }

  static DecouplingGroup trivial(std::size_t n) { return DecouplingGroup({PauliWord::identity(n)}); }

  const std::vector<PauliWord>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t qubit_count() const { return elements_.front().size(); }

  bool contains_up_to_phase(const PauliWord& w) const {
    for (const PauliWord& g : elements_) {
      if (g.same_up_to_phase(w)) return true;
    }
    return false;
  }

 private:
  std::vector<PauliWord> elements_;
};

namespace detail {
inline void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PreconditionError(std::string(what) + " must be positive and finite");
  }
}
}  // namespace detail

/// X^n pulses at t = 0 and t = tau; total time 2 tau.
inline PulseSequence seq_hahn(std::size_t n, double tau) {
  detail::require_positive(tau, "seq_hahn: tau");
  const std::vector<PauliWord> frames = {PauliWord::uniform(n, Pauli::X), PauliWord::identity(n)};
  return from_frames(frames, tau);
}

/// X^n pulses at t = tau and t = 2 tau.
inline PulseSequence seq_hahn_reversed(std::size_t n, double tau) {
  detail::require_positive(tau, "seq_hahn_reversed: tau");
  const std::vector<PauliWord> frames = {PauliWord::identity(n), PauliWord::uniform(n, Pauli::X)};
  return from_frames(frames, tau);
}

/// Frame list (I, X, Y, Z)^{(x) n}.
inline std::vector<PauliWord> xy4_frames(std::size_t n) {
  return DecouplingGroup::xy4(n).elements();
}

inline PulseSequence seq_xy4(std::size_t n, double tau) {
  detail::require_positive(tau, "seq_xy4: tau");
  return from_frames(xy4_frames(n), tau);
}

/// XY4 frames followed by their reverse (palindromic, eight segments).
inline PulseSequence seq_xy8(std::size_t n, double tau) {
  detail::require_positive(tau, "seq_xy8: tau");
  const std::vector<PauliWord> half = xy4_frames(n);
  std::vector<PauliWord> frames = half;
  frames.insert(frames.end(), half.rbegin(), half.rend());
  return from_frames(frames, tau);
}

inline constexpr int kMaxCddOrder = 6;

/// CDD_k frames: outer XY4 frame g times each CDD_{k-1} frame, 4^k in total.
inline std::vector<PauliWord> cdd_frames(std::size_t n, int k) {
  if (k < 1 || k > kMaxCddOrder) {
    throw PreconditionError("cdd_frames: order must be in [1, " + std::to_string(kMaxCddOrder) +
                            "], got " + std::to_string(k));
  }
  std::vector<PauliWord> frames = xy4_frames(n);
  for (int level = 2; level <= k; ++level) {
    std::vector<PauliWord> next;
    next.reserve(frames.size() * 4);
    for (const PauliWord& outer : xy4_frames(n)) {
      for (const PauliWord& inner : frames) next.push_back(outer * inner);
    }
    frames = std::move(next);
  }
  return frames;
}

inline PulseSequence seq_cdd(std::size_t n, int k, double tau) {
  detail::require_positive(tau, "seq_cdd: tau");
  return from_frames(cdd_frames(n, k), tau);
}

/// Uhrig pulse times t_j = T sin^2(j pi / (2k + 2)), j = 1..k.
inline std::vector<double> udd_pulse_times(int k, double total_t) {
  if (k < 1) throw PreconditionError("udd_pulse_times: order must be >= 1");
  detail::require_positive(total_t, "udd_pulse_times: total time");
  std::vector<double> times(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const double s = std::sin(j * std::numbers::pi / (2.0 * k + 2.0));
    times[static_cast<std::size_t>(j - 1)] = total_t * s * s;
  }
  // Enforce t_j + t_{k+1-j} = T exactly for the upper half.
  for (int j = 1; 2 * j <= k; ++j) {
    times[static_cast<std::size_t>(k - j)] = total_t - times[static_cast<std::size_t>(j - 1)];
  }
  if (k % 2 == 1) times[static_cast<std::size_t>(k / 2)] = 0.5 * total_t;
  return times;
}

/**
 * UDD_k on n qubits: X^n pulses at the k Uhrig times. Frames alternate
 * I, X, I, ...; for odd k the last frame is X, so the final pulse is an X
 * that returns the system to the lab frame.
 */
inline PulseSequence seq_udd(int k, double total_t, std::size_t n = 1) {
  const std::vector<double> times = udd_pulse_times(k, total_t);
  std::vector<double> durations;
  std::vector<PauliWord> frames;
  double previous = 0.0;
  for (std::size_t j = 0; j <= times.size(); ++j) {
    const double next = j < times.size() ? times[j] : total_t;
    durations.push_back(next - previous);
    frames.push_back(j % 2 == 0 ? PauliWord::identity(n) : PauliWord::uniform(n, Pauli::X));
    previous = next;
  }
  return from_frames(frames, durations);
}

/** One branch of a sequence-randomized protocol. */
struct RandomizedBranch {
  double probability = 0.0;
  PauliWord element;
  PulseSequence sequence;
};

/**
 * Branch g replaces the first pulse p_0 by p_0 g^dagger and the final pulse
 * f by g f, so it compiles to g D g^dagger. All branches are equally likely.
 */
inline std::vector<RandomizedBranch> randomize(const PulseSequence& seq,
                                               const DecouplingGroup& group) {
  if (group.qubit_count() != seq.qubit_count()) {
    throw DimensionError("randomize: group and sequence act on different qubit counts");
  }
  std::vector<RandomizedBranch> branches;
  const double p = 1.0 / static_cast<double>(group.size());
  for (const PauliWord& g : group.elements()) {
    std::vector<Segment> segments = seq.segments();
    segments.front().pulse = segments.front().pulse * g.dagger();
    branches.push_back({p, g, PulseSequence(std::move(segments), g * seq.final_pulse())});
  }
  return branches;
}

}  // namespace rdd
