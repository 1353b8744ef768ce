#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swlyap/semigroup.hpp"

namespace swlyap {

using ModeId = std::size_t;

struct Segment {
  ModeId mode;
  double dwell;

  bool operator==(const Segment&) const = default;
};

/// Right-continuous piecewise-constant switching signal: the segments in
/// order, then `tail` forever.
class SwitchingSignal {
 public:
  SwitchingSignal(std::vector<Segment> segments, ModeId tail);
  static SwitchingSignal constant(ModeId mode) { return SwitchingSignal({}, mode); }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  ModeId tail() const noexcept { return tail_; }
  std::size_t switch_count() const noexcept { return segments_.size(); }

  /// Mode active at time t >= 0 (right-continuous).
  ModeId mode_at(double t) const;
  /// Time of the last switch, 0 for a constant signal.
  double last_switch_time() const;
  /// Total time spent in `mode` during [0, t].
  double occupation_time(ModeId mode, double t) const;

  bool operator==(const SwitchingSignal&) const = default;

 private:
  std::vector<Segment> segments_;
  ModeId tail_;
};

/// {T_j}: modes acting on one common state space, plus its norm.
class SwitchedSystem {
 public:
  SwitchedSystem(std::vector<ModeSpec> modes, NormSpec norm);

  const std::vector<ModeSpec>& modes() const noexcept { return modes_; }
  const ModeSpec& mode(ModeId id) const;
  std::size_t size() const noexcept { return modes_.size(); }
  const NormSpec& norm() const noexcept { return norm_; }
  bool all_matrix_like() const;
  /// Dimension of the Euclidean space; 0 for function spaces.
  Eigen::Index dimension() const noexcept { return dim_; }

  double norm_of(const SemigroupState& x) const { return state_norm(x, norm_); }
  void check_signal(const SwitchingSignal& sig) const;

 private:
  std::vector<ModeSpec> modes_;
  NormSpec norm_;
  Eigen::Index dim_ = 0;
};

/// Finite surrogate of the set of all signals: every mode sequence of at most
/// max_switches switches with dwells drawn from dwell_grid.
struct SignalFamily {
  std::vector<double> dwell_grid;
  std::size_t max_switches = 0;
  std::vector<ModeId> mode_ids;
};

/// T_sigma(t) x.
SemigroupState evolve(const SwitchedSystem& sys, const SwitchingSignal& sig, double t,
                      const SemigroupState& x);

/// Same signal with adjacent equal-mode segments merged and trailing
/// segments in the tail mode dropped.
SwitchingSignal canonical_signal(const SwitchingSignal& sig);

/// The signal sigma_s(tau) = sigma(s + tau).
SwitchingSignal shift_signal(const SwitchingSignal& sig, double s);

/// max over witnesses of ||T_sigma(t) w|| / ||w||, a lower bound on ||T_sigma(t)||.
double operator_norm_witness(const SwitchedSystem& sys, const SwitchingSignal& sig,
                             double t, std::span<const SemigroupState> witnesses);

/// Random-access view of a SignalFamily in lexicographic order of
/// (switch count, mode sequence, dwell tuple). Index i can be decoded
/// independently, so workers may consume disjoint index ranges.
class FamilyEnumerator {
 public:
  static constexpr std::uint64_t kDefaultLimit = 20'000'000;

  explicit FamilyEnumerator(SignalFamily fam, std::uint64_t limit = kDefaultLimit);

  std::uint64_t size() const noexcept { return count_; }
  SwitchingSignal at(std::uint64_t index) const;
  const SignalFamily& family() const noexcept { return fam_; }

  /// sum_{k<=K} |modes|^{k+1} |dwells|^k, or nullopt on 64-bit overflow.
  static std::optional<std::uint64_t> family_size(const SignalFamily& fam);

 private:
  SignalFamily fam_;
  std::uint64_t count_;
  std::vector<std::uint64_t> block_start_;
};

FamilyEnumerator enumerate_family(const SignalFamily& fam);

/// Periodic signal alternating through `cycle` with equal dwell `period`,
/// covering at least [0, horizon].
SwitchingSignal periodic_signal(std::span<const ModeId> cycle, double period,
                                double horizon);

/// Signal that switches into mode k+1 at time 1 - 4^{-k}, k = 0..n-1, then
/// stays in mode n, for systems built from dyadic_gate_mode(1..n) (ids 0..n-1).
SwitchingSignal dyadic_cascade_signal(int n);

struct TrajectorySample {
  double t;
  double norm;
  ModeId mode_active;
};

/// Norm of T_sigma(t) x on a time grid, evolving incrementally.
std::vector<TrajectorySample> sample_trajectory(const SwitchedSystem& sys,
                                                const SwitchingSignal& sig,
                                                const SemigroupState& x,
                                                std::span<const double> times);

}  // namespace swlyap
