#include "swlyap/switching.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "swlyap/errors.hpp"

namespace swlyap {

SwitchingSignal::SwitchingSignal(std::vector<Segment> segments, ModeId tail)
    : segments_(std::move(segments)), tail_(tail) {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double d = segments_[i].dwell;
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ContractViolation("switching signal: segment " + std::to_string(i) +
                              " has non-positive or non-finite dwell");
    }
  }
}

ModeId SwitchingSignal::mode_at(double t) const {
  double elapsed = 0.0;
  for (const auto& seg : segments_) {
    elapsed += seg.dwell;
    if (t < elapsed) return seg.mode;
  }
  return tail_;
}

double SwitchingSignal::last_switch_time() const {
  double elapsed = 0.0;
  for (const auto& seg : segments_) elapsed += seg.dwell;
  return elapsed;
}

double SwitchingSignal::occupation_time(ModeId mode, double t) const {
  double elapsed = 0.0;
  double occupied = 0.0;
  for (const auto& seg : segments_) {
    if (elapsed >= t) return occupied;
    const double span = std::min(seg.dwell, t - elapsed);
    if (seg.mode == mode) occupied += span;
    elapsed += seg.dwell;
  }
  if (tail_ == mode && t > elapsed) occupied += t - elapsed;
  return occupied;
}

SwitchedSystem::SwitchedSystem(std::vector<ModeSpec> modes, NormSpec norm)
    : modes_(std::move(modes)), norm_(norm) {
  if (modes_.empty()) throw StructuralError("switched system: at least one mode required");
  bool saw_function = false;
  bool saw_matrix = false;
  std::optional<std::pair<double, double>> domain;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    if (const auto* mm = m.get_if<MatrixMode>()) {
      if (dim_ != 0 && mm->a.rows() != dim_) {
        throw StructuralError("switched system: mode " + std::to_string(i) +
                              " has a different dimension");
      }
      dim_ = mm->a.rows();
      saw_matrix = true;
    } else if (const auto* sa = m.get_if<ShiftAmplifyMode>()) {
      const std::pair<double, double> d{sa->lo, sa->hi};
      if (domain && *domain != d) {
        throw StructuralError("switched system: mode " + std::to_string(i) +
                              " acts on a different interval");
      }
      domain = d;
      saw_function = true;
    } else if (m.get_if<HalfLineShiftMode>() != nullptr) {
      const std::pair<double, double> d{0.0, std::numeric_limits<double>::infinity()};
      if (domain && *domain != d) {
        throw StructuralError("switched system: mode " + std::to_string(i) +
                              " acts on a different interval");
      }
      domain = d;
      saw_function = true;
    }
  }
  if (saw_function && saw_matrix) {
    throw StructuralError("switched system: matrix and function modes cannot be mixed");
  }
  if (saw_matrix && !norm_.euclidean) {
    throw StructuralError("switched system: matrix modes require the Euclidean norm");
  }
  if (saw_function && norm_.euclidean) {
    throw StructuralError("switched system: function modes require an L^p norm");
  }
}

const ModeSpec& SwitchedSystem::mode(ModeId id) const {
  if (id >= modes_.size()) {
    throw StructuralError("switched system: mode id " + std::to_string(id) +
                          " out of range (" + std::to_string(modes_.size()) + " modes)");
  }
  return modes_[id];
}

bool SwitchedSystem::all_matrix_like() const {
  for (const auto& m : modes_) {
    if (!m.is_matrix() && m.get_if<DiagonalGroupMode>() == nullptr) return false;
  }
  return true;
}

void SwitchedSystem::check_signal(const SwitchingSignal& sig) const {
  for (std::size_t i = 0; i < sig.segments().size(); ++i) {
    if (sig.segments()[i].mode >= modes_.size()) {
      throw StructuralError("signal segment " + std::to_string(i) + ": mode id " +
                            std::to_string(sig.segments()[i].mode) + " out of range");
    }
  }
  if (sig.tail() >= modes_.size()) {
    throw StructuralError("signal tail: mode id " + std::to_string(sig.tail()) +
                          " out of range");
  }
}

SemigroupState evolve(const SwitchedSystem& sys, const SwitchingSignal& sig, double t,
                      const SemigroupState& x) {
  if (!(t >= 0.0)) throw ContractViolation("evolve: time must be nonnegative");
  sys.check_signal(sig);
  SemigroupState state = x;
  double remaining = t;
  for (const auto& seg : sig.segments()) {
    if (remaining <= seg.dwell) return apply(sys.mode(seg.mode), remaining, state);
    state = apply(sys.mode(seg.mode), seg.dwell, state);
    remaining -= seg.dwell;
  }
  return apply(sys.mode(sig.tail()), remaining, state);
}

SwitchingSignal shift_signal(const SwitchingSignal& sig, double s) {
  if (!(s >= 0.0)) throw ContractViolation("shift_signal: shift must be nonnegative");
  std::vector<Segment> rest;
  double remaining = s;
  const auto& segs = sig.segments();
  std::size_t i = 0;
  for (; i < segs.size(); ++i) {
    if (remaining < segs[i].dwell) break;
    remaining -= segs[i].dwell;
  }
  if (i == segs.size()) return SwitchingSignal::constant(sig.tail());
  rest.push_back({segs[i].mode, segs[i].dwell - remaining});
  rest.insert(rest.end(), segs.begin() + static_cast<std::ptrdiff_t>(i) + 1, segs.end());
  return SwitchingSignal(std::move(rest), sig.tail());
}

double operator_norm_witness(const SwitchedSystem& sys, const SwitchingSignal& sig,
                             double t, std::span<const SemigroupState> witnesses) {
  if (witnesses.empty()) throw ContractViolation("operator_norm_witness: no witnesses");
  double best = 0.0;
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const double n0 = sys.norm_of(witnesses[i]);
    if (!(n0 > 0.0)) {
      throw ContractViolation("operator_norm_witness: witness " + std::to_string(i) +
                              " is zero");
    }
    best = std::max(best, sys.norm_of(evolve(sys, sig, t, witnesses[i])) / n0);
  }
  return best;
}

std::optional<std::uint64_t> FamilyEnumerator::family_size(const SignalFamily& fam) {
  const std::uint64_t m = fam.mode_ids.size();
  const std::uint64_t d = fam.dwell_grid.size();
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t modes_pow = m;  // m^{k+1}
  std::uint64_t dwell_pow = 1;  // d^k
  for (std::size_t k = 0; k <= fam.max_switches; ++k) {
    if (k > 0) {
      if (m != 0 && modes_pow > kMax / m) return std::nullopt;
      if (d != 0 && dwell_pow > kMax / d) return std::nullopt;
      modes_pow *= m;
      dwell_pow *= d;
    }
    if (dwell_pow != 0 && modes_pow > kMax / dwell_pow) return std::nullopt;
    const std::uint64_t block = modes_pow * dwell_pow;
    if (total > kMax - block) return std::nullopt;
    total += block;
  }
  return total;
}

FamilyEnumerator::FamilyEnumerator(SignalFamily fam, std::uint64_t limit)
    : fam_(std::move(fam)) {
  if (fam_.dwell_grid.empty()) throw ContractViolation("signal family: empty dwell grid");
  if (fam_.mode_ids.empty()) throw ContractViolation("signal family: no modes");
  for (double d : fam_.dwell_grid) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ContractViolation("signal family: dwells must be positive and finite");
    }
  }
  const auto size = family_size(fam_);
  if (!size || *size > limit) {
    const std::uint64_t c = size.value_or(std::numeric_limits<std::uint64_t>::max());
    throw SizeError("signal family: " + std::to_string(c) +
                        " signals exceed the enumeration limit of " +
                        std::to_string(limit),
                    c);
  }
  count_ = *size;
  const std::uint64_t m = fam_.mode_ids.size();
  const std::uint64_t d = fam_.dwell_grid.size();
  std::uint64_t start = 0;
  std::uint64_t modes_pow = m;
  std::uint64_t dwell_pow = 1;
  for (std::size_t k = 0; k <= fam_.max_switches; ++k) {
    if (k > 0) {
      modes_pow *= m;
      dwell_pow *= d;
    }
    block_start_.push_back(start);
    start += modes_pow * dwell_pow;
  }
  block_start_.push_back(start);
}

SwitchingSignal FamilyEnumerator::at(std::uint64_t index) const {
  if (index >= count_) throw ContractViolation("FamilyEnumerator::at: index out of range");
  std::size_t k = 0;
  while (block_start_[k + 1] <= index) ++k;
  const std::uint64_t m = fam_.mode_ids.size();
  const std::uint64_t d = fam_.dwell_grid.size();
  std::uint64_t dwell_count = 1;
  for (std::size_t i = 0; i < k; ++i) dwell_count *= d;
  const std::uint64_t local = index - block_start_[k];
  std::uint64_t mode_code = local / dwell_count;
  std::uint64_t dwell_code = local % dwell_count;

  std::vector<ModeId> modes(k + 1);
  for (std::size_t i = k + 1; i-- > 0;) {
    modes[i] = fam_.mode_ids[mode_code % m];
    mode_code /= m;
  }
  std::vector<Segment> segs(k);
  for (std::size_t i = k; i-- > 0;) {
    segs[i] = {modes[i], fam_.dwell_grid[dwell_code % d]};
    dwell_code /= d;
  }
  return SwitchingSignal(std::move(segs), modes[k]);
}

FamilyEnumerator enumerate_family(const SignalFamily& fam) { return FamilyEnumerator(fam); }

SwitchingSignal canonical_signal(const SwitchingSignal& sig) {
  std::vector<Segment> segs;
  for (const auto& seg : sig.segments()) {
    if (!segs.empty() && segs.back().mode == seg.mode) {
      segs.back().dwell += seg.dwell;
    } else {
      segs.push_back(seg);
    }
  }
  while (!segs.empty() && segs.back().mode == sig.tail()) segs.pop_back();
  return SwitchingSignal(std::move(segs), sig.tail());
}

SwitchingSignal periodic_signal(std::span<const ModeId> cycle, double period,
                                double horizon) {
  if (cycle.empty()) throw ContractViolation("periodic_signal: empty cycle");
  if (!(period > 0.0)) throw ContractViolation("periodic_signal: period must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / period));
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) segs.push_back({cycle[i % cycle.size()], period});
  return SwitchingSignal(std::move(segs), cycle[n % cycle.size()]);
}

SwitchingSignal dyadic_cascade_signal(int n) {
  if (n < 1) throw ContractViolation("dyadic_cascade_signal: n must be >= 1");
  std::vector<Segment> segs;
  for (int k = 0; k + 1 < n; ++k) {
    // Mode k+1 is active on [1 - 4^{-k}, 1 - 4^{-(k+1)}).
    segs.push_back({static_cast<ModeId>(k), 3.0 * std::ldexp(1.0, -2 * (k + 1))});
  }
  return SwitchingSignal(std::move(segs), static_cast<ModeId>(n - 1));
}

std::vector<TrajectorySample> sample_trajectory(const SwitchedSystem& sys,
                                                const SwitchingSignal& sig,
                                                const SemigroupState& x,
                                                std::span<const double> times) {
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  SemigroupState state = x;
  double now = 0.0;
  for (double t : times) {
    if (!(t >= now)) {
      throw ContractViolation("sample_trajectory: times must be nondecreasing and >= 0");
    }
    if (t > now) {
      state = evolve(sys, shift_signal(sig, now), t - now, state);
      now = t;
    }
    out.push_back({t, sys.norm_of(state), sig.mode_at(t)});
  }
  return out;
}

}  // namespace swlyap
