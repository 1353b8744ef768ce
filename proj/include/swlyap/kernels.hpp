#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <optional>
#include <vector>

#include "swlyap/switching.hpp"

namespace swlyap {

/// How family-wide loops are executed. Both paths produce identical results;
/// reductions are resolved in enumeration order.
enum class Exec { serial, parallel };

using SignalCost = std::function<double(const SwitchingSignal&)>;
/// Values of one signal on a shared time grid.
using SignalProfile = std::function<std::vector<double>(const SwitchingSignal&)>;

std::vector<double> family_costs_serial(const FamilyEnumerator& fam, const SignalCost& cost);
std::vector<double> family_costs_omp(const FamilyEnumerator& fam, const SignalCost& cost);
std::vector<double> family_costs(const FamilyEnumerator& fam, const SignalCost& cost,
                                 Exec exec);

/// Elementwise max over the family of profile(sigma), with the first
/// maximizing index per entry.
struct PointwiseSup {
  std::vector<double> value;
  std::vector<std::uint64_t> argmax;
};

PointwiseSup pointwise_sup_serial(const FamilyEnumerator& fam, const SignalProfile& profile,
                                  std::size_t width);
PointwiseSup pointwise_sup_omp(const FamilyEnumerator& fam, const SignalProfile& profile,
                               std::size_t width);
PointwiseSup pointwise_sup(const FamilyEnumerator& fam, const SignalProfile& profile,
                           std::size_t width, Exec exec);

/// Index of the largest entry; ties go to the lowest index.
std::size_t first_argmax(std::span<const double> values);

/// out[i] = f(i) for i in [0, n). The first exception by index is rethrown.
template <class R, class F>
std::vector<R> indexed_map(std::size_t n, F&& f, Exec exec) {
  std::vector<std::optional<R>> slots(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(f(i));
  } else {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      try {
        slots[u].emplace(f(u));
      } catch (...) {
        errors[u] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace swlyap
