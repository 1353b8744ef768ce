#include "swlyap/kernels.hpp"

#include <algorithm>
#include <limits>

#include "swlyap/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace swlyap {

std::vector<double> family_costs_serial(const FamilyEnumerator& fam, const SignalCost& cost) {
  std::vector<double> out(fam.size());
  for (std::uint64_t i = 0; i < fam.size(); ++i) out[i] = cost(fam.at(i));
  return out;
}

std::vector<double> family_costs_omp(const FamilyEnumerator& fam, const SignalCost& cost) {
  return indexed_map<double>(
      static_cast<std::size_t>(fam.size()), [&](std::size_t i) { return cost(fam.at(i)); },
      Exec::parallel);
}

std::vector<double> family_costs(const FamilyEnumerator& fam, const SignalCost& cost,
                                 Exec exec) {
  return exec == Exec::serial ? family_costs_serial(fam, cost) : family_costs_omp(fam, cost);
}

namespace {

void merge_into(PointwiseSup& acc, std::span<const double> row, std::uint64_t index) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] > acc.value[k]) {
      acc.value[k] = row[k];
      acc.argmax[k] = index;
    }
  }
}

PointwiseSup empty_sup(std::size_t width) {
  return {std::vector<double>(width, -std::numeric_limits<double>::infinity()),
          std::vector<std::uint64_t>(width, 0)};
}

std::vector<double> checked_profile(const SignalProfile& profile, const SwitchingSignal& sig,
                                    std::size_t width) {
  auto row = profile(sig);
  if (row.size() != width) {
    throw StructuralError("pointwise_sup: profile returned the wrong number of samples");
  }
  return row;
}

}  // namespace

PointwiseSup pointwise_sup_serial(const FamilyEnumerator& fam, const SignalProfile& profile,
                                  std::size_t width) {
  PointwiseSup acc = empty_sup(width);
  for (std::uint64_t i = 0; i < fam.size(); ++i) {
    merge_into(acc, checked_profile(profile, fam.at(i), width), i);
  }
  return acc;
}

PointwiseSup pointwise_sup_omp(const FamilyEnumerator& fam, const SignalProfile& profile,
                               std::size_t width) {
#if defined(_OPENMP)
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  // Each thread owns a contiguous block of indices, so merging the partial
  // results in thread order reproduces the serial first-index tie-breaking.
  std::vector<PointwiseSup> partial(static_cast<std::size_t>(threads), empty_sup(width));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const std::uint64_t n = fam.size();
#pragma omp parallel num_threads(threads)
  {
#if defined(_OPENMP)
    const auto tid = static_cast<std::uint64_t>(omp_get_thread_num());
    const auto nt = static_cast<std::uint64_t>(omp_get_num_threads());
#else
    const std::uint64_t tid = 0;
    const std::uint64_t nt = 1;
#endif
    const std::uint64_t lo = n * tid / nt;
    const std::uint64_t hi = n * (tid + 1) / nt;
    try {
      for (std::uint64_t i = lo; i < hi; ++i) {
        merge_into(partial[tid], checked_profile(profile, fam.at(i), width), i);
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  PointwiseSup acc = empty_sup(width);
  for (const auto& part : partial) {
    for (std::size_t k = 0; k < width; ++k) {
      if (part.value[k] > acc.value[k]) {
        acc.value[k] = part.value[k];
        acc.argmax[k] = part.argmax[k];
      }
    }
  }
  return acc;
}

PointwiseSup pointwise_sup(const FamilyEnumerator& fam, const SignalProfile& profile,
                           std::size_t width, Exec exec) {
  return exec == Exec::serial ? pointwise_sup_serial(fam, profile, width)
                              : pointwise_sup_omp(fam, profile, width);
}

std::size_t first_argmax(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("first_argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace swlyap
