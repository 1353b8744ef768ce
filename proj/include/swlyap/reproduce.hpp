#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swlyap/json_io.hpp"

namespace swlyap {

struct ReproCheck {
  std::string name;
  double value;
  double expected;
  /// "==", "<=" or ">=" between value and expected.
  std::string relation;
  double tolerance;
  bool pass;
};

struct Reproduction {
  std::string example;
  Json parameters;
  Json rows = Json::array();
  std::vector<ReproCheck> checks;
  std::vector<std::string> lines;

  bool all_pass() const;
  Json to_json() const;
};

/// Alternating gated transports with dwell delta: sampled operator norm at
/// t = delta, 2 delta, ..., 2 against the staircase 2^{ceil(t/delta)}.
Reproduction reproduce_blowup(double delta);

/// Dyadic gate modes 1..n on L^p(0,1): sampled energy ratio against 3/2
/// (p = 2 only) and the cascade witness ratio against 2^{n/p}.
Reproduction reproduce_dyadic_cascade(int n, double p, std::uint64_t seed,
                                      std::size_t signal_count = 200,
                                      std::size_t witness_count = 10);

/// Left translation on L^2(0, inf): compact witnesses die out, while the
/// witness ratio stays 1 at t = 1..10.
Reproduction reproduce_half_line_shift();

}  // namespace swlyap
