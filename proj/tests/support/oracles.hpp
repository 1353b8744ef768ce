#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "swlyap/gram.hpp"
#include "swlyap/switching.hpp"

namespace oracle {

/// Truncated Taylor series with scaling and squaring.
Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a);

/// Eigen's MatrixFunctions module.
Eigen::MatrixXd eigen_expm(const Eigen::MatrixXd& a);

/// x(t) for a matrix system, composing taylor_expm over the segments.
Eigen::VectorXd matrix_state(const swlyap::SwitchedSystem& sys,
                             const swlyap::SwitchingSignal& sig, double t,
                             const Eigen::VectorXd& x);

/// Composite Simpson of ||x(t)||^2 on [0, horizon] with nodes aligned to the
/// switch times and `per_unit` panels per unit time.
double simpson_energy(const swlyap::SwitchedSystem& sys, const swlyap::SwitchingSignal& sig,
                      const Eigen::VectorXd& x, double horizon, int per_unit);

/// Midpoint rule of ||T_sigma(t) f||^2 with `steps` panels.
double midpoint_energy(const swlyap::SwitchedSystem& sys, const swlyap::SwitchingSignal& sig,
                       const swlyap::SemigroupState& f, double horizon, int steps);

/// Number of signals of a family counted by explicit nested enumeration.
std::uint64_t brute_family_count(std::size_t modes, std::size_t dwells, std::size_t max_switches);

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi);
  int integer(int lo, int hi);
  double gauss();
  /// k / 2^bits with k in [lo_k, hi_k].
  double dyadic(int lo_k, int hi_k, int bits);
};

/// Breaks on the dyadic grid of spacing 2^-bits inside (lo, hi), values in
/// [-2, 2], possibly with zero pieces.
swlyap::PiecewiseConstantFn random_pcf(Rng& r, double lo, double hi, int max_pieces, int bits = 10);

/// R - (alpha(R) + margin) I with R standard Gaussian.
Eigen::MatrixXd random_hurwitz(Rng& r, int n, double margin);

Eigen::VectorXd random_vector(Rng& r, int n);

swlyap::SwitchingSignal random_signal(Rng& r, std::size_t modes, int max_switches,
                                      double dwell_lo, double dwell_hi);

/// Signal with dwells k / 2^bits, k in [1, max_k].
swlyap::SwitchingSignal random_dyadic_signal(Rng& r, std::size_t modes, int max_switches,
                                             int max_k, int bits);

double spectral_abscissa(const Eigen::MatrixXd& a);

}  // namespace oracle
