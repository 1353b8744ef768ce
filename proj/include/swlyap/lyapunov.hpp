#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "swlyap/bounds.hpp"
#include "swlyap/kernels.hpp"
#include "swlyap/switching.hpp"

namespace swlyap {

struct TrajectoryCost {
  /// int_0^horizon ||T_sigma(t) x||^2 dt.
  double integral;
  /// Bound on the remainder beyond the horizon: K^2 ||x(h)||^2 / (2 mu) under a
  /// decay bound, 0 when x(h) = 0, absent otherwise.
  std::optional<double> tail_bound;
};

/// Energy of one trajectory. Transport and diagonal-group segments are
/// integrated in closed form; matrix segments by adaptive Gauss-Kronrod
/// quadrature to relative tolerance quad_tol.
TrajectoryCost trajectory_cost(const SwitchedSystem& sys, const SwitchingSignal& sig,
                               const SemigroupState& x, double horizon, double quad_tol,
                               std::optional<DecayBound> decay = std::nullopt);

enum class FunctionalKind { v_sup, v_tilde };

/// Which side of the true value an estimate sits on.
enum class BoundDirection { lower, upper, two_sided };

struct LyapunovEstimate {
  double value = 0.0;
  SwitchingSignal witness = SwitchingSignal::constant(0);
  double horizon = 0.0;
  std::optional<double> tail_bound;
  FunctionalKind kind = FunctionalKind::v_sup;
  /// K^2/(2 mu) ||x||^2 when a decay bound was supplied.
  std::optional<double> upper_bound;
  std::uint64_t signals_evaluated = 0;
  BoundDirection direction = BoundDirection::lower;
};

struct SearchOptions {
  double horizon = 10.0;
  double quad_tol = 1e-10;
  std::optional<DecayBound> decay;
  /// Locally perturb the best witness's dwells after the exhaustive pass.
  bool refine = true;
  std::size_t max_refine_steps = 64;
  Exec exec = Exec::parallel;
};

/// max over the family of trajectory_cost: a lower bound on
/// V(x) = sup_sigma int_0^inf ||T_sigma(t) x||^2 dt.
LyapunovEstimate v_sup(const SwitchedSystem& sys, const SemigroupState& x,
                       const SignalFamily& fam, const SearchOptions& opts = {});

/// int_0^horizon max_sigma ||T_sigma(t) x||^2 dt, sup over the family at every
/// grid time, trapezoid rule in t. grid must start at 0 and reach horizon.
LyapunovEstimate v_tilde(const SwitchedSystem& sys, const SemigroupState& x,
                         const SignalFamily& fam, double horizon,
                         std::span<const double> grid, Exec exec = Exec::parallel);

/// int_0^horizon max_{s in [0,tau]} e^{2 mu (s - tau)} ||T(s) x||^2 dtau on the
/// grid, via the running-max recursion M_k = max(M_{k-1} e^{-2 mu dt}, ||T(t_k)x||^2).
double v_tilde_single_mode(const ModeSpec& mode, double mu, const SemigroupState& x,
                           const NormSpec& norm, double horizon,
                           std::span<const double> grid);

using Evaluator = std::function<double(const SemigroupState&)>;

struct DerivativeEstimate {
  ModeId mode;
  double value;
  std::vector<double> t_grid;
};

/// min over t in t_grid of (v(T_j(t) x) - v(x)) / t, an upper surrogate for
/// the lower Dini derivative liminf_{t->0} of the same quotient.
DerivativeEstimate generalized_derivative(const Evaluator& v, const SwitchedSystem& sys,
                                          ModeId mode, const SemigroupState& x,
                                          std::span<const double> t_grid);

/// The system with the scalar group e^{-mu t} I appended as the last mode.
SwitchedSystem augment_system(const SwitchedSystem& sys, double mu);

/// 2^{-k}, k = 4..20.
std::vector<double> default_derivative_grid();
/// max(10, 5 / mu_hat), or 10 without an estimate.
double default_horizon(std::optional<double> mu_hat = std::nullopt);
/// Dwells {1/4, 1/2, 1}, up to 3 switches, every mode.
SignalFamily default_family(const SwitchedSystem& sys);
/// 0, step, 2 step, ..., horizon (the last point is clamped to horizon).
std::vector<double> uniform_grid(double horizon, double step);
/// uniform_grid(horizon, 1/64).
std::vector<double> default_time_grid(double horizon);

/// Evaluator x -> v_sup(sys, x, fam, opts).value.
Evaluator v_sup_evaluator(SwitchedSystem sys, SignalFamily fam, SearchOptions opts);

/// Trapezoid rule of samples on a nondecreasing grid.
double trapezoid(std::span<const double> t, std::span<const double> y);

}  // namespace swlyap
