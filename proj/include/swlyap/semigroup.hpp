#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "swlyap/state_space.hpp"

namespace swlyap {

/// A state of the switched system: a function on an interval or a vector.
using SemigroupState = std::variant<PiecewiseConstantFn, Eigen::VectorXd>;

enum class SpaceKind { function, euclidean };

SpaceKind space_kind(const SemigroupState& x);
double state_norm(const SemigroupState& x, const NormSpec& norm);
bool is_zero_state(const SemigroupState& x);
SemigroupState scale_state(double c, const SemigroupState& x);
/// a*x + b*y; both states must live in the same space.
SemigroupState combine_states(double a, const SemigroupState& x, double b,
                              const SemigroupState& y);

/// e^{tA} on R^n.
struct MatrixMode {
  Eigen::MatrixXd a;
};

enum class Direction { left, right };

/// Transport on L^p(lo, hi) at unit speed with zero inflow. A value is
/// multiplied by `factor` when its characteristic crosses the gate point
/// during [0, t]:
///   left:  (T(t)f)(s) = c(s,t) f(s+t),  c = factor iff s < gate <= s+t
///   right: (T(t)f)(s) = c(s,t) f(s-t),  c = factor iff s-t <= gate < s
/// This cocycle form makes T a semigroup and is nilpotent: T(t) = 0 for
/// t >= hi - lo.
struct ShiftAmplifyMode {
  double lo;
  double hi;
  Direction direction;
  double gate;
  double factor;
};

/// The scalar group e^{-mu t} I, on any state space.
struct DiagonalGroupMode {
  double mu;
};

/// Left translation (T(t)f)(s) = f(s+t) on L^p(0, inf).
struct HalfLineShiftMode {};

class ModeSpec {
 public:
  using Variant =
      std::variant<MatrixMode, ShiftAmplifyMode, DiagonalGroupMode, HalfLineShiftMode>;

  static ModeSpec matrix(Eigen::MatrixXd a);
  static ModeSpec shift_amplify(double lo, double hi, Direction direction, double gate,
                                double factor);
  static ModeSpec diagonal_group(double mu);
  static ModeSpec half_line_shift();

  const Variant& variant() const noexcept { return v_; }
  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }
  bool is_matrix() const noexcept { return std::holds_alternative<MatrixMode>(v_); }
  std::string kind_name() const;

  /// Whether `x` lives in the space this mode acts on.
  bool accepts(const SemigroupState& x) const;

 private:
  explicit ModeSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// T(t) x. Throws ContractViolation for t < 0, StructuralError on a space mismatch.
SemigroupState apply(const ModeSpec& mode, double t, const SemigroupState& x);

/// e^{tA^T} x for matrix modes.
Eigen::VectorXd apply_adjoint(const ModeSpec& mode, double t, const Eigen::VectorXd& x);

/// ||T(-t)|| = e^{mu t} for a diagonal group.
double group_inverse_norm(const ModeSpec& mode, double t);

/// Generator as a dense n x n matrix (matrix and diagonal-group modes only).
Eigen::MatrixXd generator_matrix(const ModeSpec& mode, Eigen::Index dim);

/// Times in (0, d) where tau -> ||T(tau) x||_p^p can change slope. Between
/// consecutive kinks that map is affine for transport modes. Throws
/// UnsupportedOperation for matrix and diagonal-group modes.
std::vector<double> profile_kinks(const ModeSpec& mode, const PiecewiseConstantFn& x,
                                  double d);

/// The two opposing gated transports on L^1(-1, 1) whose switching blows up
/// the operator norm (gate at 0, factor 2).
std::vector<ModeSpec> bimodal_blowup_modes();

/// Left transport on L^p(0, 1) gated at 4^{-j} with factor 2^{1/p}.
ModeSpec dyadic_gate_mode(int j, double p);

}  // namespace swlyap
