#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace swlyap {

/// Exponent of the L^p norm, or the Euclidean 2-norm on coordinate vectors.
struct NormSpec {
  double p = 2.0;
  bool euclidean = false;

  static NormSpec lp(double p);
  static NormSpec euclid() { return NormSpec{2.0, true}; }

  bool operator==(const NormSpec&) const = default;
};

/// An element of L^p(lo, hi) that is constant on finitely many intervals.
///
/// Breakpoints split [lo, hi] into `values.size()` pieces. The upper end may be
/// +infinity (half-line), in which case the last piece must carry the value 0.
/// Outside [lo, hi] the function is identically zero.
///
/// Values at the breakpoints themselves are irrelevant (measure zero); the
/// representation is exact for dyadic breakpoints.
class PiecewiseConstantFn {
 public:
  /// Checks structure only: breaks sorted (ties allowed) and inside [lo, hi],
  /// values.size() == breaks.size() + 1. Does not canonicalize.
  PiecewiseConstantFn(double lo, double hi, std::vector<double> breaks,
                      std::vector<double> values);

  static PiecewiseConstantFn zero(double lo, double hi);
  static PiecewiseConstantFn constant(double lo, double hi, double value);
  /// value on [a, b] clipped to the domain, 0 elsewhere; canonical.
  static PiecewiseConstantFn indicator(double lo, double hi, double a, double b,
                                       double value = 1.0);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool unbounded() const noexcept { return std::isinf(hi_); }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t piece_count() const noexcept { return values_.size(); }
  double piece_lo(std::size_t i) const { return i == 0 ? lo_ : breaks_[i - 1]; }
  double piece_hi(std::size_t i) const {
    return i + 1 == values_.size() ? hi_ : breaks_[i];
  }

  /// Right-continuous point evaluation; zero outside [lo, hi).
  double operator()(double s) const;

  bool is_zero() const;
  bool same_domain(const PiecewiseConstantFn& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_;
  }
  bool is_canonical() const;

  /// Structural equality; on canonical data it coincides with a.e. equality.
  bool operator==(const PiecewiseConstantFn&) const = default;

 private:
  double lo_;
  double hi_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// Merges equal neighbours and drops zero-length pieces. Idempotent.
PiecewiseConstantFn canonicalize(const PiecewiseConstantFn& f);

/// (sum |v_i|^p len_i)^(1/p).
double lp_norm(const PiecewiseConstantFn& f, const NormSpec& spec);
/// sum |v_i|^p len_i, without the final root.
double lp_norm_pow(const PiecewiseConstantFn& f, double p);

/// a*f + b*g on the merged grid, canonicalized.
PiecewiseConstantFn linear_combine(double a, const PiecewiseConstantFn& f,
                                   double b, const PiecewiseConstantFn& g);

PiecewiseConstantFn scale(double c, const PiecewiseConstantFn& f);

/// h(s) = f(s + offset) on [lo, hi], zero where s + offset leaves f's domain.
PiecewiseConstantFn translate(const PiecewiseConstantFn& f, double offset,
                              double lo, double hi);

/// Multiplies f by `factor` on [a, b) intersected with the domain.
PiecewiseConstantFn scale_window(const PiecewiseConstantFn& f, double a, double b,
                                 double factor);

/// Euclidean norm of a coordinate vector; throws on non-finite entries.
double euclidean_norm(std::span<const double> coords);

}  // namespace swlyap
