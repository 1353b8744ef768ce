#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swlyap/bounds.hpp"
#include "swlyap/lyapunov.hpp"

namespace swlyap {

/// sup over the family and the witnesses of ||T_sigma(t) w|| / ||w|| at each
/// grid time, with the maximizing signal and witness.
struct SupNormSamples {
  std::vector<double> times;
  std::vector<double> ratio;
  std::vector<SwitchingSignal> signal;
  std::vector<std::size_t> witness;
};

SupNormSamples sample_sup_norms(const SwitchedSystem& sys, const SignalFamily& fam,
                                std::span<const double> times,
                                std::span<const SemigroupState> witnesses,
                                Exec exec = Exec::parallel);

/// Growth bound fitted to samples; it majorizes the samples, not the true sup.
struct GrowthFit {
  GrowthBound bound;
  SupNormSamples samples;
  bool empirical = true;
};

/// Least-squares fit of log ratio = log M + omega t over the positive samples,
/// then M raised until M e^{omega t} majorizes every sample. omega is clamped
/// to at least kMinRate.
GrowthFit fit_growth(const SwitchedSystem& sys, const SignalFamily& fam,
                     std::span<const double> times,
                     std::span<const SemigroupState> witnesses, Exec exec = Exec::parallel);

struct DecayFit {
  DecayBound bound;
  SupNormSamples samples;
  bool empirical = true;
};

/// Why fit_decay declined to produce a decay bound.
struct DecayRefusal {
  std::string reason;
  SwitchingSignal signal;
  double time;
  double ratio;
};

/// Least-squares fit of log ratio = log K - mu t, K raised to majorize every
/// sample. Refuses when the sampled sup norm does not decrease over the last
/// tenth of the grid, or when the fitted rate is not positive.
std::variant<DecayFit, DecayRefusal> fit_decay(const SwitchedSystem& sys,
                                               const SignalFamily& fam,
                                               std::span<const double> times,
                                               std::span<const SemigroupState> witnesses,
                                               Exec exec = Exec::parallel);

/// How the decay multiplier is formed from the uniform bound k and the
/// integral constant C_int.
enum class DatkoKVariant {
  k_over_beta,        ///< K = k / beta, matching the bound k beta^n on T(n t1 + s)
  integral_over_beta  ///< K = C_int / beta
};

struct DatkoCertificate {
  GrowthBound growth;
  double p;
  double c_int;
  double k;
  double rho;
  double beta;
  double t0;
  double t1;
  double big_k;
  double mu;
  DatkoKVariant variant;
};

/// Constant chain turning an integral bound int ||T x||^p <= C_int ||x||^p and a
/// uniform bound ||T_sigma(t)|| <= k into a decay bound:
/// rho = beta/k, t0 = C_int/rho^p, t1 = t1_factor t0, mu = -ln(beta)/t1.
/// The result is conditional on k, which the caller estimates.
DatkoCertificate datko_certificate(const GrowthBound& growth, double c_int, double p,
                                   double k, double beta = 0.5, double t1_factor = 1.01,
                                   DatkoKVariant variant = DatkoKVariant::k_over_beta);

DecayBound decay_bound_of(const DatkoCertificate& cert);

/// Rate used by gronwall_certificate.
enum class GronwallRate {
  /// mu = 1/(2c). Only guaranteed when c == C; it can overstate the rate
  /// otherwise (see the commuting diagonal pair in the tests).
  from_lower_constant,
  /// mu = 1/(2C), from V nonincreasing along trajectories and
  /// int ||x||^2 >= V / C.
  from_upper_constant
};

/// K = sqrt(C/c) with the selected rate.
DecayBound gronwall_certificate(const NormEquivalence& eq,
                                GronwallRate rate = GronwallRate::from_lower_constant);

/// int_0^inf ||T_{j*}(-t)||^{-2} dt = 1/(2 mu) for T_{j*}(t) = e^{-mu t} I.
double group_lower_bound(double mu);

struct ConditionOptions {
  /// Relative slack on the derivative check L_j V(x) <= -||x||^2 (1 - kappa).
  double kappa_tol = 0.05;
  std::vector<double> t_grid = default_derivative_grid();
  /// Claimed constants; when absent they are taken from the sampled V.
  std::optional<double> c_lower;
  std::optional<double> c_upper;
  /// Grid and witnesses for the growth/decay fits; empty grid skips them.
  std::vector<double> growth_times;
  std::vector<SemigroupState> growth_witnesses;
  GronwallRate gronwall_rate = GronwallRate::from_lower_constant;
  Exec exec = Exec::parallel;
};

struct SampleCheck {
  std::size_t sample;
  double norm_sq;
  std::optional<double> v;
  bool upper_ok = false;
  bool lower_ok = false;
  /// One entry per mode.
  std::vector<double> derivative;
  bool derivative_ok = false;
  std::string error;
};

struct ConditionReport {
  std::vector<SampleCheck> samples;
  /// Tightest constants seen on the nonzero samples.
  double c_observed = 0.0;
  double c_upper_observed = 0.0;
  double c_used = 0.0;
  double c_upper_used = 0.0;
  std::optional<GrowthBound> growth;
  std::optional<DecayBound> decay;
  std::optional<DecayRefusal> decay_refusal;
  /// Decay bound from (c, C) when (C) is supported.
  std::optional<DecayBound> gronwall;
  bool upper_bound_holds = false;
  bool lower_bound_holds = false;
  bool derivative_holds = false;
  /// Evidence summary for the three equivalent conditions:
  /// (A) uniform exponential decay, (B) growth bound + V-bound + derivative,
  /// (C) two-sided V-bound + derivative.
  bool supports_a = false;
  bool supports_b = false;
  bool supports_c = false;
  std::vector<std::string> notes;
};

ConditionReport condition_report(const SwitchedSystem& sys, const Evaluator& v,
                                 std::span<const SemigroupState> samples,
                                 const SignalFamily& fam, const ConditionOptions& opts = {});

inline constexpr double kMinRate = 1e-6;

}  // namespace swlyap
