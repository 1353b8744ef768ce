#pragma once

namespace swlyap {

/// ||T_sigma(t)|| <= M e^{omega t} for all signals.
struct GrowthBound {
  double m;
  double omega;
};

/// ||T_sigma(t)|| <= K e^{-mu t} for all signals.
struct DecayBound {
  double k;
  double mu;
};

/// c ||x||^2 <= V(x) <= C ||x||^2.
struct NormEquivalence {
  double c_lower;
  double c_upper;
};

GrowthBound make_growth_bound(double m, double omega);
DecayBound make_decay_bound(double k, double mu);
NormEquivalence make_norm_equivalence(double c_lower, double c_upper);

}  // namespace swlyap
