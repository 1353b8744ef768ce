#include "swlyap/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swlyap/errors.hpp"

namespace swlyap {

GrowthBound make_growth_bound(double m, double omega) {
  if (!(m >= 1.0) || !(omega > 0.0) || !std::isfinite(m) || !std::isfinite(omega)) {
    throw ContractViolation("growth bound: need M >= 1 and omega > 0");
  }
  return {m, omega};
}

DecayBound make_decay_bound(double k, double mu) {
  if (!(k >= 1.0) || !(mu > 0.0) || !std::isfinite(k) || !std::isfinite(mu)) {
    throw ContractViolation("decay bound: need K >= 1 and mu > 0");
  }
  return {k, mu};
}

NormEquivalence make_norm_equivalence(double c_lower, double c_upper) {
  if (!(c_lower > 0.0) || !(c_upper >= c_lower) || !std::isfinite(c_upper)) {
    throw ContractViolation("norm equivalence: need 0 < c <= C");
  }
  return {c_lower, c_upper};
}

SupNormSamples sample_sup_norms(const SwitchedSystem& sys, const SignalFamily& fam,
                                std::span<const double> times,
                                std::span<const SemigroupState> witnesses, Exec exec) {
  if (times.empty()) throw ContractViolation("sample_sup_norms: empty time grid");
  if (witnesses.empty()) throw ContractViolation("sample_sup_norms: no witnesses");
  std::vector<double> w_norm(witnesses.size());
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    w_norm[i] = sys.norm_of(witnesses[i]);
    if (!(w_norm[i] > 0.0)) {
      throw ContractViolation("sample_sup_norms: witness " + std::to_string(i) + " is zero");
    }
  }
  auto ratios = [&](const SwitchingSignal& sig, std::size_t w) {
    const auto traj = sample_trajectory(sys, sig, witnesses[w], times);
    std::vector<double> r(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) r[k] = traj[k].norm / w_norm[w];
    return r;
  };
  auto profile = [&](const SwitchingSignal& sig) {
    std::vector<double> best(times.size(), 0.0);
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      const auto r = ratios(sig, w);
      for (std::size_t k = 0; k < r.size(); ++k) best[k] = std::max(best[k], r[k]);
    }
    return best;
  };
  const FamilyEnumerator en(fam);
  const auto sup = pointwise_sup(en, profile, times.size(), exec);

  SupNormSamples out;
  out.times.assign(times.begin(), times.end());
  out.ratio = sup.value;
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.signal.push_back(en.at(sup.argmax[k]));
    std::size_t best_w = 0;
    double best_r = -1.0;
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      const double r = ratios(out.signal.back(), w)[k];
      if (r > best_r) {
        best_r = r;
        best_w = w;
      }
    }
    out.witness.push_back(best_w);
  }
  return out;
}

namespace {

struct LineFit {
  double intercept;
  double slope;
};

// Least squares of log(ratio) against t over positive samples.
std::optional<LineFit> fit_log_line(const SupNormSamples& s) {
  double n = 0, st = 0, sy = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    if (s.ratio[k] > 0.0) {
      n += 1;
      st += s.times[k];
      sy += std::log(s.ratio[k]);
    }
  }
  if (n == 0) return std::nullopt;
  const double mt = st / n;
  const double my = sy / n;
  double stt = 0, sty = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    if (s.ratio[k] > 0.0) {
      const double dt = s.times[k] - mt;
      stt += dt * dt;
      sty += dt * (std::log(s.ratio[k]) - my);
    }
  }
  const double slope = stt > 0.0 ? sty / stt : 0.0;
  return LineFit{my - slope * mt, slope};
}

constexpr double kMajorantSlack = 1e-9;

}  // namespace

GrowthFit fit_growth(const SwitchedSystem& sys, const SignalFamily& fam,
                     std::span<const double> times,
                     std::span<const SemigroupState> witnesses, Exec exec) {
  auto samples = sample_sup_norms(sys, fam, times, witnesses, exec);
  const auto line = fit_log_line(samples);
  if (!line) throw EstimationError("fit_growth: every sampled norm is zero");
  const double omega = std::max(line->slope, kMinRate);
  double m = 1.0;
  for (std::size_t k = 0; k < samples.times.size(); ++k) {
    m = std::max(m, samples.ratio[k] * std::exp(-omega * samples.times[k]));
  }
  return GrowthFit{GrowthBound{m * (1.0 + kMajorantSlack), omega}, std::move(samples), true};
}

std::variant<DecayFit, DecayRefusal> fit_decay(const SwitchedSystem& sys,
                                               const SignalFamily& fam,
                                               std::span<const double> times,
                                               std::span<const SemigroupState> witnesses,
                                               Exec exec) {
  auto samples = sample_sup_norms(sys, fam, times, witnesses, exec);
  const std::size_t n = samples.times.size();
  const auto line = fit_log_line(samples);
  if (!line) throw EstimationError("fit_decay: every sampled norm is zero");

  if (n >= 2) {
    const std::size_t start = std::min(n - 2, (n - 1) * 9 / 10);
    const double first = samples.ratio[start];
    const double last = samples.ratio[n - 1];
    if (last > 0.0 && last >= first) {
      std::size_t worst = start;
      for (std::size_t k = start; k < n; ++k) {
        if (samples.ratio[k] > samples.ratio[worst]) worst = k;
      }
      return DecayRefusal{"sampled sup norm does not decrease over the last tenth of the grid",
                          samples.signal[worst], samples.times[worst], samples.ratio[worst]};
    }
  }
  const double mu = -line->slope;
  if (!(mu > 0.0)) {
    const std::size_t worst = first_argmax(samples.ratio);
    return DecayRefusal{"fitted decay rate is not positive", samples.signal[worst],
                        samples.times[worst], samples.ratio[worst]};
  }
  double k_big = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    k_big = std::max(k_big, samples.ratio[k] * std::exp(mu * samples.times[k]));
  }
  return DecayFit{DecayBound{k_big * (1.0 + kMajorantSlack), mu}, std::move(samples), true};
}

DatkoCertificate datko_certificate(const GrowthBound& growth, double c_int, double p,
                                   double k, double beta, double t1_factor,
                                   DatkoKVariant variant) {
  make_growth_bound(growth.m, growth.omega);
  if (!(c_int > 0.0) || !std::isfinite(c_int)) {
    throw ContractViolation("datko_certificate: integral constant must be positive");
  }
  if (!(p >= 1.0)) throw ContractViolation("datko_certificate: p must be >= 1");
  if (!(k >= 1.0)) throw ContractViolation("datko_certificate: k must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ContractViolation("datko_certificate: beta must lie in (0, 1)");
  }
  if (!(t1_factor > 1.0)) throw ContractViolation("datko_certificate: t1_factor must exceed 1");
  DatkoCertificate c{};
  c.growth = growth;
  c.p = p;
  c.c_int = c_int;
  c.k = k;
  c.beta = beta;
  c.rho = beta / k;
  c.t0 = c_int / std::pow(c.rho, p);
  c.t1 = t1_factor * c.t0;
  c.mu = -std::log(beta) / c.t1;
  c.variant = variant;
  c.big_k = variant == DatkoKVariant::k_over_beta ? k / beta : c_int / beta;
  return c;
}

DecayBound decay_bound_of(const DatkoCertificate& cert) {
  return DecayBound{std::max(1.0, cert.big_k), cert.mu};
}

DecayBound gronwall_certificate(const NormEquivalence& eq, GronwallRate rate) {
  make_norm_equivalence(eq.c_lower, eq.c_upper);
  const double k = std::sqrt(eq.c_upper / eq.c_lower);
  const double c = rate == GronwallRate::from_lower_constant ? eq.c_lower : eq.c_upper;
  return DecayBound{k, 1.0 / (2.0 * c)};
}

double group_lower_bound(double mu) {
  if (!(mu > 0.0)) throw ContractViolation("group_lower_bound: mu must be positive");
  return 1.0 / (2.0 * mu);
}

ConditionReport condition_report(const SwitchedSystem& sys, const Evaluator& v,
                                 std::span<const SemigroupState> samples,
                                 const SignalFamily& fam, const ConditionOptions& opts) {
  if (samples.empty()) throw ContractViolation("condition_report: no samples");
  ConditionReport rep;

  auto checks = indexed_map<SampleCheck>(
      samples.size(),
      [&](std::size_t i) {
        SampleCheck c;
        c.sample = i;
        try {
          const double n = sys.norm_of(samples[i]);
          c.norm_sq = n * n;
          if (c.norm_sq == 0.0) {
            c.v = 0.0;
            c.derivative.assign(sys.size(), 0.0);
            return c;
          }
          c.v = v(samples[i]);
          for (ModeId j = 0; j < sys.size(); ++j) {
            c.derivative.push_back(
                generalized_derivative(v, sys, j, samples[i], opts.t_grid).value);
          }
        } catch (const std::exception& e) {
          c.error = e.what();
          c.v.reset();
        }
        return c;
      },
      opts.exec);

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& c : checks) {
    if (c.v && c.norm_sq > 0.0) {
      lo = std::min(lo, *c.v / c.norm_sq);
      hi = std::max(hi, *c.v / c.norm_sq);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0;
  rep.c_observed = lo;
  rep.c_upper_observed = hi;
  rep.c_used = opts.c_lower.value_or(lo);
  rep.c_upper_used = opts.c_upper.value_or(hi);

  bool upper = true, lower = true, deriv = true, errors = false;
  constexpr double kRel = 1e-12;
  for (auto& c : checks) {
    if (!c.error.empty()) {
      errors = true;
      upper = lower = deriv = false;
      continue;
    }
    if (c.norm_sq == 0.0) {
      c.upper_ok = c.lower_ok = c.derivative_ok = true;
      continue;
    }
    c.upper_ok = *c.v <= rep.c_upper_used * c.norm_sq * (1.0 + kRel);
    c.lower_ok = rep.c_used > 0.0 && *c.v >= rep.c_used * c.norm_sq * (1.0 - kRel);
    c.derivative_ok = std::all_of(c.derivative.begin(), c.derivative.end(), [&](double d) {
      return d <= -c.norm_sq * (1.0 - opts.kappa_tol);
    });
    upper = upper && c.upper_ok;
    lower = lower && c.lower_ok;
    deriv = deriv && c.derivative_ok;
  }
  rep.samples = std::move(checks);
  rep.upper_bound_holds = upper;
  rep.lower_bound_holds = lower;
  rep.derivative_holds = deriv;
  if (errors) rep.notes.push_back("some samples failed to evaluate; see per-sample errors");

  if (!opts.growth_times.empty() && !opts.growth_witnesses.empty()) {
    rep.growth = fit_growth(sys, fam, opts.growth_times, opts.growth_witnesses, opts.exec).bound;
    auto decay = fit_decay(sys, fam, opts.growth_times, opts.growth_witnesses, opts.exec);
    if (auto* fit = std::get_if<DecayFit>(&decay)) {
      rep.decay = fit->bound;
    } else {
      rep.decay_refusal = std::get<DecayRefusal>(decay);
    }
  }

  rep.supports_c = upper && lower && deriv && rep.c_used > 0.0;
  rep.supports_b = upper && deriv && rep.growth.has_value() && !rep.decay_refusal;
  rep.supports_a = rep.decay.has_value();
  if (upper && rep.decay_refusal) {
    rep.notes.push_back(
        "V-bound without growth bound is insufficient: V(x) <= C ||x||^2 holds on the samples "
        "but the sampled sup norm does not decay");
  }
  if (rep.supports_c) {
    rep.gronwall = gronwall_certificate(
        NormEquivalence{rep.c_used, std::max(rep.c_used, rep.c_upper_used)}, opts.gronwall_rate);
  }
  if (rep.growth && rep.growth->omega <= kMinRate) {
    rep.notes.push_back("growth samples are nonincreasing; omega clamped to the minimum rate");
  }
  return rep;
}

}  // namespace swlyap
