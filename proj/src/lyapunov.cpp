#include "swlyap/lyapunov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>

#include "swlyap/errors.hpp"
#include "swlyap/expm.hpp"

namespace swlyap {

namespace {

// int_0^h (y0 + (y1 - y0) s / h)^r ds for y0, y1 >= 0.
double power_of_affine_integral(double y0, double y1, double h, double r) {
  if (r == 1.0) return 0.5 * h * (y0 + y1);
  const double spread = std::abs(y1 - y0);
  if (spread <= 1e-6 * std::max(y0, y1)) {
    const double mid = 0.5 * (y0 + y1);
    return h * (std::pow(y0, r) + 4.0 * std::pow(mid, r) + std::pow(y1, r)) / 6.0;
  }
  return h * (std::pow(y1, r + 1.0) - std::pow(y0, r + 1.0)) / ((r + 1.0) * (y1 - y0));
}

double transport_segment_energy(const ModeSpec& mode, const PiecewiseConstantFn& f,
                                double d, const NormSpec& norm) {
  const double p = norm.p;
  std::vector<double> times = profile_kinks(mode, f, d);
  times.insert(times.begin(), 0.0);
  times.push_back(d);
  std::vector<double> y(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto state = apply(mode, times[i], f);
    y[i] = lp_norm_pow(std::get<PiecewiseConstantFn>(state), p);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    acc += power_of_affine_integral(y[i], y[i + 1], times[i + 1] - times[i], 2.0 / p);
  }
  return acc;
}

double matrix_segment_energy(const Eigen::MatrixXd& a, const Eigen::VectorXd& g, double d,
                             double quad_tol) {
  auto integrand = [&](double tau) { return (expm(tau * a) * g).squaredNorm(); };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  return Quad::integrate(integrand, 0.0, d, 20, quad_tol);
}

double segment_energy(const ModeSpec& mode, const SemigroupState& x, double d,
                      const NormSpec& norm, double quad_tol) {
  if (const auto* g = mode.get_if<DiagonalGroupMode>()) {
    const double n0 = state_norm(x, norm);
    return n0 * n0 * (-std::expm1(-2.0 * g->mu * d)) / (2.0 * g->mu);
  }
  if (const auto* m = mode.get_if<MatrixMode>()) {
    return matrix_segment_energy(m->a, std::get<Eigen::VectorXd>(x), d, quad_tol);
  }
  return transport_segment_energy(mode, std::get<PiecewiseConstantFn>(x), d, norm);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ContractViolation(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

TrajectoryCost trajectory_cost(const SwitchedSystem& sys, const SwitchingSignal& sig,
                               const SemigroupState& x, double horizon, double quad_tol,
                               std::optional<DecayBound> decay) {
  require_positive(horizon, "trajectory_cost: horizon");
  require_positive(quad_tol, "trajectory_cost: quad_tol");
  sys.check_signal(sig);
  SemigroupState state = x;
  double elapsed = 0.0;
  double integral = 0.0;
  bool reached_zero = is_zero_state(state);

  auto run = [&](ModeId id, double dwell) {
    if (reached_zero || elapsed >= horizon) return;
    const double d = std::min(dwell, horizon - elapsed);
    const ModeSpec& mode = sys.mode(id);
    if (!mode.accepts(state)) {
      throw StructuralError("trajectory_cost: state does not fit mode " + std::to_string(id));
    }
    integral += segment_energy(mode, state, d, sys.norm(), quad_tol);
    state = apply(mode, d, state);
    elapsed += d;
    reached_zero = is_zero_state(state);
  };
  for (const auto& seg : sig.segments()) run(seg.mode, seg.dwell);
  run(sig.tail(), horizon);

  TrajectoryCost out{integral, std::nullopt};
  if (reached_zero) {
    out.tail_bound = 0.0;
  } else if (decay) {
    const double nh = sys.norm_of(state);
    out.tail_bound = decay->k * decay->k * nh * nh / (2.0 * decay->mu);
  }
  return out;
}

LyapunovEstimate v_sup(const SwitchedSystem& sys, const SemigroupState& x,
                       const SignalFamily& fam, const SearchOptions& opts) {
  const FamilyEnumerator en(fam);
  // Equivalent signals get identical costs, so ties resolve to the simplest form.
  auto cost_of = [&](const SwitchingSignal& sig) {
    return trajectory_cost(sys, canonical_signal(sig), x, opts.horizon, opts.quad_tol, opts.decay);
  };
  const auto costs = family_costs(
      en, [&](const SwitchingSignal& sig) { return cost_of(sig).integral; }, opts.exec);
  const std::size_t best = first_argmax(costs);

  LyapunovEstimate est;
  est.kind = FunctionalKind::v_sup;
  est.horizon = opts.horizon;
  est.witness = canonical_signal(en.at(best));
  est.value = costs[best];
  est.signals_evaluated = en.size();

  if (opts.refine && est.value > 0.0) {
    std::vector<double> grid = fam.dwell_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double step = 0.5 * grid.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      step = std::min(step, 0.5 * (grid[i] - grid[i - 1]));
    }
    bool improved = true;
    std::size_t rounds = 0;
    while (improved && rounds < opts.max_refine_steps) {
      improved = false;
      const auto segs = est.witness.segments();
      for (std::size_t i = 0; i < segs.size() && !improved; ++i) {
        for (double delta : {step, -step}) {
          const double dwell = segs[i].dwell + delta;
          if (!(dwell > 0.0)) continue;
          auto trial_segs = segs;
          trial_segs[i].dwell = dwell;
          auto trial = canonical_signal(SwitchingSignal(std::move(trial_segs), est.witness.tail()));
          const double c = cost_of(trial).integral;
          ++est.signals_evaluated;
          if (c > est.value) {
            est.value = c;
            est.witness = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      ++rounds;
    }
  }
  est.tail_bound = cost_of(est.witness).tail_bound;
  if (opts.decay) {
    const double n0 = sys.norm_of(x);
    est.upper_bound = opts.decay->k * opts.decay->k * n0 * n0 / (2.0 * opts.decay->mu);
    est.direction = BoundDirection::two_sided;
  }
  return est;
}

double trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw StructuralError("trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    acc += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  }
  return acc;
}

namespace {

std::vector<double> clip_grid(std::span<const double> grid, double horizon, const char* where) {
  if (grid.empty()) throw ContractViolation(std::string(where) + ": empty time grid");
  if (grid.front() != 0.0) throw ContractViolation(std::string(where) + ": grid must start at 0");
  if (grid.back() < horizon) {
    throw ContractViolation(std::string(where) + ": grid does not reach the horizon");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ContractViolation(std::string(where) + ": grid must be strictly increasing");
    }
    if (grid[i] <= horizon) out.push_back(grid[i]);
  }
  if (out.back() < horizon) out.push_back(horizon);
  return out;
}

}  // namespace

LyapunovEstimate v_tilde(const SwitchedSystem& sys, const SemigroupState& x,
                         const SignalFamily& fam, double horizon,
                         std::span<const double> grid, Exec exec) {
  require_positive(horizon, "v_tilde: horizon");
  const auto times = clip_grid(grid, horizon, "v_tilde");
  const FamilyEnumerator en(fam);
  auto profile = [&](const SwitchingSignal& sig) {
    const auto samples = sample_trajectory(sys, sig, x, times);
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = samples[i].norm * samples[i].norm;
    return sq;
  };
  const auto sup = pointwise_sup(en, profile, times.size(), exec);

  // Witness: the signal attaining the pointwise sup at the most grid times.
  std::map<std::uint64_t, std::size_t> hits;
  for (auto idx : sup.argmax) ++hits[idx];
  std::uint64_t witness = 0;
  std::size_t most = 0;
  for (const auto& [idx, count] : hits) {
    if (count > most) {
      most = count;
      witness = idx;
    }
  }

  LyapunovEstimate est;
  est.kind = FunctionalKind::v_tilde;
  est.horizon = horizon;
  est.value = trapezoid(times, sup.value);
  est.witness = en.at(witness);
  est.signals_evaluated = en.size();
  return est;
}

double v_tilde_single_mode(const ModeSpec& mode, double mu, const SemigroupState& x,
                           const NormSpec& norm, double horizon,
                           std::span<const double> grid) {
  if (!(mu > 0.0)) throw ContractViolation("v_tilde_single_mode: mu must be positive");
  require_positive(horizon, "v_tilde_single_mode: horizon");
  const auto times = clip_grid(grid, horizon, "v_tilde_single_mode");
  std::vector<double> running(times.size());
  SemigroupState state = x;
  double n0 = state_norm(state, norm);
  running[0] = n0 * n0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    state = apply(mode, dt, state);
    const double nk = state_norm(state, norm);
    running[k] = std::max(running[k - 1] * std::exp(-2.0 * mu * dt), nk * nk);
  }
  return trapezoid(times, running);
}

DerivativeEstimate generalized_derivative(const Evaluator& v, const SwitchedSystem& sys,
                                          ModeId mode, const SemigroupState& x,
                                          std::span<const double> t_grid) {
  if (t_grid.empty()) throw ContractViolation("generalized_derivative: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] < t_grid[i - 1]))) {
      throw ContractViolation(
          "generalized_derivative: t grid must be positive and strictly decreasing");
    }
  }
  const ModeSpec& m = sys.mode(mode);
  const double v0 = v(x);
  double best = std::numeric_limits<double>::infinity();
  for (double t : t_grid) best = std::min(best, (v(apply(m, t, x)) - v0) / t);
  return {mode, best, std::vector<double>(t_grid.begin(), t_grid.end())};
}

SwitchedSystem augment_system(const SwitchedSystem& sys, double mu) {
  if (!(mu > 0.0)) throw ContractViolation("augment_system: mu must be positive");
  auto modes = sys.modes();
  modes.push_back(ModeSpec::diagonal_group(mu));
  return SwitchedSystem(std::move(modes), sys.norm());
}

std::vector<double> default_derivative_grid() {
  std::vector<double> g;
  for (int k = 4; k <= 20; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

double default_horizon(std::optional<double> mu_hat) {
  if (mu_hat && *mu_hat > 0.0) return std::max(10.0, 5.0 / *mu_hat);
  return 10.0;
}

SignalFamily default_family(const SwitchedSystem& sys) {
  SignalFamily fam;
  fam.dwell_grid = {0.25, 0.5, 1.0};
  fam.max_switches = 3;
  for (ModeId i = 0; i < sys.size(); ++i) fam.mode_ids.push_back(i);
  return fam;
}

std::vector<double> uniform_grid(double horizon, double step) {
  require_positive(horizon, "uniform_grid: horizon");
  require_positive(step, "uniform_grid: step");
  std::vector<double> g;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * step;
    if (t >= horizon) break;
    g.push_back(t);
  }
  g.push_back(horizon);
  return g;
}

std::vector<double> default_time_grid(double horizon) {
  return uniform_grid(horizon, 1.0 / 64.0);
}

Evaluator v_sup_evaluator(SwitchedSystem sys, SignalFamily fam, SearchOptions opts) {
  return [sys = std::move(sys), fam = std::move(fam), opts](const SemigroupState& x) {
    return v_sup(sys, x, fam, opts).value;
  };
}

}  // namespace swlyap
