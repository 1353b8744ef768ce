#include "swlyap/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <random>

namespace swlyap {

namespace {

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ReproCheck make_check(std::string name, double value, double expected, std::string relation,
                      double tol) {
  bool pass = false;
  if (relation == "==") {
    pass = std::abs(value - expected) <= tol;
  } else if (relation == "<=") {
    pass = value <= expected + tol;
  } else {
    pass = value >= expected - tol;
  }
  return {std::move(name), value, expected, std::move(relation), tol, pass};
}

}  // namespace

bool Reproduction::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json Reproduction::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back(Json{{"name", c.name},
                      {"value", c.value},
                      {"expected", c.expected},
                      {"relation", c.relation},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  return Json{{"example", example},
              {"parameters", parameters},
              {"rows", rows},
              {"checks", cs},
              {"bound_direction", "lower"}};
}

Reproduction reproduce_blowup(double delta) {
  if (!(delta > 0.0) || delta > 2.0) throw ContractViolation("reproduce_blowup: need 0 < delta <= 2");
  Reproduction r;
  r.example = "example-2.1";
  r.parameters = Json{{"delta", delta}, {"eta", "4^-m, m = 1..8"}, {"p", 1}};
  const SwitchedSystem sys(bimodal_blowup_modes(), NormSpec::lp(1.0));
  const std::vector<ModeId> cycle = {0, 1};
  const auto sig = periodic_signal(cycle, delta, 2.0);

  std::vector<SemigroupState> one_sided, symmetric;
  for (int m = 1; m <= 8; ++m) {
    const double eta = std::ldexp(1.0, -2 * m);
    one_sided.emplace_back(PiecewiseConstantFn::indicator(-1.0, 1.0, 0.0, eta));
    symmetric.emplace_back(PiecewiseConstantFn::indicator(-1.0, 1.0, -eta, eta));
  }
  std::vector<SemigroupState> all = symmetric;
  all.insert(all.end(), one_sided.begin(), one_sided.end());

  r.lines.push_back("alternating transports, dwell " + g(delta) +
                    "; sampled ||T_sigma(t)|| against 2^ceil(t/delta)");
  for (int k = 1; k * delta <= 2.0 + 1e-12; ++k) {
    const double t = k * delta;
    const double bound = std::ldexp(1.0, static_cast<int>(std::ceil(t / delta - 1e-12)));
    const double ratio = operator_norm_witness(sys, sig, t, all);
    const double sym = operator_norm_witness(sys, sig, t, symmetric);
    r.rows.push_back(Json{{"t", t}, {"ratio", ratio}, {"symmetric_ratio", sym}, {"lower_bound", bound}});
    r.lines.push_back("t=" + g(t) + " ratio=" + g(ratio) + " lower_bound=" + g(bound) +
                      " symmetric_witness_ratio=" + g(sym));
    r.checks.push_back(make_check("ratio at t=" + g(t), ratio, bound, ">=", 1e-12));
  }
  return r;
}

Reproduction reproduce_dyadic_cascade(int n, double p, std::uint64_t seed,
                                      std::size_t signal_count, std::size_t witness_count) {
  if (n < 1) throw ContractViolation("reproduce_dyadic_cascade: n must be >= 1");
  Reproduction r;
  r.example = "remark-3.2";
  r.parameters = Json{{"n", n}, {"p", p}, {"seed", seed}, {"signals", signal_count},
                      {"witnesses", witness_count}};
  std::vector<ModeSpec> modes;
  for (int j = 1; j <= n; ++j) modes.push_back(dyadic_gate_mode(j, p));
  const SwitchedSystem sys(modes, NormSpec::lp(p));

  const double eps = std::ldexp(1.0, -2 * (n + 1));
  const SemigroupState witness = PiecewiseConstantFn::indicator(0.0, 1.0, 1.0 - eps, 1.0);
  const double ratio =
      operator_norm_witness(sys, dyadic_cascade_signal(n), 1.0 - eps, std::span(&witness, 1));
  const double expected = std::pow(2.0, n / p);
  r.rows.push_back(Json{{"quantity", "witness_ratio"}, {"t", 1.0 - eps}, {"value", ratio}});
  r.lines.push_back("cascade through " + std::to_string(n) + " gates: witness norm ratio " +
                    g(ratio) + " (2^(n/p) = " + g(expected) + ")");
  r.checks.push_back(make_check("witness norm ratio", ratio, expected, "==", 1e-12));

  if (p != 2.0) {
    r.lines.push_back("energy bound check skipped: the trajectory energy integrates squared norms");
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> switches(0, 5), mode(0, n - 1), dwell(1, 64),
      pieces(1, 6), grid(0, 1024);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::vector<SwitchingSignal> signals;
  for (std::size_t i = 0; i < signal_count; ++i) {
    std::vector<Segment> segs;
    const int k = switches(rng);
    for (int s = 0; s < k; ++s) {
      segs.push_back({static_cast<ModeId>(mode(rng)), std::ldexp(dwell(rng), -6)});
    }
    signals.emplace_back(std::move(segs), static_cast<ModeId>(mode(rng)));
  }
  std::vector<PiecewiseConstantFn> witnesses;
  while (witnesses.size() < witness_count) {
    std::vector<double> breaks;
    const int m = pieces(rng);
    for (int b = 0; b + 1 < m; ++b) breaks.push_back(std::ldexp(grid(rng), -10));
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> vals(breaks.size() + 1);
    for (auto& v : vals) v = value(rng);
    PiecewiseConstantFn f(0.0, 1.0, breaks, vals);
    if (lp_norm(f, NormSpec::lp(2.0)) > 0.0) witnesses.push_back(std::move(f));
  }
  double worst_ratio = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  const auto total = signals.size() * witnesses.size();
  const auto costs = indexed_map<double>(
      total,
      [&](std::size_t i) {
        const SemigroupState x = witnesses[i % witnesses.size()];
        return trajectory_cost(sys, signals[i / witnesses.size()], x, 2.0, 1e-12).integral;
      },
      Exec::parallel);
  for (std::size_t i = 0; i < total; ++i) {
    const double nsq = lp_norm_pow(witnesses[i % witnesses.size()], 2.0);
    worst_ratio = std::max(worst_ratio, costs[i] / nsq);
    worst_excess = std::max(worst_excess, costs[i] - 1.5 * nsq);
  }
  const double cascade = trajectory_cost(sys, dyadic_cascade_signal(n), witness, 2.0, 1e-12).integral /
                         lp_norm_pow(std::get<PiecewiseConstantFn>(witness), 2.0);
  worst_ratio = std::max(worst_ratio, cascade);
  worst_excess = std::max(worst_excess, (cascade - 1.5) * eps);
  r.lines.push_back("cascade signal energy ratio " + g(cascade));
  r.rows.push_back(Json{{"quantity", "energy_ratio"}, {"value", worst_ratio}, {"cases", total}});
  r.lines.push_back("sampled energy ratio int ||T_sigma(t) f||^2 dt / ||f||^2 over " +
                    std::to_string(total) + " cases: max " + g(worst_ratio) + " (bound 1.5)");
  r.checks.push_back(make_check("energy excess over 1.5 ||f||^2", worst_excess, 0.0, "<=", 1e-9));
  return r;
}

Reproduction reproduce_half_line_shift() {
  Reproduction r;
  r.example = "half-line-shift";
  r.parameters = Json{{"p", 2}};
  const double inf = std::numeric_limits<double>::infinity();
  const SwitchedSystem sys({ModeSpec::half_line_shift()}, NormSpec::lp(2.0));
  const auto sig = SwitchingSignal::constant(0);

  for (double a : {0.5, 1.0, 2.5, 4.0}) {
    const SemigroupState f = PiecewiseConstantFn::indicator(0.0, inf, 0.0, a, 3.0);
    const double before = sys.norm_of(evolve(sys, sig, a - 1.0 / 64.0, f));
    const double at = sys.norm_of(evolve(sys, sig, a, f));
    r.rows.push_back(Json{{"support_end", a}, {"norm_before", before}, {"norm_at_end", at}});
    r.lines.push_back("witness on [0," + g(a) + "]: norm " + g(before) + " just before t=" + g(a) +
                      ", " + g(at) + " at t=" + g(a));
    r.checks.push_back(make_check("norm at t=" + g(a), at, 0.0, "==", 0.0));
  }
  for (int t = 1; t <= 10; ++t) {
    const SemigroupState w = PiecewiseConstantFn::indicator(0.0, inf, t, t + 1.0);
    const double ratio = operator_norm_witness(sys, sig, t, std::span(&w, 1));
    r.rows.push_back(Json{{"t", t}, {"ratio", ratio}});
    r.checks.push_back(make_check("operator norm witness at t=" + std::to_string(t), ratio, 1.0,
                                  "==", 0.0));
  }
  r.lines.push_back("translated indicators keep ||T(t)|| >= 1 for t = 1..10: no uniform decay");
  return r;
}

}  // namespace swlyap
