#include "swlyap/run.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "swlyap/reproduce.hpp"

namespace swlyap {

namespace {

/// A library failure tagged with the operation that raised it.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::string op, const std::string& what)
      : std::runtime_error(what), op_(std::move(op)) {}
  const std::string& op() const noexcept { return op_; }

 private:
  std::string op_;
};

template <class F>
auto step(const char* op, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StepFailure(op, e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void text(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    os << content;
    if (!os) throw std::ios_base::failure("cannot write " + path.string());
    written_.push_back(path.string());
  }

  void json(const std::string& name, const Json& doc) { text(name, dump_json(doc)); }

  void csv(const std::string& name, const std::vector<TrajectorySample>& samples) {
    std::string out = "t,norm,mode_active\n";
    for (const auto& s : samples) {
      out += fmt(s.t) + "," + fmt(s.norm) + "," + std::to_string(s.mode_active) + "\n";
    }
    text(name, out);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  o.horizon = c.horizon;
  o.quad_tol = c.quad_tol;
  o.decay = c.decay;
  o.exec = c.exec;
  return o;
}

std::string run_simulate(const RunConfig& c, Writer& w) {
  const auto& sys = *c.system;
  const auto& sig = *c.signal;
  const auto& x0 = *c.x0;
  const auto grid = uniform_grid(c.horizon, c.time_step);
  const auto samples = step("sample_trajectory", [&] { return sample_trajectory(sys, sig, x0, grid); });
  const auto cost =
      step("trajectory_cost", [&] { return trajectory_cost(sys, sig, x0, c.horizon, c.quad_tol); });
  w.csv("trajectory.csv", samples);
  const double final_norm = samples.back().norm;
  w.json("simulation.json", make_artifact("simulation", Json{{"system", encode(sys)},
                                                             {"signal", encode(sig)},
                                                             {"x0", encode(x0)},
                                                             {"horizon", c.horizon},
                                                             {"time_step", c.time_step},
                                                             {"final_norm", final_norm},
                                                             {"energy", cost.integral}}));
  std::ostringstream s;
  s << "simulate: " << samples.size() << " samples on [0, " << short_fmt(c.horizon) << "]\n"
    << "initial norm " << short_fmt(samples.front().norm) << ", final norm "
    << short_fmt(final_norm) << "\n"
    << "energy int_0^h ||x(t)||^2 dt = " << short_fmt(cost.integral) << "\n";
  return s.str();
}

std::string run_worst_case(const RunConfig& c, Writer& w) {
  const auto& sys = *c.system;
  const auto& x0 = *c.x0;
  LyapunovEstimate est;
  if (c.functional == FunctionalKind::v_sup) {
    est = step("v_sup", [&] { return v_sup(sys, x0, *c.family, search_options(c)); });
  } else {
    const auto grid = uniform_grid(c.horizon, c.time_step);
    est = step("v_tilde", [&] { return v_tilde(sys, x0, *c.family, c.horizon, grid, c.exec); });
  }
  const auto grid = uniform_grid(c.horizon, c.time_step);
  const auto traj =
      step("sample_trajectory", [&] { return sample_trajectory(sys, est.witness, x0, grid); });
  w.csv("witness_trajectory.csv", traj);
  const double n = sys.norm_of(x0);
  w.json("estimate.json", make_artifact("estimate", Json{{"estimate", encode(est)},
                                                         {"x0", encode(x0)},
                                                         {"norm_sq", n * n},
                                                         {"family", encode(*c.family)},
                                                         {"bound_direction", to_string(est.direction)}}));
  std::ostringstream s;
  s << "worst-case " << to_string(est.kind) << ": " << short_fmt(est.value) << " ("
    << to_string(est.direction) << " bound, " << est.signals_evaluated << " signals, horizon "
    << short_fmt(est.horizon) << ")\n";
  if (est.upper_bound) s << "upper bound from decay: " << short_fmt(*est.upper_bound) << "\n";
  if (est.tail_bound) s << "tail bound: " << short_fmt(*est.tail_bound) << "\n";
  s << "witness: " << encode(est.witness).dump() << "\n";
  return s.str();
}

std::vector<SemigroupState> draw_samples(const RunConfig& c) {
  if (!c.x_samples.empty()) return c.x_samples;
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> gauss;
  std::vector<SemigroupState> out;
  for (std::size_t i = 0; i < c.sample_count; ++i) {
    Eigen::VectorXd v(c.system->dimension());
    for (auto& e : v) e = gauss(rng);
    out.emplace_back(Eigen::VectorXd(v / v.norm()));
  }
  return out;
}

std::string run_certify(const RunConfig& c, Writer& w) {
  const auto& sys = *c.system;
  const auto samples = draw_samples(c);
  ConditionOptions opts;
  opts.kappa_tol = c.kappa_tol;
  opts.t_grid = c.derivative_grid;
  opts.growth_times = uniform_grid(c.horizon, c.horizon / 40.0);
  for (const auto& x : samples) {
    if (!is_zero_state(x)) opts.growth_witnesses.push_back(x);
  }
  opts.gronwall_rate = c.gronwall_rate;
  opts.exec = c.exec;
  const auto v = v_sup_evaluator(sys, *c.family, search_options(c));
  const auto report =
      step("condition_report", [&] { return condition_report(sys, v, samples, *c.family, opts); });

  Json datko = nullptr;
  const bool p_two = sys.norm().euclidean || sys.norm().p == 2.0;
  if (report.growth && report.upper_bound_holds && report.c_upper_used > 0.0 && p_two &&
      !opts.growth_witnesses.empty()) {
    const auto sup = step("sample_sup_norms", [&] {
      return sample_sup_norms(sys, *c.family, opts.growth_times, opts.growth_witnesses, c.exec);
    });
    double k = 1.0;
    for (double r : sup.ratio) k = std::max(k, r);
    const auto cert = step("datko_certificate", [&] {
      return datko_certificate(*report.growth, report.c_upper_used, 2.0, k);
    });
    datko = encode(cert);
    datko["k_source"] = "sampled sup norm";
  }

  Json doc{{"report", encode(report)},
           {"datko", datko},
           {"gronwall_rate", c.gronwall_rate == GronwallRate::from_lower_constant ? "lower_constant"
                                                                                 : "upper_constant"},
           {"provenance",
            {{"empirical", true},
             {"samples", samples.size()},
             {"seed", c.seed},
             {"family", encode(*c.family)},
             {"horizon", c.horizon}}},
           {"bound_direction", "lower"}};
  w.json("certificate.json", make_artifact("certificate", doc));

  std::ostringstream s;
  s << "certify: " << samples.size() << " samples\n"
    << "c observed " << short_fmt(report.c_observed) << ", C observed "
    << short_fmt(report.c_upper_observed) << "\n"
    << "upper bound " << (report.upper_bound_holds ? "holds" : "fails") << ", lower bound "
    << (report.lower_bound_holds ? "holds" : "fails") << ", derivative condition "
    << (report.derivative_holds ? "holds" : "fails") << "\n"
    << "supports (A) " << report.supports_a << " (B) " << report.supports_b << " (C) "
    << report.supports_c << "\n";
  if (report.growth) {
    s << "growth fit M=" << short_fmt(report.growth->m) << " omega=" << short_fmt(report.growth->omega)
      << "\n";
  }
  if (report.decay) {
    s << "decay fit K=" << short_fmt(report.decay->k) << " mu=" << short_fmt(report.decay->mu) << "\n";
  }
  if (report.decay_refusal) s << "decay fit refused: " << report.decay_refusal->reason << "\n";
  if (report.gronwall) {
    s << "Gronwall K=" << short_fmt(report.gronwall->k) << " mu=" << short_fmt(report.gronwall->mu)
      << "\n";
  }
  if (!datko.is_null()) {
    s << "Datko K=" << short_fmt(datko["K"].get<double>())
      << " mu=" << short_fmt(datko["mu"].get<double>()) << " (conditional on sampled k)\n";
  }
  for (const auto& note : report.notes) s << "note: " << note << "\n";
  return s.str();
}

std::string run_gram(const RunConfig& c, Writer& w) {
  const auto& sys = *c.system;
  const auto cands = step("build_candidates", [&] {
    return build_candidates(sys, *c.family, c.extra_signals, c.exec);
  });
  Json doc = encode(cands);
  std::ostringstream s;
  s << "gram: " << cands.items.size() << " candidate operators of dimension "
    << cands.dimension() << "\n";
  if (c.x0) {
    const auto& x = std::get<Eigen::VectorXd>(*c.x0);
    const double vm = step("v_max", [&] { return v_max(cands, x); });
    const auto active = step("argmax_set", [&] { return argmax_set(cands, x, c.argmax_tol); });
    doc["x0"] = encode(*c.x0);
    doc["v_max"] = vm;
    doc["argmax"] = active.indices;
    doc["argmax_tol"] = c.argmax_tol;
    doc["bound_direction"] = "lower";
    s << "V(x0) >= " << short_fmt(vm) << " over the candidates; argmax set size "
      << active.indices.size() << "\n";
    if (c.psi) {
      const auto& psi = std::get<Eigen::VectorXd>(*c.psi);
      const double d = step("directional_derivative", [&] {
        return directional_derivative(cands, x, psi, c.argmax_tol);
      });
      doc["psi"] = encode(*c.psi);
      doc["directional_derivative"] = d;
      s << "directional derivative along psi: " << short_fmt(d) << "\n";
    }
  }
  w.json("candidates.json", make_artifact("candidates", doc));
  return s.str();
}

std::string run_reproduce(const RunConfig& c, Writer& w, bool& all_pass) {
  Reproduction r = step("reproduce", [&] {
    if (c.example == "example-2.1") return reproduce_blowup(c.delta);
    if (c.example == "remark-3.2") return reproduce_dyadic_cascade(c.cascade_n, c.p, c.seed);
    return reproduce_half_line_shift();
  });
  w.json("reproduction.json", make_artifact("reproduction", r.to_json()));
  all_pass = r.all_pass();
  std::string s;
  for (const auto& line : r.lines) s += line + "\n";
  for (const auto& ch : r.checks) {
    s += std::string(ch.pass ? "ok   " : "FAIL ") + ch.name + ": " + short_fmt(ch.value) + " " +
         ch.relation + " " + short_fmt(ch.expected) + "\n";
  }
  return s;
}

}  // namespace

std::string resolve_output_dir(const RunConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return config.output_dir;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome outcome;
  try {
    Writer w(resolve_output_dir(config));
    bool checks_pass = true;
    std::string body;
    switch (config.task) {
      case Task::simulate:
        body = run_simulate(config, w);
        break;
      case Task::worst_case:
        body = run_worst_case(config, w);
        break;
      case Task::certify:
        body = run_certify(config, w);
        break;
      case Task::gram:
        body = run_gram(config, w);
        break;
      case Task::reproduce:
        body = run_reproduce(config, w, checks_pass);
        break;
    }
    outcome.summary = body;
    w.text("summary.txt", body);
    outcome.artifacts = w.written();
    outcome.exit_code = checks_pass ? kExitOk : kExitCheckFailed;
  } catch (const StepFailure& e) {
    outcome.exit_code = kExitNumeric;
    outcome.error = e.op() + ": " + e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    outcome.exit_code = kExitIo;
    outcome.error = std::string("output: ") + e.what();
  } catch (const std::ios_base::failure& e) {
    outcome.exit_code = kExitIo;
    outcome.error = std::string("output: ") + e.what();
  }
  return outcome;
}

}  // namespace swlyap
