#include <cctype>
#include <cmath>
#include <set>

#include "swlyap/run.hpp"

namespace swlyap {

namespace {

const std::set<std::string> kKnownFields = {
    "task",       "system",    "signal",     "x0",          "psi",
    "family",     "signals",   "x_samples",  "example",     "horizon",
    "time_step",  "quad_tol",  "derivative_grid", "kappa_tol", "argmax_tol",
    "decay",      "functional", "gronwall_rate", "seed",      "samples",
    "delta",      "n",         "p",          "output_dir",  "exec"};

const std::set<std::string> kExamples = {"example-2.1", "remark-3.2", "half-line-shift"};

std::optional<double> positive_number(const Json& doc, const char* key, Issues& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::nullopt;
  if (!it->is_number() || !std::isfinite(it->get<double>())) {
    out.add(key, "expected a finite number");
    return std::nullopt;
  }
  const double v = it->get<double>();
  if (!(v > 0.0)) {
    out.add(key, "must be positive");
    return std::nullopt;
  }
  return v;
}

std::optional<std::uint64_t> count_field(const Json& doc, const char* key, Issues& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::nullopt;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    out.add(key, "expected a non-negative integer");
    return std::nullopt;
  }
  return it->get<std::uint64_t>();
}

std::optional<std::string> choice(const Json& doc, const char* key,
                                  std::initializer_list<const char*> allowed, Issues& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::nullopt;
  std::string listed;
  for (const char* a : allowed) {
    if (it->is_string() && it->get<std::string>() == a) return std::string(a);
    listed += listed.empty() ? a : std::string(", ") + a;
  }
  out.add(key, "expected one of: " + listed);
  return std::nullopt;
}

Task task_of(const std::string& s) {
  if (s == "simulate") return Task::simulate;
  if (s == "certify") return Task::certify;
  if (s == "gram") return Task::gram;
  if (s == "reproduce") return Task::reproduce;
  return Task::worst_case;
}

void check_state(const SwitchedSystem& sys, const SemigroupState& x, const std::string& path,
                 Issues& out) {
  for (std::size_t j = 0; j < sys.size(); ++j) {
    if (!sys.mode(j).accepts(x)) {
      out.add(path, "state does not live in the space of mode " + std::to_string(j));
      return;
    }
  }
}

void check_signal_modes(const SwitchedSystem& sys, const SwitchingSignal& sig,
                        const std::string& path, Issues& out) {
  const auto& segs = sig.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].mode >= sys.size()) {
      out.add(index_path(join_path(path, "segments"), i) + ".mode",
              "mode " + std::to_string(segs[i].mode) + " out of range (system has " +
                  std::to_string(sys.size()) + " modes)");
    }
  }
  if (sig.tail() >= sys.size()) {
    out.add(join_path(path, "tail"), "mode " + std::to_string(sig.tail()) + " out of range");
  }
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::simulate:
      return "simulate";
    case Task::worst_case:
      return "worst_case";
    case Task::certify:
      return "certify";
    case Task::gram:
      return "gram";
    case Task::reproduce:
      return "reproduce";
  }
  return "worst_case";
}

ConfigResult validate_config(const std::string& raw) {
  bool blank = true;
  for (char c : raw) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) return validate_config(Json::object());
  Json doc;
  try {
    doc = Json::parse(raw);
  } catch (const Json::parse_error& e) {
    return {std::nullopt, {{"", std::string("invalid JSON: ") + e.what()}}};
  }
  return validate_config(doc);
}

ConfigResult validate_config(const Json& doc) {
  Issues out;
  if (!doc.is_object()) {
    out.add("", "config must be a JSON object");
    return {std::nullopt, out.list()};
  }
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownFields.count(key)) out.add(key, "unknown field");
  }

  RunConfig cfg;
  if (auto t = choice(doc, "task", {"simulate", "worst_case", "certify", "gram", "reproduce"},
                      out)) {
    cfg.task = task_of(*t);
  }
  const bool needs_system = cfg.task != Task::reproduce;

  if (doc.contains("system")) {
    cfg.system = parse_system(doc["system"], "system", out);
  } else if (needs_system) {
    out.add("system", "required");
  }
  if (doc.contains("signal")) cfg.signal = parse_signal(doc["signal"], "signal", out);
  if (doc.contains("x0")) cfg.x0 = parse_state(doc["x0"], "x0", out);
  if (doc.contains("psi")) cfg.psi = parse_state(doc["psi"], "psi", out);
  if (doc.contains("family")) cfg.family = parse_family(doc["family"], "family", out);
  if (doc.contains("decay")) cfg.decay = parse_decay_bound(doc["decay"], "decay", out);
  if (doc.contains("signals")) {
    if (!doc["signals"].is_array()) {
      out.add("signals", "expected an array of signals");
    } else {
      for (std::size_t i = 0; i < doc["signals"].size(); ++i) {
        if (auto s = parse_signal(doc["signals"][i], index_path("signals", i), out)) {
          cfg.extra_signals.push_back(*s);
        }
      }
    }
  }
  if (doc.contains("x_samples")) {
    if (!doc["x_samples"].is_array()) {
      out.add("x_samples", "expected an array of states");
    } else {
      for (std::size_t i = 0; i < doc["x_samples"].size(); ++i) {
        if (auto x = parse_state(doc["x_samples"][i], index_path("x_samples", i), out)) {
          cfg.x_samples.push_back(*x);
        }
      }
    }
  }

  if (auto v = positive_number(doc, "time_step", out)) cfg.time_step = *v;
  if (auto v = positive_number(doc, "quad_tol", out)) cfg.quad_tol = *v;
  if (auto v = positive_number(doc, "kappa_tol", out)) cfg.kappa_tol = *v;
  if (auto v = positive_number(doc, "argmax_tol", out)) cfg.argmax_tol = *v;
  if (auto v = positive_number(doc, "delta", out)) cfg.delta = *v;
  if (auto v = positive_number(doc, "p", out)) {
    if (*v < 1.0) {
      out.add("p", "must be >= 1");
    } else {
      cfg.p = *v;
    }
  }
  cfg.horizon = default_horizon(cfg.decay ? std::optional<double>(cfg.decay->mu) : std::nullopt);
  if (auto v = positive_number(doc, "horizon", out)) cfg.horizon = *v;
  if (auto v = count_field(doc, "seed", out)) cfg.seed = *v;
  if (auto v = count_field(doc, "samples", out)) {
    if (*v == 0) {
      out.add("samples", "must be positive");
    } else {
      cfg.sample_count = *v;
    }
  }
  if (auto v = count_field(doc, "n", out)) {
    if (*v < 1 || *v > 12) {
      out.add("n", "must lie in 1..12");
    } else {
      cfg.cascade_n = static_cast<int>(*v);
    }
  }
  if (doc.contains("derivative_grid")) {
    const auto& g = doc["derivative_grid"];
    bool ok = g.is_array() && !g.empty();
    std::vector<double> grid;
    for (std::size_t i = 0; ok && i < g.size(); ++i) {
      ok = g[i].is_number() && g[i].get<double>() > 0.0 &&
           (i == 0 || g[i].get<double>() < grid.back());
      if (ok) grid.push_back(g[i].get<double>());
    }
    if (ok) {
      cfg.derivative_grid = grid;
    } else {
      out.add("derivative_grid", "expected a non-empty, strictly decreasing array of positive numbers");
    }
  }
  if (auto f = choice(doc, "functional", {"v_sup", "v_tilde"}, out)) {
    cfg.functional = *f == "v_sup" ? FunctionalKind::v_sup : FunctionalKind::v_tilde;
  }
  if (auto r = choice(doc, "gronwall_rate", {"lower_constant", "upper_constant"}, out)) {
    cfg.gronwall_rate =
        *r == "lower_constant" ? GronwallRate::from_lower_constant : GronwallRate::from_upper_constant;
  }
  if (auto e = choice(doc, "exec", {"parallel", "serial"}, out)) {
    cfg.exec = *e == "parallel" ? Exec::parallel : Exec::serial;
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      out.add("output_dir", "expected a non-empty string");
    } else {
      cfg.output_dir = doc["output_dir"].get<std::string>();
    }
  }
  if (doc.contains("example")) {
    if (!doc["example"].is_string() || !kExamples.count(doc["example"].get<std::string>())) {
      out.add("example", "expected one of: example-2.1, remark-3.2, half-line-shift");
    } else {
      cfg.example = doc["example"].get<std::string>();
    }
  }

  // Task-specific requirements and cross-field checks.
  switch (cfg.task) {
    case Task::simulate:
    case Task::worst_case:
      if (!doc.contains("x0")) out.add("x0", "required");
      break;
    case Task::certify:
      if (cfg.system && !cfg.system->all_matrix_like() && !doc.contains("x_samples")) {
        out.add("x_samples", "required for function-space systems");
      }
      break;
    case Task::gram:
      if (cfg.system && (!cfg.system->all_matrix_like() || cfg.system->dimension() == 0)) {
        out.add("system", "gram needs a finite-dimensional system of matrix modes");
      }
      if (doc.contains("psi") && !doc.contains("x0")) out.add("x0", "required when psi is given");
      break;
    case Task::reproduce:
      if (!doc.contains("example")) out.add("example", "required");
      break;
  }
  if (cfg.system) {
    const auto& sys = *cfg.system;
    if (cfg.signal) check_signal_modes(sys, *cfg.signal, "signal", out);
    for (std::size_t i = 0; i < cfg.extra_signals.size(); ++i) {
      check_signal_modes(sys, cfg.extra_signals[i], index_path("signals", i), out);
    }
    if (cfg.x0) check_state(sys, *cfg.x0, "x0", out);
    if (cfg.psi) check_state(sys, *cfg.psi, "psi", out);
    for (std::size_t i = 0; i < cfg.x_samples.size(); ++i) {
      check_state(sys, cfg.x_samples[i], index_path("x_samples", i), out);
    }
    if (cfg.family) {
      for (std::size_t i = 0; i < cfg.family->mode_ids.size(); ++i) {
        if (cfg.family->mode_ids[i] >= sys.size()) {
          out.add(index_path("family.modes", i), "mode out of range");
        }
      }
    } else {
      cfg.family = default_family(sys);
    }
    if (cfg.task == Task::simulate && !cfg.signal) cfg.signal = SwitchingSignal::constant(0);
  }

  if (!out.empty()) return {std::nullopt, out.list()};
  return {std::move(cfg), {}};
}

}  // namespace swlyap
