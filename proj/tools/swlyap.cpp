#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "swlyap/run.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<double> horizon, time_step, quad_tol, kappa_tol, argmax_tol, delta, p;
  std::optional<std::uint64_t> seed, samples, n;
  std::optional<std::string> out, functional, gronwall_rate;
  bool serial = false;
  std::string example;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--horizon", f.horizon, "time horizon");
  cmd->add_option("--time-step", f.time_step, "sampling step of trajectories and time grids");
  cmd->add_option("--quad-tol", f.quad_tol, "relative quadrature tolerance");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("-o,--out", f.out, "output directory (SWLYAP_OUT_DIR overrides)");
  cmd->add_flag("--serial", f.serial, "use the serial reference kernels");
}

swlyap::Json load(const std::string& path) {
  if (path.empty()) return swlyap::Json::object();
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return swlyap::Json::parse(ss.str());
}

template <class T>
void put(swlyap::Json& doc, const char* key, const std::optional<T>& v) {
  if (v) doc[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case Lyapunov functionals and stability certificates for switched systems"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "evolve x0 under a signal, write the trajectory");
  auto* worst = app.add_subcommand("worst-case", "search the signal family for the worst-case energy");
  worst->add_option("--functional", f.functional, "v_sup or v_tilde")
      ->check(CLI::IsMember({"v_sup", "v_tilde"}));
  auto* certify = app.add_subcommand("certify", "check the Lyapunov conditions and emit certificates");
  certify->add_option("--samples", f.samples, "number of random sample states");
  certify->add_option("--kappa-tol", f.kappa_tol, "relative slack of the derivative check");
  certify->add_option("--gronwall-rate", f.gronwall_rate, "lower_constant or upper_constant")
      ->check(CLI::IsMember({"lower_constant", "upper_constant"}));
  auto* gram = app.add_subcommand("gram", "build Gram operators of the family");
  gram->add_option("--argmax-tol", f.argmax_tol, "relative tolerance of the argmax set");
  auto* reproduce = app.add_subcommand("reproduce", "rerun a worked example");
  reproduce->add_option("example", f.example, "example-2.1, remark-3.2 or half-line-shift")
      ->required()
      ->check(CLI::IsMember({"example-2.1", "remark-3.2", "half-line-shift"}));
  reproduce->add_option("--delta", f.delta, "dwell of the alternating signal (example-2.1)");
  reproduce->add_option("--n", f.n, "number of gates (remark-3.2)");
  reproduce->add_option("--p", f.p, "L^p exponent (remark-3.2)");
  for (auto* cmd : {simulate, worst, certify, gram, reproduce}) add_common(cmd, f);

  CLI11_PARSE(app, argc, argv);

  swlyap::Json doc;
  try {
    doc = load(f.config_path);
  } catch (const swlyap::Json::parse_error& e) {
    std::cerr << "error: config: invalid JSON: " << e.what() << "\n";
    return swlyap::kExitSchema;
  }
  if (!doc.is_object()) {
    std::cerr << "error: config must be a JSON object\n";
    return swlyap::kExitSchema;
  }
  const auto* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  doc["task"] = name == "worst-case" ? "worst_case" : name;
  if (name == "reproduce") doc["example"] = f.example;
  put(doc, "horizon", f.horizon);
  put(doc, "time_step", f.time_step);
  put(doc, "quad_tol", f.quad_tol);
  put(doc, "kappa_tol", f.kappa_tol);
  put(doc, "argmax_tol", f.argmax_tol);
  put(doc, "delta", f.delta);
  put(doc, "p", f.p);
  put(doc, "seed", f.seed);
  put(doc, "samples", f.samples);
  put(doc, "n", f.n);
  put(doc, "output_dir", f.out);
  put(doc, "functional", f.functional);
  put(doc, "gronwall_rate", f.gronwall_rate);
  if (f.serial) doc["exec"] = "serial";

  const auto parsed = swlyap::validate_config(doc);
  if (!parsed.config) {
    for (const auto& e : parsed.errors) std::cerr << "error: " << e.str() << "\n";
    return swlyap::kExitSchema;
  }
  const auto outcome = swlyap::run(*parsed.config);
  std::cout << outcome.summary;
  if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << "\n";
  for (const auto& a : outcome.artifacts) std::cout << "wrote " << a << "\n";
  return outcome.exit_code;
}
