#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "swlyap/run.hpp"

using namespace swlyap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("swlyap-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> error_strings(const ConfigResult& r) {
  std::vector<std::string> out;
  for (const auto& e : r.errors) out.push_back(e.str());
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

const Json kScalar = {{"modes", {{{"kind", "matrix"}, {"A", {{-1.0}}}}}}};
const Json kPair = {{"modes",
                     {{{"kind", "matrix"}, {"A", {{-1.0, 0.0}, {0.0, -2.0}}}},
                      {{"kind", "matrix"}, {"A", {{-2.0, 0.0}, {0.0, -1.0}}}}}}};

RunConfig must(const Json& doc) {
  auto r = validate_config(doc);
  for (const auto& e : r.errors) MESSAGE(e.str());
  REQUIRE(r.config.has_value());
  return *r.config;
}

// Unsets the override for the duration of a test.
struct EnvGuard {
  std::string saved;
  bool had;
  EnvGuard() {
    const char* v = std::getenv(kOutputDirEnv);
    had = v != nullptr;
    if (had) saved = v;
    ::unsetenv(kOutputDirEnv);
  }
  ~EnvGuard() {
    if (had) {
      ::setenv(kOutputDirEnv, saved.c_str(), 1);
    } else {
      ::unsetenv(kOutputDirEnv);
    }
  }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config validation collects every error") {
    const auto empty = error_strings(validate_config(std::string("")));
    CHECK(has(empty, "system: required"));
    CHECK(has(empty, "x0: required"));

    const Json doc = {{"task", "simulate"},
                      {"system", kScalar},
                      {"x0", {1.0}},
                      {"signal", {{"segments", {{0, 0.5}, {0, -1.0}}}, {"tail", 3}}},
                      {"horizon", -1},
                      {"bogus", true}};
    const auto errs = error_strings(validate_config(doc));
    CHECK(has(errs, "signal.segments[1].dwell: must be positive (segment 1)"));
    CHECK(has(errs, "horizon: must be positive"));
    CHECK(has(errs, "bogus: unknown field"));
    // Mode ranges are checked once the signal itself parses.
    CHECK(has(error_strings(validate_config(Json{{"task", "simulate"}, {"system", kScalar}, {"x0", {1.0}},
                                                 {"signal", {{"segments", {{2, 0.5}}}, {"tail", 3}}}})),
              "signal.segments[0].mode: mode 2 out of range (system has 1 modes)"));
    CHECK(has(error_strings(validate_config(Json{{"task", "simulate"}, {"system", kScalar}, {"x0", {1.0}},
                                                 {"signal", {{"tail", 3}}}})),
              "signal.tail: mode 3 out of range"));

    CHECK(validate_config(std::string("{not json")).errors.at(0).message.rfind("invalid JSON", 0) == 0);
    CHECK(has(error_strings(validate_config(Json{{"task", "fly"}, {"system", kScalar}})),
              "task: expected one of: simulate, worst_case, certify, gram, reproduce"));
    CHECK(has(error_strings(validate_config(Json{{"task", "reproduce"}})), "example: required"));
    CHECK(has(error_strings(validate_config(Json{{"task", "reproduce"}, {"example", "x"}})),
              "example: expected one of: example-2.1, remark-3.2, half-line-shift"));
    CHECK(has(error_strings(validate_config(Json{{"task", "reproduce"}, {"example", "remark-3.2"}, {"n", 13}})),
              "n: must lie in 1..12"));
    CHECK(has(error_strings(validate_config(Json{{"task", "worst_case"}, {"system", kScalar}, {"x0", {1, 2}}})),
              "x0: state does not live in the space of mode 0"));
    const Json fn = {{"modes", {{{"kind", "half_line_shift"}}}}};
    CHECK(has(error_strings(validate_config(Json{{"task", "gram"}, {"system", fn}})),
              "system: gram needs a finite-dimensional system of matrix modes"));
    CHECK(has(error_strings(validate_config(Json{{"task", "certify"}, {"system", fn}})),
              "x_samples: required for function-space systems"));
    CHECK(has(error_strings(validate_config(Json{{"task", "gram"}, {"system", kPair}, {"derivative_grid", {0.1, 0.2}}})),
              "derivative_grid: expected a non-empty, strictly decreasing array of positive numbers"));
  }

  TEST_CASE("config defaults") {
    const auto c = must(Json{{"task", "simulate"}, {"system", kPair}, {"x0", {1.0, 0.0}}});
    CHECK(c.signal == SwitchingSignal::constant(0));
    CHECK(c.family->mode_ids == std::vector<ModeId>{0, 1});
    CHECK(c.horizon == 10.0);
    CHECK(c.exec == Exec::parallel);
    const auto d = must(Json{{"task", "worst_case"}, {"system", kPair}, {"x0", {1.0, 0.0}},
                             {"decay", {{"K", 1.0}, {"mu", 0.1}}}});
    CHECK(d.horizon == 50.0);
  }

  TEST_CASE("output directory override") {
    EnvGuard guard;
    RunConfig c;
    c.output_dir = "from-config";
    CHECK(resolve_output_dir(c) == "from-config");
    ::setenv(kOutputDirEnv, "from-env", 1);
    CHECK(resolve_output_dir(c) == "from-env");
    ::setenv(kOutputDirEnv, "", 1);
    CHECK(resolve_output_dir(c) == "from-config");
  }

  TEST_CASE("simulate writes the exact scalar decay") {
    EnvGuard guard;
    const auto dir = scratch("simulate");
    auto c = must(Json{{"task", "simulate"}, {"system", kScalar}, {"x0", {1.0}}, {"horizon", 4},
                       {"output_dir", dir.string()}});
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    std::istringstream csv(slurp(dir / "trajectory.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,norm,mode_active");
    int rows = 0;
    while (std::getline(csv, line)) {
      double t = 0, n = 0;
      int m = -1;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%d", &t, &n, &m) == 3);
      CHECK(n == doctest::Approx(std::exp(-t)).epsilon(1e-10));
      CHECK(m == 0);
      ++rows;
    }
    CHECK(rows == 257);
    const auto sim = Json::parse(slurp(dir / "simulation.json"));
    CHECK(validate_artifact(sim).empty());
    CHECK(sim["energy"].get<double>() == doctest::Approx(-std::expm1(-8.0) / 2).epsilon(1e-10));
    CHECK(fs::exists(dir / "summary.txt"));
    fs::remove_all(dir);
  }

  TEST_CASE("worst-case and gram artifacts validate and rerun byte-identically") {
    EnvGuard guard;
    const auto dir = scratch("worst");
    const Json base = {{"system", kPair}, {"x0", {0.6, 0.8}}, {"horizon", 6},
                       {"family", {{"dwells", {0.5, 1.0}}, {"max_switches", 2}, {"modes", {0, 1}}}},
                       {"output_dir", dir.string()}};
    Json wc = base;
    wc["task"] = "worst_case";
    REQUIRE(run(must(wc)).exit_code == kExitOk);
    const auto first = slurp(dir / "estimate.json");
    const auto first_csv = slurp(dir / "witness_trajectory.csv");
    CHECK(validate_artifact(Json::parse(first)).empty());
    CHECK(Json::parse(first)["bound_direction"] == "lower");
    wc["exec"] = "serial";
    REQUIRE(run(must(wc)).exit_code == kExitOk);
    CHECK(slurp(dir / "estimate.json") == first);
    CHECK(slurp(dir / "witness_trajectory.csv") == first_csv);

    Json g = base;
    g["task"] = "gram";
    g["psi"] = {1.0, 0.0};
    REQUIRE(run(must(g)).exit_code == kExitOk);
    const auto cand = Json::parse(slurp(dir / "candidates.json"));
    CHECK(validate_artifact(cand).empty());
    CHECK(cand["candidates"].size() == 42);
    CHECK(cand["v_max"].get<double>() >= Json::parse(first)["estimate"]["value"].get<double>() - 1e-9);
    const auto again = slurp(dir / "candidates.json");
    REQUIRE(run(must(g)).exit_code == kExitOk);
    CHECK(slurp(dir / "candidates.json") == again);
    fs::remove_all(dir);
  }

  TEST_CASE("certify writes a certificate") {
    EnvGuard guard;
    const auto dir = scratch("certify");
    const auto c = must(Json{{"task", "certify"}, {"system", kScalar}, {"samples", 3}, {"horizon", 12},
                             {"family", {{"dwells", {1.0}}, {"max_switches", 0}, {"modes", {0}}}},
                             {"output_dir", dir.string()}});
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    const auto cert = Json::parse(slurp(dir / "certificate.json"));
    CHECK(validate_artifact(cert).empty());
    CHECK(cert["report"]["supports"]["c"] == true);
    CHECK_FALSE(cert["datko"].is_null());
    CHECK(out.summary.find("Gronwall K=1") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("reproductions pass and report their checks") {
    EnvGuard guard;
    const auto dir = scratch("reproduce");
    for (const char* ex : {"example-2.1", "remark-3.2", "half-line-shift"}) {
      const auto out = run(must(Json{{"task", "reproduce"}, {"example", ex}, {"output_dir", dir.string()}}));
      CHECK(out.exit_code == kExitOk);
      CHECK(out.summary.find("FAIL") == std::string::npos);
      CHECK(validate_artifact(Json::parse(slurp(dir / "reproduction.json"))).empty());
    }
    const auto blow = run(must(Json{{"task", "reproduce"}, {"example", "example-2.1"}, {"delta", 0.25},
                                    {"output_dir", dir.string()}}));
    CHECK(blow.summary.find("t=2 ratio=256 lower_bound=256") != std::string::npos);
    const auto cascade = run(must(Json{{"task", "reproduce"}, {"example", "remark-3.2"}, {"n", 3},
                                       {"output_dir", dir.string()}}));
    CHECK(cascade.summary.find("witness norm ratio 2.82842712475") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("numeric failures name the failing operation") {
    EnvGuard guard;
    const auto dir = scratch("numeric");
    const Json unstable = {{"modes", {{{"kind", "matrix"}, {"A", {{0.5}}}}}}};
    const auto out = run(must(Json{{"task", "gram"}, {"system", unstable}, {"output_dir", dir.string()}}));
    CHECK(out.exit_code == kExitNumeric);
    CHECK(out.error.rfind("build_candidates: ", 0) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("command-line tool: flags, env override and exit codes") {
    EnvGuard guard;
    const auto dir = scratch("tool");
    const auto env_dir = scratch("tool-env");
    fs::create_directories(dir);
    {
      std::ofstream cfg(dir / "cfg.json");
      cfg << Json{{"system", kScalar}, {"x0", {2.0}}}.dump();
    }
    const std::string tool = SWLYAP_TOOL_PATH;
    const std::string cmd = tool + " simulate -c " + (dir / "cfg.json").string() + " --horizon 1 -o " +
                            (dir / "out").string() + " > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "out" / "trajectory.csv"));

    const std::string with_env = std::string(kOutputDirEnv) + "=" + env_dir.string() + " " + cmd;
    CHECK(std::system(with_env.c_str()) == 0);
    CHECK(fs::exists(env_dir / "trajectory.csv"));

    const std::string bad = tool + " simulate --horizon 1 -o " + (dir / "bad").string() + " 2> " +
                            (dir / "err.txt").string();
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == kExitSchema);
    const auto err = slurp(dir / "err.txt");
    CHECK(err.find("error: system: required") != std::string::npos);
    CHECK(err.find("error: x0: required") != std::string::npos);
    fs::remove_all(dir);
    fs::remove_all(env_dir);
  }
}
