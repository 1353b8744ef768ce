#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swlyap/json_io.hpp"

namespace swlyap {

enum class Task { simulate, worst_case, certify, gram, reproduce };

/// Environment variable that overrides RunConfig::output_dir.
inline constexpr const char* kOutputDirEnv = "SWLYAP_OUT_DIR";

struct RunConfig {
  Task task = Task::worst_case;
  std::optional<SwitchedSystem> system;
  /// simulate: defaults to the constant signal in mode 0.
  std::optional<SwitchingSignal> signal;
  std::optional<SemigroupState> x0;
  /// gram: direction for the directional derivative.
  std::optional<SemigroupState> psi;
  /// Defaults to default_family(system).
  std::optional<SignalFamily> family;
  /// gram: signals added to the family's candidates.
  std::vector<SwitchingSignal> extra_signals;
  /// certify: states to test; drawn from `seed` when empty.
  std::vector<SemigroupState> x_samples;
  std::string example;

  double horizon = 10.0;
  double time_step = 1.0 / 64.0;
  double quad_tol = 1e-10;
  std::vector<double> derivative_grid = default_derivative_grid();
  double kappa_tol = 0.05;
  double argmax_tol = 1e-9;
  std::optional<DecayBound> decay;
  FunctionalKind functional = FunctionalKind::v_sup;
  GronwallRate gronwall_rate = GronwallRate::from_lower_constant;
  std::uint64_t seed = 0;
  std::size_t sample_count = 10;

  double delta = 0.5;
  int cascade_n = 4;
  double p = 2.0;

  std::string output_dir = "swlyap-out";
  Exec exec = Exec::parallel;
};

std::string to_string(Task t);

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<FieldError> errors;
};

/// Parses and validates a JSON config, collecting every error with its field
/// path. An empty string is treated as an empty document.
ConfigResult validate_config(const std::string& raw);
ConfigResult validate_config(const Json& doc);

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> artifacts;
  std::string summary;
  std::string error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Output directory after applying the environment override.
std::string resolve_output_dir(const RunConfig& config);

/// Executes the task and writes its artifacts. Numeric failures yield
/// kExitNumeric with the failing operation named in `error`.
RunOutcome run(const RunConfig& config);

}  // namespace swlyap
