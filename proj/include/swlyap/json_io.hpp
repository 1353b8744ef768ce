#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "swlyap/certificates.hpp"
#include "swlyap/errors.hpp"
#include "swlyap/gram.hpp"
#include "swlyap/lyapunov.hpp"

namespace swlyap {

using Json = nlohmann::json;

/// One schema violation, located by a dotted path such as
/// "signal.segments[2].dwell".
struct FieldError {
  std::string path;
  std::string message;

  std::string str() const { return path.empty() ? message : path + ": " + message; }
  bool operator==(const FieldError&) const = default;
};

/// Error sink for the collecting parsers below.
class Issues {
 public:
  void add(std::string path, std::string message) {
    list_.push_back({std::move(path), std::move(message)});
  }
  bool empty() const noexcept { return list_.empty(); }
  const std::vector<FieldError>& list() const noexcept { return list_; }

 private:
  std::vector<FieldError> list_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

std::string join_path(const std::string& base, const std::string& key);
std::string index_path(const std::string& base, std::size_t i);

// Collecting parsers: on failure they record every problem under `path` and
// return nullopt.
std::optional<PiecewiseConstantFn> parse_pcf(const Json& j, const std::string& path, Issues& out);
std::optional<ModeSpec> parse_mode(const Json& j, const std::string& path, Issues& out);
std::optional<SwitchingSignal> parse_signal(const Json& j, const std::string& path, Issues& out);
/// {"modes": [...], "norm": "euclidean" | {"p": p}}. The norm defaults to
/// Euclidean for matrix systems and L^2 otherwise.
std::optional<SwitchedSystem> parse_system(const Json& j, const std::string& path, Issues& out);
/// A number array (Euclidean) or a piecewise-constant function object.
std::optional<SemigroupState> parse_state(const Json& j, const std::string& path, Issues& out);
std::optional<SignalFamily> parse_family(const Json& j, const std::string& path, Issues& out);
std::optional<DecayBound> parse_decay_bound(const Json& j, const std::string& path, Issues& out);
std::optional<Eigen::MatrixXd> parse_matrix(const Json& j, const std::string& path, Issues& out);

// Throwing wrappers.
PiecewiseConstantFn pcf_from_json(const Json& j);
ModeSpec mode_from_json(const Json& j);
SwitchingSignal signal_from_json(const Json& j);
SwitchedSystem system_from_json(const Json& j);
SemigroupState state_from_json(const Json& j);
SignalFamily family_from_json(const Json& j);
CandidateSet candidates_from_json(const Json& j);
LyapunovEstimate estimate_from_json(const Json& j);

Json encode(const PiecewiseConstantFn& f);
Json encode(const ModeSpec& m);
Json encode(const SwitchingSignal& s);
Json encode(const SwitchedSystem& s);
Json encode(const SemigroupState& x);
Json encode(const SignalFamily& f);
Json encode(const Eigen::MatrixXd& m);
Json encode(const GrowthBound& b);
Json encode(const DecayBound& b);
Json encode(const LyapunovEstimate& e);
Json encode(const DatkoCertificate& c);
Json encode(const ConditionReport& r);
Json encode(const CandidateSet& c);

std::string to_string(BoundDirection d);
std::string to_string(FunctionalKind k);

/// Wraps `body` with {"schema": "swlyap/<kind>/1"}.
Json make_artifact(const std::string& kind, Json body);
/// Re-validates an artifact produced by make_artifact against its declared
/// schema. Empty on success.
std::vector<FieldError> validate_artifact(const Json& j);

/// Pretty-printed with sorted keys and a trailing newline; byte-stable.
std::string dump_json(const Json& j);

}  // namespace swlyap
