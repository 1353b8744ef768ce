#include "swlyap/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "swlyap/errors.hpp"
#include "swlyap/expm.hpp"

namespace swlyap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_time(double t, const char* where) {
  if (!(t >= 0.0) || std::isinf(t)) {
    throw ContractViolation(std::string(where) + ": time must be finite and nonnegative");
  }
}

const PiecewiseConstantFn& as_function(const SemigroupState& x, const char* where) {
  const auto* f = std::get_if<PiecewiseConstantFn>(&x);
  if (f == nullptr) {
    throw StructuralError(std::string(where) + ": mode acts on functions, got a vector");
  }
  return *f;
}

const Eigen::VectorXd& as_vector(const SemigroupState& x, const char* where) {
  const auto* v = std::get_if<Eigen::VectorXd>(&x);
  if (v == nullptr) {
    throw StructuralError(std::string(where) + ": mode acts on vectors, got a function");
  }
  return *v;
}

}  // namespace

SpaceKind space_kind(const SemigroupState& x) {
  return std::holds_alternative<PiecewiseConstantFn>(x) ? SpaceKind::function
                                                         : SpaceKind::euclidean;
}

double state_norm(const SemigroupState& x, const NormSpec& norm) {
  return std::visit(
      Overloaded{[&](const PiecewiseConstantFn& f) { return lp_norm(f, norm); },
                 [](const Eigen::VectorXd& v) {
                   return euclidean_norm(std::span<const double>(v.data(), v.size()));
                 }},
      x);
}

bool is_zero_state(const SemigroupState& x) {
  return std::visit(Overloaded{[](const PiecewiseConstantFn& f) { return f.is_zero(); },
                               [](const Eigen::VectorXd& v) { return v.isZero(0.0); }},
                    x);
}

SemigroupState scale_state(double c, const SemigroupState& x) {
  return std::visit(
      Overloaded{[&](const PiecewiseConstantFn& f) -> SemigroupState { return scale(c, f); },
                 [&](const Eigen::VectorXd& v) -> SemigroupState {
                   return Eigen::VectorXd(c * v);
                 }},
      x);
}

SemigroupState combine_states(double a, const SemigroupState& x, double b,
                              const SemigroupState& y) {
  if (space_kind(x) != space_kind(y)) {
    throw StructuralError("combine_states: states live in different spaces");
  }
  if (space_kind(x) == SpaceKind::function) {
    return linear_combine(a, std::get<PiecewiseConstantFn>(x), b,
                          std::get<PiecewiseConstantFn>(y));
  }
  const auto& u = std::get<Eigen::VectorXd>(x);
  const auto& v = std::get<Eigen::VectorXd>(y);
  if (u.size() != v.size()) throw StructuralError("combine_states: dimension mismatch");
  return Eigen::VectorXd(a * u + b * v);
}

ModeSpec ModeSpec::matrix(Eigen::MatrixXd a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw StructuralError("matrix mode: A must be square and nonempty");
  }
  if (!a.allFinite()) throw InvalidStateError("matrix mode: non-finite entry in A");
  return ModeSpec(MatrixMode{std::move(a)});
}

ModeSpec ModeSpec::shift_amplify(double lo, double hi, Direction direction, double gate,
                                 double factor) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw StructuralError("shift_amplify mode: domain must be a bounded interval");
  }
  if (!(gate >= lo && gate <= hi)) {
    throw StructuralError("shift_amplify mode: gate must lie inside the domain");
  }
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ContractViolation("shift_amplify mode: factor must be positive");
  }
  return ModeSpec(ShiftAmplifyMode{lo, hi, direction, gate, factor});
}

ModeSpec ModeSpec::diagonal_group(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ContractViolation("diagonal group mode: rate must be positive");
  }
  return ModeSpec(DiagonalGroupMode{mu});
}

ModeSpec ModeSpec::half_line_shift() { return ModeSpec(HalfLineShiftMode{}); }

std::string ModeSpec::kind_name() const {
  return std::visit(Overloaded{[](const MatrixMode&) { return std::string("matrix"); },
                               [](const ShiftAmplifyMode&) {
                                 return std::string("shift_amplify");
                               },
                               [](const DiagonalGroupMode&) {
                                 return std::string("diagonal_group");
                               },
                               [](const HalfLineShiftMode&) {
                                 return std::string("half_line_shift");
                               }},
                    v_);
}

bool ModeSpec::accepts(const SemigroupState& x) const {
  return std::visit(
      Overloaded{
          [&](const MatrixMode& m) {
            const auto* v = std::get_if<Eigen::VectorXd>(&x);
            return v != nullptr && v->size() == m.a.rows();
          },
          [&](const ShiftAmplifyMode& m) {
            const auto* f = std::get_if<PiecewiseConstantFn>(&x);
            return f != nullptr && f->lo() == m.lo && f->hi() == m.hi;
          },
          [](const DiagonalGroupMode&) { return true; },
          [&](const HalfLineShiftMode&) {
            const auto* f = std::get_if<PiecewiseConstantFn>(&x);
            return f != nullptr && f->lo() == 0.0 && f->unbounded();
          }},
      v_);
}

SemigroupState apply(const ModeSpec& mode, double t, const SemigroupState& x) {
  require_time(t, "apply");
  if (!mode.accepts(x)) {
    throw StructuralError("apply: state does not live in the space of the " +
                          mode.kind_name() + " mode");
  }
  if (t == 0.0) return x;
  return std::visit(
      Overloaded{
          [&](const MatrixMode& m) -> SemigroupState {
            return Eigen::VectorXd(expm(t * m.a) * as_vector(x, "apply"));
          },
          [&](const ShiftAmplifyMode& m) -> SemigroupState {
            const auto& f = as_function(x, "apply");
            if (m.direction == Direction::left) {
              return scale_window(translate(f, t, m.lo, m.hi), m.gate - t, m.gate,
                                  m.factor);
            }
            return scale_window(translate(f, -t, m.lo, m.hi), m.gate, m.gate + t,
                                m.factor);
          },
          [&](const DiagonalGroupMode& m) -> SemigroupState {
            return scale_state(std::exp(-m.mu * t), x);
          },
          [&](const HalfLineShiftMode&) -> SemigroupState {
            const auto& f = as_function(x, "apply");
            return translate(f, t, f.lo(), f.hi());
          }},
      mode.variant());
}

Eigen::VectorXd apply_adjoint(const ModeSpec& mode, double t, const Eigen::VectorXd& x) {
  require_time(t, "apply_adjoint");
  const auto* m = mode.get_if<MatrixMode>();
  if (m == nullptr) {
    throw UnsupportedOperation("apply_adjoint: only defined for matrix modes, got " +
                               mode.kind_name());
  }
  if (x.size() != m->a.rows()) throw StructuralError("apply_adjoint: dimension mismatch");
  if (t == 0.0) return x;
  return expm(t * m->a.transpose()) * x;
}

double group_inverse_norm(const ModeSpec& mode, double t) {
  require_time(t, "group_inverse_norm");
  const auto* g = mode.get_if<DiagonalGroupMode>();
  if (g == nullptr) {
    throw UnsupportedOperation("group_inverse_norm: only defined for diagonal groups, got " +
                               mode.kind_name());
  }
  return std::exp(g->mu * t);
}

Eigen::MatrixXd generator_matrix(const ModeSpec& mode, Eigen::Index dim) {
  if (const auto* m = mode.get_if<MatrixMode>()) {
    if (m->a.rows() != dim) throw StructuralError("generator_matrix: dimension mismatch");
    return m->a;
  }
  if (const auto* g = mode.get_if<DiagonalGroupMode>()) {
    return -g->mu * Eigen::MatrixXd::Identity(dim, dim);
  }
  throw UnsupportedOperation("generator_matrix: " + mode.kind_name() +
                             " mode has no matrix generator");
}

std::vector<double> profile_kinks(const ModeSpec& mode, const PiecewiseConstantFn& x,
                                  double d) {
  require_time(d, "profile_kinks");
  std::vector<double> kinks;
  auto keep = [&](double tau) {
    if (tau > 0.0 && tau < d) kinks.push_back(tau);
  };
  if (const auto* m = mode.get_if<ShiftAmplifyMode>()) {
    std::vector<double> points = x.breaks();
    points.push_back(m->lo);
    points.push_back(m->hi);
    points.push_back(m->gate);
    // Moving ends: lo+tau and gate+tau for left transport, hi-tau and gate-tau
    // for right transport, measured in the coordinates of x.
    for (double pt : points) {
      if (m->direction == Direction::left) {
        keep(pt - m->lo);
        keep(pt - m->gate);
      } else {
        keep(m->hi - pt);
        keep(m->gate - pt);
      }
    }
  } else if (mode.get_if<HalfLineShiftMode>() != nullptr) {
    for (double pt : x.breaks()) keep(pt - x.lo());
  } else {
    throw UnsupportedOperation("profile_kinks: " + mode.kind_name() +
                               " mode has no piecewise-affine norm profile");
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  return kinks;
}

std::vector<ModeSpec> bimodal_blowup_modes() {
  return {ModeSpec::shift_amplify(-1.0, 1.0, Direction::left, 0.0, 2.0),
          ModeSpec::shift_amplify(-1.0, 1.0, Direction::right, 0.0, 2.0)};
}

ModeSpec dyadic_gate_mode(int j, double p) {
  if (j < 1) throw ContractViolation("dyadic_gate_mode: j must be >= 1");
  if (!(p >= 1.0)) throw ContractViolation("dyadic_gate_mode: p must be >= 1");
  return ModeSpec::shift_amplify(0.0, 1.0, Direction::left, std::ldexp(1.0, -2 * j),
                                 std::pow(2.0, 1.0 / p));
}

}  // namespace swlyap
