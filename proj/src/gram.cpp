#include "swlyap/gram.hpp"

#include <cmath>
#include <limits>

#include "swlyap/errors.hpp"
#include "swlyap/expm.hpp"

namespace swlyap {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::Index CandidateSet::dimension() const {
  if (items.empty()) throw ContractViolation("candidate set is empty");
  return items.front().b.rows();
}

namespace {

constexpr std::size_t kNoMode = std::numeric_limits<std::size_t>::max();

bool is_hurwitz(const MatrixXd& a) {
  const Eigen::EigenSolver<MatrixXd> es(a, false);
  return (es.eigenvalues().real().array() < -1e-12).all();
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

MatrixXd lyapunov_solve(const MatrixXd& a, const MatrixXd& q) {
  const auto n = a.rows();
  if (n == 0 || a.cols() != n || q.rows() != n || q.cols() != n) {
    throw StructuralError("lyapunov_solve: A and Q must be square and of equal size");
  }
  if (!is_hurwitz(a)) {
    throw UnstableTailError("lyapunov_solve: A is not Hurwitz", kNoMode);
  }
  // Column-major vec: vec(A^T P) = (I (x) A^T) vec(P), vec(P A) = (A^T (x) I) vec(P).
  MatrixXd op = MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    op.block(j * n, j * n, n, n) += a.transpose();
    for (Eigen::Index l = 0; l < n; ++l) {
      op.block(j * n, l * n, n, n) += a(l, j) * MatrixXd::Identity(n, n);
    }
  }
  const VectorXd rhs = -Eigen::Map<const VectorXd>(q.data(), n * n);
  const VectorXd sol = op.fullPivLu().solve(rhs);
  return symmetrized(Eigen::Map<const MatrixXd>(sol.data(), n, n));
}

double lyapunov_residual(const MatrixXd& a, const MatrixXd& p, const MatrixXd& q) {
  return (a.transpose() * p + p * a + q).norm();
}

MatrixXd segment_energy(const MatrixXd& a, double d) {
  const auto n = a.rows();
  if (a.cols() != n) throw StructuralError("segment_energy: A must be square");
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ContractViolation("segment_energy: dwell must be positive and finite");
  }
  // Chunks keep ||A|| h moderate so the block exponential stays well scaled;
  // S(h1 + h2) = S(h1) + e^{A^T h1} S(h2) e^{A h1}.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  const int chunks = std::max(1, static_cast<int>(std::ceil(norm1 * d / 4.0)));
  const double h = d / chunks;

  MatrixXd block = MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -a.transpose();
  block.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  block.bottomRightCorner(n, n) = a;
  const MatrixXd e = expm(h * block);
  const MatrixXd step = e.bottomRightCorner(n, n);
  const MatrixXd piece = symmetrized(step.transpose() * e.topRightCorner(n, n));

  MatrixXd total = piece;
  MatrixXd phi = step;
  for (int c = 1; c < chunks; ++c) {
    total += phi.transpose() * piece * phi;
    phi = step * phi;
  }
  return symmetrized(total);
}

GramOperator gram_of_signal(const SwitchedSystem& sys, const SwitchingSignal& sig) {
  if (!sys.all_matrix_like() || sys.dimension() == 0) {
    throw UnsupportedOperation(
        "gram_of_signal: needs a finite-dimensional system of matrix modes");
  }
  sys.check_signal(sig);
  const auto n = sys.dimension();
  MatrixXd phi = MatrixXd::Identity(n, n);
  MatrixXd b = MatrixXd::Zero(n, n);
  for (const auto& seg : sig.segments()) {
    const MatrixXd a = generator_matrix(sys.mode(seg.mode), n);
    b += phi.transpose() * segment_energy(a, seg.dwell) * phi;
    phi = expm(seg.dwell * a) * phi;
  }
  const MatrixXd a_tail = generator_matrix(sys.mode(sig.tail()), n);
  if (!is_hurwitz(a_tail)) {
    throw UnstableTailError("gram_of_signal: tail mode " + std::to_string(sig.tail()) +
                                " is not Hurwitz",
                            sig.tail());
  }
  b += phi.transpose() * lyapunov_solve(a_tail, MatrixXd::Identity(n, n)) * phi;
  return GramOperator{symmetrized(b), sig};
}

void check_gram(const GramOperator& g) {
  const double scale = std::max(g.b.norm(), std::numeric_limits<double>::min());
  if ((g.b - g.b.transpose()).norm() > 1e-12 * scale) {
    throw InvalidStateError("Gram operator is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(g.b, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidStateError("Gram operator has a negative eigenvalue");
  }
}

CandidateSet build_candidates(const SwitchedSystem& sys, const SignalFamily& fam,
                              std::span<const SwitchingSignal> extra, Exec exec) {
  const FamilyEnumerator en(fam);
  const auto total = static_cast<std::size_t>(en.size()) + extra.size();
  auto items = indexed_map<GramOperator>(
      total,
      [&](std::size_t i) {
        if (i < en.size()) return gram_of_signal(sys, en.at(i));
        return gram_of_signal(sys, extra[i - en.size()]);
      },
      exec);
  return CandidateSet{std::move(items)};
}

namespace {

void check_dims(const CandidateSet& cands, const VectorXd& x, const char* where) {
  if (cands.items.empty()) throw ContractViolation(std::string(where) + ": no candidates");
  if (x.size() != cands.dimension()) {
    throw StructuralError(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

double v_max(const CandidateSet& cands, const VectorXd& x) {
  check_dims(cands, x, "v_max");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : cands.items) best = std::max(best, x.dot(g.b * x));
  return best;
}

ArgmaxSet argmax_set(const CandidateSet& cands, const VectorXd& x, double tol) {
  check_dims(cands, x, "argmax_set");
  if (x.isZero(0.0)) {
    throw DegenerateInputError("argmax_set: x = 0, every candidate ties at 0");
  }
  const double top = v_max(cands, x);
  const double cut = top - tol * std::max(1.0, top);
  ArgmaxSet out{{}, tol};
  for (std::size_t i = 0; i < cands.items.size(); ++i) {
    if (x.dot(cands.items[i].b * x) >= cut) out.indices.push_back(i);
  }
  return out;
}

double directional_derivative(const CandidateSet& cands, const VectorXd& x,
                              const VectorXd& psi, double tol) {
  if (psi.size() != x.size()) throw StructuralError("directional_derivative: dimension mismatch");
  const auto active = argmax_set(cands, x, tol);
  double best = -std::numeric_limits<double>::infinity();
  for (auto i : active.indices) best = std::max(best, 2.0 * psi.dot(cands.items[i].b * x));
  return best;
}

}  // namespace swlyap
