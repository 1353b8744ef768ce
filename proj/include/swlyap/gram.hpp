#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "swlyap/kernels.hpp"
#include "swlyap/switching.hpp"

namespace swlyap {

/// B with <x, B x> = int_0^inf ||T_sigma(t) x||^2 dt.
struct GramOperator {
  Eigen::MatrixXd b;
  SwitchingSignal source;
};

/// Finite stand-in for the set of all Gram operators of a system.
struct CandidateSet {
  std::vector<GramOperator> items;

  Eigen::Index dimension() const;
};

struct ArgmaxSet {
  std::vector<std::size_t> indices;
  double tolerance;
};

/// Solves A^T P + P A = -Q through the Kronecker-vectorized linear system.
/// Throws UnstableTailError unless every eigenvalue of A has real part < -1e-12.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

/// || A^T P + P A + Q ||_F.
double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& p,
                         const Eigen::MatrixXd& q);

/// int_0^d e^{A^T t} e^{A t} dt via the exponential of [[-A^T, I], [0, A]].
Eigen::MatrixXd segment_energy(const Eigen::MatrixXd& a, double d);

/// Sum over segments of Phi_k^T segment_energy(A_k, d_k) Phi_k plus
/// Phi^T lyapunov_solve(A_tail, I) Phi for the tail. Matrix and
/// diagonal-group modes only.
GramOperator gram_of_signal(const SwitchedSystem& sys, const SwitchingSignal& sig);

/// Throws InvalidStateError when B is not symmetric (1e-12 relative) or has an
/// eigenvalue below -1e-10.
void check_gram(const GramOperator& g);

/// Gram operators of every family signal, in enumeration order, then `extra`.
CandidateSet build_candidates(const SwitchedSystem& sys, const SignalFamily& fam,
                              std::span<const SwitchingSignal> extra = {},
                              Exec exec = Exec::parallel);

/// max over candidates of <x, B x>.
double v_max(const CandidateSet& cands, const Eigen::VectorXd& x);

/// Candidates within tol * max(1, v_max) of the max. Throws
/// DegenerateInputError for x = 0.
ArgmaxSet argmax_set(const CandidateSet& cands, const Eigen::VectorXd& x, double tol = 1e-9);

/// max over the argmax set of 2 <psi, B x>.
double directional_derivative(const CandidateSet& cands, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& psi, double tol = 1e-9);

}  // namespace swlyap
