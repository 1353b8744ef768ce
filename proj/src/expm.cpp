#include "swlyap/expm.hpp"

#include <array>
#include <cmath>

#include "swlyap/errors.hpp"

namespace swlyap {

namespace {

using Eigen::MatrixXd;

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Largest 1-norms for which each degree meets unit roundoff without scaling.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
MatrixXd pade_low(const MatrixXd& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const MatrixXd ident = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  MatrixXd even_u = b[1] * ident;
  MatrixXd even_v = b[0] * ident;
  MatrixXd power = ident;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even_u += b[k + 1] * power;
    even_v += b[k] * power;
  }
  const MatrixXd u = a * even_u;
  return (even_v - u).partialPivLu().solve(even_v + u);
}

MatrixXd pade13(const MatrixXd& a) {
  const auto n = a.rows();
  const auto& b = kPade13;
  const MatrixXd ident = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  const MatrixXd a4 = a2 * a2;
  const MatrixXd a6 = a4 * a2;
  const MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
           b[3] * a2 + b[1] * ident);
  const MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                     b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw StructuralError("expm: matrix must be square");
  if (!a.allFinite()) throw InvalidStateError("expm: non-finite matrix entry");
  if (a.rows() == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= kTheta3) return pade_low(a, kPade3);
  if (norm1 <= kTheta5) return pade_low(a, kPade5);
  if (norm1 <= kTheta7) return pade_low(a, kPade7);
  if (norm1 <= kTheta9) return pade_low(a, kPade9);

  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  MatrixXd r = pade13(std::ldexp(1.0, -squarings) * a);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace swlyap
