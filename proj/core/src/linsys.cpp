#include "lcvx/linsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lcvx/errors.hpp"

namespace lcvx {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* name) {
  if (!m.allFinite()) {
    throw StructuralError(std::string(name) + " has non-finite entries");
  }
}

}  // namespace

LtiSystem::LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw StructuralError("A must be square with at least one row, got " +
                          std::to_string(a_.rows()) + "x" +
                          std::to_string(a_.cols()));
  }
  if (b_.rows() != a_.rows() || b_.cols() < 1) {
    throw StructuralError("B must be " + std::to_string(a_.rows()) +
                          "xm with m >= 1, got " + std::to_string(b_.rows()) +
                          "x" + std::to_string(b_.cols()));
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
}

ControllabilityReport controllability_rank(const LtiSystem& sys) {
  const int n = sys.states();
  const int m = sys.inputs();
  Eigen::MatrixXd kalman(n, n * m);
  Eigen::MatrixXd block = sys.b();
  for (int i = 0; i < n; ++i) {
    kalman.middleCols(i * m, m) = block;
    block = sys.a() * block;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(kalman);
  ControllabilityReport report;
  report.states = n;
  report.singular_values = svd.singularValues();
  const double sigma_max =
      report.singular_values.size() > 0 ? report.singular_values(0) : 0.0;
  report.tolerance = std::max(n, n + m) *
                     std::numeric_limits<double>::epsilon() * sigma_max;
  report.rank = 0;
  for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
    if (report.singular_values(i) > report.tolerance) ++report.rank;
  }
  report.is_controllable = report.rank == n;
  report.note =
      report.is_controllable
          ? "(A,B) controllable: normal w.r.t. conv(U), and the cost-augmented "
            "pair (A_e,B_e) is normal w.r.t. the relaxed epigraph set"
          : "(A,B) not controllable: normality is not certified";
  return report;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("matrix_exponential needs a square matrix");
  }
  if (!m.allFinite()) {
    throw StructuralError("matrix_exponential input has non-finite entries");
  }
  const Eigen::Index k = m.rows();
  if (k == 0) return m;

  // Pade(13, 13) numerator coefficients.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Eigen::MatrixXd a = m / std::ldexp(1.0, squarings);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;

  const Eigen::MatrixXd u_inner =
      a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
      b[3] * a2 + b[1] * id;
  const Eigen::MatrixXd u = a * u_inner;
  const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  // For triangular input the diagonal of exp is known exactly; resetting it
  // at every squaring stops rounding from compounding along it.
  const bool triangular = m.isUpperTriangular(0.0) || m.isLowerTriangular(0.0);
  const auto reset_diagonal = [&](int stage) {
    const double scale = std::ldexp(1.0, stage - squarings);
    for (Eigen::Index i = 0; i < k; ++i) r(i, i) = std::exp(m(i, i) * scale);
  };
  if (triangular) reset_diagonal(0);
  for (int i = 0; i < squarings; ++i) {
    r = r * r;
    if (triangular) reset_diagonal(i + 1);
  }
  return r;
}

DiscretizedSystem zoh_discretize(const LtiSystem& sys, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ArgumentError("dt must be positive and finite");
  }
  const int n = sys.states();
  const int m = sys.inputs();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = sys.a() * dt;
  block.topRightCorner(n, m) = sys.b() * dt;
  const Eigen::MatrixXd e = matrix_exponential(block);
  return DiscretizedSystem{e.topLeftCorner(n, n), e.topRightCorner(n, m), dt,
                           1, sys};
}

DiscretizedSystem zoh_discretize_horizon(const LtiSystem& sys, double horizon,
                                         int steps) {
  if (steps < 1) throw ArgumentError("number of steps must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ArgumentError("horizon must be positive and finite");
  }
  DiscretizedSystem d = zoh_discretize(sys, horizon / steps);
  d.steps = steps;
  return d;
}

AugmentedSystem augment(const LtiSystem& sys) {
  const int n = sys.states();
  const int m = sys.inputs();
  Eigen::MatrixXd a_e = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd b_e = Eigen::MatrixXd::Zero(n + 1, m + 1);
  a_e.topLeftCorner(n, n) = sys.a();
  b_e.topLeftCorner(n, m) = sys.b();
  b_e(n, m) = 1.0;
  LtiSystem augmented(a_e, b_e);
  return AugmentedSystem{a_e, b_e, sys, controllability_rank(sys),
                         controllability_rank(augmented)};
}

}  // namespace lcvx
