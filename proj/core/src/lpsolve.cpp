#include "lcvx/lpsolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/OrderingMethods>

#include "lcvx/errors.hpp"

namespace lcvx {

namespace {

using Vec = Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

// Ray quality still accepted as an infeasibility certificate when the
// iteration breaks down before reaching tol_feas.
constexpr double kInaccurateRayTol = 1e-4;

constexpr double kStaticReg = 1e-8;

// Conic form used internally:
//   min c'x  s.t.  A x = b,  G x + s = h,  s >= 0
// with the variable lower bounds appended to G as rows -x_i <= -lower_i.
struct ConicData {
  SparseMatrix a;
  Vec b;
  SparseMatrix g;
  Vec h;
  Vec c;
  Eigen::Index ineq_rows = 0;
  std::vector<int> bounded;
};

ConicData to_conic(const StandardFormProgram& p) {
  ConicData d;
  d.a = p.eq;
  d.b = p.eq_rhs;
  d.c = p.c;
  d.ineq_rows = p.inequalities();
  for (Eigen::Index i = 0; i < p.variables(); ++i) {
    if (std::isfinite(p.lower(i))) d.bounded.push_back(static_cast<int>(i));
  }
  const Eigen::Index q = d.ineq_rows + static_cast<Eigen::Index>(d.bounded.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(p.ineq.nonZeros()) + d.bounded.size());
  for (int col = 0; col < p.ineq.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(p.ineq, col); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  d.h.resize(q);
  d.h.head(d.ineq_rows) = p.ineq_rhs;
  for (std::size_t j = 0; j < d.bounded.size(); ++j) {
    const int row = static_cast<int>(d.ineq_rows + static_cast<Eigen::Index>(j));
    trips.emplace_back(row, d.bounded[j], -1.0);
    d.h(row) = -p.lower(d.bounded[j]);
  }
  d.g.resize(q, p.variables());
  d.g.setFromTriplets(trips.begin(), trips.end());
  d.g.makeCompressed();
  d.a.makeCompressed();
  return d;
}

// Up-looking sparse LDL' of a symmetric matrix given by its upper triangle
// (column-major, already permuted). Pivots whose sign disagrees with the
// expected inertia, or that are nearly zero, are replaced by sign * delta.
class LdlFactor {
 public:
  void analyze(const SparseMatrix& upper) {
    n_ = static_cast<int>(upper.cols());
    parent_.assign(static_cast<std::size_t>(n_), -1);
    std::vector<int> mark(static_cast<std::size_t>(n_), -1);
    std::vector<int> count(static_cast<std::size_t>(n_), 0);
    const int* outer = upper.outerIndexPtr();
    const int* inner = upper.innerIndexPtr();
    for (int j = 0; j < n_; ++j) {
      mark[static_cast<std::size_t>(j)] = j;
      for (int k = outer[j]; k < outer[j + 1]; ++k) {
        int i = inner[k];
        if (i >= j) continue;
        while (mark[static_cast<std::size_t>(i)] != j) {
          if (parent_[static_cast<std::size_t>(i)] == -1) parent_[static_cast<std::size_t>(i)] = j;
          ++count[static_cast<std::size_t>(i)];
          mark[static_cast<std::size_t>(i)] = j;
          i = parent_[static_cast<std::size_t>(i)];
        }
      }
    }
    col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < n_; ++i) {
      col_start_[static_cast<std::size_t>(i) + 1] =
          col_start_[static_cast<std::size_t>(i)] + count[static_cast<std::size_t>(i)];
    }
    const auto nnz = static_cast<std::size_t>(col_start_.back());
    l_rows_.assign(nnz, 0);
    l_vals_.assign(nnz, 0.0);
    d_.assign(static_cast<std::size_t>(n_), 0.0);
    d_inv_.assign(static_cast<std::size_t>(n_), 0.0);
  }

  // signs[k] is +1 or -1, the expected sign of pivot k.
  bool factorize(const SparseMatrix& upper, const std::vector<double>& signs, double eps,
                 double delta) {
    const int* outer = upper.outerIndexPtr();
    const int* inner = upper.innerIndexPtr();
    const double* vals = upper.valuePtr();
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    std::vector<char> used(static_cast<std::size_t>(n_), 0);
    std::vector<int> pattern;
    std::vector<int> stack;
    std::vector<int> next = col_start_;
    pattern.reserve(static_cast<std::size_t>(n_));
    dynamic_pivots_ = 0;
    for (int k = 0; k < n_; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      pattern.clear();
      double dk = 0.0;
      for (int p = outer[k]; p < outer[k + 1]; ++p) {
        int i = inner[p];
        if (i == k) {
          dk += vals[p];
          continue;
        }
        y[static_cast<std::size_t>(i)] += vals[p];
        stack.clear();
        while (i != -1 && i < k && !used[static_cast<std::size_t>(i)]) {
          used[static_cast<std::size_t>(i)] = 1;
          stack.push_back(i);
          i = parent_[static_cast<std::size_t>(i)];
        }
        while (!stack.empty()) {
          pattern.push_back(stack.back());
          stack.pop_back();
        }
      }
      // Columns must be eliminated in topological order of the tree: the
      // reverse of the order in which the paths were discovered.
      for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        const int c = *it;
        const auto uc = static_cast<std::size_t>(c);
        const double yc = y[uc];
        const int end = next[uc];
        for (int j = col_start_[uc]; j < end; ++j) {
          y[static_cast<std::size_t>(l_rows_[static_cast<std::size_t>(j)])] -=
              l_vals_[static_cast<std::size_t>(j)] * yc;
        }
        const double lkc = yc * d_inv_[uc];
        l_rows_[static_cast<std::size_t>(end)] = k;
        l_vals_[static_cast<std::size_t>(end)] = lkc;
        dk -= yc * lkc;
        ++next[uc];
        y[uc] = 0.0;
        used[uc] = 0;
      }
      if (!std::isfinite(dk)) return false;
      if (signs[uk] * dk <= eps) {
        dk = signs[uk] * delta;
        ++dynamic_pivots_;
      }
      d_[uk] = dk;
      d_inv_[uk] = 1.0 / dk;
    }
    return true;
  }

  void solve_in_place(Vec& x) const {
    for (int i = 0; i < n_; ++i) {
      const double xi = x(i);
      for (int j = col_start_[static_cast<std::size_t>(i)];
           j < col_start_[static_cast<std::size_t>(i) + 1]; ++j) {
        x(l_rows_[static_cast<std::size_t>(j)]) -= l_vals_[static_cast<std::size_t>(j)] * xi;
      }
    }
    for (int i = 0; i < n_; ++i) x(i) *= d_inv_[static_cast<std::size_t>(i)];
    for (int i = n_ - 1; i >= 0; --i) {
      double xi = x(i);
      for (int j = col_start_[static_cast<std::size_t>(i)];
           j < col_start_[static_cast<std::size_t>(i) + 1]; ++j) {
        xi -= l_vals_[static_cast<std::size_t>(j)] * x(l_rows_[static_cast<std::size_t>(j)]);
      }
      x(i) = xi;
    }
  }

  int dynamic_pivots() const { return dynamic_pivots_; }

 private:
  int n_ = 0;
  std::vector<int> parent_;
  std::vector<int> col_start_;
  std::vector<int> l_rows_;
  std::vector<double> l_vals_;
  std::vector<double> d_;
  std::vector<double> d_inv_;
  int dynamic_pivots_ = 0;
};

// Quasi-definite KKT matrix
//   [ rho I    A'        G'          ]
//   [ A       -delta I   0           ]
//   [ G        0        -(W + delta) ]
// permuted by AMD and stored as its upper triangle. Solves are refined
// against the matrix with rho = delta = 0.
class KktSystem {
 public:
  KktSystem(const ConicData& d, double reg) : d_(d), reg_(reg) {
    n_ = d.c.size();
    p_ = d.a.rows();
    q_ = d.g.rows();
    const Eigen::Index dim = n_ + p_ + q_;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim + d.a.nonZeros() + d.g.nonZeros()));
    for (Eigen::Index i = 0; i < n_; ++i) trips.emplace_back(i, i, reg_);
    for (int col = 0; col < d.a.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(d.a, col); it; ++it) {
        trips.emplace_back(col, n_ + it.row(), it.value());
      }
    }
    for (int col = 0; col < d.g.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(d.g, col); it; ++it) {
        trips.emplace_back(col, n_ + p_ + it.row(), it.value());
      }
    }
    for (Eigen::Index i = 0; i < p_; ++i) trips.emplace_back(n_ + i, n_ + i, -reg_);
    for (Eigen::Index i = 0; i < q_; ++i) {
      trips.emplace_back(n_ + p_ + i, n_ + p_ + i, -1.0 - reg_);
    }
    SparseMatrix upper(dim, dim);
    upper.setFromTriplets(trips.begin(), trips.end());

    const SparseMatrix full = upper.selfadjointView<Eigen::Upper>();
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv;
    Eigen::AMDOrdering<int> amd;
    amd(full, pinv);
    perm_ = pinv.inverse();
    k_.resize(dim, dim);
    k_.selfadjointView<Eigen::Upper>() = upper.selfadjointView<Eigen::Upper>().twistedBy(perm_);
    k_.makeCompressed();

    signs_.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      signs_[static_cast<std::size_t>(perm_.indices()(i))] = i < n_ ? 1.0 : -1.0;
    }
    // The symmetric permutation may leave row indices unsorted within a
    // column, which rules out coeffRef's binary search.
    std::vector<double*> permuted_diag(static_cast<std::size_t>(dim), nullptr);
    for (int col = 0; col < k_.outerSize(); ++col) {
      for (int pos = k_.outerIndexPtr()[col]; pos < k_.outerIndexPtr()[col + 1]; ++pos) {
        if (k_.innerIndexPtr()[pos] == col) {
          permuted_diag[static_cast<std::size_t>(col)] = k_.valuePtr() + pos;
        }
      }
    }
    diag_.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      diag_[static_cast<std::size_t>(i)] =
          permuted_diag[static_cast<std::size_t>(perm_.indices()(i))];
    }
    ldl_.analyze(k_);
    w_ = Vec::Ones(q_);
  }

  bool factor(const Vec& w) {
    w_ = w;
    for (Eigen::Index i = 0; i < q_; ++i) {
      *diag_[static_cast<std::size_t>(n_ + p_ + i)] = -w(i) - reg_;
    }
    return ldl_.factorize(k_, signs_, kPivotEps, kPivotDelta);
  }

  // Unregularized K * v.
  Vec apply(const Vec& v) const {
    Vec out(v.size());
    const auto vx = v.head(n_);
    const auto vy = v.segment(n_, p_);
    const auto vz = v.tail(q_);
    out.head(n_) = d_.a.transpose() * vy + d_.g.transpose() * vz;
    out.segment(n_, p_) = d_.a * vx;
    out.tail(q_) = d_.g * vx - w_.cwiseProduct(vz);
    return out;
  }

  bool solve(const Vec& rhs, Vec& sol) const {
    sol = raw_solve(rhs);
    if (!sol.allFinite()) return false;
    const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxRefine; ++it) {
      const Vec res = rhs - apply(sol);
      const double err = res.lpNorm<Eigen::Infinity>();
      if (err <= 1e-14 * scale || err >= 0.5 * prev) break;
      prev = err;
      const Vec corr = raw_solve(res);
      if (!corr.allFinite()) return false;
      sol += corr;
    }
    // A solve that fits the right-hand side worse than the zero vector means
    // the factorization has lost the system.
    if (!sol.allFinite()) return false;
    return (rhs - apply(sol)).lpNorm<Eigen::Infinity>() < scale;
  }

 private:
  static constexpr int kMaxRefine = 12;
  static constexpr double kPivotEps = 1e-13;
  static constexpr double kPivotDelta = 1e-7;

  Vec raw_solve(const Vec& rhs) const {
    Vec t = perm_ * rhs;
    ldl_.solve_in_place(t);
    return perm_.transpose() * t;
  }

  const ConicData& d_;
  double reg_;
  Eigen::Index n_ = 0;
  Eigen::Index p_ = 0;
  Eigen::Index q_ = 0;
  SparseMatrix k_;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_;
  std::vector<double> signs_;
  std::vector<double*> diag_;  // diagonal entries of k_, in unpermuted order
  Vec w_;
  LdlFactor ldl_;
};

// Largest alpha in (0, 1] with v + alpha dv >= 0.
double max_step(const Vec& v, const Vec& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

double max_step(double v, double dv) {
  return dv < 0.0 ? std::min(1.0, -v / dv) : 1.0;
}

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

void SolverOptions::check() const {
  if (!(tol_feas > 0.0) || !(tol_gap > 0.0)) {
    throw ArgumentError("solver tolerances must be positive");
  }
  if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
  if (time_limit && !(*time_limit > 0.0)) {
    throw ArgumentError("time_limit must be positive");
  }
}

bool LpResult::has_duals() const {
  return status == SolveStatus::Optimal && dual_bounds.size() == primal.size();
}

LpResult solve_lp(const StandardFormProgram& prog, const SolverOptions& opts) {
  prog.check();
  opts.check();
  const auto start = Clock::now();

  const ConicData d = to_conic(prog);
  const Eigen::Index n = d.c.size();
  const Eigen::Index p = d.a.rows();
  const Eigen::Index q = d.g.rows();

  LpResult result;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.solve_time = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  KktSystem kkt(d, kStaticReg);
  auto solve3 = [&](const Vec& rx, const Vec& ry, const Vec& rz, Vec& dx, Vec& dy,
                    Vec& dz) {
    Vec rhs(n + p + q);
    rhs << rx, ry, rz;
    Vec sol;
    if (!kkt.solve(rhs, sol)) return false;
    dx = sol.head(n);
    dy = sol.segment(n, p);
    dz = sol.tail(q);
    return true;
  };

  // Initial point: least-squares primal and minimum-norm dual, shifted into
  // the interior of the cone.
  Vec x(n), y(p), z(q), s(q);
  double tau = 1.0;
  double kappa = 1.0;
  {
    if (!kkt.factor(Vec::Ones(q))) return finish(SolveStatus::NumericalFailure);
    Vec tx, ty, tz;
    if (!solve3(Vec::Zero(n), d.b, d.h, tx, ty, tz)) {
      return finish(SolveStatus::NumericalFailure);
    }
    x = tx;
    s = -tz;
    if (q > 0) {
      const double alpha_p = -s.minCoeff();
      if (alpha_p >= 0.0) s.array() += 1.0 + alpha_p;
    }
    if (!solve3(-d.c, Vec::Zero(p), Vec::Zero(q), tx, ty, tz)) {
      return finish(SolveStatus::NumericalFailure);
    }
    y = ty;
    z = tz;
    if (q > 0) {
      const double alpha_d = -z.minCoeff();
      if (alpha_d >= 0.0) z.array() += 1.0 + alpha_d;
    }
  }

  const double scale_b = 1.0 + inf_norm(d.b);
  const double scale_h = 1.0 + inf_norm(d.h);
  const double scale_c = 1.0 + inf_norm(d.c);
  const double degree = static_cast<double>(q + 1);

  struct Ray {
    double ratio = std::numeric_limits<double>::infinity();
    Vec x, y, z;
    double tau = 1.0;
  };
  Ray best_primal_ray;
  Ray best_dual_ray;
  auto primal_infeasible = [&](const Ray& r) {
    const double scale = -(d.b.dot(r.y) + d.h.dot(r.z));
    result.certificate_eq = -r.y / scale;
    result.certificate_ineq = r.z.head(d.ineq_rows) / scale;
    result.certificate_bounds = Vec::Zero(n);
    for (std::size_t j = 0; j < d.bounded.size(); ++j) {
      result.certificate_bounds(d.bounded[j]) =
          r.z(d.ineq_rows + static_cast<Eigen::Index>(j)) / scale;
    }
    result.primal = r.x / r.tau;
    return finish(SolveStatus::PrimalInfeasible);
  };
  auto dual_infeasible = [&](const Ray& r) {
    result.primal = r.x / -d.c.dot(r.x);  // improving ray
    return finish(SolveStatus::DualInfeasible);
  };
  // Exit after a numerical breakdown: a ray that was already nearly a
  // certificate is reported as one, otherwise the failure stands.
  auto numerical_failure = [&]() {
    if (best_primal_ray.ratio <= kInaccurateRayTol) return primal_infeasible(best_primal_ray);
    if (best_dual_ray.ratio <= kInaccurateRayTol) return dual_infeasible(best_dual_ray);
    return finish(SolveStatus::NumericalFailure);
  };

  int stalls = 0;
  for (int iter = 0;; ++iter) {
    result.iterations = iter;

    const Vec r_x = d.a.transpose() * y + d.g.transpose() * z + d.c * tau;
    const Vec r_y = d.a * x - d.b * tau;
    const Vec r_z = s + d.g * x - d.h * tau;
    const double cx = d.c.dot(x);
    const double by_hz = d.b.dot(y) + d.h.dot(z);
    const double r_tau = kappa + cx + by_hz;
    const double mu = (s.dot(z) + tau * kappa) / degree;

    // Normalized iterate.
    const double pres = std::max(inf_norm(r_y) / tau / scale_b,
                                 inf_norm(r_z) / tau / scale_h);
    const double dres = inf_norm(r_x) / tau / scale_c;
    const double pcost = cx / tau;
    const double dcost = -by_hz / tau;
    const double sz = s.dot(z) / (tau * tau);

    IterationLog entry;
    entry.iteration = iter;
    entry.primal_objective = pcost;
    entry.dual_objective = dcost;
    entry.primal_residual = pres;
    entry.dual_residual = dres;
    entry.mu = mu;
    result.log.push_back(entry);

    const double gap_scale = 1.0 + std::min(std::abs(pcost), std::abs(dcost));
    if (pres <= opts.tol_feas && dres <= opts.tol_feas &&
        std::abs(pcost - dcost) <= opts.tol_gap * gap_scale &&
        sz <= opts.tol_gap * gap_scale) {
      result.primal = x / tau;
      result.dual_eq = -y / tau;
      result.dual_ineq = z.head(d.ineq_rows) / tau;
      result.dual_bounds = Vec::Zero(n);
      for (std::size_t j = 0; j < d.bounded.size(); ++j) {
        result.dual_bounds(d.bounded[j]) =
            z(d.ineq_rows + static_cast<Eigen::Index>(j)) / tau;
      }
      result.objective = pcost;
      result.dual_objective = dcost;
      return finish(SolveStatus::Optimal);
    }

    // Infeasibility certificates (only once the embedding leans that way).
    // The best ray seen so far is kept for a reduced-accuracy verdict if the
    // iteration later breaks down numerically.
    if (tau < kappa) {
      if (by_hz < 0.0) {
        const double ratio =
            inf_norm(d.a.transpose() * y + d.g.transpose() * z) / -by_hz;
        if (ratio < best_primal_ray.ratio) {
          best_primal_ray = {ratio, x, y, z, tau};
          if (ratio <= opts.tol_feas) return primal_infeasible(best_primal_ray);
        }
      }
      if (cx < 0.0) {
        const double ratio = std::max(inf_norm(d.a * x), inf_norm(d.g * x + s)) / -cx;
        if (ratio < best_dual_ray.ratio) {
          best_dual_ray = {ratio, x, y, z, tau};
          if (ratio <= opts.tol_feas) return dual_infeasible(best_dual_ray);
        }
      }
    }

    if (iter >= opts.max_iter) {
      result.primal = x / tau;
      return finish(SolveStatus::IterationLimit);
    }
    if (opts.time_limit &&
        std::chrono::duration<double>(Clock::now() - start).count() > *opts.time_limit) {
      result.primal = x / tau;
      return finish(SolveStatus::IterationLimit);
    }

    const Vec w = s.cwiseQuotient(z);
    if (!w.allFinite() || !kkt.factor(w)) {
      result.primal = x / tau;
      return numerical_failure();
    }

    // Direction for the tau column, shared by predictor and corrector.
    Vec x2, y2, z2;
    if (!solve3(-d.c, d.b, d.h, x2, y2, z2)) {
      result.primal = x / tau;
      return numerical_failure();
    }
    const double denom = d.c.dot(x2) + d.b.dot(y2) + d.h.dot(z2) - kappa / tau;

    // ds_rhs, dk_rhs: right-hand sides of Z ds + S dz = ds_rhs and
    // tau dkappa + kappa dtau = dk_rhs.
    auto direction = [&](double sigma, const Vec& ds_rhs, double dk_rhs, Vec& dx,
                         Vec& dy, Vec& dz, Vec& ds, double& dtau,
                         double& dkappa) {
      const double f = 1.0 - sigma;
      Vec x1, y1, z1;
      if (!solve3(-f * r_x, -f * r_y, -f * r_z - ds_rhs.cwiseQuotient(z), x1, y1,
                  z1)) {
        return false;
      }
      dtau = (-f * r_tau - dk_rhs / tau - d.c.dot(x1) - d.b.dot(y1) - d.h.dot(z1)) /
             denom;
      dx = x1 + dtau * x2;
      dy = y1 + dtau * y2;
      dz = z1 + dtau * z2;
      ds = (ds_rhs - s.cwiseProduct(dz)).cwiseQuotient(z);
      dkappa = (dk_rhs - kappa * dtau) / tau;
      return dx.allFinite() && dy.allFinite() && dz.allFinite() &&
             std::isfinite(dtau) && std::isfinite(dkappa);
    };
    auto step_length = [&](const Vec& ds, const Vec& dz, double dtau,
                           double dkappa) {
      return std::min({max_step(s, ds), max_step(z, dz), max_step(tau, dtau),
                       max_step(kappa, dkappa)});
    };

    // Predictor.
    Vec dx, dy, dz, ds;
    double dtau = 0.0;
    double dkappa = 0.0;
    const Vec sz_prod = s.cwiseProduct(z);
    if (!direction(0.0, -sz_prod, -tau * kappa, dx, dy, dz, ds, dtau, dkappa)) {
      result.primal = x / tau;
      return numerical_failure();
    }
    const double alpha_aff = step_length(ds, dz, dtau, dkappa);
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // Corrector.
    const Vec ds_rhs = -sz_prod + Vec::Constant(q, sigma * mu) - ds.cwiseProduct(dz);
    const double dk_rhs = -tau * kappa + sigma * mu - dtau * dkappa;
    if (!direction(sigma, ds_rhs, dk_rhs, dx, dy, dz, ds, dtau, dkappa)) {
      result.primal = x / tau;
      return numerical_failure();
    }
    const double alpha = std::min(1.0, 0.99 * step_length(ds, dz, dtau, dkappa));
    result.log.back().step = alpha;

    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;

    stalls = alpha < 1e-8 ? stalls + 1 : 0;
    if (stalls >= 3 || !(tau > 0.0) || !(kappa > 0.0)) {
      result.primal = x / tau;
      return numerical_failure();
    }
  }
}

double KktReport::max_residual() const {
  return std::max({primal_eq, primal_ineq, bound_violation, dual_residual, dual_sign,
                   complementarity});
}

KktReport kkt_report(const StandardFormProgram& p, const LpResult& r) {
  p.check();
  const Eigen::Index n = p.variables();
  if (r.primal.size() != n || r.dual_eq.size() != p.equalities() ||
      r.dual_ineq.size() != p.inequalities() || r.dual_bounds.size() != n) {
    throw StructuralError("kkt_report needs primal and dual vectors of matching size");
  }
  KktReport out;
  const Vec& z = r.primal;
  const Vec& y = r.dual_eq;
  const Vec& lambda = r.dual_ineq;
  const Vec& w = r.dual_bounds;

  out.primal_eq = inf_norm(p.eq * z - p.eq_rhs);
  const Vec ineq_slack = p.ineq_rhs - p.ineq * z;
  out.primal_ineq = ineq_slack.size() ? std::max(0.0, -ineq_slack.minCoeff()) : 0.0;
  out.dual_residual =
      inf_norm(p.c - p.eq.transpose() * y + p.ineq.transpose() * lambda - w);
  double sign = 0.0;
  if (lambda.size()) sign = std::max(sign, -lambda.minCoeff());
  if (w.size()) sign = std::max(sign, -w.minCoeff());
  out.dual_sign = sign;

  double comp = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    comp = std::max(comp, std::abs(lambda(i) * ineq_slack(i)));
  }
  double bound_violation = 0.0;
  double lower_dot_w = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(p.lower(j))) {
      bound_violation = std::max(bound_violation, p.lower(j) - z(j));
      comp = std::max(comp, std::abs(w(j) * (z(j) - p.lower(j))));
      lower_dot_w += p.lower(j) * w(j);
    } else {
      // A free variable cannot carry a bound multiplier.
      out.dual_residual = std::max(out.dual_residual, std::abs(w(j)));
    }
  }
  out.bound_violation = bound_violation;
  out.complementarity = comp;
  out.primal_objective = p.c.dot(z);
  out.dual_objective = p.eq_rhs.dot(y) - p.ineq_rhs.dot(lambda) + lower_dot_w;
  out.gap = out.primal_objective - out.dual_objective;
  return out;
}

}  // namespace lcvx
