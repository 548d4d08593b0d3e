#pragma once

#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lcvx {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// min c'z  s.t.  E z = e,  G z <= g,  z >= lower.
///
/// Entries of `lower` equal to -infinity mark free variables.
struct StandardFormProgram {
  Eigen::VectorXd c;
  SparseMatrix eq;
  Eigen::VectorXd eq_rhs;
  SparseMatrix ineq;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd lower;

  Eigen::Index variables() const { return c.size(); }
  Eigen::Index equalities() const { return eq.rows(); }
  Eigen::Index inequalities() const { return ineq.rows(); }

  /// Throws StructuralError on inconsistent sizes or non-finite data.
  void check() const;
};

/// Plain-text dump for cross-checking with external solvers:
///
///   lcvx-lp 1
///   dims <variables> <equalities> <inequalities>
///   c <value> ...              (one line, `variables` values)
///   lower <value|-inf> ...     (one line, `variables` values)
///   eq_rhs <value> ...         (one line, `equalities` values)
///   ineq_rhs <value> ...       (one line, `inequalities` values)
///   eq <nnz>                   followed by nnz lines "row col value"
///   ineq <nnz>                 followed by nnz lines "row col value"
///
/// Values are written with 17 significant digits so a round trip is exact.
void write_program(std::ostream& os, const StandardFormProgram& p);
StandardFormProgram read_program(std::istream& is);

}  // namespace lcvx
