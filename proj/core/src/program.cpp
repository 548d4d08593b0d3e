#include "lcvx/program.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lcvx/errors.hpp"

namespace lcvx {

namespace {

bool all_finite(const SparseMatrix& m) {
  for (Eigen::Index i = 0; i < m.nonZeros(); ++i) {
    if (!std::isfinite(m.valuePtr()[i])) return false;
  }
  return true;
}

void write_vector(std::ostream& os, const char* tag, const Eigen::VectorXd& v) {
  os << tag;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << ' ';
    if (std::isinf(v(i))) {
      os << (v(i) < 0 ? "-inf" : "inf");
    } else {
      os << v(i);
    }
  }
  os << '\n';
}

void write_triplets(std::ostream& os, const char* tag, const SparseMatrix& m) {
  os << tag << ' ' << m.nonZeros() << '\n';
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

void expect_tag(std::istream& is, const std::string& tag) {
  std::string got;
  if (!(is >> got) || got != tag) {
    throw StructuralError("program dump: expected '" + tag + "', got '" + got +
                          "'");
  }
}

double read_value(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw StructuralError("program dump: truncated vector");
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  if (token == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(token, &used);
  if (used != token.size()) {
    throw StructuralError("program dump: bad number '" + token + "'");
  }
  return v;
}

Eigen::VectorXd read_vector(std::istream& is, const std::string& tag,
                            Eigen::Index size) {
  expect_tag(is, tag);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = read_value(is);
  return v;
}

SparseMatrix read_triplets(std::istream& is, const std::string& tag,
                           Eigen::Index rows, Eigen::Index cols) {
  expect_tag(is, tag);
  long long nnz = 0;
  if (!(is >> nnz) || nnz < 0) {
    throw StructuralError("program dump: bad nonzero count for " + tag);
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    long long r = 0;
    long long c = 0;
    if (!(is >> r >> c)) throw StructuralError("program dump: truncated " + tag);
    const double v = read_value(is);
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      throw StructuralError("program dump: entry out of range in " + tag);
    }
    trips.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

void StandardFormProgram::check() const {
  const Eigen::Index n = c.size();
  if (eq.cols() != n || ineq.cols() != n) {
    throw StructuralError("constraint matrices must have one column per variable");
  }
  if (eq_rhs.size() != eq.rows()) {
    throw StructuralError("eq_rhs size does not match equality rows");
  }
  if (ineq_rhs.size() != ineq.rows()) {
    throw StructuralError("ineq_rhs size does not match inequality rows");
  }
  if (lower.size() != n) {
    throw StructuralError("lower bound vector must have one entry per variable");
  }
  if (!c.allFinite() || !eq_rhs.allFinite() || !ineq_rhs.allFinite()) {
    throw StructuralError("program vectors have non-finite entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isnan(lower(i)) || lower(i) == std::numeric_limits<double>::infinity()) {
      throw StructuralError("lower bound must be finite or -inf");
    }
  }
  if (!all_finite(eq) || !all_finite(ineq)) {
    throw StructuralError("constraint matrices have non-finite entries");
  }
}

void write_program(std::ostream& os, const StandardFormProgram& p) {
  p.check();
  const auto old_precision = os.precision(17);
  os << "lcvx-lp 1\n";
  os << "dims " << p.variables() << ' ' << p.equalities() << ' '
     << p.inequalities() << '\n';
  write_vector(os, "c", p.c);
  write_vector(os, "lower", p.lower);
  write_vector(os, "eq_rhs", p.eq_rhs);
  write_vector(os, "ineq_rhs", p.ineq_rhs);
  write_triplets(os, "eq", p.eq);
  write_triplets(os, "ineq", p.ineq);
  os.precision(old_precision);
}

StandardFormProgram read_program(std::istream& is) {
  expect_tag(is, "lcvx-lp");
  int version = 0;
  if (!(is >> version) || version != 1) {
    throw StructuralError("program dump: unsupported version");
  }
  expect_tag(is, "dims");
  long long n = 0;
  long long p = 0;
  long long q = 0;
  if (!(is >> n >> p >> q) || n < 0 || p < 0 || q < 0) {
    throw StructuralError("program dump: bad dims line");
  }
  StandardFormProgram out;
  out.c = read_vector(is, "c", n);
  out.lower = read_vector(is, "lower", n);
  out.eq_rhs = read_vector(is, "eq_rhs", p);
  out.ineq_rhs = read_vector(is, "ineq_rhs", q);
  out.eq = read_triplets(is, "eq", p, n);
  out.ineq = read_triplets(is, "ineq", q, n);
  out.check();
  return out;
}

}  // namespace lcvx
