#include "lcvx/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lcvx/errors.hpp"

namespace lcvx {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw StructuralError("problem file: missing field '" + path + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw StructuralError("problem file: '" + path + "' must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw StructuralError("problem file: '" + path + "' must be an integer");
  }
  return j.get<int>();
}

Eigen::VectorXd vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw StructuralError("problem file: '" + path + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& path) {
  const int rows = integer(field(j, "rows", path + "."), path + ".rows");
  const int cols = integer(field(j, "cols", path + "."), path + ".cols");
  const Eigen::VectorXd data = vector(field(j, "data", path + "."), path + ".data");
  if (rows < 1 || cols < 1 || data.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw StructuralError("problem file: '" + path + "' declares " +
                          std::to_string(rows) + "x" + std::to_string(cols) +
                          " but has " + std::to_string(data.size()) + " values");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = data(static_cast<Eigen::Index>(r) * cols + c);
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

LtiSystem ProblemSpec::system() const { return LtiSystem(a, b); }

DiscreteInputSet ProblemSpec::input_set() const {
  return DiscreteInputSet(m, u_max, extra);
}

bool ProblemSpec::operator==(const ProblemSpec& o) const {
  auto same_list = [](const std::vector<Eigen::VectorXd>& l,
                      const std::vector<Eigen::VectorXd>& r) {
    if (l.size() != r.size()) return false;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i].size() != r[i].size() || l[i] != r[i]) return false;
    }
    return true;
  };
  auto same_mat = [](const Eigen::MatrixXd& l, const Eigen::MatrixXd& r) {
    return l.rows() == r.rows() && l.cols() == r.cols() && l == r;
  };
  return same_mat(a, o.a) && same_mat(b, o.b) && m == o.m && u_max == o.u_max &&
         same_list(extra, o.extra) && same_mat(x0, o.x0) && same_mat(xf, o.xf) &&
         horizon == o.horizon && steps == o.steps &&
         solver.tol_feas == o.solver.tol_feas && solver.tol_gap == o.solver.tol_gap &&
         solver.max_iter == o.solver.max_iter &&
         solver.time_limit == o.solver.time_limit && seeds == o.seeds;
}

ProblemSpec problem_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("problem file: top level must be an object");
  ProblemSpec spec;
  spec.a = matrix(field(j, "A", ""), "A");
  spec.b = matrix(field(j, "B", ""), "B");
  const int n = static_cast<int>(spec.a.rows());
  if (spec.a.cols() != n) throw StructuralError("problem file: A must be square");
  if (spec.b.rows() != n) {
    throw StructuralError("problem file: B must have " + std::to_string(n) + " rows");
  }

  const json& set = field(j, "input_set", "");
  spec.m = integer(field(set, "m", "input_set."), "input_set.m");
  spec.u_max = number(field(set, "u_max", "input_set."), "input_set.u_max");
  if (spec.m != spec.b.cols()) {
    throw StructuralError("problem file: input_set.m = " + std::to_string(spec.m) +
                          " but B has " + std::to_string(spec.b.cols()) + " columns");
  }
  if (set.contains("W")) {
    const json& w = set.at("W");
    if (!w.is_array()) throw StructuralError("problem file: 'input_set.W' must be an array");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string path = "input_set.W[" + std::to_string(i) + "]";
      Eigen::VectorXd p = vector(w[i], path);
      if (p.size() != spec.m) {
        throw StructuralError("problem file: '" + path + "' must have length " +
                              std::to_string(spec.m));
      }
      spec.extra.push_back(std::move(p));
    }
  }

  spec.x0 = vector(field(j, "x0", ""), "x0");
  if (spec.x0.size() != n) {
    throw StructuralError("problem file: x0 must have length " + std::to_string(n));
  }
  spec.xf = j.contains("xf") ? vector(j.at("xf"), "xf") : Eigen::VectorXd::Zero(n);
  if (spec.xf.size() != n) {
    throw StructuralError("problem file: xf must have length " + std::to_string(n));
  }
  spec.horizon = number(field(j, "t_f", ""), "t_f");
  if (j.contains("N")) spec.steps = integer(j.at("N"), "N");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (!s.is_object()) throw StructuralError("problem file: 'solver' must be an object");
    if (s.contains("tol_feas")) spec.solver.tol_feas = number(s.at("tol_feas"), "solver.tol_feas");
    if (s.contains("tol_gap")) spec.solver.tol_gap = number(s.at("tol_gap"), "solver.tol_gap");
    if (s.contains("max_iter")) spec.solver.max_iter = integer(s.at("max_iter"), "solver.max_iter");
    if (s.contains("time_limit")) {
      spec.solver.time_limit = number(s.at("time_limit"), "solver.time_limit");
    }
  }
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (!s.is_array()) throw StructuralError("problem file: 'seeds' must be an array");
    for (const auto& v : s) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw StructuralError("problem file: seeds must be non-negative integers");
      }
      spec.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  return spec;
}

json problem_to_json(const ProblemSpec& spec) {
  json w = json::array();
  for (const auto& p : spec.extra) w.push_back(vector_json(p));
  json solver = {{"tol_feas", spec.solver.tol_feas},
                 {"tol_gap", spec.solver.tol_gap},
                 {"max_iter", spec.solver.max_iter}};
  if (spec.solver.time_limit) solver["time_limit"] = *spec.solver.time_limit;
  json out = {{"A", matrix_json(spec.a)},
              {"B", matrix_json(spec.b)},
              {"input_set", {{"m", spec.m}, {"u_max", spec.u_max}, {"W", w}}},
              {"x0", vector_json(spec.x0)},
              {"xf", vector_json(spec.xf)},
              {"t_f", spec.horizon},
              {"N", spec.steps},
              {"solver", solver}};
  if (!spec.seeds.empty()) out["seeds"] = spec.seeds;
  return out;
}

ProblemSpec read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open problem file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw StructuralError("problem file " + path.string() + ": " + e.what());
  }
  return problem_from_json(j);
}

void write_problem_file(const std::filesystem::path& path, const ProblemSpec& spec) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write problem file " + path.string());
  out << problem_to_json(spec).dump(2) << '\n';
}

std::string problem_hash(const ProblemSpec& spec) {
  const std::string text = problem_to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lcvx
