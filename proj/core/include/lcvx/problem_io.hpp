#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/lpsolve.hpp"

namespace lcvx {

/// Problem file contents.
///
/// JSON schema:
///   {
///     "A": {"rows": n, "cols": n, "data": [row-major values]},
///     "B": {"rows": n, "cols": m, "data": [row-major values]},
///     "input_set": {"m": m, "u_max": r, "W": [[w_1], [w_2], ...]},
///     "x0": [n values],
///     "xf": [n values],            optional, default 0
///     "t_f": seconds,
///     "N": steps,                  optional, default 400
///     "solver": {"tol_feas": .., "tol_gap": .., "max_iter": ..,
///                "time_limit": ..}, optional
///     "seeds": [integers]          optional
///   }
struct ProblemSpec {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  int m = 0;
  double u_max = 1.0;
  std::vector<Eigen::VectorXd> extra;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  double horizon = 0.0;
  int steps = 400;
  SolverOptions solver;
  std::vector<std::uint64_t> seeds;

  LtiSystem system() const;
  DiscreteInputSet input_set() const;

  bool operator==(const ProblemSpec& other) const;
};

/// Throws StructuralError with a field path on any schema or dimension error.
ProblemSpec problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemSpec& spec);

ProblemSpec read_problem_file(const std::filesystem::path& path);
void write_problem_file(const std::filesystem::path& path,
                        const ProblemSpec& spec);

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string problem_hash(const ProblemSpec& spec);

}  // namespace lcvx
