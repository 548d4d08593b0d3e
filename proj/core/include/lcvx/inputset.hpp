#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lcvx {

/// Finite input set {0} U {+-u_max e_i} U W.
///
/// The materialized point list is ordered 0, +u_max e_1, -u_max e_1, ...,
/// +u_max e_m, -u_max e_m, then the entries of W in the given order. W points
/// that coincide (within tol_geom) with an earlier point are dropped from the
/// list and counted in duplicates_dropped().
class DiscreteInputSet {
 public:
  DiscreteInputSet(int m, double u_max, std::vector<Eigen::VectorXd> extra = {});

  int dimension() const { return m_; }
  double u_max() const { return u_max_; }
  const std::vector<Eigen::VectorXd>& extra() const { return extra_; }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  /// Membership and duplicate tolerance, 1e-9 * max(1, u_max).
  double tol_geom() const;

 private:
  int m_;
  double u_max_;
  std::vector<Eigen::VectorXd> extra_;
  std::vector<Eigen::VectorXd> points_;
  std::size_t duplicates_dropped_ = 0;
};

/// Closed 1-norm ball {u : ||u||_1 <= radius}.
class CrossPolytope {
 public:
  CrossPolytope(int m, double radius);

  int dimension() const { return m_; }
  double radius() const { return radius_; }
  bool contains(const Eigen::VectorXd& u, double tol) const;
  /// +r e_1, -r e_1, ..., +r e_m, -r e_m.
  std::vector<Eigen::VectorXd> vertices() const;

 private:
  int m_;
  double radius_;
};

struct SetViolation {
  std::size_t index = 0;  // position in W
  Eigen::VectorXd point;
  double norm1 = 0.0;
};

struct ValidationReport {
  bool valid = false;
  std::vector<SetViolation> violations;
  std::size_t point_count = 0;
  std::size_t duplicates_dropped = 0;
  bool axis_vertices_present = false;
  std::string summary;
};

/// Checks that every W point lies in the 1-ball of radius u_max and that all
/// signed axis vertices are present, which together make conv(U) the
/// cross-polytope and ||u||_1 peak at u_max over U.
ValidationReport validate(const DiscreteInputSet& set);

/// Throws ValidationError if validate() reports a violation.
void require_valid(const DiscreteInputSet& set);

/// Extreme points of conv(U): exactly the 2m signed axis vertices.
std::vector<Eigen::VectorXd> hull_extreme_points(const DiscreteInputSet& set);

/// Vertices of the relaxed epigraph set {(u, nu) : u in conv(U),
/// ||u||_1 <= nu <= u_bar}.
struct AugmentedExtremeSet {
  /// (0, 0) first, then (+-u_max e_i, u_max) in axis order.
  std::vector<Eigen::VectorXd> vertices;
  double u_bar = 0.0;
};

AugmentedExtremeSet augmented_extreme_points(const DiscreteInputSet& set);

/// Minimum Euclidean distance from u to the point list.
double distance_to_set(const DiscreteInputSet& set, const Eigen::VectorXd& u);

/// Index of the nearest point; ties go to the lowest index.
std::size_t nearest_point_index(const DiscreteInputSet& set,
                                const Eigen::VectorXd& u);

Eigen::VectorXd project_to_set(const DiscreteInputSet& set,
                               const Eigen::VectorXd& u);

}  // namespace lcvx
