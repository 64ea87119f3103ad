#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <utility>
#include <vector>

namespace truncmix {

using Ring = std::vector<Eigen::Vector2d>;

// The support set S, queried through its indicator function. Immutable after
// construction; queries are read-only and safe to share across chains.
class ConstraintSet {
 public:
  enum class Kind { FullSpace, Box, Interval, PolygonUnion };

  static ConstraintSet full_space(int dim);
  static ConstraintSet box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static ConstraintSet interval(double lo, double hi);
  // Rings are filled simple polygons; the union of their interiors is S.
  // The closing edge back to the first vertex is implicit.
  static ConstraintSet polygon_union(std::vector<Ring> rings);

  static ConstraintSet from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_full_space() const { return kind_ == Kind::FullSpace; }

  // Boundary points count as inside (closed-set convention).
  bool contains(const Eigen::VectorXd& x) const;

  // Axis-aligned box containing S. Unsupported for FullSpace.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;

  // Distance from a point to the boundary of S (edge-biased test selection).
  // FullSpace has no boundary and returns +infinity.
  double boundary_distance(const Eigen::VectorXd& x) const;

  const std::vector<Ring>& rings() const { return rings_; }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }

 private:
  ConstraintSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Eigen::VectorXd lo_, hi_;   // Box / Interval
  std::vector<Ring> rings_;   // PolygonUnion
};

// Even-odd ray casting with a half-open edge rule; points exactly on an edge
// or vertex are inside.
bool point_in_ring(const Ring& ring, const Eigen::Vector2d& p);

}  // namespace truncmix
