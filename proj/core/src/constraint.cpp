#include "truncmix/constraint.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace truncmix {

namespace {

void check_dim(const ConstraintSet& set, const Eigen::VectorXd& x) {
  if (x.size() != set.dim())
    throw std::invalid_argument("constraint query: point has dimension " +
                                std::to_string(x.size()) + ", set has dimension " +
                                std::to_string(set.dim()));
}

int orientation(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  double v = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  return (v > 0) - (v < 0);
}

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (orientation(a, b, p) != 0) return false;
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) &&
         p.y() >= std::min(a.y(), b.y()) && p.y() <= std::max(a.y(), b.y());
}

// Proper or collinear-overlap intersection of segments ab and cd.
bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                    const Eigen::Vector2d& d) {
  int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

void validate_ring(const Ring& ring) {
  const size_t m = ring.size();
  if (m < 3) throw std::invalid_argument("polygon ring needs at least 3 vertices");
  for (size_t i = 0; i < m; ++i) {
    if (ring[i] == ring[(i + 1) % m])
      throw std::invalid_argument("polygon ring has a zero-length edge");
  }
  // Simplicity: no two non-adjacent edges intersect.
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (j == i + 1 || (i == 0 && j == m - 1)) continue;  // adjacent edges share a vertex
      if (segments_cross(ring[i], ring[(i + 1) % m], ring[j], ring[(j + 1) % m]))
        throw std::invalid_argument("polygon ring is self-intersecting");
    }
  }
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  Eigen::Vector2d ab = b - a;
  double t = ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

bool point_in_ring(const Ring& ring, const Eigen::Vector2d& p) {
  const size_t m = ring.size();
  bool inside = false;
  for (size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& a = ring[i];
    const Eigen::Vector2d& b = ring[(i + 1) % m];
    if (on_segment(p, a, b)) return true;  // closed-set convention
    // Half-open rule: include the lower endpoint, exclude the upper one, so a
    // crossing through a vertex counts exactly once.
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double t = (p.y() - a.y()) / (b.y() - a.y());
      double x_int = a.x() + t * (b.x() - a.x());
      if (p.x() < x_int) inside = !inside;
    }
  }
  return inside;
}

ConstraintSet ConstraintSet::full_space(int dim) {
  if (dim < 1) throw std::invalid_argument("full_space: dim must be positive");
  return ConstraintSet(Kind::FullSpace, dim);
}

ConstraintSet ConstraintSet::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("box: lo/hi dimension mismatch");
  for (int j = 0; j < lo.size(); ++j) {
    if (!(lo[j] < hi[j]))
      throw std::invalid_argument("box: lo[" + std::to_string(j) + "] must be < hi[" +
                                  std::to_string(j) + "]");
  }
  ConstraintSet s(Kind::Box, static_cast<int>(lo.size()));
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

ConstraintSet ConstraintSet::interval(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("interval: lo must be < hi");
  ConstraintSet s(Kind::Interval, 1);
  s.lo_ = Eigen::VectorXd::Constant(1, lo);
  s.hi_ = Eigen::VectorXd::Constant(1, hi);
  return s;
}

ConstraintSet ConstraintSet::polygon_union(std::vector<Ring> rings) {
  if (rings.empty()) throw std::invalid_argument("polygon_union: no rings");
  for (const Ring& r : rings) validate_ring(r);
  ConstraintSet s(Kind::PolygonUnion, 2);
  s.rings_ = std::move(rings);
  return s;
}

bool ConstraintSet::contains(const Eigen::VectorXd& x) const {
  check_dim(*this, x);
  switch (kind_) {
    case Kind::FullSpace:
      return true;
    case Kind::Box:
    case Kind::Interval:
      for (int j = 0; j < dim_; ++j)
        if (x[j] < lo_[j] || x[j] > hi_[j]) return false;
      return true;
    case Kind::PolygonUnion: {
      Eigen::Vector2d p(x[0], x[1]);
      for (const Ring& r : rings_)
        if (point_in_ring(r, p)) return true;
      return false;
    }
  }
  return false;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ConstraintSet::bounding_box() const {
  if (kind_ == Kind::FullSpace)
    throw std::logic_error("bounding_box is unsupported for FullSpace");
  if (kind_ == Kind::Box || kind_ == Kind::Interval) return {lo_, hi_};
  Eigen::Vector2d lo = rings_.front().front(), hi = lo;
  for (const Ring& r : rings_) {
    for (const Eigen::Vector2d& v : r) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  return {lo, hi};
}

double ConstraintSet::boundary_distance(const Eigen::VectorXd& x) const {
  check_dim(*this, x);
  switch (kind_) {
    case Kind::FullSpace:
      return std::numeric_limits<double>::infinity();
    case Kind::Box:
    case Kind::Interval: {
      double d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < dim_; ++j)
        d = std::min({d, std::abs(x[j] - lo_[j]), std::abs(hi_[j] - x[j])});
      return d;
    }
    case Kind::PolygonUnion: {
      Eigen::Vector2d p(x[0], x[1]);
      double d = std::numeric_limits<double>::infinity();
      for (const Ring& r : rings_) {
        for (size_t i = 0; i < r.size(); ++i)
          d = std::min(d, point_segment_distance(p, r[i], r[(i + 1) % r.size()]));
      }
      return d;
    }
  }
  return 0.0;
}

ConstraintSet ConstraintSet::from_json(const nlohmann::json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "full") {
    return full_space(spec.value("dim", 1));
  }
  if (type == "interval") {
    return interval(spec.at("lo").get<double>(), spec.at("hi").get<double>());
  }
  if (type == "box") {
    auto lo = spec.at("lo").get<std::vector<double>>();
    auto hi = spec.at("hi").get<std::vector<double>>();
    return box(Eigen::Map<Eigen::VectorXd>(lo.data(), lo.size()),
               Eigen::Map<Eigen::VectorXd>(hi.data(), hi.size()));
  }
  if (type == "polygon_union") {
    std::vector<Ring> rings;
    for (const auto& jr : spec.at("polygons")) {
      Ring r;
      for (const auto& jv : jr) r.emplace_back(jv.at(0).get<double>(), jv.at(1).get<double>());
      // A repeated closing vertex is tolerated and dropped.
      if (r.size() > 1 && r.front() == r.back()) r.pop_back();
      rings.push_back(std::move(r));
    }
    return polygon_union(std::move(rings));
  }
  throw std::invalid_argument("unknown constraint type: " + type);
}

nlohmann::json ConstraintSet::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::FullSpace:
      j["type"] = "full";
      j["dim"] = dim_;
      break;
    case Kind::Interval:
      j["type"] = "interval";
      j["lo"] = lo_[0];
      j["hi"] = hi_[0];
      break;
    case Kind::Box: {
      j["type"] = "box";
      j["lo"] = std::vector<double>(lo_.data(), lo_.data() + lo_.size());
      j["hi"] = std::vector<double>(hi_.data(), hi_.data() + hi_.size());
      break;
    }
    case Kind::PolygonUnion: {
      j["type"] = "polygon_union";
      nlohmann::json polys = nlohmann::json::array();
      for (const Ring& r : rings_) {
        nlohmann::json ring = nlohmann::json::array();
        for (const Eigen::Vector2d& v : r) ring.push_back({v.x(), v.y()});
        polys.push_back(ring);
      }
      j["polygons"] = polys;
      break;
    }
  }
  return j;
}

}  // namespace truncmix
