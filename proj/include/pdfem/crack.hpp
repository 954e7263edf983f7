#pragma once

#include "pdfem/types.hpp"

#include <vector>

namespace pdfem {

/// Exact sign of the 2-D orientation determinant of (a, b, c): +1 counter-clockwise,
/// -1 clockwise, 0 collinear. Only x and y are used.
int orient2d(const Vec3& a, const Vec3& b, const Vec3& c);

/// Closed segment intersection in the xy-plane. Touching and collinear overlap count.
bool segments_intersect_2d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// 2-D: polyline of tip-to-tip segments with growable tips.
/// 3-D: fixed planar polygon.
class CrackPath {
public:
  CrackPath() = default;
  static CrackPath none(int dim);
  static CrackPath polyline(std::vector<Vec3> vertices, bool grow_start = true, bool grow_end = true);
  static CrackPath planar_polygon(std::vector<Vec3> vertices);

  int dim() const { return dim_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }

  // polyline access
  size_t num_segments() const { return dim_ == 2 && !vertices_.empty() ? vertices_.size() - 1 : 0; }
  const Vec3& seg_a(size_t s) const { return vertices_[s]; }
  const Vec3& seg_b(size_t s) const { return vertices_[s + 1]; }
  /// tip 0 is the first vertex, tip 1 the last.
  const Vec3& tip(int t) const { return t == 0 ? vertices_.front() : vertices_.back(); }
  /// Unit vector pointing out of the crack at tip t.
  Vec3 tip_direction(int t) const;
  bool tip_active(int t) const { return active_[t]; }
  void set_tip_active(int t, bool on) { active_[t] = on; }
  /// Adds a new tip segment ending at `x`.
  void extend(int t, const Vec3& x);
  double length() const;

  /// True if the closed segment (a, b) crosses the crack.
  bool crosses(const Vec3& a, const Vec3& b) const;
  /// Polygon membership of a point on the crack plane (3-D, inclusive).
  bool polygon_contains(const Vec3& x) const;
  const Vec3& normal() const { return normal_; }

private:
  int dim_ = 2;
  std::vector<Vec3> vertices_;
  bool active_[2] = {false, false};
  // 3-D plane frame
  Vec3 normal_ = Vec3::Zero(), e1_ = Vec3::Zero(), e2_ = Vec3::Zero();
  std::vector<Eigen::Vector2d> local_;
  double scale_ = 1.0;
};

bool bond_crosses_crack(const Vec3& xi, const Vec3& xm, const CrackPath& crack);

/// True if `grown` is `base` with segments added at either end.
bool crack_extends(const CrackPath& base, const CrackPath& grown);

/// Advances tip t by d_c along the direction turned by theta from the current tip direction.
CrackPath grow_crack(const CrackPath& crack, int tip, double theta, double d_c);

}  // namespace pdfem
