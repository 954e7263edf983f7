#include "pdfem/crack.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pdfem {

namespace {

// Error-free transforms for the exact orientation fallback.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  e = (a - (s - bv)) + (b - bv);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Adds b to a nonoverlapping expansion in place.
void grow_expansion(std::vector<double>& x, double b) {
  double q = b;
  for (double& xi : x) {
    double s, e;
    two_sum(q, xi, s, e);
    xi = e;
    q = s;
  }
  x.push_back(q);
}

int exact_orient(const Vec3& a, const Vec3& b, const Vec3& c) {
  // (bx-ax)(cy-ay) - (by-ay)(cx-ax) expanded into six products
  const std::array<std::array<double, 3>, 6> terms = {{{b.x(), c.y(), 1},
                                                       {b.x(), a.y(), -1},
                                                       {a.x(), c.y(), -1},
                                                       {b.y(), c.x(), -1},
                                                       {b.y(), a.x(), 1},
                                                       {a.y(), c.x(), 1}}};
  std::vector<double> x;
  x.reserve(16);
  for (const auto& t : terms) {
    double p, e;
    two_prod(t[0], t[1], p, e);
    grow_expansion(x, t[2] * e);
    grow_expansion(x, t[2] * p);
  }
  for (auto it = x.rbegin(); it != x.rend(); ++it)
    if (*it != 0.0) return *it > 0 ? 1 : -1;
  return 0;
}

}  // namespace

int orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double l = (b.x() - a.x()) * (c.y() - a.y());
  const double r = (b.y() - a.y()) * (c.x() - a.x());
  const double det = l - r;
  const double bound = 1e-15 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orient(a, b, c);
}

bool segments_intersect_2d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 == 0 && o2 == 0) {
    // collinear: overlap of the projections on both axes
    for (int k = 0; k < 2; ++k) {
      const double lo1 = std::min(a[k], b[k]), hi1 = std::max(a[k], b[k]);
      const double lo2 = std::min(c[k], d[k]), hi2 = std::max(c[k], d[k]);
      if (hi1 < lo2 || hi2 < lo1) return false;
    }
    return true;
  }
  return o1 * o2 <= 0 && o3 * o4 <= 0;
}

CrackPath CrackPath::none(int dim) {
  CrackPath c;
  c.dim_ = dim;
  return c;
}

CrackPath CrackPath::polyline(std::vector<Vec3> vertices, bool grow_start, bool grow_end) {
  if (vertices.size() < 2) throw GeometryError("crack polyline needs at least two vertices");
  for (Vec3& v : vertices) v.z() = 0.0;
  for (size_t i = 0; i + 1 < vertices.size(); ++i)
    if (!((vertices[i + 1] - vertices[i]).norm() > 0.0)) throw GeometryError("crack segment with zero length");
  CrackPath c;
  c.dim_ = 2;
  c.vertices_ = std::move(vertices);
  c.active_[0] = grow_start;
  c.active_[1] = grow_end;
  return c;
}

CrackPath CrackPath::planar_polygon(std::vector<Vec3> vertices) {
  if (vertices.size() < 3) throw GeometryError("crack polygon needs at least three vertices");
  CrackPath c;
  c.dim_ = 3;
  Vec3 n = Vec3::Zero();
  const Vec3& o = vertices[0];
  for (size_t i = 1; i + 1 < vertices.size(); ++i) n += (vertices[i] - o).cross(vertices[i + 1] - o);
  if (!(n.norm() > 0.0)) throw GeometryError("degenerate crack polygon");
  n.normalize();
  double size = 0.0;
  for (const Vec3& v : vertices) size = std::max(size, (v - o).norm());
  for (const Vec3& v : vertices)
    if (std::abs(n.dot(v - o)) > 1e-9 * size) throw GeometryError("crack polygon is not planar");
  c.normal_ = n;
  c.e1_ = (vertices[1] - o).normalized();
  c.e2_ = n.cross(c.e1_);
  for (const Vec3& v : vertices) c.local_.emplace_back(c.e1_.dot(v - o), c.e2_.dot(v - o));
  c.scale_ = size;
  c.vertices_ = std::move(vertices);
  return c;
}

Vec3 CrackPath::tip_direction(int t) const {
  if (dim_ != 2 || vertices_.size() < 2) throw GeometryError("tip direction requires a 2-D crack");
  const Vec3& tp = tip(t);
  const Vec3& prev = t == 0 ? vertices_[1] : vertices_[vertices_.size() - 2];
  return (tp - prev).normalized();
}

void CrackPath::extend(int t, const Vec3& x) {
  if (dim_ != 2) throw GeometryError("3-D cracks are stationary");
  Vec3 p = x;
  p.z() = 0.0;
  if (!((p - tip(t)).norm() > 0.0)) throw GeometryError("crack growth with zero length");
  if (t == 0)
    vertices_.insert(vertices_.begin(), p);
  else
    vertices_.push_back(p);
}

double CrackPath::length() const {
  double l = 0.0;
  for (size_t s = 0; s < num_segments(); ++s) l += (seg_b(s) - seg_a(s)).norm();
  return l;
}

bool CrackPath::polygon_contains(const Vec3& x) const {
  const Vec3& o = vertices_[0];
  const Eigen::Vector2d p(e1_.dot(x - o), e2_.dot(x - o));
  const double tol = 1e-12 * scale_;
  bool inside = false;
  const size_t n = local_.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d& a = local_[j];
    const Eigen::Vector2d& b = local_[i];
    // on-edge check
    const Eigen::Vector2d ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    if ((a + t * ab - p).norm() <= tol) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xc = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xc) inside = !inside;
    }
  }
  return inside;
}

bool CrackPath::crosses(const Vec3& a, const Vec3& b) const {
  if (vertices_.empty()) return false;
  if (dim_ == 2) {
    const double lo_x = std::min(a.x(), b.x()), hi_x = std::max(a.x(), b.x());
    const double lo_y = std::min(a.y(), b.y()), hi_y = std::max(a.y(), b.y());
    for (size_t s = 0; s + 1 < vertices_.size(); ++s) {
      const Vec3& c = vertices_[s];
      const Vec3& d = vertices_[s + 1];
      if (std::max(c.x(), d.x()) < lo_x || std::min(c.x(), d.x()) > hi_x) continue;
      if (std::max(c.y(), d.y()) < lo_y || std::min(c.y(), d.y()) > hi_y) continue;
      if (segments_intersect_2d(a, b, c, d)) return true;
    }
    return false;
  }
  const Vec3& o = vertices_[0];
  const double sa = normal_.dot(a - o), sb = normal_.dot(b - o);
  const double tol = 1e-14 * scale_;
  const bool za = std::abs(sa) <= tol, zb = std::abs(sb) <= tol;
  if (za && zb) return polygon_contains(a) || polygon_contains(b);
  if (za) return polygon_contains(a);
  if (zb) return polygon_contains(b);
  if ((sa > 0) == (sb > 0)) return false;
  const double t = sa / (sa - sb);
  return polygon_contains(a + t * (b - a));
}

bool bond_crosses_crack(const Vec3& xi, const Vec3& xm, const CrackPath& crack) { return crack.crosses(xi, xm); }

bool crack_extends(const CrackPath& base, const CrackPath& grown) {
  if (base.dim() != grown.dim()) return false;
  const auto& a = base.vertices();
  const auto& b = grown.vertices();
  if (a.empty()) return true;
  if (base.dim() == 3) return a == b;
  if (b.size() < a.size()) return false;
  for (size_t off = 0; off + a.size() <= b.size(); ++off)
    if (std::equal(a.begin(), a.end(), b.begin() + off)) return true;
  return false;
}

CrackPath grow_crack(const CrackPath& crack, int tip, double theta, double d_c) {
  if (crack.dim() != 2) throw GeometryError("crack growth is 2-D only");
  if (!(d_c > 0.0)) throw GeometryError("growth amount must be positive");
  const Vec3 dir = crack.tip_direction(tip);
  const double c = std::cos(theta), s = std::sin(theta);
  const Vec3 turned(c * dir.x() - s * dir.y(), s * dir.x() + c * dir.y(), 0.0);
  CrackPath out = crack;
  out.extend(tip, crack.tip(tip) + d_c * turned);
  return out;
}

}  // namespace pdfem
