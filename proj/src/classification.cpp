#include "pdfem/classification.hpp"

#include <algorithm>
#include <cmath>

namespace pdfem {

Index Classification::count(Label l) const {
  return static_cast<Index>(std::count(labels.begin(), labels.end(), l));
}

Index Classification::num_pd_nodes() const {
  return static_cast<Index>(std::count(pd_node.begin(), pd_node.end(), std::uint8_t{1}));
}

namespace {

void mark_nodes(const Mesh& mesh, Classification& c) {
  c.pd_node.assign(mesh.num_nodes(), 0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    if (is_pd(c.labels[e]))
      for (Index n : mesh.element(e).node_span()) c.pd_node[n] = 1;
}

bool point_in_q4(const Mesh& mesh, const Element& el, const Vec3& p) {
  for (int k = 0; k < 4; ++k)
    if (orient2d(mesh.node(el.nodes[k]), mesh.node(el.nodes[(k + 1) % 4]), p) < 0) return false;
  return true;
}

void mark_beta(const Mesh& mesh, Classification& c) {
  if (c.m_beta < 1.0) return;
  const double r = c.r_beta;
  const double r2 = r * r;
  std::vector<Index> alpha;
  for (Index e = 0; e < mesh.num_elements(); ++e)
    if (c.labels[e] == Label::AlphaPD) alpha.push_back(e);
  if (alpha.empty()) return;

  // bucket alpha centroids on a grid of cell size r
  const int dim = mesh.dim();
  Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
  for (Index e : alpha) {
    lo = lo.cwiseMin(mesh.centroid(e));
    hi = hi.cwiseMax(mesh.centroid(e));
  }
  std::array<long, 3> n{1, 1, 1};
  for (int a = 0; a < dim; ++a) n[a] = static_cast<long>((hi[a] - lo[a]) / r) + 1;
  if (n[0] * n[1] * n[2] > 50'000'000L) {
    for (Index e = 0; e < mesh.num_elements(); ++e)
      if (c.labels[e] == Label::Standard)
        for (Index a : alpha)
          if ((mesh.centroid(a) - mesh.centroid(e)).squaredNorm() <= r2) {
            c.labels[e] = Label::BetaPD;
            break;
          }
    return;
  }
  auto cell_of = [&](const Vec3& x, int a) {
    return static_cast<long>(std::floor((x[a] - lo[a]) / r));
  };
  std::vector<std::vector<Index>> buckets(static_cast<size_t>(n[0] * n[1] * n[2]));
  for (Index e : alpha) {
    std::array<long, 3> k{0, 0, 0};
    for (int a = 0; a < dim; ++a) k[a] = std::clamp(cell_of(mesh.centroid(e), a), 0L, n[a] - 1);
    buckets[(k[2] * n[1] + k[1]) * n[0] + k[0]].push_back(e);
  }

  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (c.labels[e] != Label::Standard) continue;
    const Vec3& x = mesh.centroid(e);
    std::array<long, 3> k0{0, 0, 0}, k1{0, 0, 0};
    bool outside = false;
    for (int a = 0; a < dim; ++a) {
      k0[a] = std::max(0L, cell_of(x, a) - 1);
      k1[a] = std::min(n[a] - 1, cell_of(x, a) + 1);
      if (k0[a] > k1[a]) outside = true;
    }
    if (outside) continue;
    bool hit = false;
    for (long kz = k0[2]; kz <= k1[2] && !hit; ++kz)
      for (long ky = k0[1]; ky <= k1[1] && !hit; ++ky)
        for (long kx = k0[0]; kx <= k1[0] && !hit; ++kx)
          for (Index a : buckets[(kz * n[1] + ky) * n[0] + kx])
            if ((mesh.centroid(a) - x).squaredNorm() <= r2) {
              hit = true;
              break;
            }
    if (hit) c.labels[e] = Label::BetaPD;
  }
}

}  // namespace

bool element_touched_by_crack(const Mesh& mesh, Index e, const CrackPath& crack) {
  if (crack.empty()) return false;
  const Element& el = mesh.element(e);
  for (auto [a, b] : local_edges(el.kind))
    if (crack.crosses(mesh.node(el.nodes[a]), mesh.node(el.nodes[b]))) return true;
  if (crack.dim() == 2)
    for (const Vec3& v : crack.vertices())
      if (point_in_q4(mesh, el, v)) return true;
  return false;
}

Classification classify_elements(const Mesh& mesh, const CrackPath& crack, double m_beta) {
  if (!(m_beta >= 0.0)) throw Error("m_beta must be non-negative");
  if (!crack.empty() && crack.dim() != mesh.dim()) throw GeometryError("crack and mesh dimensions differ");
  Classification c;
  c.m_beta = m_beta;
  c.r_beta = m_beta * mesh.min_size();
  c.crack = crack;
  c.labels.assign(mesh.num_elements(), Label::Standard);
  if (!crack.empty()) {
    // bounding box prefilter
    Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
    for (const Vec3& v : crack.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const int dim = mesh.dim();
#pragma omp parallel for schedule(static)
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      Vec3 blo = Vec3::Constant(1e300), bhi = Vec3::Constant(-1e300);
      for (Index n : mesh.element(e).node_span()) {
        blo = blo.cwiseMin(mesh.node(n));
        bhi = bhi.cwiseMax(mesh.node(n));
      }
      bool disjoint = false;
      for (int a = 0; a < dim; ++a)
        if (bhi[a] < lo[a] || blo[a] > hi[a]) disjoint = true;
      if (!disjoint && element_touched_by_crack(mesh, e, crack)) c.labels[e] = Label::AlphaPD;
    }
  }
  mark_beta(mesh, c);
  mark_nodes(mesh, c);
  return c;
}

Classification update_classification(const Classification& prev, const Mesh& mesh, const CrackPath& grown) {
  if (!crack_extends(prev.crack, grown)) throw GeometryError("updated crack does not extend the previous crack");
  Classification fresh = classify_elements(mesh, grown, prev.m_beta);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Label a = prev.labels[e], b = fresh.labels[e];
    if (a == Label::AlphaPD || b == Label::AlphaPD)
      fresh.labels[e] = Label::AlphaPD;
    else if (a == Label::BetaPD || b == Label::BetaPD)
      fresh.labels[e] = Label::BetaPD;
  }
  mark_nodes(mesh, fresh);
  return fresh;
}

Classification classification_from_labels(const Mesh& mesh, std::vector<Label> labels, double m_beta) {
  if (static_cast<Index>(labels.size()) != mesh.num_elements()) throw Error("label count does not match the mesh");
  Classification c;
  c.labels = std::move(labels);
  c.m_beta = m_beta;
  c.r_beta = m_beta * mesh.min_size();
  c.crack = CrackPath::none(mesh.dim());
  mark_nodes(mesh, c);
  return c;
}

Classification full_pd_classification(const Mesh& mesh, const CrackPath& crack) {
  Classification c = classify_elements(mesh, crack, 0.0);
  for (Label& l : c.labels)
    if (l == Label::Standard) l = Label::BetaPD;
  mark_nodes(mesh, c);
  return c;
}

}  // namespace pdfem
