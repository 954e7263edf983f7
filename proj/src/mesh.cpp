#include "pdfem/mesh.hpp"

#include "pdfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace pdfem {

namespace {

constexpr int kQ4Faces[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
constexpr int kH8Faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
constexpr std::array<int, 2> kQ4Edges[4] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
constexpr std::array<int, 2> kH8Edges[12] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                             {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

std::span<const int> local_face_nodes(ElementKind kind, int face) {
  if (kind == ElementKind::Q4) return {kQ4Faces[face], 2};
  return {kH8Faces[face], 4};
}

std::span<const std::array<int, 2>> local_edges(ElementKind kind) {
  if (kind == ElementKind::Q4) return {kQ4Edges, 4};
  return {kH8Edges, 12};
}

Index Mesh::num_boundary_faces() const {
  return static_cast<Index>(std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return !f.interior(); }));
}

Mat Mesh::element_coords(Index e) const {
  const Element& el = elements_[e];
  Mat c(el.size(), dim_);
  for (int k = 0; k < el.size(); ++k) c.row(k) = x_[el.nodes[k]].head(dim_).transpose();
  return c;
}

Vec3 Mesh::face_area_vector(Index e, int f) const {
  const Element& el = elements_[e];
  auto ln = local_face_nodes(el.kind, f);
  if (el.kind == ElementKind::Q4) {
    const Vec3 d = x_[el.nodes[ln[1]]] - x_[el.nodes[ln[0]]];
    return Vec3(d.y(), -d.x(), 0.0) * thickness_;
  }
  const Vec3& a = x_[el.nodes[ln[0]]];
  const Vec3& b = x_[el.nodes[ln[1]]];
  const Vec3& c = x_[el.nodes[ln[2]]];
  const Vec3& d = x_[el.nodes[ln[3]]];
  return 0.5 * (c - a).cross(d - b);
}

std::pair<Vec3, Vec3> Mesh::bounds() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& p : x_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

void Mesh::finalize() {
  const Index ne = num_elements();
  const Index nn = num_nodes();
  size_.assign(ne, 0.0);
  volume_.assign(ne, 0.0);
  centroid_.assign(ne, Vec3::Zero());

  for (Index e = 0; e < ne; ++e) {
    const Element& el = elements_[e];
    double h = std::numeric_limits<double>::infinity();
    for (auto [a, b] : local_edges(el.kind)) h = std::min(h, (x_[el.nodes[a]] - x_[el.nodes[b]]).norm());
    if (!(h > 0.0)) throw GeometryError("element " + std::to_string(el.id) + " has a zero-length edge");
    size_[e] = h;

    Mat c = element_coords(e);
    const GaussRule& rule = gauss_rule(el.kind);
    double vol = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      ShapeValues sv = shape_functions(el.kind, rule.points[q]);
      const double det = (c.transpose() * sv.dN).determinant();
      if (!(det > 0.0)) throw GeometryError("inverted element " + std::to_string(el.id));
      vol += rule.weights[q] * det;
    }
    volume_[e] = dim_ == 2 ? vol * thickness_ : vol;
    Vec3 cen = Vec3::Zero();
    for (int k = 0; k < el.size(); ++k) cen += x_[el.nodes[k]];
    centroid_[e] = cen / el.size();
  }
  min_size_ = ne ? *std::min_element(size_.begin(), size_.end()) : 0.0;

  node_elem_ptr_.assign(nn + 1, 0);
  for (const Element& el : elements_)
    for (Index n : el.node_span()) ++node_elem_ptr_[n + 1];
  for (Index n = 0; n < nn; ++n) node_elem_ptr_[n + 1] += node_elem_ptr_[n];
  node_elem_.resize(node_elem_ptr_[nn]);
  {
    std::vector<Index> fill(node_elem_ptr_.begin(), node_elem_ptr_.end() - 1);
    for (Index e = 0; e < ne; ++e)
      for (Index n : elements_[e].node_span()) node_elem_[fill[n]++] = e;
  }

  std::map<std::array<Index, 4>, Index> lookup;
  elem_face_.assign(static_cast<size_t>(ne) * 6, -1);
  for (Index e = 0; e < ne; ++e) {
    const Element& el = elements_[e];
    const int fpe = faces_per_element(el.kind);
    for (int f = 0; f < fpe; ++f) {
      auto ln = local_face_nodes(el.kind, f);
      std::array<Index, 4> key{-1, -1, -1, -1};
      for (size_t k = 0; k < ln.size(); ++k) key[k] = el.nodes[ln[k]];
      std::sort(key.begin(), key.begin() + ln.size());
      auto [it, inserted] = lookup.emplace(key, static_cast<Index>(faces_.size()));
      if (inserted) {
        Face face;
        face.count = static_cast<int>(ln.size());
        for (size_t k = 0; k < ln.size(); ++k) face.nodes[k] = el.nodes[ln[k]];
        face.owners[0] = e;
        face.num_owners = 1;
        faces_.push_back(face);
      } else {
        Face& face = faces_[it->second];
        if (face.num_owners == 2)
          throw GeometryError("face shared by more than two elements near element " + std::to_string(el.id));
        face.owners[1] = e;
        face.num_owners = 2;
      }
      elem_face_[static_cast<size_t>(e) * 6 + f] = it->second;
    }
  }
}

Mesh build_mesh(int dim, const std::vector<NodeRecord>& nodes, const std::vector<ElementRecord>& elements,
                double thickness) {
  if (dim != 2 && dim != 3) throw GeometryError("mesh dimension must be 2 or 3");
  if (nodes.empty() || elements.empty()) throw GeometryError("mesh tables must be non-empty");
  if (dim == 2 && !(thickness > 0.0)) throw GeometryError("thickness must be positive for 2-D meshes");

  Mesh m;
  m.dim_ = dim;
  m.thickness_ = dim == 2 ? thickness : 1.0;
  std::unordered_map<Index, Index> index_of;
  index_of.reserve(nodes.size());
  m.x_.reserve(nodes.size());
  for (const NodeRecord& r : nodes) {
    if (!index_of.emplace(r.id, static_cast<Index>(m.x_.size())).second)
      throw GeometryError("duplicate node id " + std::to_string(r.id));
    Vec3 p = r.x;
    if (dim == 2) p.z() = 0.0;
    if (!p.allFinite()) throw GeometryError("non-finite coordinates for node " + std::to_string(r.id));
    m.x_.push_back(p);
    m.node_ids_.push_back(r.id);
  }

  const ElementKind want = dim == 2 ? ElementKind::Q4 : ElementKind::H8;
  std::map<std::vector<Index>, Index> seen;
  std::unordered_map<Index, bool> ids;
  for (const ElementRecord& r : elements) {
    if (r.kind != want) throw GeometryError("element " + std::to_string(r.id) + " has the wrong kind for this dimension");
    if (static_cast<int>(r.node_ids.size()) != nodes_per_element(r.kind))
      throw GeometryError("element " + std::to_string(r.id) + " has the wrong number of nodes");
    if (!ids.emplace(r.id, true).second) throw GeometryError("duplicate element id " + std::to_string(r.id));
    Element el;
    el.id = r.id;
    el.kind = r.kind;
    for (size_t k = 0; k < r.node_ids.size(); ++k) {
      auto it = index_of.find(r.node_ids[k]);
      if (it == index_of.end())
        throw GeometryError("dangling node reference " + std::to_string(r.node_ids[k]) + " in element " +
                            std::to_string(r.id));
      el.nodes[k] = it->second;
    }
    std::vector<Index> key(el.nodes.begin(), el.nodes.begin() + el.size());
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw GeometryError("element " + std::to_string(r.id) + " repeats a node");
    if (!seen.emplace(key, r.id).second) throw GeometryError("duplicate element " + std::to_string(r.id));
    m.elements_.push_back(el);
  }
  m.finalize();
  return m;
}

Mesh generate_tensor_grid(std::span<const double> xs, std::span<const double> ys, std::span<const double> zs,
                          double thickness) {
  const int dim = zs.empty() ? 2 : 3;
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
  const int nz = dim == 3 ? static_cast<int>(zs.size()) : 1;
  if (nx < 2 || ny < 2 || (dim == 3 && nz < 2)) throw GeometryError("grid needs at least one division per axis");
  auto check = [](std::span<const double> v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) throw GeometryError("grid lines must be strictly increasing (zero-measure box?)");
  };
  check(xs);
  check(ys);
  if (dim == 3) check(zs);

  std::vector<NodeRecord> nodes;
  nodes.reserve(static_cast<size_t>(nx) * ny * nz);
  auto nid = [&](int i, int j, int k) { return static_cast<Index>((k * ny + j) * nx + i); };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        nodes.push_back({nid(i, j, k), Vec3(xs[i], ys[j], dim == 3 ? zs[k] : 0.0)});

  std::vector<ElementRecord> elems;
  Index eid = 0;
  if (dim == 2) {
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i)
        elems.push_back({eid++, ElementKind::Q4, {nid(i, j, 0), nid(i + 1, j, 0), nid(i + 1, j + 1, 0), nid(i, j + 1, 0)}});
  } else {
    for (int k = 0; k + 1 < nz; ++k)
      for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i)
          elems.push_back({eid++, ElementKind::H8,
                           {nid(i, j, k), nid(i + 1, j, k), nid(i + 1, j + 1, k), nid(i, j + 1, k),
                            nid(i, j, k + 1), nid(i + 1, j, k + 1), nid(i + 1, j + 1, k + 1), nid(i, j + 1, k + 1)}});
  }
  return build_mesh(dim, nodes, elems, thickness);
}

Mesh generate_structured_grid(const Vec3& lo, const Vec3& hi, std::span<const int> divisions, double thickness) {
  const int dim = static_cast<int>(divisions.size());
  if (dim != 2 && dim != 3) throw GeometryError("divisions must have 2 or 3 entries");
  std::array<std::vector<double>, 3> lines;
  for (int a = 0; a < dim; ++a) {
    if (divisions[a] < 1) throw GeometryError("divisions must be at least 1 per axis");
    if (!(hi[a] > lo[a])) throw GeometryError("zero-measure bounding box");
    for (int i = 0; i <= divisions[a]; ++i)
      lines[a].push_back(i == divisions[a] ? hi[a] : lo[a] + (hi[a] - lo[a]) * i / divisions[a]);
  }
  return generate_tensor_grid(lines[0], lines[1], lines[2], thickness);
}

std::vector<double> graded_lines(double lo, double hi, double core_lo, double core_hi, int core_cells,
                                 int outer_cells) {
  if (!(lo <= core_lo && core_lo < core_hi && core_hi <= hi) || core_cells < 1 || outer_cells < 0)
    throw GeometryError("invalid graded grid specification");
  const double h = (core_hi - core_lo) / core_cells;
  // sizes h*r, h*r^2, ... outward; r chosen so they fill the given length
  auto sizes = [&](double len) {
    std::vector<double> s;
    if (outer_cells == 0 || len <= 0.0) {
      if (len > 1e-12 * (hi - lo)) throw GeometryError("graded grid needs outer cells");
      return s;
    }
    auto total = [&](double r) {
      double t = 0, p = 1;
      for (int k = 0; k < outer_cells; ++k) t += h * (p *= r);
      return t;
    };
    double a = 1e-6, b = 1.0;
    while (total(b) < len) b *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      (total(m) < len ? a : b) = m;
    }
    const double r = 0.5 * (a + b);
    double p = 1;
    for (int k = 0; k < outer_cells; ++k) s.push_back(h * (p *= r));
    return s;
  };
  std::vector<double> out;
  std::vector<double> left = sizes(core_lo - lo);
  double x = core_lo;
  std::vector<double> pre;
  for (double s : left) pre.push_back(x -= s);
  std::reverse(pre.begin(), pre.end());
  if (!pre.empty()) pre.front() = lo;
  out = pre;
  for (int i = 0; i <= core_cells; ++i) out.push_back(i == core_cells ? core_hi : core_lo + h * i);
  x = core_hi;
  std::vector<double> right = sizes(hi - core_hi);
  for (size_t k = 0; k < right.size(); ++k) out.push_back(k + 1 == right.size() ? hi : (x += right[k]));
  return out;
}

std::optional<Vec3> inverse_map(ElementKind kind, const Mat& coords, const Vec3& x) {
  const int dim = kind == ElementKind::Q4 ? 2 : 3;
  Vec3 s = Vec3::Zero();
  const double scale = (coords.colwise().maxCoeff() - coords.colwise().minCoeff()).norm();
  for (int it = 0; it < 50; ++it) {
    ShapeValues sv = shape_functions(kind, s);
    Eigen::VectorXd r = coords.transpose() * sv.N - x.head(dim);
    Mat J = coords.transpose() * sv.dN;
    Eigen::VectorXd ds = J.partialPivLu().solve(r);
    s.head(dim) -= ds;
    if (!s.allFinite() || s.norm() > 1e3) return std::nullopt;
    if (ds.norm() < 1e-12) return s;
  }
  ShapeValues sv = shape_functions(kind, s);
  if ((coords.transpose() * sv.N - x.head(dim)).norm() <= 1e-10 * scale) return s;
  return std::nullopt;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(mesh) {
  auto [lo, hi] = mesh.bounds();
  const int dim = mesh.dim();
  Vec3 ext = hi - lo;
  double measure = 1.0;
  for (int a = 0; a < dim; ++a) measure *= ext[a];
  const double cell = std::pow(measure / std::max<Index>(1, mesh.num_elements()), 1.0 / dim);
  lo_ = lo;
  cell_ = Vec3::Ones();
  for (int a = 0; a < dim; ++a) {
    n_[a] = std::clamp(static_cast<int>(std::ceil(ext[a] / cell)), 1, 1024);
    cell_[a] = ext[a] / n_[a];
  }
  buckets_.assign(static_cast<size_t>(n_[0]) * n_[1] * n_[2], {});
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    Vec3 blo = Vec3::Constant(1e300), bhi = Vec3::Constant(-1e300);
    for (Index n : mesh.element(e).node_span()) {
      blo = blo.cwiseMin(mesh.node(n));
      bhi = bhi.cwiseMax(mesh.node(n));
    }
    std::array<int, 3> a{0, 0, 0}, b{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      a[d] = std::clamp(static_cast<int>(std::floor((blo[d] - lo_[d]) / cell_[d])), 0, n_[d] - 1);
      b[d] = std::clamp(static_cast<int>(std::floor((bhi[d] - lo_[d]) / cell_[d])), 0, n_[d] - 1);
    }
    for (int k = a[2]; k <= b[2]; ++k)
      for (int j = a[1]; j <= b[1]; ++j)
        for (int i = a[0]; i <= b[0]; ++i) buckets_[(static_cast<size_t>(k) * n_[1] + j) * n_[0] + i].push_back(e);
  }
}

std::optional<PointLocator::Hit> PointLocator::locate(const Vec3& x, double tol) const {
  const int dim = mesh_.dim();
  std::array<int, 3> c{0, 0, 0};
  for (int d = 0; d < dim; ++d) {
    const double t = (x[d] - lo_[d]) / cell_[d];
    if (t < -tol * n_[d] || t > n_[d] * (1 + tol)) return std::nullopt;
    c[d] = std::clamp(static_cast<int>(std::floor(t)), 0, n_[d] - 1);
  }
  for (Index e : buckets_[(static_cast<size_t>(c[2]) * n_[1] + c[1]) * n_[0] + c[0]]) {
    const Element& el = mesh_.element(e);
    auto s = inverse_map(el.kind, mesh_.element_coords(e), x);
    if (!s) continue;
    if (s->head(dim).cwiseAbs().maxCoeff() <= 1.0 + tol) return Hit{e, *s};
  }
  return std::nullopt;
}

std::optional<Vec> PointLocator::interpolate(std::span<const double> field, int ncomp, const Vec3& x) const {
  auto hit = locate(x);
  if (!hit) return std::nullopt;
  const Element& el = mesh_.element(hit->element);
  ShapeValues sv = shape_functions(el.kind, hit->local);
  Vec out = Vec::Zero(ncomp);
  for (int k = 0; k < el.size(); ++k)
    for (int c = 0; c < ncomp; ++c) out[c] += sv.N[k] * field[static_cast<size_t>(el.nodes[k]) * ncomp + c];
  return out;
}

}  // namespace pdfem
