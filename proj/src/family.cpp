#include "pdfem/family.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pdfem {

Index Family::num_intact_neighbors() const {
  Index n = 0;
  for (size_t k = 1; k < members.size(); ++k) n += intact[k];
  return n;
}

double gauss_weight(double r, double c, double delta) {
  const double s = r / (c * delta);
  return std::exp(-s * s);
}

std::vector<double> nodal_volumes(const Mesh& mesh) {
  std::vector<double> v(mesh.num_nodes(), 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const double share = mesh.element_volume(e) / el.size();
    for (Index n : el.node_span()) v[n] += share;
  }
  return v;
}

std::vector<double> nodal_horizons(const Mesh& mesh, double m_delta) {
  std::vector<double> h(mesh.num_nodes(), 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (Index n : mesh.element(e).node_span()) h[n] = std::max(h[n], mesh.element_size(e));
  for (double& x : h) x *= m_delta;
  return h;
}

namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double l2 = ab.squaredNorm();
  const double t = l2 > 0 ? std::clamp((p - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

}  // namespace

FamilySet::FamilySet(const Mesh& mesh, const Classification& cls, const CrackPath& crack, double m_delta, double c)
    : m_delta_(m_delta), c_(c) {
  if (!(m_delta > 0.0)) throw Error("m_delta must be positive");
  if (!(c > 0.0)) throw Error("weight parameter c must be positive");
  horizon_ = nodal_horizons(mesh, m_delta);
  volume_ = nodal_volumes(mesh);
  index_.assign(mesh.num_nodes(), -1);
  build_grid(mesh);
  add_missing(mesh, cls, crack);
}

void FamilySet::build_grid(const Mesh& mesh) {
  auto [lo, hi] = mesh.bounds();
  const int dim = mesh.dim();
  lo_ = lo;
  const double hmin = *std::min_element(horizon_.begin(), horizon_.end());
  double ext = 0.0;
  for (int a = 0; a < dim; ++a) ext = std::max(ext, hi[a] - lo[a]);
  cell_ = std::max(hmin, ext / (dim == 2 ? 1024.0 : 128.0));
  n_ = {1, 1, 1};
  for (int a = 0; a < dim; ++a) n_[a] = static_cast<long>((hi[a] - lo[a]) / cell_) + 1;
  const size_t ncell = static_cast<size_t>(n_[0] * n_[1] * n_[2]);
  cell_ptr_.assign(ncell + 1, 0);
  std::vector<size_t> cell_of(mesh.num_nodes());
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    std::array<long, 3> k{0, 0, 0};
    for (int a = 0; a < dim; ++a)
      k[a] = std::clamp(static_cast<long>((mesh.node(i)[a] - lo_[a]) / cell_), 0L, n_[a] - 1);
    cell_of[i] = static_cast<size_t>((k[2] * n_[1] + k[1]) * n_[0] + k[0]);
    ++cell_ptr_[cell_of[i] + 1];
  }
  std::partial_sum(cell_ptr_.begin(), cell_ptr_.end(), cell_ptr_.begin());
  cell_nodes_.resize(mesh.num_nodes());
  std::vector<Index> fill(cell_ptr_.begin(), cell_ptr_.end() - 1);
  for (Index i = 0; i < mesh.num_nodes(); ++i) cell_nodes_[fill[cell_of[i]]++] = i;
}

void FamilySet::check_size(const Family& f, int dim) const {
  const Index need = dim == 2 ? 5 : 9;
  if (f.num_intact_neighbors() < need)
    throw SingularShapeTensor(f.owner, "family has " + std::to_string(f.num_intact_neighbors()) +
                                           " intact neighbours, at least " + std::to_string(need) + " required");
}

Family FamilySet::build_one(const Mesh& mesh, Index node, const CrackPath& crack) const {
  const int dim = mesh.dim();
  const Vec3& x = mesh.node(node);
  const double delta = horizon_[node];
  const double reach = delta * (1.0 + 1e-9);
  std::array<long, 3> k0{0, 0, 0}, k1{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    k0[a] = std::clamp(static_cast<long>(std::floor((x[a] - reach - lo_[a]) / cell_)), 0L, n_[a] - 1);
    k1[a] = std::clamp(static_cast<long>(std::floor((x[a] + reach - lo_[a]) / cell_)), 0L, n_[a] - 1);
  }
  std::vector<Index> found;
  for (long kz = k0[2]; kz <= k1[2]; ++kz)
    for (long ky = k0[1]; ky <= k1[1]; ++ky)
      for (long kx = k0[0]; kx <= k1[0]; ++kx) {
        const size_t cidx = static_cast<size_t>((kz * n_[1] + ky) * n_[0] + kx);
        for (Index p = cell_ptr_[cidx]; p < cell_ptr_[cidx + 1]; ++p) {
          const Index m = cell_nodes_[p];
          if (m != node && (mesh.node(m) - x).squaredNorm() <= reach * reach) found.push_back(m);
        }
      }
  std::sort(found.begin(), found.end());

  Family f;
  f.owner = node;
  f.delta = delta;
  f.members.reserve(found.size() + 1);
  f.members.push_back(node);
  f.members.insert(f.members.end(), found.begin(), found.end());
  const size_t n = f.members.size();
  f.xi.resize(n);
  f.volume.resize(n);
  f.weight.resize(n);
  f.intact.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const Index m = f.members[k];
    f.xi[k] = mesh.node(m) - x;
    f.volume[k] = volume_[m];
    f.weight[k] = gauss_weight(f.xi[k].norm(), c_, delta);
    f.intact[k] = k == 0 ? 1 : !crack.crosses(x, mesh.node(m));
  }
  check_size(f, dim);
  return f;
}

std::vector<Index> FamilySet::add_missing(const Mesh& mesh, const Classification& cls, const CrackPath& crack) {
  std::vector<Index> nodes;
  for (Index i = 0; i < mesh.num_nodes(); ++i)
    if (cls.pd_node[i] && index_[i] < 0) nodes.push_back(i);
  const Index base = static_cast<Index>(families_.size());
  families_.resize(base + nodes.size());
  std::vector<std::string> errors(nodes.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (size_t k = 0; k < nodes.size(); ++k) {
    try {
      families_[base + k] = build_one(mesh, nodes[k], crack);
    } catch (const SingularShapeTensor& e) {
      errors[k] = e.what();
    }
  }
  for (size_t k = 0; k < nodes.size(); ++k)
    if (!errors[k].empty()) {
      families_.resize(base);
      throw SingularShapeTensor(nodes[k], "family has too few intact neighbours");
    }
  std::vector<Index> added;
  for (size_t k = 0; k < nodes.size(); ++k) {
    index_[nodes[k]] = base + static_cast<Index>(k);
    added.push_back(base + static_cast<Index>(k));
  }
  return added;
}

std::vector<Index> FamilySet::break_bonds(const Mesh& mesh, const Vec3& a, const Vec3& b) {
  std::vector<Index> changed;
  const CrackPath seg = CrackPath::polyline({a, b}, false, false);
  for (Index f = 0; f < size(); ++f) {
    Family& fam = families_[f];
    const Vec3& x = mesh.node(fam.owner);
    if (point_segment_distance(x, a, b) > fam.delta * (1.0 + 1e-9)) continue;
    bool hit = false;
    for (size_t k = 1; k < fam.size(); ++k)
      if (fam.intact[k] && seg.crosses(x, mesh.node(fam.members[k]))) {
        fam.intact[k] = 0;
        hit = true;
      }
    if (hit) {
      check_size(fam, mesh.dim());
      changed.push_back(f);
    }
  }
  return changed;
}

std::vector<Index> FamilySet::break_bonds(const Mesh& mesh, const CrackPath& crack) {
  std::vector<Index> changed;
  for (Index f = 0; f < size(); ++f) {
    Family& fam = families_[f];
    const Vec3& x = mesh.node(fam.owner);
    bool hit = false;
    for (size_t k = 1; k < fam.size(); ++k)
      if (fam.intact[k] && crack.crosses(x, mesh.node(fam.members[k]))) {
        fam.intact[k] = 0;
        hit = true;
      }
    if (hit) {
      check_size(fam, mesh.dim());
      changed.push_back(f);
    }
  }
  return changed;
}

size_t FamilySet::num_broken() const {
  size_t n = 0;
  for (const Family& f : families_)
    for (size_t k = 1; k < f.size(); ++k) n += !f.intact[k];
  return n;
}

size_t FamilySet::num_bonds() const {
  size_t n = 0;
  for (const Family& f : families_) n += f.size() - 1;
  return n;
}

size_t FamilySet::memory_bytes() const {
  size_t b = 0;
  for (const Family& f : families_)
    b += f.size() * (sizeof(Index) + sizeof(Vec3) + 2 * sizeof(double) + 1);
  return b;
}

}  // namespace pdfem
