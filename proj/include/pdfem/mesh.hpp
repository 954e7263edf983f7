#pragma once

#include "pdfem/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace pdfem {

enum class ElementKind { Q4, H8 };

inline int nodes_per_element(ElementKind k) { return k == ElementKind::Q4 ? 4 : 8; }
inline int faces_per_element(ElementKind k) { return k == ElementKind::Q4 ? 4 : 6; }
inline int nodes_per_face(ElementKind k) { return k == ElementKind::Q4 ? 2 : 4; }

/// Local node indices of each element face, ordered so that the face normal
/// computed by face_area_normal() points out of the element.
std::span<const int> local_face_nodes(ElementKind kind, int face);
/// Local node pairs of the element edges (4 for Q4, 12 for H8).
std::span<const std::array<int, 2>> local_edges(ElementKind kind);

struct Element {
  Index id = 0;  // external id
  ElementKind kind = ElementKind::Q4;
  std::array<Index, 8> nodes{};  // internal node indices, first nodes_per_element() used

  int size() const { return nodes_per_element(kind); }
  std::span<const Index> node_span() const { return {nodes.data(), static_cast<size_t>(size())}; }
};

struct Face {
  std::array<Index, 4> nodes{};  // as seen from owners[0]
  int count = 2;
  std::array<Index, 2> owners{-1, -1};
  int num_owners = 0;

  bool interior() const { return num_owners == 2; }
};

struct NodeRecord {
  Index id;
  Vec3 x;
};

struct ElementRecord {
  Index id;
  ElementKind kind;
  std::vector<Index> node_ids;  // external ids
};

/// Unstructured Q4 (2-D) or H8 (3-D) mesh. Immutable once built.
class Mesh {
public:
  int dim() const { return dim_; }
  double thickness() const { return thickness_; }
  Index num_nodes() const { return static_cast<Index>(x_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }

  const Vec3& node(Index n) const { return x_[n]; }
  const std::vector<Vec3>& nodes() const { return x_; }
  Index node_id(Index n) const { return node_ids_[n]; }
  const Element& element(Index e) const { return elements_[e]; }
  const std::vector<Element>& elements() const { return elements_; }

  /// Shortest edge of element e.
  double element_size(Index e) const { return size_[e]; }
  double min_size() const { return min_size_; }
  /// Element volume (area times thickness in 2-D).
  double element_volume(Index e) const { return volume_[e]; }
  const Vec3& centroid(Index e) const { return centroid_[e]; }

  std::span<const Index> elements_of_node(Index n) const {
    return {node_elem_.data() + node_elem_ptr_[n], static_cast<size_t>(node_elem_ptr_[n + 1] - node_elem_ptr_[n])};
  }
  const std::vector<Face>& faces() const { return faces_; }
  /// Global face index of local face f of element e.
  Index element_face(Index e, int f) const { return elem_face_[static_cast<size_t>(e) * 6 + f]; }
  Index num_boundary_faces() const;

  /// Element nodal coordinates as a (nodes x dim) matrix.
  Mat element_coords(Index e) const;
  /// Outward area vector (area * unit normal) of local face f of element e.
  /// In 2-D the edge length is multiplied by the thickness.
  Vec3 face_area_vector(Index e, int f) const;
  /// Bounding box of all nodes.
  std::pair<Vec3, Vec3> bounds() const;

  friend Mesh build_mesh(int dim, const std::vector<NodeRecord>& nodes,
                         const std::vector<ElementRecord>& elements, double thickness);

private:
  void finalize();

  int dim_ = 2;
  double thickness_ = 1.0;
  std::vector<Vec3> x_;
  std::vector<Index> node_ids_;
  std::vector<Element> elements_;
  std::vector<double> size_, volume_;
  std::vector<Vec3> centroid_;
  double min_size_ = 0.0;
  std::vector<Index> node_elem_ptr_, node_elem_;
  std::vector<Face> faces_;
  std::vector<Index> elem_face_;
};

/// Validates and builds a mesh. Throws GeometryError on inverted elements,
/// dangling node references and duplicate elements.
Mesh build_mesh(int dim, const std::vector<NodeRecord>& nodes,
                const std::vector<ElementRecord>& elements, double thickness);

/// Axis-aligned uniform grid of Q4 (2 divisions) or H8 (3 divisions) elements.
Mesh generate_structured_grid(const Vec3& lo, const Vec3& hi, std::span<const int> divisions,
                              double thickness = 1.0);

/// Tensor-product grid through the given coordinate lines (zs empty for 2-D).
Mesh generate_tensor_grid(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> zs, double thickness = 1.0);

/// Coordinate lines for [lo, hi] with a uniform core [core_lo, core_hi] split into
/// core_cells cells and geometric grading over outer_cells cells on each side.
std::vector<double> graded_lines(double lo, double hi, double core_lo, double core_hi,
                                 int core_cells, int outer_cells);

/// Finds the element containing a point and its local coordinates.
class PointLocator {
public:
  explicit PointLocator(const Mesh& mesh);
  struct Hit {
    Index element;
    Vec3 local;
  };
  std::optional<Hit> locate(const Vec3& x, double tol = 1e-9) const;
  /// Interpolates a nodal field with `ncomp` components per node.
  std::optional<Vec> interpolate(std::span<const double> field, int ncomp, const Vec3& x) const;

private:
  const Mesh& mesh_;
  Vec3 lo_, cell_;
  std::array<int, 3> n_{1, 1, 1};
  std::vector<std::vector<Index>> buckets_;
};

/// Newton inverse of the isoparametric map; returns nullopt if not converged.
std::optional<Vec3> inverse_map(ElementKind kind, const Mat& coords, const Vec3& x);

}  // namespace pdfem
