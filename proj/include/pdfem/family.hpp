#pragma once

#include "pdfem/classification.hpp"
#include "pdfem/crack.hpp"
#include "pdfem/mesh.hpp"

#include <cstdint>
#include <vector>

namespace pdfem {

/// Neighbourhood of one PD node. Member 0 is the owner itself.
struct Family {
  Index owner = -1;
  double delta = 0.0;
  std::vector<Index> members;
  std::vector<Vec3> xi;  // x_m - x_i
  std::vector<double> volume;
  std::vector<double> weight;
  std::vector<std::uint8_t> intact;  // bond status mu

  size_t size() const { return members.size(); }
  Index num_intact_neighbors() const;
};

/// Gauss weight exp(-(r / (c delta))^2).
double gauss_weight(double r, double c, double delta);

/// Lumped nodal volume: sum over incident elements of V_e / N_e.
std::vector<double> nodal_volumes(const Mesh& mesh);

/// Horizon per node: m_delta times the largest size of the incident elements.
std::vector<double> nodal_horizons(const Mesh& mesh, double m_delta);

/// Families of all PD nodes, indexed through family_of(node).
class FamilySet {
public:
  FamilySet() = default;
  FamilySet(const Mesh& mesh, const Classification& cls, const CrackPath& crack, double m_delta, double c);

  Index family_of(Index node) const { return index_[node]; }
  bool has(Index node) const { return index_[node] >= 0; }
  const Family& family(Index f) const { return families_[f]; }
  const Family& of_node(Index node) const { return families_[index_[node]]; }
  Index size() const { return static_cast<Index>(families_.size()); }
  const std::vector<Family>& families() const { return families_; }
  double m_delta() const { return m_delta_; }
  double c() const { return c_; }

  /// Builds families for PD nodes that do not have one yet. Returns their family indices.
  std::vector<Index> add_missing(const Mesh& mesh, const Classification& cls, const CrackPath& crack);
  /// Breaks intact bonds crossing the segment (a, b). Returns the indices of changed families.
  std::vector<Index> break_bonds(const Mesh& mesh, const Vec3& a, const Vec3& b);
  /// Breaks intact bonds crossing the crack. Returns the indices of changed families.
  std::vector<Index> break_bonds(const Mesh& mesh, const CrackPath& crack);

  size_t num_broken() const;
  size_t num_bonds() const;
  size_t memory_bytes() const;

private:
  Family build_one(const Mesh& mesh, Index node, const CrackPath& crack) const;
  void build_grid(const Mesh& mesh);
  void check_size(const Family& f, int dim) const;

  std::vector<Index> index_;
  std::vector<Family> families_;
  std::vector<double> horizon_, volume_;
  double m_delta_ = 3.0, c_ = 1.0 / 3.0;
  // background grid over all nodes
  Vec3 lo_ = Vec3::Zero();
  double cell_ = 1.0;
  std::array<long, 3> n_{1, 1, 1};
  std::vector<Index> cell_ptr_, cell_nodes_;
};

}  // namespace pdfem
