#pragma once

#include "pdfem/classification.hpp"
#include "pdfem/family.hpp"
#include "pdfem/mesh.hpp"
#include "pdfem/pdlsm.hpp"
#include "pdfem/sparse.hpp"

#include <map>
#include <vector>

namespace pdfem {

/// Everything the stiffness assembly reads. Coefficients are indexed by family index.
struct AssemblyInput {
  const Mesh& mesh;
  const Classification& cls;
  const FamilySet& families;
  const std::vector<BondCoefficients>& coeffs;
  const Material& material;
};

/// Coefficients for the listed families (all if `which` is null), computed in parallel.
void compute_coefficients(const FamilySet& families, int dim, std::vector<BondCoefficients>& coeffs,
                          const std::vector<Index>* which = nullptr,
                          ShapeTensorBonds bonds = ShapeTensorBonds::All);

/// Traction matrix N with N * sigma_voigt = sigma . n; dim x voigt.
Mat normal_matrix(const Vec3& n, int dim);

/// Rows of one PD node: `block` is dim x (dim * family size) over the node's family.
struct BlockContribution {
  Index node;
  Mat block;
};

/// -(V_e / N_e) H^(i) for each node i of PD element e.
std::vector<BlockContribution> pd_element_stiffness_body(const AssemblyInput& in, Index e);
/// (A_s / N_sn) N_s D C^(i) for each node of each contributing face of PD element e.
/// Faces shared with another PD element are skipped unless include_shared is set.
std::vector<BlockContribution> pd_element_stiffness_surface(const AssemblyInput& in, Index e,
                                                            bool include_shared = false);

/// Sorted unique node columns for every node row: element neighbours plus family members.
std::vector<std::vector<Index>> node_pattern(const AssemblyInput& in);

/// Global stiffness. Each node row is filled by one thread in a fixed order, so the result
/// does not depend on the thread count.
CsrMatrix assemble_global(const AssemblyInput& in);

/// Serial reference: literal per-element scatter of standard and PD element matrices.
CsrMatrix assemble_reference(const AssemblyInput& in, bool include_shared_faces = false);

struct TractionLoad {
  std::vector<std::pair<Index, int>> faces;  // (element, local face)
  Vec3 traction = Vec3::Zero();              // force per area
};

struct PointLoad {
  Index dof;
  double value;
};

/// Consistent nodal forces from face tractions, a body force per volume and point loads.
Vec assemble_loads(const Mesh& mesh, const std::vector<TractionLoad>& tractions, const Vec3& body_force,
                   const std::vector<PointLoad>& point_loads);

/// Prescribed DOF values, ordered by DOF.
using Constraints = std::map<Index, double>;

/// Adds a constraint; conflicting values for the same DOF raise an error.
void add_constraint(Constraints& c, Index dof, double value);

struct LinearSystem {
  CsrMatrix K;
  Vec F;
};

/// Row replacement: constrained rows become identity rows, known values move to the right
/// hand side and constrained columns are removed from the other rows.
LinearSystem apply_dirichlet(const CsrMatrix& K, const Vec& F, const Constraints& c);

}  // namespace pdfem
