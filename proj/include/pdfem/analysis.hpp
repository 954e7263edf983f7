#pragma once

#include "pdfem/assembly.hpp"
#include "pdfem/classification.hpp"
#include "pdfem/crack.hpp"
#include "pdfem/family.hpp"
#include "pdfem/fracture.hpp"
#include "pdfem/mesh.hpp"
#include "pdfem/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdfem {

struct Numerics {
  double m_delta = 3.0;
  double c = 1.0 / 3.0;
  double m_beta = 2.1;
  double m_r = 6.0;
  double alpha = 1.0;
  SolveOptions solver;
  bool full_pd = false;
  ShapeTensorBonds shape_bonds = ShapeTensorBonds::All;
};

/// Prescribed displacement on a node set. Driven groups are scaled by the load factor.
struct DirichletGroup {
  std::string name;
  std::vector<Index> nodes;
  int comp = 0;
  double value = 0.0;
  bool driven = false;
};

struct Problem {
  std::string name;
  Mesh mesh;
  CrackPath crack;
  Material material;
  Numerics num;
  std::vector<DirichletGroup> dirichlet;
  std::vector<TractionLoad> tractions;  // scaled by the load factor
  Vec3 body_force = Vec3::Zero();
  std::vector<PointLoad> point_loads;  // scaled by the load factor
};

/// Raised when a growing tip would leave the mesh.
class TipExitedDomain : public GeometryError {
public:
  using GeometryError::GeometryError;
};

struct Timings {
  double classify = 0, families = 0, coefficients = 0, assembly = 0, solve = 0;
  double total() const { return classify + families + coefficients + assembly + solve; }
};

struct StaticResult {
  Vec u;
  Vec F;  // external loads before constraints
  std::vector<Index> constrained;
  std::vector<double> reactions;  // per constrained DOF
  double reaction = 0.0;          // summed over the first driven group
  SolveStats stats;
};

/// Voigt stresses: one row per node (PD node value or mean over incident standard
/// elements) and one row per element (Gauss-point mean or mean of its PD nodes).
struct StressField {
  Mat point;
  Mat cell;
};
StressField recover_stress(const SolvedState& s);

/// A cracked body with its adaptive PD region, kept current as the crack grows.
class Model {
public:
  explicit Model(Problem p);

  const Problem& problem() const { return p_; }
  const Mesh& mesh() const { return p_.mesh; }
  const CrackPath& crack() const { return p_.crack; }
  const Classification& classification() const { return cls_; }
  const FamilySet& families() const { return fam_; }
  const std::vector<BondCoefficients>& coefficients() const { return coeffs_; }
  AssemblyInput assembly_input() const { return {p_.mesh, cls_, fam_, coeffs_, p_.material}; }

  /// Unconstrained global stiffness, assembled on first use after each change.
  const CsrMatrix& stiffness();
  Constraints constraints(double R) const;
  Vec loads(double R) const;
  StaticResult solve(double R);

  SolvedState solved_state(const Vec& u) const { return {p_.mesh, cls_, fam_, coeffs_, p_.material, u}; }
  SifResult sif(int tip, const Vec& u, double m_r) const;
  SifResult sif(int tip, const Vec& u) const { return sif(tip, u, p_.num.m_r); }

  double growth_length() const { return p_.num.alpha * p_.mesh.min_size(); }
  /// Extends tip t by d_c along theta, breaks the bonds it cuts and grows the PD region.
  void grow(int tip, double theta, double d_c);

  const Timings& timings() const { return t_; }
  void reset_timings() { t_ = {}; }

private:
  Problem p_;
  Classification cls_;
  FamilySet fam_;
  std::vector<BondCoefficients> coeffs_;
  std::optional<CsrMatrix> K_;
  Timings t_;
};

}  // namespace pdfem
