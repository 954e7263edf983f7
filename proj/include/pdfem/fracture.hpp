#pragma once

#include "pdfem/classification.hpp"
#include "pdfem/crack.hpp"
#include "pdfem/family.hpp"
#include "pdfem/mesh.hpp"
#include "pdfem/pdlsm.hpp"

#include <vector>

namespace pdfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Crack-tip frame: x1 along the prospective growth direction, x2 normal to it.
struct TipFrame {
  Vec3 tip = Vec3::Zero();
  Mat2 Q = Mat2::Identity();  // rows are the local axes in global coordinates

  static TipFrame at(const CrackPath& crack, int t);
  Vec2 to_local(const Vec3& x) const { return Q * (x.head<2>() - tip.head<2>()); }
  Vec2 vector_to_local(const Vec2& v) const { return Q * v; }
  Mat2 tensor_to_local(const Mat2& T) const { return Q * T * Q.transpose(); }
};

struct ContourPoint {
  enum class Source { PDNode, GaussPoint };
  Vec3 x = Vec3::Zero();
  Vec2 local = Vec2::Zero();
  Source source = Source::PDNode;
  Index id = -1;  // node index or element index
  Mat2 grad = Mat2::Zero();    // du_a/dx_b, tip frame
  Mat2 stress = Mat2::Zero();  // tip frame
  Mat2 strain = Mat2::Zero();  // tip frame
};

/// Open chain of points around the tip, counter-clockwise from the lower crack face.
/// active[k] tells whether segment (k, k+1) enters the integral.
struct Contour {
  TipFrame frame;
  double radius = 0.0;
  double m_r = 0.0;
  std::vector<ContourPoint> points;
  std::vector<std::uint8_t> active;
};

/// Read-only view of a solved model.
struct SolvedState {
  const Mesh& mesh;
  const Classification& cls;
  const FamilySet& families;
  const std::vector<BondCoefficients>& coeffs;
  const Material& material;
  const Vec& u;
};

/// Base circle r = m_r * Delta_min about tip t, selected elements, sorted point chain and
/// state-1 fields. Throws GeometryError if the circle leaves the domain or the chain has
/// fewer than 8 points.
Contour build_contour(const SolvedState& s, const CrackPath& crack, int tip, double m_r);

struct AuxFields {
  Vec2 u = Vec2::Zero();
  Mat2 grad = Mat2::Zero();  // du_a/dx_b
  Mat2 strain = Mat2::Zero();
  Mat2 stress = Mat2::Zero();
};

/// Williams near-tip fields with unit SIF (mode 1 or 2) at a point in the tip frame.
AuxFields auxiliary_fields(const Vec2& x, int mode, const Material& m);

/// Kolosov constant: (3 - nu)/(1 + nu) in plane stress, 3 - 4 nu in plane strain.
double kolosov(const Material& m);

/// Integrand F at a contour point for the given outward unit normal (tip frame).
double interaction_integrand(const ContourPoint& p, const AuxFields& aux, const Vec2& n);

/// Trapezoidal interaction integral over the active segments.
double interaction_integral(const Contour& c, int mode, const Material& m);

struct SifResult {
  double K_I = 0.0, K_II = 0.0, K_eq = 0.0, theta_c = 0.0;
  double m_r = 0.0;
  int points = 0;
};

SifResult compute_sifs(const Contour& c, const Material& m);

/// Maximum circumferential stress direction. Zero when |K_II| <= 1e-12 |K_I|.
double mcts_direction(double K_I, double K_II);
double equivalent_sif(double K_I, double K_II, double theta_c);

}  // namespace pdfem
