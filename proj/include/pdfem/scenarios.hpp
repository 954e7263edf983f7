#pragma once

#include "pdfem/analysis.hpp"
#include "pdfem/simulation.hpp"

#include <string>
#include <vector>

namespace pdfem {

/// Node and face selectors used to place boundary conditions.
Index nearest_node(const Mesh& mesh, const Vec3& x);
std::vector<Index> nodes_within(const Mesh& mesh, const Vec3& center, double radius);
/// Nodes with coordinate `axis` equal to `value` within tol.
std::vector<Index> nodes_on_plane(const Mesh& mesh, int axis, double value, double tol);
/// Boundary faces whose nodes all lie on the plane.
std::vector<std::pair<Index, int>> boundary_faces_on_plane(const Mesh& mesh, int axis, double value, double tol);

/// A ready-to-run problem plus its load schedule and an optional sampling path.
struct Scenario {
  Problem problem;
  LoadSchedule schedule;
  std::vector<Vec3> path;
};

struct InfinitePlateParams {
  double theta_deg = 0.0;
  double sigma = 70e6;
  double a = 0.02;
  double m_beta = 2.1;
  double m_r = 6.0;
};

/// Closed-form SIFs of an inclined crack in an infinite plate under remote tension.
struct ClosedFormSif {
  double K_I, K_II, K0;
};
ClosedFormSif infinite_plate_sif(const InfinitePlateParams& p);

/// 1 m square plate, graded 57 x 57 grid with a 0.1 m uniform core, traction on the top and
/// bottom edges. The crack tip of interest is tip 1.
Scenario infinite_plate(const InfinitePlateParams& p = {});
/// 150 mm square rotated 45 degrees, pinned nodes near the two loading holes, inclined crack.
Scenario diagonal_plate();
/// Compact tension specimen, W = 50 mm, a = 15 mm, pin nodes driven apart.
Scenario ct_specimen();
/// 1 x 1 x 0.1 m block with a through crack, top and bottom faces pulled apart.
Scenario block3d(bool full_pd = false);

/// Looks up a built-in scenario by name: infinite_plate, diagonal_plate, ct, block3d.
Scenario builtin_scenario(const std::string& name, const InfinitePlateParams& plate = {});

/// Evenly spaced points along a polyline, `per_segment` intervals per segment.
std::vector<Vec3> sample_path(const std::vector<Vec3>& corners, int per_segment);

}  // namespace pdfem
