#include "pdfem/fracture.hpp"

#include "pdfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdfem {

TipFrame TipFrame::at(const CrackPath& crack, int t) {
  TipFrame f;
  f.tip = crack.tip(t);
  const Vec3 d = crack.tip_direction(t);
  f.Q << d.x(), d.y(), -d.y(), d.x();
  return f;
}

namespace {

Mat2 voigt_to_tensor(const Vec& v, bool engineering_shear) {
  Mat2 T;
  const double s = engineering_shear ? 0.5 * v[2] : v[2];
  T << v[0], s, s, v[1];
  return T;
}

// Angle where the crack first meets the circle walking back from the tip, in the tip frame.
double crack_crossing_angle(const CrackPath& crack, int tip, const TipFrame& frame, double r) {
  const auto& v = crack.vertices();
  const int n = static_cast<int>(v.size());
  auto vertex = [&](int k) { return tip == 0 ? v[k] : v[n - 1 - k]; };
  for (int k = 0; k + 1 < n; ++k) {
    const Vec2 a = frame.to_local(vertex(k)), b = frame.to_local(vertex(k + 1));
    if (b.norm() >= r) {
      // solve |a + t (b - a)| = r for t in [0, 1]
      const Vec2 d = b - a;
      const double A = d.squaredNorm(), B = 2 * a.dot(d), C = a.squaredNorm() - r * r;
      const double t = (-B + std::sqrt(std::max(0.0, B * B - 4 * A * C))) / (2 * A);
      const Vec2 p = a + t * d;
      return std::atan2(p.y(), p.x());
    }
  }
  const Vec2 far = frame.to_local(vertex(n - 1));
  return std::atan2(far.y(), far.x());
}

}  // namespace

Contour build_contour(const SolvedState& s, const CrackPath& crack, int tip, double m_r) {
  if (crack.dim() != 2 || s.mesh.dim() != 2) throw GeometryError("SIF evaluation is 2-D only");
  const Mesh& mesh = s.mesh;
  Contour c;
  c.frame = TipFrame::at(crack, tip);
  c.m_r = m_r;
  c.radius = m_r * mesh.min_size();
  const double r = c.radius;
  const Vec3& x0 = c.frame.tip;

  {
    PointLocator loc(mesh);
    for (int k = 0; k < 72; ++k) {
      const double a = 2 * M_PI * k / 72;
      if (!loc.locate(x0 + Vec3(r * std::cos(a), r * std::sin(a), 0.0)))
        throw GeometryError("integration circle leaves the domain");
    }
  }

  const Mat D = elasticity_matrix(s.material);
  std::vector<std::uint8_t> node_taken(mesh.num_nodes(), 0);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    double dmin = 1e300, dmax = 0.0;
    for (Index n : el.node_span()) {
      const double d = (mesh.node(n) - x0).norm();
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    if (!(dmin <= r && r <= dmax)) continue;
    if (s.cls.element_pd(e)) {
      for (Index n : el.node_span()) {
        if (node_taken[n] || (mesh.node(n) - x0).norm() <= r) continue;
        node_taken[n] = 1;
        const Family& fam = s.families.of_node(n);
        const BondCoefficients& co = s.coeffs[s.families.family_of(n)];
        const Vec uf = gather_family(fam, s.u, 2);
        const Mat C = strain_operator(fam, co);
        const Vec eps = C * uf;
        ContourPoint p;
        p.x = mesh.node(n);
        p.source = ContourPoint::Source::PDNode;
        p.id = n;
        p.grad = c.frame.tensor_to_local(Mat2(displacement_gradient(fam, co, uf)));
        p.strain = c.frame.tensor_to_local(voigt_to_tensor(eps, true));
        p.stress = c.frame.tensor_to_local(voigt_to_tensor(D * eps, false));
        c.points.push_back(p);
      }
    } else {
      Vec ue(2 * el.size());
      for (int k = 0; k < el.size(); ++k) ue.segment(2 * k, 2) = s.u.segment(2 * el.nodes[k], 2);
      for (const GaussStress& g : recover_stress_standard(el.kind, mesh.element_coords(e), ue, D)) {
        ContourPoint p;
        p.x = g.x;
        p.source = ContourPoint::Source::GaussPoint;
        p.id = e;
        p.grad = c.frame.tensor_to_local(Mat2(g.grad));
        p.strain = c.frame.tensor_to_local(voigt_to_tensor(g.strain, true));
        p.stress = c.frame.tensor_to_local(voigt_to_tensor(g.stress, false));
        c.points.push_back(p);
      }
    }
  }
  if (c.points.size() < 8) throw GeometryError("integration contour has fewer than 8 points");

  const double phi_c = crack_crossing_angle(crack, tip, c.frame, r);
  std::vector<double> psi(c.points.size()), rad(c.points.size());
  for (size_t k = 0; k < c.points.size(); ++k) {
    c.points[k].local = c.frame.to_local(c.points[k].x);
    double a = std::atan2(c.points[k].local.y(), c.points[k].local.x()) - phi_c;
    a = std::fmod(a, 2 * M_PI);
    if (a < 0) a += 2 * M_PI;
    psi[k] = a;
    rad[k] = c.points[k].local.norm();
  }
  std::vector<size_t> order(c.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return psi[a] != psi[b] ? psi[a] < psi[b] : rad[a] < rad[b];
  });
  std::vector<ContourPoint> sorted;
  sorted.reserve(order.size());
  for (size_t k : order) sorted.push_back(c.points[k]);
  c.points = std::move(sorted);

  c.active.assign(c.points.size() - 1, 1);
  for (size_t k = 0; k + 1 < c.points.size(); ++k) {
    if (!((c.points[k + 1].x - c.points[k].x).norm() > 0.0)) throw GeometryError("zero-length contour segment");
    if (crack.crosses(c.points[k].x, c.points[k + 1].x)) c.active[k] = 0;
  }
  return c;
}

double kolosov(const Material& m) {
  return m.mode == AnalysisMode::PlaneStrain ? 3.0 - 4.0 * m.nu : (3.0 - m.nu) / (1.0 + m.nu);
}

AuxFields auxiliary_fields(const Vec2& x, int mode, const Material& m) {
  const double r = x.norm();
  if (!(r > 0.0)) throw GeometryError("auxiliary field evaluated at the crack tip");
  if (mode != 1 && mode != 2) throw Error("auxiliary mode must be 1 or 2");
  const double phi = std::atan2(x.y(), x.x());
  const double k = kolosov(m);
  const double mu = m.shear_modulus();
  const double s = std::sin(phi / 2), c = std::cos(phi / 2);
  const double s3 = std::sin(1.5 * phi), c3 = std::cos(1.5 * phi);

  // u_a = A sqrt(r) f_a(phi)
  double f1, f2, df1, df2;
  if (mode == 1) {
    f1 = c * (k - 1 + 2 * s * s);
    f2 = s * (k + 1 - 2 * c * c);
    df1 = -0.5 * s * (k - 1 + 2 * s * s) + 2 * s * c * c;
    df2 = 0.5 * c * (k + 1 - 2 * c * c) + 2 * c * s * s;
  } else {
    f1 = s * (k + 1 + 2 * c * c);
    f2 = -c * (k - 1 - 2 * s * s);
    df1 = 0.5 * c * (k + 1 + 2 * c * c) - 2 * c * s * s;
    df2 = 0.5 * s * (k - 1 - 2 * s * s) + 2 * s * c * c;
  }
  const double A = 1.0 / (2 * mu * std::sqrt(2 * M_PI));
  const double sr = std::sqrt(r);
  AuxFields out;
  out.u = A * sr * Vec2(f1, f2);
  // d/dr = A f / (2 sqrt r), d/dphi = A sqrt(r) f'
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Vec2 dr = A / (2 * sr) * Vec2(f1, f2);
  const Vec2 dphi = A * sr * Vec2(df1, df2);
  out.grad.col(0) = cp * dr - sp / r * dphi;
  out.grad.col(1) = sp * dr + cp / r * dphi;
  out.strain = 0.5 * (out.grad + out.grad.transpose());

  const double q = 1.0 / std::sqrt(2 * M_PI * r);
  double s11, s22, s12;
  if (mode == 1) {
    s11 = q * c * (1 - s * s3);
    s22 = q * c * (1 + s * s3);
    s12 = q * s * c * c3;
  } else {
    s11 = -q * s * (2 + c * c3);
    s22 = q * s * c * c3;
    s12 = q * c * (1 - s * s3);
  }
  out.stress << s11, s12, s12, s22;
  return out;
}

double interaction_integrand(const ContourPoint& p, const AuxFields& aux, const Vec2& n) {
  const double w12 = (p.stress.array() * aux.strain.array()).sum();
  const double w21 = (aux.stress.array() * p.strain.array()).sum();
  const double scale = p.stress.norm() * aux.strain.norm() + aux.stress.norm() * p.strain.norm();
  if (std::abs(w12 - w21) > 1e-8 * scale)
    throw Error("cross-work identity violated at a contour point");
  double F = w12 * n[0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) F -= (p.stress(i, j) * aux.grad(i, 0) + aux.stress(i, j) * p.grad(i, 0)) * n[j];
  return F;
}

double interaction_integral(const Contour& c, int mode, const Material& m) {
  if (c.points.size() < 2) throw GeometryError("open chain needs at least two points");
  std::vector<AuxFields> aux;
  aux.reserve(c.points.size());
  for (const ContourPoint& p : c.points) aux.push_back(auxiliary_fields(p.local, mode, m));
  double I = 0.0;
  for (size_t k = 0; k + 1 < c.points.size(); ++k) {
    if (!c.active[k]) continue;
    const Vec2 t = c.points[k + 1].local - c.points[k].local;
    const double l = t.norm();
    if (!(l > 0.0)) throw GeometryError("zero-length contour segment");
    const Vec2 n(t.y() / l, -t.x() / l);
    I += 0.5 * l * (interaction_integrand(c.points[k], aux[k], n) + interaction_integrand(c.points[k + 1], aux[k + 1], n));
  }
  return I;
}

SifResult compute_sifs(const Contour& c, const Material& m) {
  SifResult r;
  const double Es = m.effective_modulus();
  r.K_I = 0.5 * Es * interaction_integral(c, 1, m);
  r.K_II = 0.5 * Es * interaction_integral(c, 2, m);
  r.theta_c = mcts_direction(r.K_I, r.K_II);
  r.K_eq = equivalent_sif(r.K_I, r.K_II, r.theta_c);
  r.m_r = c.m_r;
  r.points = static_cast<int>(c.points.size());
  return r;
}

double mcts_direction(double K_I, double K_II) {
  if (K_I == 0.0 && K_II == 0.0) throw Error("crack direction undefined: both SIFs are zero");
  if (std::abs(K_II) <= 1e-12 * std::abs(K_I)) return 0.0;
  const double ratio = K_I / K_II;
  const double root = 0.25 * std::sqrt(ratio * ratio + 8.0);
  return K_II > 0 ? 2.0 * std::atan(0.25 * ratio - root) : 2.0 * std::atan(0.25 * ratio + root);
}

double equivalent_sif(double K_I, double K_II, double theta_c) {
  const double c = std::cos(0.5 * theta_c);
  return K_I * c * c * c - 1.5 * K_II * c * std::sin(theta_c);
}

}  // namespace pdfem
