#include "pdfem/assembly.hpp"
#include "pdfem/fem.hpp"

namespace pdfem {

std::vector<BlockContribution> pd_element_stiffness_body(const AssemblyInput& in, Index e) {
  const Element& el = in.mesh.element(e);
  const double share = in.mesh.element_volume(e) / el.size();
  std::vector<BlockContribution> out;
  for (Index n : el.node_span()) {
    if (!in.families.has(n)) throw Error("missing family for PD node " + std::to_string(n));
    const Index f = in.families.family_of(n);
    out.push_back({n, -share * internal_force_operator(in.families.family(f), in.coeffs[f], in.material)});
  }
  return out;
}

std::vector<BlockContribution> pd_element_stiffness_surface(const AssemblyInput& in, Index e, bool include_shared) {
  const Mesh& mesh = in.mesh;
  const Element& el = mesh.element(e);
  const int dim = mesh.dim();
  const Mat D = elasticity_matrix(in.material);
  std::vector<BlockContribution> out;
  for (int s = 0; s < faces_per_element(el.kind); ++s) {
    const Face& face = mesh.faces()[mesh.element_face(e, s)];
    if (face.interior() && !include_shared) {
      const Index other = face.owners[0] == e ? face.owners[1] : face.owners[0];
      if (in.cls.element_pd(other)) continue;
    }
    const Vec3 A = mesh.face_area_vector(e, s);
    const double area = A.norm();
    const Mat Ns = normal_matrix(A / area, dim);
    auto ln = local_face_nodes(el.kind, s);
    for (int k : ln) {
      const Index n = el.nodes[k];
      if (!in.families.has(n)) throw Error("missing family for PD node " + std::to_string(n));
      const Index f = in.families.family_of(n);
      const Mat C = strain_operator(in.families.family(f), in.coeffs[f]);
      out.push_back({n, (area / static_cast<double>(ln.size())) * (Ns * D * C)});
    }
  }
  return out;
}

CsrMatrix assemble_reference(const AssemblyInput& in, bool include_shared_faces) {
  const Mesh& mesh = in.mesh;
  const int dim = mesh.dim();
  const Mat D = elasticity_matrix(in.material);
  CsrMatrix K = block_pattern(node_pattern(in), dim, mesh.num_nodes());
  auto add = [&](Index r, Index c, double v) { K.val[K.find(r, c)] += v; };

  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    if (!in.cls.element_pd(e)) {
      const Mat k = standard_element_stiffness(el.kind, mesh.element_coords(e), D, mesh.thickness());
      for (int li = 0; li < el.size(); ++li)
        for (int lj = 0; lj < el.size(); ++lj)
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
              add(el.nodes[li] * dim + a, el.nodes[lj] * dim + b, k(li * dim + a, lj * dim + b));
      continue;
    }
    auto scatter = [&](const std::vector<BlockContribution>& blocks) {
      for (const BlockContribution& bc : blocks) {
        const Family& fam = in.families.of_node(bc.node);
        for (size_t m = 0; m < fam.size(); ++m)
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) add(bc.node * dim + a, fam.members[m] * dim + b, bc.block(a, dim * m + b));
      }
    };
    scatter(pd_element_stiffness_body(in, e));
    scatter(pd_element_stiffness_surface(in, e, include_shared_faces));
  }
  K.drop_zeros();
  return K;
}

}  // namespace pdfem
