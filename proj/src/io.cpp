#include "pdfem/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pdfem {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Reads non-empty, non-comment lines while tracking line numbers.
class LineReader {
public:
  LineReader(std::istream& in, std::string source) : in_(in), src_(std::move(source)) {}
  bool next(std::istringstream& ss) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos || line[p] == '#') continue;
      ss.clear();
      ss.str(line);
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(src_ + ":" + std::to_string(line_) + ": " + what);
  }
  void expect(std::istringstream& ss) {
    if (!next(ss)) fail("unexpected end of file");
  }

private:
  std::istream& in_;
  std::string src_;
  int line_ = 0;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  return f;
}

}  // namespace

Mesh parse_mesh(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::istringstream ss;
  r.expect(ss);
  int dim = 0;
  long nn = 0, ne = 0;
  double thickness = 1.0;
  if (!(ss >> dim >> nn >> ne >> thickness)) r.fail("expected header 'dim nnodes nelems thickness'");
  if ((dim != 2 && dim != 3) || nn <= 0 || ne <= 0) r.fail("invalid header");
  if (!(thickness > 0.0)) r.fail("thickness must be positive");
  std::vector<NodeRecord> nodes(nn);
  for (long k = 0; k < nn; ++k) {
    r.expect(ss);
    NodeRecord& n = nodes[k];
    n.x = Vec3::Zero();
    if (!(ss >> n.id >> n.x[0] >> n.x[1])) r.fail("expected node line 'id x y [z]'");
    if (dim == 3 && !(ss >> n.x[2])) r.fail("missing z coordinate");
  }
  std::vector<ElementRecord> elems(ne);
  for (long k = 0; k < ne; ++k) {
    r.expect(ss);
    ElementRecord& e = elems[k];
    std::string kind;
    if (!(ss >> e.id >> kind)) r.fail("expected element line 'id kind nodes...'");
    if (kind == "Q4") e.kind = ElementKind::Q4;
    else if (kind == "H8") e.kind = ElementKind::H8;
    else r.fail("unknown element kind '" + kind + "'");
    Index id;
    while (ss >> id) e.node_ids.push_back(id);
    if (static_cast<int>(e.node_ids.size()) != nodes_per_element(e.kind)) r.fail("wrong node count for " + kind);
  }
  return build_mesh(dim, nodes, elems, thickness);
}

Mesh read_mesh(const std::string& path) {
  auto f = open_in(path);
  return parse_mesh(f, path);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const int dim = mesh.dim();
  out << dim << ' ' << mesh.num_nodes() << ' ' << mesh.num_elements() << ' ' << num(mesh.thickness()) << '\n';
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    out << mesh.node_id(n);
    for (int a = 0; a < dim; ++a) out << ' ' << num(mesh.node(n)[a]);
    out << '\n';
  }
  for (const Element& el : mesh.elements()) {
    out << el.id << (el.kind == ElementKind::Q4 ? " Q4" : " H8");
    for (Index n : el.node_span()) out << ' ' << mesh.node_id(n);
    out << '\n';
  }
}

CrackPath parse_crack(std::istream& in, int dim, const std::string& source) {
  LineReader r(in, source);
  std::istringstream ss;
  r.expect(ss);
  long count = 0;
  if (!(ss >> count) || count <= 0) r.fail("expected a positive count");
  std::vector<Vec3> v;
  if (dim == 2) {
    for (long k = 0; k < count; ++k) {
      r.expect(ss);
      Vec3 a = Vec3::Zero(), b = Vec3::Zero();
      if (!(ss >> a[0] >> a[1] >> b[0] >> b[1])) r.fail("expected segment 'x1 y1 x2 y2'");
      if (v.empty()) {
        v.push_back(a);
      } else if ((a - v.back()).norm() > 1e-12 * (1.0 + a.norm())) {
        r.fail("segment does not start at the previous endpoint");
      }
      v.push_back(b);
    }
    try {
      return CrackPath::polyline(std::move(v));
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  for (long k = 0; k < count; ++k) {
    r.expect(ss);
    Vec3 a;
    if (!(ss >> a[0] >> a[1] >> a[2])) r.fail("expected vertex 'x y z'");
    v.push_back(a);
  }
  try {
    return CrackPath::planar_polygon(std::move(v));
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

CrackPath read_crack(const std::string& path, int dim) {
  auto f = open_in(path);
  return parse_crack(f, dim, path);
}

namespace {

void write_tensor(std::ostream& out, const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  double t[9] = {};
  if (v.size() == 3) {
    t[0] = v[0];
    t[4] = v[1];
    t[1] = t[3] = v[2];
  } else {
    t[0] = v[0];
    t[4] = v[1];
    t[8] = v[2];
    t[1] = t[3] = v[3];
    t[5] = t[7] = v[4];
    t[2] = t[6] = v[5];
  }
  for (int k = 0; k < 9; ++k) out << (k % 3 ? " " : (k ? "\n" : "")) << num(t[k]);
  out << "\n\n";
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const Classification& cls, const Vec& u,
               const StressField& stress, int step) {
  const int dim = mesh.dim();
  const Index nn = mesh.num_nodes(), ne = mesh.num_elements();
  if (u.size() != static_cast<Eigen::Index>(dim) * nn) throw Error("displacement size does not match the mesh");
  out << "# vtk DataFile Version 3.0\n";
  out << "pdfem step " << step << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (Index n = 0; n < nn; ++n) {
    const Vec3& x = mesh.node(n);
    out << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << '\n';
  }
  long size = 0;
  for (const Element& el : mesh.elements()) size += el.size() + 1;
  out << "CELLS " << ne << ' ' << size << '\n';
  for (const Element& el : mesh.elements()) {
    out << el.size();
    for (Index n : el.node_span()) out << ' ' << n;
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (const Element& el : mesh.elements()) out << (el.kind == ElementKind::Q4 ? 9 : 12) << '\n';

  out << "POINT_DATA " << nn << '\n';
  out << "VECTORS displacement double\n";
  for (Index n = 0; n < nn; ++n) {
    for (int a = 0; a < 3; ++a) out << (a ? " " : "") << num(a < dim ? u[dim * n + a] : 0.0);
    out << '\n';
  }
  out << "TENSORS stress double\n";
  for (Index n = 0; n < nn; ++n) write_tensor(out, stress.point.row(n));

  out << "CELL_DATA " << ne << '\n';
  out << "SCALARS classification int 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e) out << static_cast<int>(cls.labels[e]) << '\n';
  out << "TENSORS stress double\n";
  for (Index e = 0; e < ne; ++e) write_tensor(out, stress.cell.row(e));
}

void write_vtk(const std::string& path, const Mesh& mesh, const Classification& cls, const Vec& u,
               const StressField& stress, int step) {
  auto f = open_out(path);
  write_vtk(f, mesh, cls, u, stress, step);
  if (!f) throw Error("error writing " + path);
}

VtkData read_vtk(std::istream& in) {
  VtkData d;
  std::string line;
  for (int k = 0; k < 4; ++k)
    if (!std::getline(in, line)) throw Error("truncated VTK header");
  if (line.rfind("DATASET UNSTRUCTURED_GRID", 0) != 0) throw Error("not an unstructured grid");
  std::map<std::string, std::vector<double>>* section = nullptr;
  long count = 0;
  std::string key;
  auto read_values = [&](std::vector<double>& dst, long n) {
    dst.resize(n);
    for (long k = 0; k < n; ++k)
      if (!(in >> dst[k])) throw Error("truncated VTK data");
  };
  while (in >> key) {
    if (key == "POINTS") {
      std::string type;
      in >> count >> type;
      std::vector<double> v;
      read_values(v, 3 * count);
      for (long k = 0; k < count; ++k) d.points.emplace_back(v[3 * k], v[3 * k + 1], v[3 * k + 2]);
    } else if (key == "CELLS") {
      long size;
      in >> count >> size;
      for (long c = 0; c < count; ++c) {
        int m;
        in >> m;
        std::vector<Index> ids(m);
        for (int k = 0; k < m; ++k) in >> ids[k];
        d.cells.push_back(std::move(ids));
      }
    } else if (key == "CELL_TYPES") {
      in >> count;
      d.cell_types.resize(count);
      for (long c = 0; c < count; ++c) in >> d.cell_types[c];
    } else if (key == "POINT_DATA" || key == "CELL_DATA") {
      in >> count;
      section = key == "POINT_DATA" ? &d.point_data : &d.cell_data;
    } else if (key == "VECTORS" || key == "TENSORS" || key == "SCALARS") {
      if (!section) throw Error("VTK data array outside a data section");
      std::string name, type;
      in >> name >> type;
      int ncomp = key == "VECTORS" ? 3 : key == "TENSORS" ? 9 : 1;
      if (key == "SCALARS") {
        std::getline(in, line);
        std::istringstream rest(line);
        rest >> ncomp;
        if (!rest) ncomp = 1;
        std::string lt, table;
        in >> lt >> table;
      }
      read_values((*section)[name], ncomp * count);
    } else {
      throw Error("unexpected VTK keyword '" + key + "'");
    }
    if (!in) throw Error("malformed VTK file");
  }
  return d;
}

VtkData read_vtk(const std::string& path) {
  auto f = open_in(path);
  return read_vtk(f);
}

void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& history) {
  out << "step,load,tip_x,tip_y,K_I,K_II,K_eq,theta_c,reaction\n";
  for (const HistoryRow& r : history) {
    out << r.step;
    for (double v : {r.load, r.tip_x, r.tip_y, r.K_I, r.K_II, r.K_eq, r.theta_c, r.reaction}) out << ',' << num(v);
    out << '\n';
  }
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history) {
  if (history.empty()) throw Error("empty history");
  auto f = open_out(path);
  write_history_csv(f, history);
  if (!f) throw Error("error writing " + path);
}

}  // namespace pdfem
