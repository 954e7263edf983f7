#pragma once

#include "pdfem/analysis.hpp"
#include "pdfem/simulation.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pdfem {

/// Plain-text mesh: header `dim nnodes nelems thickness`, node lines `id x y [z]`,
/// element lines `id Q4|H8 n1 .. n4|n8`. Lines starting with '#' are ignored.
Mesh parse_mesh(std::istream& in, const std::string& source = "<mesh>");
Mesh read_mesh(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

/// 2-D: `nsegments` then one `x1 y1 x2 y2` line per segment, consecutive segments sharing
/// an endpoint. 3-D: `nvertices` then one `x y z` line per polygon vertex.
CrackPath parse_crack(std::istream& in, int dim, const std::string& source = "<crack>");
CrackPath read_crack(const std::string& path, int dim);

/// Legacy ASCII VTK unstructured grid with displacement, Voigt stress (as full tensors) and
/// the element label (0 standard, 1 alpha-PD, 2 beta-PD).
void write_vtk(std::ostream& out, const Mesh& mesh, const Classification& cls, const Vec& u,
               const StressField& stress, int step);
void write_vtk(const std::string& path, const Mesh& mesh, const Classification& cls, const Vec& u,
               const StressField& stress, int step);

/// Minimal reader for the files written above.
struct VtkData {
  std::vector<Vec3> points;
  std::vector<std::vector<Index>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> point_data, cell_data;
};
VtkData read_vtk(std::istream& in);
VtkData read_vtk(const std::string& path);

/// Header plus one row per history entry.
void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& history);
void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history);

}  // namespace pdfem
