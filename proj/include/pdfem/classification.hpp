#pragma once

#include "pdfem/crack.hpp"
#include "pdfem/mesh.hpp"

#include <cstdint>
#include <vector>

namespace pdfem {

enum class Label : std::uint8_t { Standard = 0, AlphaPD = 1, BetaPD = 2 };

inline bool is_pd(Label l) { return l != Label::Standard; }

struct Classification {
  std::vector<Label> labels;          // per element
  std::vector<std::uint8_t> pd_node;  // per node
  double m_beta = 0.0;
  double r_beta = 0.0;
  CrackPath crack;  // crack the labels were computed for

  Index count(Label l) const;
  Index num_pd_nodes() const;
  bool element_pd(Index e) const { return is_pd(labels[e]); }
};

/// True if any element edge meets the crack (2-D also: a crack vertex inside the element).
bool element_touched_by_crack(const Mesh& mesh, Index e, const CrackPath& crack);

Classification classify_elements(const Mesh& mesh, const CrackPath& crack, double m_beta);

/// Monotone update after crack growth: the result is the union of the previous labels
/// and a fresh classification, with AlphaPD taking precedence over BetaPD.
Classification update_classification(const Classification& prev, const Mesh& mesh, const CrackPath& grown);

/// Builds a classification from explicit labels (crack-free patches, full-PD runs).
Classification classification_from_labels(const Mesh& mesh, std::vector<Label> labels, double m_beta = 0.0);

/// Every element PD: crack-touched elements AlphaPD, all others BetaPD.
Classification full_pd_classification(const Mesh& mesh, const CrackPath& crack);

}  // namespace pdfem
