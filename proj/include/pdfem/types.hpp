#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdfem {

using Index = std::int32_t;
using Vec3 = Eigen::Vector3d;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

/// Raised when a node family cannot support the least-squares fit.
class SingularShapeTensor : public Error {
public:
  SingularShapeTensor(Index node, const std::string& why)
      : Error("singular shape tensor at node " + std::to_string(node) + ": " + why), node_(node) {}
  Index node() const { return node_; }

private:
  Index node_;
};

class SolverError : public Error {
public:
  using Error::Error;
};

enum class AnalysisMode { PlaneStress, PlaneStrain, ThreeD };

inline int spatial_dim(AnalysisMode m) { return m == AnalysisMode::ThreeD ? 3 : 2; }

// Voigt sizes: (e11, e22, g12) in 2-D, (e11, e22, e33, g12, g23, g13) in 3-D.
inline int voigt_size(int dim) { return dim == 3 ? 6 : 3; }

struct Material {
  double E = 0.0;
  double nu = 0.0;
  double K_Ic = 0.0;
  AnalysisMode mode = AnalysisMode::PlaneStress;

  double shear_modulus() const { return E / (2.0 * (1.0 + nu)); }
  double lame_lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  /// Effective modulus E* used to convert the interaction integral into SIFs.
  double effective_modulus() const {
    return mode == AnalysisMode::PlaneStrain ? E / (1.0 - nu * nu) : E;
  }
  void validate(bool need_toughness = false) const;
};

}  // namespace pdfem
