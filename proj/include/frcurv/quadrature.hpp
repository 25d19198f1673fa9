#pragma once

#include <vector>

#include "frcurv/types.hpp"

namespace frc {

enum class RuleKind { GL, GLL };

struct QuadratureRule {
  RuleKind kind;
  std::vector<double> nodes;    // strictly increasing in [-1, 1]
  std::vector<double> weights;  // positive, sum to 2

  int size() const { return static_cast<int>(nodes.size()); }
  // Highest monomial degree integrated exactly.
  int exactness() const { return kind == RuleKind::GL ? 2 * size() - 1 : 2 * size() - 3; }
};

// Cached; the returned references stay valid for the life of the program.
const QuadratureRule& gl_rule(int n);
const QuadratureRule& gll_rule(int n);

// Legendre P_n and its derivative at x.
void legendre(int n, double x, double& value, double& derivative);

// Tensor-product rule on [-1,1]^dim. Index ordering is x fastest, then y, then z.
struct TensorRule {
  int dim = 0;
  PointList points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

TensorRule tensor_rule(const QuadratureRule& rule, int dim);

// Faces are numbered 2*d + side, side 0 at xi_d = -1 and side 1 at xi_d = +1.
inline int face_direction(int face) { return face / 2; }
inline double face_sign(int face) { return (face % 2) ? 1.0 : -1.0; }

// Facet rule on a face of [-1,1]^dim. The tangential directions are listed in
// increasing order, lowest fastest. In 1D the facet is one point of weight 1.
TensorRule facet_rule(const QuadratureRule& rule, int dim, int face);

}  // namespace frc
