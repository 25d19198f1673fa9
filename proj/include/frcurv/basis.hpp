#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "frcurv/quadrature.hpp"
#include "frcurv/types.hpp"

namespace frc {

enum class BasisKind { LagrangeGLL, NormalizedLegendre };

// Degree-p polynomial basis on [-1,1].
class Basis1D {
 public:
  Basis1D(BasisKind kind, int p);

  BasisKind kind() const { return kind_; }
  int degree() const { return p_; }
  int size() const { return p_ + 1; }
  // GLL nodes of degree p ({0} when p = 0). Lagrange kind interpolates here.
  const std::vector<double>& nodes() const { return nodes_; }

  // Row i, column j: d^k chi_j / dxi^k at x_i.
  Eigen::MatrixXd eval(const std::vector<double>& x, int k = 0) const;
  // Single point, all basis functions.
  void eval_point(double x, int k, double* out) const;

 private:
  BasisKind kind_;
  int p_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  // k-th derivative of the Lagrange cardinal functions at the nodes is the k-th
  // power of D; cached for k up to p.
  std::vector<Eigen::MatrixXd> dpow_;
};

// Derivative orders (s, v, w), each in {0, p}, s + v + w >= p.
struct DerivativeSelector {
  int s = 0, v = 0, w = 0;
  int total() const { return s + v + w; }
  bool operator==(const DerivativeSelector&) const = default;
};

bool is_admissible(const DerivativeSelector& sel, int p, int dim);
// dim 1: {p}; dim 2: (p,0),(0,p),(p,p); dim 3: the seven nonzero combinations.
std::vector<DerivativeSelector> admissible_selectors(int p, int dim);

class TensorBasis {
 public:
  TensorBasis(BasisKind kind, int p, int dim);

  BasisKind kind() const { return line_.kind(); }
  int degree() const { return line_.degree(); }
  int dim() const { return dim_; }
  int size() const { return np_; }
  const Basis1D& line() const { return line_; }

  // Basis index j = j0 + (p+1) j1 + (p+1)^2 j2.
  Eigen::MatrixXd eval(const PointList& pts) const;
  // Arbitrary derivative orders per direction (no admissibility check).
  Eigen::MatrixXd eval_derivative(const PointList& pts, std::array<int, 3> orders) const;
  // Throws ConfigError for inadmissible selectors.
  Eigen::MatrixXd eval_partial(const DerivativeSelector& sel, const PointList& pts) const;
  // First derivatives, one matrix per reference direction (dim entries).
  std::vector<Eigen::MatrixXd> gradient(const PointList& pts) const;

 private:
  Basis1D line_;
  int dim_;
  int np_;
};

// Maps Lagrange-GLL coefficients to normalized-Legendre coefficients:
// T = Pi_ref chi(xi_v), both bases sampled on the same volume rule.
Eigen::MatrixXd legendre_transform(int p, int dim, const QuadratureRule& volume_rule);
Eigen::MatrixXd legendre_transform(int p, int dim);

}  // namespace frc
