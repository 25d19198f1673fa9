#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frcurv/schemes.hpp"

namespace frc {

// Hybridized SBP operators on the stacked node set: volume nodes first, then
// the facet nodes of faces 0, 1, ..., 2*dim-1 in facet-rule order.
struct HybridizedOperator {
  int nv = 0, nf = 0;
  std::vector<Eigen::MatrixXd> Q;       // per reference direction, W chi D Pi
  std::vector<Eigen::MatrixXd> Qtilde;  // per reference direction
  std::vector<Eigen::MatrixXd> Qm;      // per physical direction
  Eigen::MatrixXd E;                    // [chi; chi_f0; chi_f1; ...], (nv+nf) x np
};

// Reference blocks only (Qm left empty).
HybridizedOperator build_hybridized_reference(const ReferenceOperators& ref);
HybridizedOperator build_hybridized(const ReferenceOperators& ref, const MetricData& metric);

// Residual from the Hadamard (two-point) volume form with the central flux
// a_i (u_j + u_k) / 2 plus the (f* - f(u)) interface term, filtered by N_m.
Eigen::VectorXd hadamard_residual(const Discretization& disc, const SchemeConfig& cfg,
                                  const Eigen::VectorXd& u);

}  // namespace frc
