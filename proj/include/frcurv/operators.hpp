#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "frcurv/basis.hpp"
#include "frcurv/metrics.hpp"
#include "frcurv/quadrature.hpp"

namespace frc {

struct ReferenceOperators {
  int p = 0, dim = 0;
  int np = 0;   // basis functions
  int nq = 0;   // volume cubature nodes
  int nfq = 0;  // facet cubature nodes per face
  QuadratureRule volume_1d{RuleKind::GL, {}, {}};
  TensorRule volume;
  std::vector<TensorRule> facets;
  Eigen::MatrixXd chi;                // [nq x np]
  std::vector<Eigen::MatrixXd> grad;  // per direction, [nq x np]
  Eigen::VectorXd w;                  // volume weights
  Eigen::MatrixXd M;                  // chi^T W chi
  std::vector<Eigen::MatrixXd> S;     // chi^T W grad_d
  std::vector<Eigen::MatrixXd> D;     // M^-1 S_d
  Eigen::MatrixXd Pi;                 // M^-1 chi^T W, [np x nq]
  std::vector<Eigen::MatrixXd> chi_face;  // per face, [nfq x np]
  Eigen::VectorXd w_face;
  // Admissible selectors with their derivative tables at volume nodes and the
  // matching products of D powers.
  std::vector<DerivativeSelector> selectors;
  std::vector<Eigen::MatrixXd> dsel;
  std::vector<Eigen::MatrixXd> dpow;
  // Normalized-Legendre evaluations and selector derivatives at volume nodes,
  // and the coefficient map back to the scheme basis (u = to_basis * u_leg).
  Eigen::MatrixXd legendre;
  std::vector<Eigen::MatrixXd> dsel_legendre;
  std::shared_ptr<const Eigen::MatrixXd> to_basis;
};

// Throws ConfigError unless the volume rule integrates degree 2p-1 exactly.
ReferenceOperators build_reference(const TensorBasis& basis, const QuadratureRule& volume_rule,
                                   const QuadratureRule& facet_rule);
// Lagrange-GLL basis with n_1d Gauss-Legendre points for volume and facets.
ReferenceOperators build_reference(int p, int dim, int n_1d);

// c_(s,v,w) = c_1D^((s+v+w)/p).
struct CorrectionParameter {
  double c1d = 0.0;
  double ladder(const DerivativeSelector& sel, int p) const;
};

Eigen::MatrixXd build_mass(const ReferenceOperators& ref, const std::vector<double>& J);
// sum_sel c_sel d^sel chi^T W J d^sel chi
Eigen::MatrixXd build_Km(const ReferenceOperators& ref, const std::vector<double>& J,
                         const CorrectionParameter& c);
// sum_sel c_sel (D^s D^v D^w)^T M_m (D^s D^v D^w)
Eigen::MatrixXd build_Km_sandwich(const ReferenceOperators& ref, const Eigen::MatrixXd& Mm,
                                  const CorrectionParameter& c);
// Jacobian differentiated along with the test function: sum c d^sel chi^T W d^sel Pi(J chi).
// Not a norm on curved elements; kept as a negative control.
Eigen::MatrixXd build_Km_jacobian_inside(const ReferenceOperators& ref,
                                         const std::vector<double>& J,
                                         const CorrectionParameter& c);
// Same sum in the normalized-Legendre basis.
Eigen::MatrixXd build_Km_legendre(int p, int dim, const TensorRule& volume,
                                  const std::vector<double>& J, const CorrectionParameter& c);

// Where N_m is factored. Nodal factors the Lagrange-basis N_m directly; its
// conditioning grows like c^dim and the solve loses digits at large c.
enum class NormSolve { Legendre, Nodal };

struct ElementOperators {
  Eigen::MatrixXd Mm, Km, Nm;
  Eigen::LLT<Eigen::MatrixXd> Mm_llt;
  // N_m factored in the Legendre basis, where K_m is graded by mode and the
  // factorization keeps its accuracy at large c. N_m = A^-T Nleg A^-1 with
  // A = to_basis.
  Eigen::LLT<Eigen::MatrixXd> Nleg_llt;
  std::shared_ptr<const Eigen::MatrixXd> to_basis;
  Eigen::LLT<Eigen::MatrixXd> Nm_llt;  // NormSolve::Nodal only
  NormSolve solve = NormSolve::Legendre;
  // grad_tilde[k] row q: sum_i d chi / d xi_i (xi_q) C(k, i)(xi_q).
  std::vector<Eigen::MatrixXd> grad_tilde;

  Eigen::VectorXd solve_N(const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve_M(const Eigen::VectorXd& b) const;
};

// Throws StabilityDomainError when N_m = M_m + K_m is not SPD.
ElementOperators build_element_operators(const ReferenceOperators& ref, const MetricField& volume,
                                         const CorrectionParameter& c,
                                         NormSolve solve = NormSolve::Legendre);

struct FilterPair {
  Eigen::MatrixXd F;      // N_m^-1 M_m, Lagrange basis
  Eigen::MatrixXd F_ref;  // T F T^-1, normalized-Legendre basis
};
// J and c must be the ones eo was built from.
FilterPair build_filter(const ReferenceOperators& ref, const ElementOperators& eo,
                        const std::vector<double>& J, const CorrectionParameter& c);

// Infimum of c_1D keeping M + K(c) SPD on the affine reference element.
double estimate_c_minus(const ReferenceOperators& ref, double tol = 1e-10);
bool norm_is_spd(const ReferenceOperators& ref, double c1d);

}  // namespace frc
