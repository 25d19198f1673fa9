#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "frcurv/mesh.hpp"
#include "frcurv/metrics.hpp"
#include "frcurv/operators.hpp"

namespace frc {

enum class SchemeForm {
  DGConservativeStrong,
  DGNonConservativeStrong,
  DGSplit,
  ESFRClassicalSplit,
  ESFRSplit,
};
enum class FluxKind { Central, Upwind };

SchemeForm parse_scheme(const std::string& name);
std::string to_string(SchemeForm form);
FluxKind parse_flux(const std::string& name);
std::string to_string(FluxKind flux);
inline bool is_esfr(SchemeForm f) {
  return f == SchemeForm::ESFRSplit || f == SchemeForm::ESFRClassicalSplit;
}

struct SchemeConfig {
  SchemeForm form = SchemeForm::ESFRSplit;
  double c = 0.0;
  FluxKind flux = FluxKind::Upwind;
  Point a{1.0, 0.0, 0.0};
};

// Scalar normal flux n . f* at one facet node. n is the interior scaled normal.
double numerical_flux(double um, double up, const Eigen::Vector3d& n, const Point& a,
                      FluxKind flux);

struct DiscretizationOptions {
  int p = 3;
  int n_1d = 0;  // volume/facet GL points per direction; 0 means p + 1
  MetricForm metric = MetricForm::ConservativeCurl;
  double c = 0.0;
  NormSolve solve = NormSolve::Legendre;
};

// Mesh, reference operators, per-element metrics and factored norms.
class Discretization {
 public:
  Discretization(Mesh mesh, const DiscretizationOptions& opt);

  const Mesh& mesh() const { return mesh_; }
  const ReferenceOperators& ref() const { return ref_; }
  const DiscretizationOptions& options() const { return opt_; }
  const MetricData& metric(int e) const { return metrics_[e]; }
  const std::vector<MetricData>& metrics() const { return metrics_; }
  const ElementOperators& ops(int e) const { return ops_[e]; }
  int dim() const { return ref_.dim; }
  int np() const { return ref_.np; }
  int num_elements() const { return mesh_.num_elements(); }
  int ndof() const { return np() * num_elements(); }
  double c() const { return opt_.c; }
  // Unwarped element width over (p+1), averaged over directions and elements.
  double dx() const;

  // Element-wise projection u_m = Pi g(x(xi_v)).
  template <class F>
  Eigen::VectorXd project(F&& g) const {
    Eigen::VectorXd u(ndof());
    for (int e = 0; e < num_elements(); ++e) {
      const auto& x = metrics_[e].volume.x;
      Eigen::VectorXd v(ref_.nq);
      for (int k = 0; k < ref_.nq; ++k) v(k) = g(x[k]);
      u.segment(e * np(), np()) = ref_.Pi * v;
    }
    return u;
  }

 private:
  Mesh mesh_;
  DiscretizationOptions opt_;
  ReferenceOperators ref_;
  std::vector<MetricData> metrics_;
  std::vector<ElementOperators> ops_;
};

// Pre-inverse pieces of one element: (norm) du = -(volume + surface).
struct ElementTerms {
  Eigen::VectorXd volume, surface;
};

// Volume assembly of the given form (conservative, non-conservative, or split
// for the split/ESFR forms) for one element.
Eigen::VectorXd volume_term(const Discretization& disc, SchemeForm form, const Point& a,
                            const Eigen::Ref<const Eigen::VectorXd>& ue, int e);
ElementTerms element_terms(const Discretization& disc, const SchemeConfig& cfg,
                           const Eigen::VectorXd& u, int e);
// sum_f 1^T W_f (n . f*) for element e.
double face_flux_integral(const Discretization& disc, const SchemeConfig& cfg,
                          const Eigen::VectorXd& u, int e);

enum class Execution { Serial, Parallel };

// du/dt for the configured form. Element-parallel gather (OpenMP) unless Serial.
void residual(const Discretization& disc, const SchemeConfig& cfg, const Eigen::VectorXd& u,
              Eigen::VectorXd& du, Execution exec = Execution::Parallel);
Eigen::VectorXd residual(const Discretization& disc, const SchemeConfig& cfg,
                         const Eigen::VectorXd& u, Execution exec = Execution::Parallel);

// Serial reference: one pass over unique faces computing f* once and scattering
// it to both sides, then an element pass. Used to cross-check the parallel path.
Eigen::VectorXd residual_reference(const Discretization& disc, const SchemeConfig& cfg,
                                   const Eigen::VectorXd& u);

Eigen::VectorXd residual_dg_conservative(const Discretization&, SchemeConfig, const Eigen::VectorXd&);
Eigen::VectorXd residual_dg_nonconservative(const Discretization&, SchemeConfig, const Eigen::VectorXd&);
Eigen::VectorXd residual_dg_split(const Discretization&, SchemeConfig, const Eigen::VectorXd&);
Eigen::VectorXd residual_esfr_split(const Discretization&, SchemeConfig, const Eigen::VectorXd&);
Eigen::VectorXd residual_esfr_classical_split(const Discretization&, SchemeConfig, const Eigen::VectorXd&);

// Nodal reference flux coefficients f^r_j = Pi[(a . u) C(:, j)] for one element.
std::vector<Eigen::VectorXd> reference_flux_coeffs(const Discretization& disc, const Point& a,
                                                   const Eigen::Ref<const Eigen::VectorXd>& ue,
                                                   int e);

// Norm the energy is measured in: N_m for ESFR forms, M_m otherwise.
const Eigen::MatrixXd& norm_matrix(const Discretization& disc, SchemeForm form, int e);

}  // namespace frc
