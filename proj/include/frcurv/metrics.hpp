#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "frcurv/mesh.hpp"
#include "frcurv/quadrature.hpp"

namespace frc {

struct ReferenceOperators;

enum class MetricForm {
  ConservativeCurl,
  InvariantCurl,
  CrossProduct,
  // Negative control: curl taken pointwise at grid nodes, then interpolated.
  CurlThenInterpolate,
};

MetricForm parse_metric_form(const std::string& name);
std::string to_string(MetricForm form);

// Metric quantities at a list of reference points. C(n, i) = J (a^i)_n, so the
// reference flux is f^r_i = sum_n f_n C(n, i). Only the leading dim x dim block
// of C is meaningful.
struct MetricField {
  std::vector<Eigen::Matrix3d> C;
  std::vector<double> J;
  PointList x;  // physical coordinates
  int size() const { return static_cast<int>(J.size()); }
};

struct MetricData {
  MetricField volume;
  std::vector<MetricField> faces;
  // Scaled normal n^r C^T per facet node; for face f this is sign(f) times
  // column dir(f) of C.
  std::vector<std::vector<Eigen::Vector3d>> normals;
};

// Metric pipeline of element e at arbitrary reference points. Throws
// DegenerateMappingError if J <= 1e-12 at any point.
MetricField evaluate_metrics(const Mesh& mesh, int e, const PointList& ref_pts, MetricForm form);
// Physical coordinates and Jacobian determinant only.
MetricField evaluate_geometry(const Mesh& mesh, int e, const PointList& ref_pts);

MetricData compute_metrics(const Mesh& mesh, int e, const TensorRule& volume,
                           const std::vector<TensorRule>& facets, MetricForm form);

// Per physical row n: max over volume nodes of |sum_i d/dxi_i C(n, i)|, with C
// projected onto the degree-p basis and differentiated there.
std::array<double, 3> gcl_residual_rows(const MetricData& metric, const ReferenceOperators& ref);
double gcl_residual(const MetricData& metric, const ReferenceOperators& ref);
// max |C| over volume nodes; the scale GCL residuals are measured against.
double metric_scale(const MetricData& metric, int dim);

// Largest |n^- + n^+| over matched facet nodes. Faces across the periodic
// boundary are skipped when the warp is not periodic.
double facet_metric_consistency(const Mesh& mesh, const std::vector<MetricData>& metrics);

}  // namespace frc
