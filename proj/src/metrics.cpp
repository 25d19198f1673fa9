#include "frcurv/metrics.hpp"

#include <cmath>

#include "frcurv/operators.hpp"

namespace frc {

namespace {

constexpr double kDegenerateJ = 1e-12;
constexpr int kMaxLine = 16;

// Grid-node data of one element. 2D elements are extruded to 3D with two
// linear nodes in zeta and z = zeta, so the curl formulas are shared.
struct GridGeometry {
  int dim;
  int ng[3];
  std::vector<double> nodes[3];
  std::vector<Eigen::Vector3d> X;      // positions
  std::vector<Eigen::Matrix3d> dX;     // dX(m, j) = d x_m / d xi_j at grid nodes
  const Basis1D* shape;
  Basis1D linear{BasisKind::LagrangeGLL, 1};

  GridGeometry(const Mesh& mesh, int e) : dim(mesh.dim()), shape(&mesh.shape_line()) {
    const int nq = mesh.q() + 1;
    for (int d = 0; d < 3; ++d) {
      ng[d] = d < dim ? nq : (dim == 2 && d == 2 ? 2 : 1);
      nodes[d] = d < dim ? shape->nodes() : (ng[d] == 2 ? linear.nodes() : std::vector<double>{0.0});
    }
    const PointList& sp = mesh.support_points(e);
    const int n2d = ng[0] * ng[1];
    X.resize(n2d * ng[2]);
    for (int c = 0; c < ng[2]; ++c)
      for (int g = 0; g < n2d; ++g) {
        const Point& p = sp[dim == 3 ? c * n2d + g : g];
        X[c * n2d + g] = Eigen::Vector3d(p[0], p[1], dim == 3 ? p[2] : nodes[2][c]);
      }
    // Nodal differentiation per direction, applied along grid lines.
    dX.assign(X.size(), Eigen::Matrix3d::Zero());
    for (int j = 0; j < 3; ++j) {
      if (ng[j] == 1) continue;
      const Basis1D& b = (j < dim) ? *shape : linear;
      const Eigen::MatrixXd D = b.eval(b.nodes(), 1);
      for (std::size_t g = 0; g < X.size(); ++g) {
        int a[3] = {int(g) % ng[0], (int(g) / ng[0]) % ng[1], int(g) / n2d};
        Eigen::Vector3d acc = Eigen::Vector3d::Zero();
        const int self = a[j];
        for (int k = 0; k < ng[j]; ++k) {
          a[j] = k;
          acc += D(self, k) * X[a[0] + ng[0] * (a[1] + ng[1] * a[2])];
        }
        dX[g].col(j) = acc;
      }
    }
  }

  int size() const { return static_cast<int>(X.size()); }

  // 1D shape values and first derivatives at xi along each direction.
  void line_tables(const Point& xi, double th[3][kMaxLine], double dth[3][kMaxLine]) const {
    for (int d = 0; d < 3; ++d) {
      if (ng[d] == 1) {
        th[d][0] = 1.0;
        dth[d][0] = 0.0;
        continue;
      }
      const Basis1D& b = (d < dim) ? *shape : linear;
      const double t = d < dim ? xi[d] : 0.0;
      b.eval_point(t, 0, th[d]);
      b.eval_point(t, 1, dth[d]);
    }
  }

  // Tensor weights for value (j = -1) or d/dxi_j.
  void weights(const double th[3][kMaxLine], const double dth[3][kMaxLine], int j,
               std::vector<double>& w) const {
    w.resize(X.size());
    int g = 0;
    for (int c = 0; c < ng[2]; ++c)
      for (int b = 0; b < ng[1]; ++b)
        for (int a = 0; a < ng[0]; ++a, ++g)
          w[g] = (j == 0 ? dth[0][a] : th[0][a]) * (j == 1 ? dth[1][b] : th[1][b]) *
                 (j == 2 ? dth[2][c] : th[2][c]);
  }
};

// (n, m, l) cyclic.
constexpr int kM[3] = {1, 2, 0};
constexpr int kL[3] = {2, 0, 1};

}  // namespace

MetricForm parse_metric_form(const std::string& name) {
  if (name == "conservative-curl" || name == "curl") return MetricForm::ConservativeCurl;
  if (name == "invariant-curl") return MetricForm::InvariantCurl;
  if (name == "cross-product") return MetricForm::CrossProduct;
  throw ConfigError("unknown metric form '" + name + "'");
}

std::string to_string(MetricForm form) {
  switch (form) {
    case MetricForm::ConservativeCurl: return "conservative-curl";
    case MetricForm::InvariantCurl: return "invariant-curl";
    case MetricForm::CrossProduct: return "cross-product";
    case MetricForm::CurlThenInterpolate: return "curl-then-interpolate";
  }
  return "?";
}

static MetricField evaluate_impl(const Mesh& mesh, int e, const PointList& pts, MetricForm form,
                                 bool with_C) {
  MetricField out;
  const int npts = static_cast<int>(pts.size());
  out.J.resize(npts);
  out.x.resize(npts);
  if (with_C) out.C.assign(npts, Eigen::Matrix3d::Zero());
  const GridGeometry G(mesh, e);
  const int dim = mesh.dim();
  const int ng = G.size();

  // Grid-node vector fields V^(n)_j whose curl gives row n of C.
  std::vector<Eigen::Matrix3d> V;  // V[g](n, j)
  std::vector<Eigen::Matrix3d> Wc;  // pointwise curl at grid nodes
  if (with_C && dim > 1) {
    if (form == MetricForm::ConservativeCurl || form == MetricForm::InvariantCurl) {
      V.assign(ng, Eigen::Matrix3d::Zero());
      for (int g = 0; g < ng; ++g)
        for (int n = 0; n < 3; ++n) {
          const int m = kM[n], l = kL[n];
          for (int j = 0; j < 3; ++j) {
            if (form == MetricForm::ConservativeCurl)
              V[g](n, j) = G.X[g](l) * G.dX[g](m, j);
            else
              V[g](n, j) = 0.5 * (G.X[g](l) * G.dX[g](m, j) - G.X[g](m) * G.dX[g](l, j));
          }
        }
    } else if (form == MetricForm::CurlThenInterpolate) {
      Wc.assign(ng, Eigen::Matrix3d::Zero());
      for (int g = 0; g < ng; ++g)
        for (int n = 0; n < 3; ++n) {
          const Eigen::Vector3d gl = G.dX[g].row(kL[n]).transpose();
          const Eigen::Vector3d gm = G.dX[g].row(kM[n]).transpose();
          Wc[g].row(n) = -gl.cross(gm).transpose();
        }
    }
  }

  double th[3][kMaxLine], dth[3][kMaxLine];
  std::vector<double> w0, wd[3];
  for (int k = 0; k < npts; ++k) {
    G.line_tables(pts[k], th, dth);
    G.weights(th, dth, -1, w0);
    for (int j = 0; j < 3; ++j) G.weights(th, dth, j, wd[j]);

    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();  // A(m, j) = dx_m/dxi_j
    for (int g = 0; g < ng; ++g) {
      x += w0[g] * G.X[g];
      for (int j = 0; j < 3; ++j) A.col(j) += wd[j][g] * G.X[g];
    }
    out.x[k] = {x(0), dim > 1 ? x(1) : 0.0, dim > 2 ? x(2) : 0.0};
    const double J = (dim == 1) ? A(0, 0) : A.determinant();
    if (!(J > kDegenerateJ))
      throw DegenerateMappingError("degenerate mapping: J = " + std::to_string(J) + " in element " +
                                   std::to_string(e) + " at point " + std::to_string(k));
    out.J[k] = J;
    if (!with_C) continue;

    Eigen::Matrix3d& C = out.C[k];
    if (dim == 1) {
      C(0, 0) = 1.0;
      continue;
    }
    switch (form) {
      case MetricForm::ConservativeCurl:
      case MetricForm::InvariantCurl: {
        // dV(n, j, kk) = d/dxi_j of V^(n)_kk at the target point.
        double dV[3][3][3] = {};
        for (int g = 0; g < ng; ++g)
          for (int j = 0; j < 3; ++j) {
            const double wj = wd[j][g];
            if (wj == 0.0) continue;
            for (int n = 0; n < 3; ++n)
              for (int kk = 0; kk < 3; ++kk) dV[n][j][kk] += wj * V[g](n, kk);
          }
        for (int n = 0; n < 3; ++n) {
          C(n, 0) = -(dV[n][1][2] - dV[n][2][1]);
          C(n, 1) = -(dV[n][2][0] - dV[n][0][2]);
          C(n, 2) = -(dV[n][0][1] - dV[n][1][0]);
        }
        break;
      }
      case MetricForm::CrossProduct:
        for (int i = 0; i < 3; ++i) {
          const Eigen::Vector3d ja = A.col((i + 1) % 3).cross(A.col((i + 2) % 3));
          C.col(i) = ja;
        }
        break;
      case MetricForm::CurlThenInterpolate:
        for (int g = 0; g < ng; ++g) C += w0[g] * Wc[g];
        break;
    }
  }
  return out;
}

MetricField evaluate_metrics(const Mesh& mesh, int e, const PointList& ref_pts, MetricForm form) {
  return evaluate_impl(mesh, e, ref_pts, form, true);
}

MetricField evaluate_geometry(const Mesh& mesh, int e, const PointList& ref_pts) {
  return evaluate_impl(mesh, e, ref_pts, MetricForm::CrossProduct, false);
}

MetricData compute_metrics(const Mesh& mesh, int e, const TensorRule& volume,
                           const std::vector<TensorRule>& facets, MetricForm form) {
  MetricData md;
  md.volume = evaluate_metrics(mesh, e, volume.points, form);
  for (std::size_t f = 0; f < facets.size(); ++f) {
    md.faces.push_back(evaluate_metrics(mesh, e, facets[f].points, form));
    const int d = face_direction(static_cast<int>(f));
    const double s = face_sign(static_cast<int>(f));
    std::vector<Eigen::Vector3d> nrm;
    for (const auto& C : md.faces.back().C) {
      Eigen::Vector3d v = s * C.col(d);
      for (int k = mesh.dim(); k < 3; ++k) v(k) = 0.0;
      nrm.push_back(v);
    }
    md.normals.push_back(std::move(nrm));
  }
  return md;
}

std::array<double, 3> gcl_residual_rows(const MetricData& metric, const ReferenceOperators& ref) {
  std::array<double, 3> rows{0.0, 0.0, 0.0};
  const int nq = metric.volume.size();
  for (int n = 0; n < ref.dim; ++n) {
    Eigen::VectorXd div = Eigen::VectorXd::Zero(nq);
    for (int i = 0; i < ref.dim; ++i) {
      Eigen::VectorXd c(nq);
      for (int k = 0; k < nq; ++k) c(k) = metric.volume.C[k](n, i);
      div += ref.grad[i] * (ref.Pi * c);
    }
    rows[n] = div.cwiseAbs().maxCoeff();
  }
  return rows;
}

double gcl_residual(const MetricData& metric, const ReferenceOperators& ref) {
  const auto r = gcl_residual_rows(metric, ref);
  return std::max({r[0], r[1], r[2]});
}

double metric_scale(const MetricData& metric, int dim) {
  double s = 0.0;
  for (const auto& C : metric.volume.C) s = std::max(s, C.topLeftCorner(dim, dim).cwiseAbs().maxCoeff());
  return s;
}

double facet_metric_consistency(const Mesh& mesh, const std::vector<MetricData>& metrics) {
  double worst = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int f = 0; f < mesh.num_faces(); ++f) {
      const FaceLink& L = mesh.link(e, f);
      if (L.wraps && !mesh.geometrically_periodic()) continue;
      const auto& mine = metrics[e].normals[f];
      const auto& theirs = metrics[L.neighbor].normals[L.neighbor_face];
      for (std::size_t k = 0; k < mine.size(); ++k) {
        const int kk = L.perm.empty() ? static_cast<int>(k) : L.perm[k];
        worst = std::max(worst, (mine[k] + theirs[kk]).cwiseAbs().maxCoeff());
      }
    }
  return worst;
}

}  // namespace frc
