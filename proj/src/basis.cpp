#include "frcurv/basis.hpp"

#include <cmath>

namespace frc {

Basis1D::Basis1D(BasisKind kind, int p) : kind_(kind), p_(p) {
  if (p < 0 || p > 12) throw ConfigError("Basis1D: degree must be in 0..12");
  nodes_ = (p == 0) ? std::vector<double>{0.0} : gll_rule(p + 1).nodes;
  const int n = p + 1;
  bary_.assign(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k)
      if (k != j) bary_[j] *= nodes_[j] - nodes_[k];
    bary_[j] = 1.0 / bary_[j];
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (i != j) D(i, j) = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
    D(i, i) = -D.row(i).sum();
  }
  dpow_.push_back(Eigen::MatrixXd::Identity(n, n));
  for (int k = 1; k <= p; ++k) dpow_.push_back(D * dpow_.back());
}

void Basis1D::eval_point(double x, int k, double* out) const {
  const int n = size();
  if (k > p_) {
    for (int j = 0; j < n; ++j) out[j] = 0.0;
    return;
  }
  if (kind_ == BasisKind::NormalizedLegendre) {
    // d^k P_m via the derivative form of the three-term recurrence.
    std::vector<std::vector<double>> P(k + 1, std::vector<double>(n, 0.0));
    for (int d = 0; d <= k; ++d) {
      P[d][0] = (d == 0) ? 1.0 : 0.0;
      if (n > 1) P[d][1] = (d == 0) ? x : (d == 1 ? 1.0 : 0.0);
      for (int m = 1; m + 1 < n; ++m) {
        double t = (2 * m + 1) * x * P[d][m];
        if (d > 0) t += (2 * m + 1) * d * P[d - 1][m];
        P[d][m + 1] = (t - m * P[d][m - 1]) / (m + 1);
      }
    }
    for (int m = 0; m < n; ++m) out[m] = std::sqrt((2.0 * m + 1.0) / 2.0) * P[k][m];
    return;
  }
  // Barycentric cardinal values, then differentiate through D^k.
  Eigen::RowVectorXd l(n);
  int hit = -1;
  for (int j = 0; j < n; ++j)
    if (x == nodes_[j]) hit = j;
  if (hit >= 0) {
    l.setZero();
    l(hit) = 1.0;
  } else {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      l(j) = bary_[j] / (x - nodes_[j]);
      s += l(j);
    }
    l /= s;
  }
  Eigen::Map<Eigen::RowVectorXd>(out, n) = (k == 0) ? l : Eigen::RowVectorXd(l * dpow_[k]);
}

Eigen::MatrixXd Basis1D::eval(const std::vector<double>& x, int k) const {
  Eigen::MatrixXd out(x.size(), size());
  std::vector<double> row(size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    eval_point(x[i], k, row.data());
    for (int j = 0; j < size(); ++j) out(i, j) = row[j];
  }
  return out;
}

bool is_admissible(const DerivativeSelector& sel, int p, int dim) {
  auto ok = [p](int o) { return o == 0 || o == p; };
  if (!ok(sel.s) || !ok(sel.v) || !ok(sel.w)) return false;
  if (dim < 2 && sel.v != 0) return false;
  if (dim < 3 && sel.w != 0) return false;
  return p > 0 && sel.total() >= p;
}

std::vector<DerivativeSelector> admissible_selectors(int p, int dim) {
  std::vector<DerivativeSelector> out;
  if (p == 0) return out;
  switch (dim) {
    case 1:
      out = {{p, 0, 0}};
      break;
    case 2:
      out = {{p, 0, 0}, {0, p, 0}, {p, p, 0}};
      break;
    case 3:
      out = {{p, 0, 0}, {0, p, 0}, {0, 0, p}, {p, p, 0}, {p, 0, p}, {0, p, p}, {p, p, p}};
      break;
    default:
      throw ConfigError("admissible_selectors: dim must be 1, 2 or 3");
  }
  return out;
}

TensorBasis::TensorBasis(BasisKind kind, int p, int dim) : line_(kind, p), dim_(dim) {
  if (dim < 1 || dim > 3) throw ConfigError("TensorBasis: dim must be 1, 2 or 3");
  np_ = 1;
  for (int d = 0; d < dim; ++d) np_ *= p + 1;
}

Eigen::MatrixXd TensorBasis::eval_derivative(const PointList& pts,
                                             std::array<int, 3> orders) const {
  const int n = line_.size();
  Eigen::MatrixXd out(pts.size(), np_);
  std::vector<double> f[3];
  for (auto& v : f) v.assign(n, 1.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int d = 0; d < dim_; ++d) line_.eval_point(pts[i][d], orders[d], f[d].data());
    const int nz = dim_ > 2 ? n : 1, ny = dim_ > 1 ? n : 1;
    int j = 0;
    for (int c = 0; c < nz; ++c)
      for (int b = 0; b < ny; ++b)
        for (int a = 0; a < n; ++a) out(i, j++) = f[0][a] * f[1][dim_ > 1 ? b : 0] * f[2][dim_ > 2 ? c : 0];
  }
  return out;
}

Eigen::MatrixXd TensorBasis::eval(const PointList& pts) const {
  return eval_derivative(pts, {0, 0, 0});
}

Eigen::MatrixXd TensorBasis::eval_partial(const DerivativeSelector& sel,
                                          const PointList& pts) const {
  if (!is_admissible(sel, degree(), dim_))
    throw ConfigError("eval_partial: inadmissible derivative selector");
  return eval_derivative(pts, {sel.s, sel.v, sel.w});
}

std::vector<Eigen::MatrixXd> TensorBasis::gradient(const PointList& pts) const {
  std::vector<Eigen::MatrixXd> g;
  for (int d = 0; d < dim_; ++d) {
    std::array<int, 3> o{0, 0, 0};
    o[d] = 1;
    g.push_back(eval_derivative(pts, o));
  }
  return g;
}

Eigen::MatrixXd legendre_transform(int p, int dim, const QuadratureRule& volume_rule) {
  const TensorRule vol = tensor_rule(volume_rule, dim);
  const TensorBasis lag(BasisKind::LagrangeGLL, p, dim);
  const TensorBasis leg(BasisKind::NormalizedLegendre, p, dim);
  const Eigen::MatrixXd chi = lag.eval(vol.points);
  const Eigen::MatrixXd ref = leg.eval(vol.points);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(vol.weights.data(), vol.size());
  const Eigen::MatrixXd Mref = ref.transpose() * w.asDiagonal() * ref;
  Eigen::LLT<Eigen::MatrixXd> llt(Mref);
  if (llt.info() != Eigen::Success) throw std::runtime_error("legendre_transform: singular reference mass");
  return llt.solve(ref.transpose() * w.asDiagonal() * chi);
}

Eigen::MatrixXd legendre_transform(int p, int dim) {
  return legendre_transform(p, dim, gl_rule(p + 1));
}

}  // namespace frc
