#include "frcurv/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "frcurv/timeint.hpp"

namespace frc {

ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& u,
                          const ExactFn& exact, int extra) {
  const int dim = disc.dim(), np = disc.np(), ne = disc.num_elements();
  const TensorRule rule = tensor_rule(gl_rule(disc.options().p + extra), dim);
  const TensorBasis basis(BasisKind::LagrangeGLL, disc.options().p, dim);
  const Eigen::MatrixXd chi = basis.eval(rule.points);
  std::vector<double> sq(ne), mx(ne);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) {
    const MetricField geo = evaluate_geometry(disc.mesh(), e, rule.points);
    const Eigen::VectorXd uh = chi * u.segment(e * np, np);
    double s = 0.0, m = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      const double err = uh(k) - exact(geo.x[k]);
      s += rule.weights[k] * geo.J[k] * err * err;
      m = std::max(m, std::abs(err));
    }
    sq[e] = s;
    mx[e] = m;
  }
  ErrorNorms out;
  out.l2 = std::sqrt(pairwise_sum(sq));
  for (double m : mx) out.linf = std::max(out.linf, m);
  return out;
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& u, const ExactFn& exact) {
  return compute_errors(disc, u, exact).l2;
}

double linf_error(const Discretization& disc, const Eigen::VectorXd& u, const ExactFn& exact) {
  return compute_errors(disc, u, exact).linf;
}

std::vector<double> ooa(const std::vector<std::pair<double, double>>& d) {
  std::vector<double> s;
  for (std::size_t k = 1; k < d.size(); ++k)
    s.push_back(std::log(d[k - 1].second / d[k].second) / std::log(d[k - 1].first / d[k].first));
  return s;
}

void fill_ooa(std::vector<ErrorReport>& rows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].l2_ooa = rows[k].linf_ooa = nan;
      continue;
    }
    const double r = std::log(rows[k - 1].dx / rows[k].dx);
    rows[k].l2_ooa = std::log(rows[k - 1].l2 / rows[k].l2) / r;
    rows[k].linf_ooa = std::log(rows[k - 1].linf / rows[k].linf) / r;
  }
}

void write_convergence_csv(std::ostream& os, const std::vector<ErrorReport>& rows) {
  os << "dx,l2,l2_ooa,linf,linf_ooa\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.dx << ',' << r.l2 << ',' << r.l2_ooa << ',' << r.linf << ',' << r.linf_ooa << '\n';
}

}  // namespace frc
