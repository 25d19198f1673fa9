#pragma once

// Shared meshes and states for the unit suites and the acceptance binary.

#include <cmath>
#include <numbers>
#include <random>

#include "frcurv/schemes.hpp"

namespace frc::testing {

// Curved mesh on [0,1]^dim that stays geometrically periodic: the displacement
// is a periodic function of position, so paired wrap faces still differ by a
// translation. Not separable, so the cross-product metrics are not exact on it.
inline Mesh wavy_mesh(int dim, int elements, int q, double amp = 0.04) {
  Mesh m = Mesh::build(dim, elements, q, Warp::Identity);
  constexpr double tp = 2.0 * std::numbers::pi;
  for (int e = 0; e < m.num_elements(); ++e) {
    PointList pts = m.support_points(e);
    for (auto& x : pts) {
      const double a = x[0], b = x[1], c = x[2];
      Point y = x;
      if (dim == 1) {
        y[0] = a + amp * std::sin(tp * a);
      } else if (dim == 2) {
        y[0] = a + amp * std::sin(tp * b) * std::cos(tp * (a + b));
        y[1] = b + amp * std::sin(tp * a) * std::sin(tp * (a - b));
      } else {
        y[0] = a + amp * std::sin(tp * b) * std::sin(tp * (a + c));
        y[1] = b + amp * std::sin(tp * c) * std::cos(tp * (a + b));
        y[2] = c + amp * std::sin(tp * a) * std::sin(tp * (b - c));
      }
      x = y;
    }
    m.set_support_points(e, pts);
  }
  return m;
}

inline Eigen::VectorXd random_state(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = dist(gen);
  return u;
}

inline Discretization make_disc(Mesh mesh, int p, int n1d = 0, double c = 0.0,
                                MetricForm metric = MetricForm::ConservativeCurl) {
  DiscretizationOptions o;
  o.p = p;
  o.n_1d = n1d;
  o.c = c;
  o.metric = metric;
  return Discretization(std::move(mesh), o);
}

inline const Point kGenericA{1.1, -std::numbers::pi / std::numbers::e, 0.7};

inline double maxabs(const Eigen::MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace frc::testing
