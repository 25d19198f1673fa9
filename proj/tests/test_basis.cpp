#include <doctest.h>

#include <cmath>
#include <random>

#include "frcurv/basis.hpp"

using namespace frc;

namespace {

PointList random_points(int n, int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  PointList pts(n, Point{0, 0, 0});
  for (auto& x : pts)
    for (int d = 0; d < dim; ++d) x[d] = U(gen);
  return pts;
}

// Kronecker product of 1D tables in x-fastest ordering.
Eigen::MatrixXd kron_rows(const std::vector<Eigen::MatrixXd>& t1d, const PointList& pts, int dim,
                          const Basis1D& line, std::array<int, 3> orders) {
  const int n = line.size();
  const int np = static_cast<int>(std::pow(n, dim));
  Eigen::MatrixXd out(pts.size(), np);
  (void)t1d;
  std::vector<double> v(3 * n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int d = 0; d < dim; ++d) line.eval_point(pts[i][d], orders[d], v.data() + d * n);
    for (int j = 0; j < np; ++j) {
      double prod = 1.0;
      int r = j;
      for (int d = 0; d < dim; ++d) {
        prod *= v[d * n + r % n];
        r /= n;
      }
      out(i, j) = prod;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("lagrange basis is cardinal on its own nodes and a partition of unity") {
  for (int p = 1; p <= 8; ++p) {
    const Basis1D b(BasisKind::LagrangeGLL, p);
    CHECK((b.eval(b.nodes()) - Eigen::MatrixXd::Identity(p + 1, p + 1)).cwiseAbs().maxCoeff() <= 1e-14);
    const auto pts = random_points(20, 2, 7u + p);
    const TensorBasis tb(BasisKind::LagrangeGLL, p, 2);
    const Eigen::MatrixXd E = tb.eval(pts);
    CHECK((E.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  CHECK(Basis1D(BasisKind::LagrangeGLL, 2).nodes()[1] == 0.0);
}

TEST_CASE("normalized legendre values and orthonormality") {
  const Basis1D b(BasisKind::NormalizedLegendre, 1);
  const Eigen::MatrixXd v = b.eval({0.0});
  CHECK(v(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(v(0, 1) == doctest::Approx(0.0));
  const Eigen::MatrixXd d = b.eval({-0.4, 0.7}, 1);
  CHECK(d(0, 1) == doctest::Approx(std::sqrt(1.5)));
  CHECK(d(1, 0) == doctest::Approx(0.0));
  for (int p = 0; p <= 6; ++p)
    for (int dim = 1; dim <= 3; ++dim) {
      const TensorBasis tb(BasisKind::NormalizedLegendre, p, dim);
      const TensorRule r = tensor_rule(gl_rule(p + 1), dim);
      const Eigen::MatrixXd E = tb.eval(r.points);
      const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.weights.data(), r.size());
      const Eigen::MatrixXd G = E.transpose() * w.asDiagonal() * E;
      CHECK((G - Eigen::MatrixXd::Identity(tb.size(), tb.size())).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("hat function gradients for p = 1") {
  const TensorBasis tb(BasisKind::LagrangeGLL, 1, 1);
  const auto g = tb.gradient({{0.3, 0, 0}, {-0.9, 0, 0}});
  CHECK(g.size() == 1);
  CHECK(g[0](0, 0) == doctest::Approx(-0.5));
  CHECK(g[0](1, 1) == doctest::Approx(0.5));
}

TEST_CASE("polynomial reproduction of values and gradients") {
  for (auto kind : {BasisKind::LagrangeGLL, BasisKind::NormalizedLegendre})
    for (int p = 1; p <= 5; ++p) {
      const int dim = 3;
      const TensorBasis tb(kind, p, dim);
      const TensorRule r = tensor_rule(gl_rule(p + 1), dim);
      auto f = [p](const Point& x) { return std::pow(x[0], p) * std::pow(x[1], p - 1) * (1 + x[2]); };
      auto fx = [p](const Point& x) { return p * std::pow(x[0], p - 1) * std::pow(x[1], p - 1) * (1 + x[2]); };
      const Eigen::MatrixXd E = tb.eval(r.points);
      Eigen::VectorXd s(r.size());
      for (int k = 0; k < r.size(); ++k) s(k) = f(r.points[k]);
      const Eigen::VectorXd coef = E.colPivHouseholderQr().solve(s);
      const auto pts = random_points(15, dim, 11u * p);
      const Eigen::VectorXd vals = tb.eval(pts) * coef;
      const Eigen::VectorXd dx = tb.gradient(pts)[0] * coef;
      const Eigen::VectorXd dz = tb.gradient(pts)[2] * coef;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK(std::abs(vals(k) - f(pts[k])) <= 1e-12);
        CHECK(std::abs(dx(k) - fx(pts[k])) <= 1e-11);
        CHECK(std::abs(dz(k) - f(pts[k]) / (1 + pts[k][2])) <= 1e-11);
      }
      // constants have zero gradient
      const Eigen::VectorXd one = E.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(r.size()));
      CHECK((tb.gradient(pts)[1] * one).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("derivative selectors") {
  CHECK(admissible_selectors(3, 1).size() == 1);
  CHECK(admissible_selectors(3, 2).size() == 3);
  CHECK(admissible_selectors(3, 3).size() == 7);
  CHECK(admissible_selectors(0, 3).empty());
  CHECK(is_admissible({3, 0, 3}, 3, 3));
  CHECK_FALSE(is_admissible({1, 0, 0}, 3, 3));
  CHECK_FALSE(is_admissible({0, 0, 3}, 3, 2));
  CHECK_FALSE(is_admissible({0, 0, 0}, 3, 3));
  const TensorBasis tb(BasisKind::LagrangeGLL, 2, 2);
  CHECK_THROWS_AS(tb.eval_partial({1, 0, 0}, {{0, 0, 0}}), ConfigError);
}

TEST_CASE("eval_partial is the Kronecker product of 1D derivative tables") {
  for (auto kind : {BasisKind::LagrangeGLL, BasisKind::NormalizedLegendre})
    for (int p = 1; p <= 4; ++p)
      for (int dim = 1; dim <= 3; ++dim) {
        const TensorBasis tb(kind, p, dim);
        const auto pts = random_points(6, dim, 3u + p + dim);
        for (const auto& sel : admissible_selectors(p, dim)) {
          const Eigen::MatrixXd A = tb.eval_partial(sel, pts);
          const Eigen::MatrixXd B = kron_rows({}, pts, dim, tb.line(), {sel.s, sel.v, sel.w});
          CHECK((A - B).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, B.cwiseAbs().maxCoeff()));
        }
      }
}

TEST_CASE("p-th derivative tables") {
  // normalized P1 = sqrt(3/2) x
  const TensorBasis l1(BasisKind::NormalizedLegendre, 1, 1);
  const Eigen::MatrixXd d1 = l1.eval_partial({1, 0, 0}, {{-0.2, 0, 0}, {0.8, 0, 0}});
  CHECK(d1(0, 0) == 0.0);
  CHECK(d1(1, 1) == doctest::Approx(std::sqrt(1.5)));
  // mode 0 has a vanishing p-th derivative, highest mode a constant one
  const TensorBasis l2(BasisKind::NormalizedLegendre, 2, 2);
  const auto pts = random_points(5, 2, 99u);
  const Eigen::MatrixXd pp = l2.eval_partial({2, 2, 0}, pts);
  CHECK(pp.col(0).cwiseAbs().maxCoeff() == 0.0);
  const double c = pp(0, 8);
  CHECK(std::abs(c) > 1.0);
  CHECK((pp.col(8).array() - c).abs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd s = l2.eval_partial({2, 0, 0}, pts);
  CHECK(s.col(1).cwiseAbs().maxCoeff() <= 1e-14);  // mode (1,0)
}

TEST_CASE("legendre transform") {
  for (int dim = 1; dim <= 3; ++dim) {
    const Eigen::MatrixXd T0 = legendre_transform(0, dim);
    CHECK(T0.rows() == 1);
    CHECK(T0(0, 0) == doctest::Approx(std::pow(std::sqrt(2.0), dim)));
  }
  std::mt19937 gen(5);
  std::normal_distribution<double> N;
  for (int p = 1; p <= 4; ++p)
    for (int dim = 1; dim <= 3; ++dim) {
      const Eigen::MatrixXd T = legendre_transform(p, dim);
      const Eigen::MatrixXd Ti = T.inverse();
      CHECK((T * Ti - Eigen::MatrixXd::Identity(T.rows(), T.rows())).cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::VectorXd u(T.rows());
      for (int i = 0; i < u.size(); ++i) u(i) = N(gen);
      CHECK((Ti * (T * u) - u).cwiseAbs().maxCoeff() <= 1e-12);
      // Same function in both bases.
      const auto pts = random_points(4, dim, 17u);
      const Eigen::VectorXd a = TensorBasis(BasisKind::LagrangeGLL, p, dim).eval(pts) * u;
      const Eigen::VectorXd b = TensorBasis(BasisKind::NormalizedLegendre, p, dim).eval(pts) * (T * u);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
      // An overintegrated rule gives the same map.
      CHECK((legendre_transform(p, dim, gl_rule(p + 3)) - T).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
