#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "frcurv/metrics.hpp"
#include "frcurv/operators.hpp"

using namespace frc;

namespace {

double maxabs(const Eigen::MatrixXd& A) { return A.cwiseAbs().maxCoeff(); }

double offdiag(const Eigen::MatrixXd& A) {
  Eigen::MatrixXd B = A;
  B.diagonal().setZero();
  return maxabs(B);
}

struct Element {
  ReferenceOperators ref;
  MetricData md;
};

Element element_of(const Mesh& m, int p, int e, int n1d = 0) {
  Element el{build_reference(p, m.dim(), n1d ? n1d : p + 1), {}};
  el.md = compute_metrics(m, e, el.ref.volume, el.ref.facets, MetricForm::ConservativeCurl);
  return el;
}

Element warped_element(int p, int dim, Warp warp, int e = 1, int n1d = 0) {
  return element_of(Mesh::build(dim, 3, p, warp), p, e, n1d);
}

}  // namespace

TEST_CASE("p = 1 reference matrices") {
  const auto r = build_reference(1, 1, 2);
  Eigen::Matrix2d M;
  M << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
  Eigen::Matrix2d S;
  S << -0.5, 0.5, -0.5, 0.5;
  CHECK(maxabs(r.M - M) <= 1e-15);
  CHECK(maxabs(r.S[0] - S) <= 1e-15);
}

TEST_CASE("summation by parts and projection") {
  for (int p = 1; p <= 5; ++p)
    for (int dim = 1; dim <= 3; ++dim)
      for (int extra : {0, 2}) {
        CAPTURE(p);
        CAPTURE(dim);
        const auto r = build_reference(p, dim, p + 1 + extra);
        CHECK(maxabs(r.Pi * r.chi - Eigen::MatrixXd::Identity(r.np, r.np)) <= 1e-12);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.M);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        for (int d = 0; d < dim; ++d) {
          Eigen::MatrixXd B = Eigen::MatrixXd::Zero(r.np, r.np);
          for (int f : {2 * d, 2 * d + 1})
            B += face_sign(f) * r.chi_face[f].transpose() * r.w_face.asDiagonal() * r.chi_face[f];
          CHECK(maxabs(r.S[d] + r.S[d].transpose() - B) <= 1e-12);
        }
      }
}

TEST_CASE("projection reproduces polynomials") {
  const int p = 3;
  const auto r = build_reference(p, 2, p + 2);
  const TensorBasis tb(BasisKind::LagrangeGLL, p, 2);
  // coefficients of x^3 y^2 - y at the GLL nodes
  Eigen::VectorXd exact(r.np), samples(r.nq);
  const auto& n = tb.line().nodes();
  for (int j = 0; j < r.np; ++j) {
    const double x = n[j % (p + 1)], y = n[j / (p + 1)];
    exact(j) = x * x * x * y * y - y;
  }
  for (int k = 0; k < r.nq; ++k) {
    const auto& q = r.volume.points[k];
    samples(k) = q[0] * q[0] * q[0] * q[1] * q[1] - q[1];
  }
  CHECK(maxabs(r.Pi * samples - exact) <= 1e-13);
}

TEST_CASE("rules below 2p-1 are rejected") {
  CHECK_THROWS_AS(build_reference(3, 2, 2), ConfigError);
  // Exact enough for S, but three points cannot carry a p = 3 mass matrix.
  CHECK_THROWS_AS(build_reference(3, 2, 3), ConfigError);
  CHECK_NOTHROW(build_reference(3, 2, 4));
}

TEST_CASE("correction ladder") {
  const CorrectionParameter c{0.1};
  CHECK(c.ladder({3, 0, 0}, 3) == doctest::Approx(0.1));
  CHECK(c.ladder({3, 3, 0}, 3) == doctest::Approx(0.01));
  CHECK(c.ladder({3, 3, 3}, 3) == doctest::Approx(0.001));
  const CorrectionParameter n{-0.2};
  CHECK(n.ladder({0, 2, 2}, 2) == doctest::Approx(0.04));
}

TEST_CASE("K_m assembly routes agree and behave") {
  for (int p = 1; p <= 4; ++p)
    for (auto [dim, warp] : {std::pair{1, Warp::Identity}, std::pair{2, Warp::NonSym2D},
                             std::pair{2, Warp::SkewSym2D}, std::pair{3, Warp::Heavy3D}}) {
      CAPTURE(p);
      CAPTURE(dim);
      const auto el = warped_element(p, dim, warp);
      const auto& J = el.md.volume.J;
      const Eigen::MatrixXd Mm = build_mass(el.ref, J);
      CHECK(maxabs(build_Km(el.ref, J, {0.0})) == 0.0);
      for (double c : {1e-3, 0.5}) {
        const Eigen::MatrixXd K = build_Km(el.ref, J, {c});
        const Eigen::MatrixXd Ks = build_Km_sandwich(el.ref, Mm, {c});
        CHECK(maxabs(K - Ks) <= 1e-11 * std::max(1.0, maxabs(K)));
        CHECK(maxabs(K - K.transpose()) <= 1e-14 * std::max(1.0, maxabs(K)));
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12 * maxabs(K));
        // Legendre route: K_m = T^T K_ref T
        const Eigen::MatrixXd T = legendre_transform(p, dim, el.ref.volume_1d);
        const Eigen::MatrixXd Kr = build_Km_legendre(p, dim, el.ref.volume, J, {c});
        CHECK(maxabs(T.transpose() * Kr * T - K) <= 1e-11 * std::max(1.0, maxabs(K)));
        if (dim == 2 && p >= 2) CHECK(offdiag(Kr) > 1e-8);
      }
    }
}

TEST_CASE("affine K_m is J times the reference K") {
  const auto el = warped_element(3, 3, Warp::Identity);
  const double J = el.md.volume.J[0];
  const std::vector<double> ones(el.ref.nq, 1.0);
  const Eigen::MatrixXd Kref = build_Km(el.ref, ones, {0.2});
  CHECK(maxabs(build_Km(el.ref, el.md.volume.J, {0.2}) - J * Kref) <= 1e-14 * J * maxabs(Kref));
  // 1D p = 1: rank one, c D^T M D
  const auto r1 = build_reference(1, 1, 2);
  const Eigen::MatrixXd K1 = build_Km(r1, {1.0, 1.0}, {0.3});
  CHECK(maxabs(K1 - 0.3 * r1.D[0].transpose() * r1.M * r1.D[0]) <= 1e-15);
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(K1).rank() == 1);
}

TEST_CASE("jacobian placement inside the derivative breaks symmetry") {
  const auto el = warped_element(3, 2, Warp::NonSym2D, 4);
  const Eigen::MatrixXd bad = build_Km_jacobian_inside(el.ref, el.md.volume.J, {0.1});
  CHECK(maxabs(bad - bad.transpose()) > 1e-8);
  const Eigen::MatrixXd good = build_Km(el.ref, el.md.volume.J, {0.1});
  CHECK(maxabs(good - good.transpose()) <= 1e-15 * maxabs(good));
}

TEST_CASE("filter") {
  for (int dim = 1; dim <= 3; ++dim)
  for (int p = 1; p <= 4; ++p) {
    CAPTURE(dim);
    CAPTURE(p);
    // Element 1 of the nonsymmetric grid stays genuinely curved at p = 1; the
    // centre one is a parallelogram. The wavy map is one degree up so it is
    // not affine at p = 1 either.
    const auto curved = dim == 2 ? warped_element(p, 2, Warp::NonSym2D, 1)
                                 : element_of(frc::testing::wavy_mesh(dim, 2, p + 1, 0.06), p, 1);
    const auto flat = warped_element(p, dim, Warp::Identity, 1);
    const auto eo0 = build_element_operators(curved.ref, curved.md.volume, {0.0});
    CHECK(maxabs(build_filter(curved.ref, eo0, curved.md.volume.J, {0.0}).F - Eigen::MatrixXd::Identity(curved.ref.np, curved.ref.np)) <= 1e-13);
    for (double c : {1e-4, 1e-1, 10.0}) {
      const auto eo = build_element_operators(curved.ref, curved.md.volume, {c});
      const auto fp = build_filter(curved.ref, eo, curved.md.volume.J, {c});
      // eig(N^-1 M) lies in (0, 1]; solved as N v = mu M v (M is the well
      // conditioned one) so mu = 1/lambda >= 1
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(eo.Nm, eo.Mm);
      CHECK(ges.eigenvalues().minCoeff() >= 1.0 - 1e-13 * ges.eigenvalues().maxCoeff());
      CHECK(std::isfinite(ges.eigenvalues().maxCoeff()));
      // Curvilinear filter touches every mode, affine one is diagonal.
      CHECK(offdiag(fp.F_ref) > 1e-6);
      const auto eof = build_element_operators(flat.ref, flat.md.volume, {c});
      const double flat_off = offdiag(build_filter(flat.ref, eof, flat.md.volume.J, {c}).F_ref);
      CAPTURE(c);
      CHECK(flat_off <= 1e-12);
      // Both routes describe the same operator.
      const Eigen::MatrixXd T = legendre_transform(p, dim, curved.ref.volume_1d);
      // F goes through N's factorization, so allow for its conditioning.
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> nes(eo.Nm);
      const double condN = nes.eigenvalues().cwiseAbs().maxCoeff() / nes.eigenvalues().cwiseAbs().minCoeff();
      CHECK(maxabs(T * fp.F * T.inverse() - fp.F_ref) <= 1e-8 + 1e-14 * condN);
    }
  }
}

TEST_CASE("filter of the 2x2 block model") {
  const double a = 0.9, b = 0.2, c = 0.7, d = 0.35;
  ElementOperators eo;
  eo.Mm.resize(2, 2);
  eo.Mm << a, b, b, c;
  eo.Km = Eigen::Matrix2d::Zero();
  eo.Km(1, 1) = d;
  eo.Nm = eo.Mm + eo.Km;
  eo.Mm_llt.compute(eo.Mm);
  eo.Nleg_llt.compute(eo.Nm);
  eo.to_basis = std::make_shared<const Eigen::MatrixXd>(Eigen::MatrixXd::Identity(2, 2));
  const double den = a * (c + d) - b * b;
  const Eigen::MatrixXd F = build_filter(build_reference(1, 1, 2), eo, {1.0, 1.0}, {0.0}).F;
  CHECK(F(0, 0) == doctest::Approx(1.0));
  CHECK(F(0, 1) == doctest::Approx(b * d / den));
  CHECK(std::abs(F(1, 0)) <= 1e-15);
  CHECK(F(1, 1) == doctest::Approx((a * c - b * b) / den));
}

TEST_CASE("c_minus") {
  // p = 1: M + K(c) has eigenvalue 1/3 + c on (1, -1).
  const double cm1 = estimate_c_minus(build_reference(1, 1, 2));
  CHECK(cm1 == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  for (int p = 1; p <= 4; ++p)
    for (int dim = 1; dim <= 3; ++dim) {
      CAPTURE(p);
      CAPTURE(dim);
      const auto r = build_reference(p, dim, p + 1);
      const double cm = estimate_c_minus(r);
      CHECK(cm < 0.0);
      CHECK(norm_is_spd(r, cm + 1e-6 * std::max(1.0, std::abs(cm))));
      CHECK_FALSE(norm_is_spd(r, cm - 1e-6 * std::max(1.0, std::abs(cm))));
      CHECK(norm_is_spd(r, 0.0));
    }
}

TEST_CASE("element operators reject c below c_minus") {
  const auto el = warped_element(2, 2, Warp::NonSym2D);
  const double cm = estimate_c_minus(el.ref);
  CHECK_THROWS_AS(build_element_operators(el.ref, el.md.volume, {1.5 * cm}), StabilityDomainError);
  const auto eo = build_element_operators(el.ref, el.md.volume, {0.5 * cm});
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(el.ref.np, -1.0, 2.0);
  CHECK(maxabs(eo.Nm * eo.solve_N(b) - b) <= 1e-12);
  CHECK(maxabs(eo.Mm * eo.solve_M(b) - b) <= 1e-12);
}

TEST_CASE("transformed gradient uses the metric cofactor") {
  const auto el = warped_element(3, 2, Warp::SkewSym2D, 2);
  const auto eo = build_element_operators(el.ref, el.md.volume, {0.0});
  for (int q = 0; q < el.ref.nq; q += 3)
    for (int j = 0; j < el.ref.np; j += 2) {
      const auto& C = el.md.volume.C[q];
      CHECK(eo.grad_tilde[0](q, j) ==
            doctest::Approx(el.ref.grad[0](q, j) * C(0, 0) + el.ref.grad[1](q, j) * C(0, 1)));
    }
}
