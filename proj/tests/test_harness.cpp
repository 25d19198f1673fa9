#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "frcurv/harness.hpp"
#include "frcurv/operators.hpp"

using namespace frc;
using namespace frc::testing;

TEST_CASE("resolve c") {
  CHECK(resolve_c("dg", 3, 2) == 0.0);
  CHECK(resolve_c("", 3, 2) == 0.0);
  CHECK(resolve_c("0.25", 3, 2) == 0.25);
  CHECK(resolve_c("-1e-5", 2, 3) == -1e-5);
  for (int p = 1; p <= 5; ++p) {
    CHECK(resolve_c("plus", p, 2) == c_plus_default(p));
    CHECK(c_plus_default(p) > 0.0);
  }
  // c_+ shrinks with degree
  for (int p = 2; p <= 5; ++p) CHECK(c_plus_default(p) < c_plus_default(p - 1) * 4.0);
  CHECK(resolve_c("minus", 3, 2) < 0.0);
  CHECK_THROWS_AS(resolve_c("abc", 3, 2), ConfigError);
  CHECK_THROWS_AS(resolve_c("1.0x", 3, 2), ConfigError);
  CHECK_THROWS_AS(c_plus_default(9), ConfigError);
}

TEST_CASE("test problems are periodic translates") {
  for (Warp w : {Warp::NonSym2D, Warp::SkewSym2D}) {
    CAPTURE(to_string(w));
    const Domain d = default_domain(w, 2);
    for (const TestProblem& tp : {gaussian_problem(w), sine_problem(w)}) {
      REQUIRE(tp.exact);
      for (double t : {0.0, 0.37, 2.0}) {
        for (int k = 0; k < 7; ++k) {
          const Point x{d.lo[0] + 0.13 * (k + 1) * (d.hi[0] - d.lo[0]) / 8.0,
                        d.lo[1] + 0.11 * (k + 2) * (d.hi[1] - d.lo[1]) / 8.0, 0.0};
          const Point back{x[0] - tp.a[0] * t, x[1] - tp.a[1] * t, 0.0};
          CHECK(tp.exact(x, t) == doctest::Approx(tp.exact(back, 0.0)).epsilon(1e-12));
          CHECK(tp.exact(x, 0.0) == doctest::Approx(tp.initial(x)).epsilon(1e-15));
        }
      }
    }
  }
  CHECK(gaussian_problem(Warp::NonSym2D).a[0] == 1.1);
  CHECK(gaussian_problem(Warp::NonSym2D).a[1] == doctest::Approx(-std::numbers::pi / std::numbers::e));
  CHECK(gaussian_problem(Warp::NonSym2D).initial({0.0, 0.0, 0.0}) == 1.0);
  // one full period along each axis on the skew grid's unit square
  const TestProblem s = sine_problem(Warp::SkewSym2D);
  CHECK(s.initial({0.25, 0.25, 0.0}) == doctest::Approx(1.0));
  CHECK(sine_problem(Warp::NonSym2D).initial({0.5, 0.5, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("derivative test") {
  SUBCASE("constant flux has zero discrete divergence") {
    for (int dim : {2, 3}) {
      DerivativeOptions o;
      o.dim = dim;
      o.p = 2;
      o.warp = dim == 3 ? Warp::Heavy3D : Warp::NonSym2D;
      o.flux = [](const Point&, double f[3]) {
        f[0] = 0.7;
        f[1] = -1.3;
        f[2] = 2.0;
      };
      o.divergence = [](const Point&) { return 0.0; };
      for (double c : {0.0, 0.05}) {
        o.c = c;
        const ErrorReport r = derivative_level(o, 2);
        CHECK(r.l2 <= 1e-12);
        CHECK(r.linf <= 1e-12);
      }
    }
  }
  SUBCASE("linear flux is differentiated exactly on an affine mesh") {
    DerivativeOptions o;
    o.p = 2;
    o.warp = Warp::Identity;
    o.flux = [](const Point& x, double f[3]) {
      f[0] = 2.0 * x[0] + x[1];
      f[1] = -x[1] + 0.5 * x[2];
      f[2] = 3.0 * x[2] - x[0];
    };
    o.divergence = [](const Point&) { return 4.0; };
    CHECK(derivative_level(o, 2).l2 <= 1e-11);
  }
  SUBCASE("published first level, p = 3") {
    DerivativeOptions o;
    const ErrorReport r = derivative_level(o, 8);
    CHECK(r.dx == doctest::Approx(3.125e-2));
    CHECK(r.l2 == doctest::Approx(1.949e-2).epsilon(0.005));
    o.c = c_plus_default(3);
    CHECK(derivative_level(o, 8).l2 == doctest::Approx(1.860e-2).epsilon(0.02));
  }
  SUBCASE("repeatable") {
    DerivativeOptions o;
    o.p = 2;
    o.c = 0.01;
    const ErrorReport a = derivative_level(o, 3), b = derivative_level(o, 3);
    CHECK(a.l2 == b.l2);
    CHECK(a.linf == b.linf);
  }
}

TEST_CASE("c sweep") {
  DerivativeOptions o;
  o.dim = 2;
  o.p = 2;
  o.warp = Warp::SkewSym2D;
  const double cm = estimate_c_minus(build_reference(2, 2, 3));
  const auto pts = c_sweep(o, {0.0, 1.0}, 8, 16);
  CHECK(pts[0].ooa == doctest::Approx(2.0).epsilon(0.1));
  CHECK(pts[1].ooa == doctest::Approx(2.0).epsilon(0.1));
  // c_- is a reference-element bound, so probe it on an affine mesh:
  // just inside runs, outside is recorded as NaN rather than thrown
  o.warp = Warp::Identity;
  const auto edge = c_sweep(o, {cm * 0.999, cm * 1.2}, 4, 8);
  CHECK(std::isfinite(edge[0].ooa));
  CHECK(std::isnan(edge[1].ooa));
  // 1D advection: p + 1 at c = 0, one order down in the dip past c_+
  const auto adv = advection_sweep(2, {0.0, c_plus_default(2), 3.0}, 16, 32);
  CHECK(adv[0].ooa == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::abs(adv[1].ooa - adv[0].ooa) <= 0.15);
  CHECK(adv[2].ooa < adv[0].ooa - 0.5);
}

TEST_CASE("free-stream and GCL checks") {
  for (const auto& r : freestream_check(Warp::Identity, 2, 3, 3, 0.05, MetricForm::ConservativeCurl))
    CHECK(r.max_residual <= 1e-12);
  for (Warp w : {Warp::NonSym2D, Warp::SkewSym2D})
    for (const auto& r : freestream_check(w, 2, 3, 2, 0.0, MetricForm::ConservativeCurl)) {
      CAPTURE(to_string(r.form));
      if (r.form == SchemeForm::DGNonConservativeStrong) continue;
      CHECK(r.max_residual <= 1e-12);
    }
  const GclRow id = gcl_check(Warp::Identity, 3, 2, 2, MetricForm::ConservativeCurl);
  CHECK(id.gcl <= 1e-14 * std::max(1.0, id.scale));
  for (MetricForm f : {MetricForm::ConservativeCurl, MetricForm::InvariantCurl}) {
    const GclRow r = gcl_check(Warp::Heavy3D, 3, 3, 2, f);
    CHECK(r.gcl <= 1e-13 * r.scale);
    CHECK(r.facet_mismatch <= 1e-13 * r.scale);
  }
}

TEST_CASE("energy runs") {
  EnergyOptions o;
  SUBCASE("classical split with central flux diverges on the skew grid") {
    o.warp = Warp::SkewSym2D;
    const RunResult r = energy_run(o, SchemeForm::ESFRClassicalSplit, c_plus_default(3), FluxKind::Central);
    CHECK(r.diverged);
    CHECK(judge_energy(r).diverged);
  }
  SUBCASE("conservative DG with central flux gains energy on the nonsymmetric grid") {
    o.t_final = 2.0;
    const EnergyVerdict v = judge_energy(energy_run(o, SchemeForm::DGConservativeStrong, 0.0, FluxKind::Central));
    CHECK_FALSE(v.conserved);
    CHECK_FALSE(v.monotone);
  }
  SUBCASE("proposed split form with upwind flux decays monotonically") {
    o.t_final = 2.0;
    const EnergyVerdict v = judge_energy(energy_run(o, SchemeForm::ESFRSplit, c_plus_default(3), FluxKind::Upwind));
    CHECK_FALSE(v.diverged);
    CHECK(v.monotone);
    CHECK_FALSE(v.conserved);
  }
}

TEST_CASE("convergence study at t = 0 reports the projection error") {
  ConvergenceOptions o;
  o.warp = Warp::SkewSym2D;
  o.p = 2;
  o.t_final = 0.0;
  const auto rows = convergence_study(o, {4, 8});
  REQUIRE(rows.size() == 2);
  const TestProblem tp = sine_problem(o.warp);
  for (int k = 0; k < 2; ++k) {
    const auto disc = make_disc(Mesh::build(2, k == 0 ? 4 : 8, 2, o.warp), 2);
    const ErrorNorms e = compute_errors(disc, disc.project(tp.initial), tp.initial);
    CHECK(rows[k].l2 == e.l2);
    CHECK(rows[k].linf == e.linf);
  }
  CHECK(std::isnan(rows[0].l2_ooa));
  CHECK(rows[1].l2_ooa > 2.5);
}
