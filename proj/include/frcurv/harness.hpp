#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "frcurv/diagnostics.hpp"
#include "frcurv/schemes.hpp"
#include "frcurv/timeint.hpp"

namespace frc {

// Default positive correction parameter per degree, taken from the c-sweep.
double c_plus_default(int p);
// "dg" -> 0, "plus" -> c_plus_default(p), "minus" -> estimated c_-, or a number.
double resolve_c(const std::string& spec, int p, int dim);

struct TestProblem {
  Point a{1.0, 0.0, 0.0};
  std::function<double(const Point&)> initial;
  // Exact solution at time t.
  std::function<double(const Point&, double)> exact;
};

// Gaussian pulse centred in the warp's default domain, a = (1.1, -pi/e).
TestProblem gaussian_problem(Warp warp);
// Product of sines with one period across the domain, a = (1, 1).
TestProblem sine_problem(Warp warp);

// ---- derivative test (volume terms only) ----
struct DerivativeOptions {
  int p = 3;
  double c = 0.0;
  Warp warp = Warp::Heavy3D;
  int dim = 3;
  int n_1d = 0;  // 0 means p + 1
  int error_extra = 10;
  NormSolve solve = NormSolve::Legendre;
  // Flux and its exact divergence; empty means the exponential test flux.
  std::function<void(const Point&, double f[3])> flux;
  std::function<double(const Point&)> divergence;
};
// Discrete divergence of the analytic test flux against its exact divergence,
// on a mesh with the given number of elements per direction.
ErrorReport derivative_level(const DerivativeOptions& opt, int elements);
std::vector<ErrorReport> derivative_test(const DerivativeOptions& opt,
                                         const std::vector<int>& elements);

// ---- energy study ----
struct EnergyCase {
  SchemeForm form;
  double c;
  FluxKind flux;
  EnergyVerdict verdict;
};
struct EnergyOptions {
  Warp warp = Warp::NonSym2D;
  int p = 3;
  int elements = 8;
  bool overint = false;
  double t_final = 10.0;
  double c_plus = 0.0;  // 0 means c_plus_default(p)
  double dt_factor = 0.05;  // dt = dt_factor * dx
};
RunResult energy_run(const EnergyOptions& opt, SchemeForm form, double c, FluxKind flux);
// The four schemes of the tables crossed with {central, upwind}.
std::vector<EnergyCase> energy_study(const EnergyOptions& opt);

// ---- convergence ----
struct ConvergenceOptions {
  Warp warp = Warp::NonSym2D;
  int p = 3;
  SchemeForm form = SchemeForm::ESFRSplit;
  double c = 0.0;
  FluxKind flux = FluxKind::Upwind;
  bool overint = false;
  double t_final = 2.0;
  // dt = dt_factor * dx. The 0.5 * dx OOA rule sits past the RK4 stability
  // limit for a = (1,1) in 2D (about 0.29 * dx on Grid 1, lower on Grid 2).
  double dt_factor = 0.1;
};
std::vector<ErrorReport> convergence_study(const ConvergenceOptions& opt,
                                           const std::vector<int>& elements);

// ---- c sweep ----
struct SweepPoint {
  double c = 0.0;
  double ooa = 0.0;
};
std::vector<SweepPoint> c_sweep(const DerivativeOptions& base, const std::vector<double>& cs,
                                int coarse, int fine);
// Same rate for 1D periodic advection of sin(2 pi x) on [0,1], ESFR split,
// upwind, t = 1, dt = 0.05 dx. This is where the VCJH schemes lose an order.
std::vector<SweepPoint> advection_sweep(int p, const std::vector<double>& cs, int coarse, int fine);
// Log-spaced values in [lo, hi], n points.
std::vector<double> logspace(double lo, double hi, int n);
// (c, ooa) as CSV.
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& pts);

// ---- GCL / free-stream ----
struct GclRow {
  Warp warp;
  int p;
  MetricForm form;
  double gcl = 0.0;
  double scale = 0.0;
  double facet_mismatch = 0.0;
};
GclRow gcl_check(Warp warp, int dim, int p, int elements, MetricForm form);
GclRow gcl_check(Mesh mesh, int p, MetricForm form);

struct FreestreamRow {
  SchemeForm form;
  MetricForm metric;
  double max_residual = 0.0;
};
std::vector<FreestreamRow> freestream_check(Warp warp, int dim, int p, int elements, double c,
                                            MetricForm metric);
std::vector<FreestreamRow> freestream_check(Mesh mesh, int p, double c, MetricForm metric);

}  // namespace frc
