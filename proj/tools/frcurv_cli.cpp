// frcurv: experiment driver. Every subcommand shares one flag set; a key = value
// config file (--config) supplies defaults and command-line flags override it.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "frcurv/harness.hpp"
#include "frcurv/operators.hpp"

namespace {

struct Args {
  int dim = 0;  // 0 means the subcommand default
  int p = 3;
  std::string c = "dg";
  std::string scheme = "esfr-split";
  std::string flux = "upwind";
  std::string warp;
  std::string metric = "conservative-curl";
  std::vector<int> elements;
  bool overint = false;
  double t_final = -1.0;
  double dt_factor = 0.0;
  bool nodal_solve = false;
  std::string problem = "derivative";
  std::string out;
  int max_levels = 0;
  std::string mesh_dump;
  std::string filter_dump;
  double c_lo = 1e-6, c_hi = 1e2;
  int c_points = 17;
};

std::vector<int> ladder(const Args& a, std::vector<int> dflt) {
  std::vector<int> v = a.elements.empty() ? std::move(dflt) : a.elements;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] <= v[k - 1]) throw frc::ConfigError("--elements must be strictly increasing");
  if (a.max_levels > 0 && static_cast<int>(v.size()) > a.max_levels) v.resize(a.max_levels);
  return v;
}

frc::Warp warp_or(const Args& a, frc::Warp w) { return a.warp.empty() ? w : frc::parse_warp(a.warp); }

// Writes to --out if given, otherwise to stdout.
template <class F>
void emit(const Args& a, F&& write) {
  if (a.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(a.out);
  if (!os) throw frc::ConfigError("cannot open " + a.out);
  write(os);
  std::cerr << "wrote " << a.out << "\n";
}

void dump_mesh(const Args& a, int dim, frc::Warp warp, int n) {
  if (a.mesh_dump.empty()) return;
  std::ofstream os(a.mesh_dump);
  frc::Mesh::build(dim, n, a.p, warp).write_csv(os);
  std::cerr << "wrote " << a.mesh_dump << "\n";
}

void dump_filter(const Args& a, int dim, double c) {
  if (a.filter_dump.empty()) return;
  const auto ref = frc::build_reference(a.p, dim, a.p + 1);
  const auto mesh = frc::Mesh::build(dim, 1, a.p, frc::Warp::Identity);
  const auto md = frc::compute_metrics(mesh, 0, ref.volume, ref.facets, frc::MetricForm::ConservativeCurl);
  const auto eo = frc::build_element_operators(ref, md.volume, {c});
  const auto fp = frc::build_filter(ref, eo, md.volume.J, {c});
  std::ofstream os(a.filter_dump);
  os << "row,col,F,F_ref\n";
  os.precision(16);
  for (int i = 0; i < fp.F.rows(); ++i)
    for (int j = 0; j < fp.F.cols(); ++j) os << i << ',' << j << ',' << fp.F(i, j) << ',' << fp.F_ref(i, j) << '\n';
  std::cerr << "wrote " << a.filter_dump << "\n";
}

void print_ladder(const std::vector<frc::ErrorReport>& rows) {
  std::printf("%12s %12s %8s %12s %8s\n", "dx", "l2", "l2_ooa", "linf", "linf_ooa");
  for (const auto& r : rows)
    std::printf("%12.4e %12.4e %8.3f %12.4e %8.3f\n", r.dx, r.l2, r.l2_ooa, r.linf, r.linf_ooa);
}

int derivative_cmd(const Args& a) {
  frc::DerivativeOptions o;
  o.dim = a.dim ? a.dim : 3;
  o.p = a.p;
  o.c = frc::resolve_c(a.c, a.p, o.dim);
  o.warp = warp_or(a, o.dim == 3 ? frc::Warp::Heavy3D : frc::Warp::SkewSym2D);
  if (a.nodal_solve) o.solve = frc::NormSolve::Nodal;
  if (a.overint) o.n_1d = a.p + 3;
  const auto lv = ladder(a, {4, 8, 16, 32});
  dump_mesh(a, o.dim, o.warp, lv.front());
  dump_filter(a, o.dim, o.c);
  const auto rows = frc::derivative_test(o, lv);
  if (a.out.empty()) print_ladder(rows);
  else emit(a, [&](std::ostream& os) { frc::write_convergence_csv(os, rows); });
  return 0;
}

int energy_cmd(const Args& a) {
  frc::EnergyOptions o;
  o.warp = warp_or(a, frc::Warp::NonSym2D);
  o.p = a.p;
  o.overint = a.overint;
  if (a.t_final >= 0) o.t_final = a.t_final;
  if (!a.elements.empty()) o.elements = a.elements.front();
  dump_mesh(a, 2, o.warp, o.elements);
  if (!a.out.empty()) {
    // Single trajectory to CSV for the chosen scheme/flux.
    const auto form = frc::parse_scheme(a.scheme);
    const double c = frc::resolve_c(a.c, a.p, 2);
    const auto rr = frc::energy_run(o, form, c, frc::parse_flux(a.flux));
    emit(a, [&](std::ostream& os) { frc::write_monitor_csv(os, rr.history); });
    const auto v = frc::judge_energy(rr);
    std::printf("conserved=%s monotone=%s drift=%.3e%s\n", v.conserved ? "yes" : "no",
                v.monotone ? "yes" : "no", v.max_rel_drift, v.diverged ? " (diverged)" : "");
    return 0;
  }
  if (a.c != "dg") o.c_plus = frc::resolve_c(a.c, a.p, 2);
  std::printf("%-16s %10s %8s %10s %9s %12s\n", "scheme", "c", "flux", "conserved", "monotone", "drift");
  for (const auto& k : frc::energy_study(o))
    std::printf("%-16s %10.3e %8s %10s %9s %12.3e%s\n", frc::to_string(k.form).c_str(), k.c,
                frc::to_string(k.flux).c_str(), k.verdict.conserved ? "yes" : "no",
                k.verdict.monotone ? "yes" : "no", k.verdict.max_rel_drift,
                k.verdict.diverged ? " diverged" : "");
  return 0;
}

int converge_cmd(const Args& a) {
  frc::ConvergenceOptions o;
  o.warp = warp_or(a, frc::Warp::NonSym2D);
  o.p = a.p;
  o.form = frc::parse_scheme(a.scheme);
  o.c = frc::is_esfr(o.form) ? frc::resolve_c(a.c, a.p, 2) : 0.0;
  o.flux = frc::parse_flux(a.flux);
  o.overint = a.overint;
  if (a.t_final >= 0) o.t_final = a.t_final;
  if (a.dt_factor > 0) o.dt_factor = a.dt_factor;
  const auto lv = ladder(a, {4, 8, 16, 32, 64});
  dump_mesh(a, 2, o.warp, lv.front());
  const auto rows = frc::convergence_study(o, lv);
  if (a.out.empty()) print_ladder(rows);
  else emit(a, [&](std::ostream& os) { frc::write_convergence_csv(os, rows); });
  return 0;
}

int sweep_cmd(const Args& a) {
  frc::DerivativeOptions o;
  o.dim = a.dim ? a.dim : 2;
  o.p = a.p;
  o.warp = warp_or(a, o.dim == 3 ? frc::Warp::Heavy3D : frc::Warp::SkewSym2D);
  if (a.nodal_solve) o.solve = frc::NormSolve::Nodal;
  const bool adv = a.problem == "advection";
  if (!adv && a.problem != "derivative") throw frc::ConfigError("unknown --problem '" + a.problem + "'");
  const auto lv = ladder(a, adv ? std::vector<int>{16, 32}
                                : o.dim == 3 ? std::vector<int>{4, 8} : std::vector<int>{8, 16});
  if (lv.size() != 2) throw frc::ConfigError("c-sweep needs exactly two refinement levels");
  std::vector<double> cs{0.0};
  for (double c : frc::logspace(a.c_lo, a.c_hi, a.c_points)) cs.push_back(c);
  const auto pts = adv ? frc::advection_sweep(o.p, cs, lv[0], lv[1]) : frc::c_sweep(o, cs, lv[0], lv[1]);
  emit(a, [&](std::ostream& os) { frc::write_sweep_csv(os, pts); });
  return 0;
}

int gcl_cmd(const Args& a) {
  const int dim = a.dim ? a.dim : 3;
  const auto lv = ladder(a, {4});
  std::vector<frc::Warp> warps;
  if (!a.warp.empty()) warps.push_back(frc::parse_warp(a.warp));
  else if (dim == 3) warps = {frc::Warp::Identity, frc::Warp::Heavy3D};
  else warps = {frc::Warp::Identity, frc::Warp::NonSym2D, frc::Warp::SkewSym2D};
  std::printf("%-10s %3s %-20s %12s %12s %12s\n", "warp", "p", "metric", "gcl", "scale", "facet");
  for (auto w : warps)
    for (auto f : {frc::MetricForm::ConservativeCurl, frc::MetricForm::InvariantCurl,
                   frc::MetricForm::CrossProduct}) {
      const auto r = frc::gcl_check(w, dim, a.p, lv.front(), f);
      std::printf("%-10s %3d %-20s %12.3e %12.3e %12.3e\n", frc::to_string(w).c_str(), a.p,
                  frc::to_string(f).c_str(), r.gcl, r.scale, r.facet_mismatch);
    }
  return 0;
}

int freestream_cmd(const Args& a) {
  const int dim = a.dim ? a.dim : 3;
  const auto w = warp_or(a, dim == 3 ? frc::Warp::Heavy3D : frc::Warp::NonSym2D);
  const auto lv = ladder(a, {4});
  const double c = frc::resolve_c(a.c, a.p, dim);
  const auto metric = frc::parse_metric_form(a.metric);
  dump_mesh(a, dim, w, lv.front());
  std::printf("%-16s %-20s %12s\n", "scheme", "metric", "max|du/dt|");
  for (const auto& r : frc::freestream_check(w, dim, a.p, lv.front(), c, metric))
    std::printf("%-16s %-20s %12.3e\n", frc::to_string(r.form).c_str(),
                frc::to_string(r.metric).c_str(), r.max_residual);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FR/ESFR/DG linear advection on curvilinear meshes"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  Args a;

  // Flags live on the top-level app so the config file covers all of them;
  // fallthrough lets them appear after the subcommand as well.
  app.fallthrough();
  app.add_option("--dim", a.dim, "spatial dimension (1-3)")->check(CLI::Range(1, 3));
  app.add_option("--p", a.p, "polynomial degree")->check(CLI::Range(0, 12));
  app.add_option("--c", a.c, "correction parameter: number | dg | plus | minus");
  app.add_option("--scheme", a.scheme, "dg-cons | dg-noncons | dg-split | esfr-classical | esfr-split");
  app.add_option("--flux", a.flux, "central | upwind");
  app.add_option("--warp", a.warp, "identity | heavy3d | nonsym | skewsym");
  app.add_option("--metric", a.metric, "conservative-curl | invariant-curl | cross-product");
  app.add_option("--elements", a.elements, "elements per direction, one or more levels")->delimiter(',');
  app.add_flag("--nodal-solve", a.nodal_solve, "derivative-test/c-sweep: factor M_m + K_m in the Lagrange basis");
  app.add_flag("--overint", a.overint, "(p+3)^dim volume rule instead of (p+1)^dim");
  app.add_option("--t-final", a.t_final, "final time");
  app.add_option("--dt-factor", a.dt_factor, "converge: dt = factor * dx (default 0.1; 0.5 is the literal OOA rule)");
  app.add_option("--out", a.out, "CSV output path");
  app.add_option("--max-levels", a.max_levels, "cap on refinement levels");
  app.add_option("--mesh-dump", a.mesh_dump, "write mesh nodes as CSV");
  app.add_option("--filter-dump", a.filter_dump, "write the reference filter matrices as CSV");
  app.add_option("--problem", a.problem, "c-sweep: derivative | advection (1D)");
  app.add_option("--c-lo", a.c_lo, "c-sweep lower bound");
  app.add_option("--c-hi", a.c_hi, "c-sweep upper bound");
  app.add_option("--c-points", a.c_points, "c-sweep log-spaced points");

  auto* der = app.add_subcommand("derivative-test", "volume-term divergence ladder");
  auto* en = app.add_subcommand("energy", "energy/conservation verdicts, or one trajectory with --out");
  auto* cv = app.add_subcommand("converge", "L2/Linf convergence of the sine problem");
  auto* sw = app.add_subcommand("c-sweep", "derivative-test OOA against c");
  auto* gc = app.add_subcommand("gcl-check", "metric GCL residual and facet consistency");
  auto* fs = app.add_subcommand("freestream", "constant-state residual per scheme");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*der) return derivative_cmd(a);
    if (*en) return energy_cmd(a);
    if (*cv) return converge_cmd(a);
    if (*sw) return sweep_cmd(a);
    if (*gc) return gcl_cmd(a);
    if (*fs) return freestream_cmd(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
