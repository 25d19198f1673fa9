#include "frcurv/timeint.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace frc {

void rk4_step(SolutionState& s, const ResidualFn& rhs, double dt) {
  Eigen::VectorXd k1, k2, k3, k4;
  auto check = [&](const Eigen::VectorXd& k, int stage) {
    if (!k.allFinite())
      throw DivergenceError("non-finite residual in RK4 stage " + std::to_string(stage) +
                                " at t = " + std::to_string(s.t),
                            s.t);
  };
  rhs(s.u, k1);
  check(k1, 1);
  rhs(s.u + 0.5 * dt * k1, k2);
  check(k2, 2);
  rhs(s.u + 0.5 * dt * k2, k3);
  check(k3, 3);
  rhs(s.u + dt * k3, k4);
  check(k4, 4);
  s.u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  s.t += dt;
}

double time_step(const RunOptions& opt) {
  switch (opt.rule) {
    case DtRule::Energy: return 0.05 * opt.dx;
    case DtRule::OOA: return 0.5 * opt.dx;
    case DtRule::Explicit: return opt.dt;
  }
  return opt.dt;
}

RunResult run(SolutionState state, const ResidualFn& rhs, const RunOptions& opt,
              const MonitorFn& monitor) {
  const double dt = time_step(opt);
  if (!(dt > 0.0)) throw ConfigError("run: time step must be positive");
  RunResult res;
  const double t0 = state.t;
  if (monitor) res.history.push_back(monitor(state));
  const double e0 = res.history.empty() ? 0.0 : std::abs(res.history.front().energy);
  const long nsteps = opt.t_final > t0 ? static_cast<long>(std::ceil((opt.t_final - t0) / dt - 1e-9)) : 0;
  try {
    for (long n = 0; n < nsteps; ++n) {
      const double h = (n + 1 == nsteps) ? opt.t_final - state.t : dt;
      rk4_step(state, rhs, h);
      if (n + 1 == nsteps) state.t = opt.t_final;
      ++res.steps;
      if (monitor) {
        res.history.push_back(monitor(state));
        if (std::abs(res.history.back().energy) > opt.divergence_factor * e0) {
          res.diverged = true;
          res.t_diverged = state.t;
          break;
        }
      }
    }
  } catch (const DivergenceError& err) {
    res.diverged = true;
    res.t_diverged = err.t;
  }
  res.state = std::move(state);
  return res;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

MonitorRecord measure(const Discretization& disc, SchemeForm form, const SolutionState& s) {
  const int ne = disc.num_elements(), np = disc.np();
  std::vector<double> en(ne), q(ne);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) {
    const auto ue = s.u.segment(e * np, np);
    const Eigen::VectorXd Nu = norm_matrix(disc, form, e) * ue;
    en[e] = ue.dot(Nu);
    q[e] = Nu.sum();
  }
  return {s.t, pairwise_sum(en), pairwise_sum(q)};
}

ResidualFn make_rhs(const Discretization& disc, const SchemeConfig& cfg, Execution exec) {
  return [&disc, cfg, exec](const Eigen::VectorXd& u, Eigen::VectorXd& du) {
    residual(disc, cfg, u, du, exec);
  };
}

EnergyVerdict judge_energy(const RunResult& r, double drift_tol, double step_tol) {
  EnergyVerdict v;
  v.diverged = r.diverged;
  if (r.history.empty()) return v;
  const double e0 = r.history.front().energy;
  for (std::size_t k = 0; k < r.history.size(); ++k) {
    v.max_rel_drift = std::max(v.max_rel_drift, std::abs(r.history[k].energy - e0) / e0);
    if (k > 0)
      v.max_rel_increase =
          std::max(v.max_rel_increase, (r.history[k].energy - r.history[k - 1].energy) / e0);
  }
  v.conserved = !r.diverged && v.max_rel_drift <= drift_tol;
  v.monotone = !r.diverged && v.max_rel_increase <= step_tol;
  return v;
}

void write_monitor_csv(std::ostream& os, const std::vector<MonitorRecord>& h) {
  os << "t,energy,energy_rel_drift,conserved,conserved_drift\n";
  if (h.empty()) return;
  os.precision(16);
  const double e0 = h.front().energy, q0 = h.front().conserved;
  for (const auto& m : h)
    os << m.t << ',' << m.energy << ',' << (m.energy - e0) / e0 << ',' << m.conserved << ','
       << (m.conserved - q0) << '\n';
}

}  // namespace frc
