#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "frcurv/schemes.hpp"

namespace frc {

struct SolutionState {
  Eigen::VectorXd u;
  double t = 0.0;
};

using ResidualFn = std::function<void(const Eigen::VectorXd& u, Eigen::VectorXd& du)>;

// Classical four-stage RK4. Throws DivergenceError on a non-finite stage.
void rk4_step(SolutionState& state, const ResidualFn& rhs, double dt);

struct MonitorRecord {
  double t = 0.0;
  double energy = 0.0;     // sum_m u_m^T N_m u_m
  double conserved = 0.0;  // sum_m 1^T N_m u_m
};

enum class DtRule { Energy, OOA, Explicit };

struct RunOptions {
  double t_final = 0.0;
  DtRule rule = DtRule::OOA;
  double dt = 0.0;  // used by DtRule::Explicit
  double dx = 1.0;  // used by the Energy and OOA rules
  double divergence_factor = 1e6;
};

double time_step(const RunOptions& opt);

struct RunResult {
  SolutionState state;
  std::vector<MonitorRecord> history;
  int steps = 0;
  bool diverged = false;
  double t_diverged = 0.0;
};

using MonitorFn = std::function<MonitorRecord(const SolutionState&)>;

// Steps to t_final, clipping the last step. A monitor, if given, is sampled
// initially and after every step; |E| > divergence_factor * E(0) stops the run.
RunResult run(SolutionState state, const ResidualFn& rhs, const RunOptions& opt,
              const MonitorFn& monitor = {});

// Order-independent summation with bounded rounding growth.
double pairwise_sum(std::span<const double> v);

MonitorRecord measure(const Discretization& disc, SchemeForm form, const SolutionState& s);

ResidualFn make_rhs(const Discretization& disc, const SchemeConfig& cfg,
                    Execution exec = Execution::Parallel);

struct EnergyVerdict {
  bool conserved = false;
  bool monotone = false;
  bool diverged = false;
  double max_rel_drift = 0.0;
  double max_rel_increase = 0.0;  // largest single-step increase over E(0)
};

// Conserved: max |E - E0| / E0 <= drift_tol. Monotone: every step satisfies
// E(k+1) <= E(k) + step_tol * E0, and the run did not diverge.
EnergyVerdict judge_energy(const RunResult& r, double drift_tol = 1e-10, double step_tol = 1e-12);

// t,energy,energy_rel_drift,conserved,conserved_drift
void write_monitor_csv(std::ostream& os, const std::vector<MonitorRecord>& history);

}  // namespace frc
