#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "frcurv/schemes.hpp"

namespace frc {

using ExactFn = std::function<double(const Point& x)>;

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

// Errors on a GL rule with p + extra points per direction. Physical coordinates
// and J come from the mapping at those points.
ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& u,
                          const ExactFn& exact, int extra = 10);
double l2_error(const Discretization& disc, const Eigen::VectorXd& u, const ExactFn& exact);
double linf_error(const Discretization& disc, const Eigen::VectorXd& u, const ExactFn& exact);

// slope_k = log(e_{k-1}/e_k) / log(dx_{k-1}/dx_k), k = 1..n-1.
std::vector<double> ooa(const std::vector<std::pair<double, double>>& dx_err);

struct ErrorReport {
  double dx = 0.0;
  double l2 = 0.0, l2_ooa = 0.0;
  double linf = 0.0, linf_ooa = 0.0;
  int p = 0, dim = 0;
  std::string scheme, flux;
  double c = 0.0;
};

// Fills the OOA columns from consecutive rows (first row gets NaN).
void fill_ooa(std::vector<ErrorReport>& rows);
// dx,l2,l2_ooa,linf,linf_ooa
void write_convergence_csv(std::ostream& os, const std::vector<ErrorReport>& rows);

}  // namespace frc
