#include "frcurv/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace frc {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Enforce exact mirror symmetry and sort ascending. Newton converges to the
// same roots from both ends only up to a few ulps.
void symmetrize(QuadratureRule& r) {
  const int n = r.size();
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0.0;
}

QuadratureRule make_gl(int n) {
  QuadratureRule r{RuleKind::GL, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, descending in i.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    legendre(n, x, p, dp);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  symmetrize(r);
  return r;
}

QuadratureRule make_gll(int n) {
  const int N = n - 1;
  QuadratureRule r{RuleKind::GLL, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    // Chebyshev-Gauss-Lobatto guess; the update below keeps the endpoints fixed.
    double x = -std::cos(std::numbers::pi * i / N);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      double pn, dpn, pm, dpm;
      legendre(N, x, pn, dpn);
      legendre(N - 1, x, pm, dpm);
      const double dx = (x * pn - pm) / (n * pn);
      x -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    double pn, dpn;
    legendre(N, x, pn, dpn);
    r.nodes[i] = x;
    r.weights[i] = 2.0 / (N * (N + 1) * pn * pn);
  }
  r.nodes.front() = -1.0;
  r.nodes.back() = 1.0;
  symmetrize(r);
  return r;
}

template <class Make>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache, int n,
                             Make make) {
  static std::mutex mtx;
  std::lock_guard lock(mtx);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(make(n));
  return *slot;
}

}  // namespace

void legendre(int n, double x, double& value, double& derivative) {
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) {
    value = 1.0;
    derivative = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    const double d2 = d0 + (2 * k + 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  value = p1;
  derivative = d1;
}

const QuadratureRule& gl_rule(int n) {
  if (n < 1) throw ConfigError("gl_rule: need n >= 1, got " + std::to_string(n));
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  return cached(cache, n, make_gl);
}

const QuadratureRule& gll_rule(int n) {
  if (n < 2) throw ConfigError("gll_rule: need n >= 2, got " + std::to_string(n));
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  return cached(cache, n, make_gll);
}

TensorRule tensor_rule(const QuadratureRule& rule, int dim) {
  if (dim < 1 || dim > 3) throw ConfigError("tensor_rule: dim must be 1, 2 or 3");
  const int n = rule.size();
  const int nz = dim > 2 ? n : 1, ny = dim > 1 ? n : 1;
  TensorRule t;
  t.dim = dim;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < n; ++i) {
        Point x{rule.nodes[i], dim > 1 ? rule.nodes[j] : 0.0, dim > 2 ? rule.nodes[k] : 0.0};
        double w = rule.weights[i];
        if (dim > 1) w *= rule.weights[j];
        if (dim > 2) w *= rule.weights[k];
        t.points.push_back(x);
        t.weights.push_back(w);
      }
  return t;
}

TensorRule facet_rule(const QuadratureRule& rule, int dim, int face) {
  if (face < 0 || face >= 2 * dim) throw ConfigError("facet_rule: face index out of range");
  const int d = face_direction(face);
  const double s = face_sign(face);
  TensorRule t;
  t.dim = dim;
  if (dim == 1) {
    t.points.push_back({s, 0.0, 0.0});
    t.weights.push_back(1.0);
    return t;
  }
  const TensorRule sub = tensor_rule(rule, dim - 1);
  for (int q = 0; q < sub.size(); ++q) {
    Point x{0.0, 0.0, 0.0};
    int t_idx = 0;
    for (int k = 0; k < dim; ++k) x[k] = (k == d) ? s : sub.points[q][t_idx++];
    t.points.push_back(x);
    t.weights.push_back(sub.weights[q]);
  }
  return t;
}

}  // namespace frc
