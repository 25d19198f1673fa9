#include "frcurv/mesh.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace frc {

using std::numbers::pi;

Domain default_domain(Warp warp, int dim) {
  Domain d;
  if (warp == Warp::NonSym2D) {
    d.lo = {-1.0, -1.0, 0.0};
    d.hi = {1.0, 1.0, 1.0};
  }
  for (int k = dim; k < 3; ++k) {
    d.lo[k] = 0.0;
    d.hi[k] = 1.0;
  }
  return d;
}

Warp parse_warp(const std::string& name) {
  if (name == "identity" || name == "none") return Warp::Identity;
  if (name == "heavy3d" || name == "heavy") return Warp::Heavy3D;
  if (name == "nonsym" || name == "grid1") return Warp::NonSym2D;
  if (name == "skewsym" || name == "grid2") return Warp::SkewSym2D;
  throw ConfigError("unknown warp '" + name + "' (identity|heavy3d|nonsym|skewsym)");
}

std::string to_string(Warp warp) {
  switch (warp) {
    case Warp::Identity: return "identity";
    case Warp::Heavy3D: return "heavy3d";
    case Warp::NonSym2D: return "nonsym";
    case Warp::SkewSym2D: return "skewsym";
  }
  return "?";
}

Point warp_heavy3d(const Point& x) {
  const double xi = x[0], eta = x[1], zeta = x[2];
  return {xi + 0.1 * (std::cos(pi * eta) + std::cos(pi * zeta)),
          eta + 0.1 * std::exp(1.0 - eta) * (std::sin(pi * xi) + std::sin(pi * zeta)),
          zeta + 0.05 * (std::sin(2.0 * pi * xi) + std::sin(2.0 * pi * eta))};
}

Point warp_nonsym(const Point& x) {
  const double xi = x[0], eta = x[1];
  return {xi + 0.1 * std::cos(0.5 * pi * xi) * std::cos(1.5 * pi * eta),
          eta + 0.1 * std::sin(2.0 * pi * xi) * std::cos(0.5 * pi * eta), x[2]};
}

Point warp_skewsym(const Point& x) {
  const double xi = x[0], eta = x[1];
  return {xi - 0.1 * std::sin(2.0 * pi * eta), eta + 0.1 * std::sin(2.0 * pi * xi), x[2]};
}

Point apply_warp(Warp warp, const Point& x) {
  switch (warp) {
    case Warp::Identity: return x;
    case Warp::Heavy3D: return warp_heavy3d(x);
    case Warp::NonSym2D: return warp_nonsym(x);
    case Warp::SkewSym2D: return warp_skewsym(x);
  }
  return x;
}

Mesh Mesh::build(int dim, int elements_per_dir, int q, Warp warp) {
  return build(dim, {elements_per_dir, elements_per_dir, elements_per_dir}, q, warp,
               default_domain(warp, dim));
}

Mesh Mesh::build(int dim, std::array<int, 3> elements_per_dir, int q, Warp warp,
                 const Domain& domain) {
  if (dim < 1 || dim > 3) throw ConfigError("build_mesh: dim must be 1, 2 or 3");
  if (q < 1) throw ConfigError("build_mesh: mapping degree q must be >= 1");
  if (warp == Warp::Heavy3D && dim != 3) throw ConfigError("heavy3d warp needs dim = 3");
  if ((warp == Warp::NonSym2D || warp == Warp::SkewSym2D) && dim != 2)
    throw ConfigError(to_string(warp) + " warp needs dim = 2");
  Mesh m;
  m.dim_ = dim;
  m.q_ = q;
  m.warp_ = warp;
  m.domain_ = domain;
  m.shape_ = Basis1D(BasisKind::LagrangeGLL, q);
  for (int d = 0; d < 3; ++d) {
    m.n_[d] = d < dim ? elements_per_dir[d] : 1;
    if (m.n_[d] < 1) throw ConfigError("build_mesh: elements_per_dir must be >= 1");
  }
  const std::vector<double>& s = m.shape_.nodes();
  const int nq = q + 1;
  const int gz = dim > 2 ? nq : 1, gy = dim > 1 ? nq : 1;
  const int ne = m.n_[0] * m.n_[1] * m.n_[2];
  m.support_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto ijk = m.element_ijk(e);
    PointList& pts = m.support_[e];
    pts.reserve(nq * gy * gz);
    for (int c = 0; c < gz; ++c)
      for (int b = 0; b < gy; ++b)
        for (int a = 0; a < nq; ++a) {
          const int ab[3] = {a, b, c};
          Point x{0.0, 0.0, 0.0};
          for (int d = 0; d < dim; ++d) {
            // Global lattice coordinate: identical bits on both sides of a face.
            const double t = (ijk[d] + 0.5 * (1.0 + s[ab[d]])) / m.n_[d];
            x[d] = domain.lo[d] + (domain.hi[d] - domain.lo[d]) * t;
          }
          pts.push_back(apply_warp(warp, x));
        }
  }
  m.links_.assign(ne, std::vector<FaceLink>(2 * dim));
  for (int e = 0; e < ne; ++e) {
    const auto ijk = m.element_ijk(e);
    for (int f = 0; f < 2 * dim; ++f) {
      const int d = face_direction(f);
      auto nb = ijk;
      const int step = (f % 2) ? 1 : -1;
      nb[d] += step;
      FaceLink& L = m.links_[e][f];
      L.wraps = nb[d] < 0 || nb[d] >= m.n_[d];
      nb[d] = (nb[d] + m.n_[d]) % m.n_[d];
      L.neighbor = m.element_index(nb);
      L.neighbor_face = f ^ 1;
    }
  }
  return m;
}

int Mesh::element_index(std::array<int, 3> ijk) const {
  return ijk[0] + n_[0] * (ijk[1] + n_[1] * ijk[2]);
}

std::array<int, 3> Mesh::element_ijk(int e) const {
  return {e % n_[0], (e / n_[0]) % n_[1], e / (n_[0] * n_[1])};
}

void Mesh::set_facet_nodes(int n1d) {
  int nf = 1;
  for (int d = 1; d < dim_; ++d) nf *= n1d;
  // Every element of the structured grid shares one orientation, so paired
  // facet nodes carry identical tangential reference coordinates.
  std::vector<int> perm(nf);
  for (int k = 0; k < nf; ++k) perm[k] = k;
  for (auto& faces : links_)
    for (auto& L : faces) L.perm = perm;
}

Point Mesh::map_point(int e, const Point& xi) const {
  const int n = q_ + 1;
  std::vector<double> f[3];
  for (int d = 0; d < 3; ++d) {
    f[d].assign(n, 1.0);
    if (d < dim_) shape_.eval_point(xi[d], 0, f[d].data());
  }
  const int gz = dim_ > 2 ? n : 1, gy = dim_ > 1 ? n : 1;
  Point x{0.0, 0.0, 0.0};
  int g = 0;
  for (int c = 0; c < gz; ++c)
    for (int b = 0; b < gy; ++b)
      for (int a = 0; a < n; ++a, ++g) {
        const double th = f[0][a] * f[1][b] * f[2][c];
        for (int d = 0; d < 3; ++d) x[d] += th * support_[e][g][d];
      }
  return x;
}

void Mesh::write_csv(std::ostream& os) const {
  os << "element,node,x,y,z\n";
  os.precision(17);
  for (int e = 0; e < num_elements(); ++e)
    for (std::size_t k = 0; k < support_[e].size(); ++k) {
      const Point& x = support_[e][k];
      os << e << ',' << k << ',' << x[0] << ',' << x[1] << ',' << x[2] << '\n';
    }
}

}  // namespace frc
