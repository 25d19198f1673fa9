#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "frcurv/basis.hpp"
#include "frcurv/types.hpp"

namespace frc {

enum class Warp { Identity, Heavy3D, NonSym2D, SkewSym2D };

struct Domain {
  Point lo{0.0, 0.0, 0.0};
  Point hi{1.0, 1.0, 1.0};
};

// [0,1]^3 for Heavy3D, [-1,1]^2 for NonSym2D, [0,1]^2 for SkewSym2D, [0,1]^dim otherwise.
Domain default_domain(Warp warp, int dim);
Warp parse_warp(const std::string& name);
std::string to_string(Warp warp);

// Individual warp maps. Inputs are Cartesian coordinates of the unwarped box.
Point warp_heavy3d(const Point& x);
Point warp_nonsym(const Point& x);
Point warp_skewsym(const Point& x);
Point apply_warp(Warp warp, const Point& x);

struct FaceLink {
  int neighbor = -1;
  int neighbor_face = -1;
  bool wraps = false;  // crosses the periodic boundary
  // Facet node k here pairs with facet node perm[k] on the neighbor face.
  std::vector<int> perm;
};

class Mesh {
 public:
  // elements_per_dir entries beyond dim are ignored.
  static Mesh build(int dim, std::array<int, 3> elements_per_dir, int q, Warp warp,
                    const Domain& domain);
  static Mesh build(int dim, int elements_per_dir, int q, Warp warp);

  int dim() const { return dim_; }
  int q() const { return q_; }
  Warp warp() const { return warp_; }
  const Domain& domain() const { return domain_; }
  int elements(int d) const { return n_[d]; }
  int num_elements() const { return static_cast<int>(support_.size()); }
  int num_faces() const { return 2 * dim_; }
  // Unwarped element width along d.
  double element_width(int d) const { return (domain_.hi[d] - domain_.lo[d]) / n_[d]; }
  // Periodic warps keep paired boundary faces congruent up to a translation.
  bool geometrically_periodic() const { return warp_ != Warp::Heavy3D; }

  // Physical coordinates of the GLL grid nodes of element e, x index fastest.
  const PointList& support_points(int e) const { return support_[e]; }
  const Basis1D& shape_line() const { return shape_; }
  const FaceLink& link(int e, int face) const { return links_[e][face]; }
  // Test hook for negative controls on the topology.
  void set_link(int e, int face, FaceLink link) { links_[e][face] = std::move(link); }
  // Test hook: replace the grid nodes of element e (same count and ordering).
  void set_support_points(int e, PointList pts) { support_[e] = std::move(pts); }

  int element_index(std::array<int, 3> ijk) const;
  std::array<int, 3> element_ijk(int e) const;

  // Point in element e's reference coordinates mapped through the degree-q
  // interpolant of the support points.
  Point map_point(int e, const Point& xi) const;

  // Assign facet permutations for a given number of 1D facet nodes.
  void set_facet_nodes(int n1d);

  // CSV: element,node,x,y,z
  void write_csv(std::ostream& os) const;

 private:
  int dim_ = 1, q_ = 1;
  std::array<int, 3> n_{1, 1, 1};
  Warp warp_ = Warp::Identity;
  Domain domain_;
  Basis1D shape_{BasisKind::LagrangeGLL, 1};
  std::vector<PointList> support_;
  std::vector<std::vector<FaceLink>> links_;
};

}  // namespace frc
