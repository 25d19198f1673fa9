#include "frcurv/schemes.hpp"

#include <cmath>
#include <exception>

namespace frc {

SchemeForm parse_scheme(const std::string& name) {
  if (name == "dg-cons" || name == "dg-conservative") return SchemeForm::DGConservativeStrong;
  if (name == "dg-noncons" || name == "dg-nonconservative") return SchemeForm::DGNonConservativeStrong;
  if (name == "dg-split") return SchemeForm::DGSplit;
  if (name == "esfr-classical" || name == "esfr-classical-split") return SchemeForm::ESFRClassicalSplit;
  if (name == "esfr-split" || name == "esfr") return SchemeForm::ESFRSplit;
  throw ConfigError("unknown scheme '" + name +
                    "' (dg-cons|dg-noncons|dg-split|esfr-classical|esfr-split)");
}

std::string to_string(SchemeForm form) {
  switch (form) {
    case SchemeForm::DGConservativeStrong: return "dg-cons";
    case SchemeForm::DGNonConservativeStrong: return "dg-noncons";
    case SchemeForm::DGSplit: return "dg-split";
    case SchemeForm::ESFRClassicalSplit: return "esfr-classical";
    case SchemeForm::ESFRSplit: return "esfr-split";
  }
  return "?";
}

FluxKind parse_flux(const std::string& name) {
  if (name == "central") return FluxKind::Central;
  if (name == "upwind") return FluxKind::Upwind;
  throw ConfigError("unknown flux '" + name + "' (central|upwind)");
}

std::string to_string(FluxKind flux) { return flux == FluxKind::Central ? "central" : "upwind"; }

double numerical_flux(double um, double up, const Eigen::Vector3d& n, const Point& a,
                      FluxKind flux) {
  const double na = n(0) * a[0] + n(1) * a[1] + n(2) * a[2];
  const double central = na * 0.5 * (um + up);
  if (flux == FluxKind::Central) return central;
  return central - std::abs(na) * 0.5 * (up - um);
}

Discretization::Discretization(Mesh mesh, const DiscretizationOptions& opt)
    : mesh_(std::move(mesh)), opt_(opt) {
  if (opt_.n_1d == 0) opt_.n_1d = opt_.p + 1;
  ref_ = build_reference(opt_.p, mesh_.dim(), opt_.n_1d);
  mesh_.set_facet_nodes(opt_.n_1d);
  const int ne = mesh_.num_elements();
  metrics_.resize(ne);
  ops_.resize(ne);
  // Exceptions cannot leave an OpenMP region; collect the first one.
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4)
  for (int e = 0; e < ne; ++e) {
    try {
      metrics_[e] = compute_metrics(mesh_, e, ref_.volume, ref_.facets, opt_.metric);
      ops_[e] = build_element_operators(ref_, metrics_[e].volume, {opt_.c}, opt_.solve);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

double Discretization::dx() const {
  double s = 0.0;
  for (int d = 0; d < dim(); ++d) s += mesh_.element_width(d);
  return s / dim() / (opt_.p + 1);
}

const Eigen::MatrixXd& norm_matrix(const Discretization& disc, SchemeForm form, int e) {
  return is_esfr(form) ? disc.ops(e).Nm : disc.ops(e).Mm;
}

std::vector<Eigen::VectorXd> reference_flux_coeffs(const Discretization& disc, const Point& a,
                                                   const Eigen::Ref<const Eigen::VectorXd>& ue,
                                                   int e) {
  const ReferenceOperators& r = disc.ref();
  const MetricField& vol = disc.metric(e).volume;
  const Eigen::VectorXd uv = r.chi * ue;
  std::vector<Eigen::VectorXd> out;
  for (int j = 0; j < r.dim; ++j) {
    Eigen::VectorXd fr(r.nq);
    for (int q = 0; q < r.nq; ++q) {
      double ac = 0.0;
      for (int i = 0; i < r.dim; ++i) ac += a[i] * vol.C[q](i, j);
      fr(q) = uv(q) * ac;
    }
    out.push_back(r.Pi * fr);
  }
  return out;
}

namespace {

// chi^T W sum_k grad_tilde_k Pi(a_k u)
Eigen::VectorXd nonconservative_volume(const Discretization& disc, const Point& a,
                                       const Eigen::VectorXd& uv, int e) {
  const ReferenceOperators& r = disc.ref();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(r.nq);
  for (int k = 0; k < r.dim; ++k) {
    const Eigen::VectorXd fk = r.Pi * (a[k] * uv);
    g += disc.ops(e).grad_tilde[k] * fk;
  }
  return r.chi.transpose() * (r.w.asDiagonal() * g);
}

Eigen::VectorXd conservative_volume(const Discretization& disc,
                                    const std::vector<Eigen::VectorXd>& frc) {
  const ReferenceOperators& r = disc.ref();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(r.np);
  for (int j = 0; j < r.dim; ++j) v += r.S[j] * frc[j];
  return v;
}

// Surface assembly given the normal numerical flux at each facet node of each face.
template <class FluxAt>
Eigen::VectorXd surface_term(const Discretization& disc, SchemeForm form, const Point& a,
                             const Eigen::Ref<const Eigen::VectorXd>& ue,
                             const std::vector<Eigen::VectorXd>& frc, int e, FluxAt&& fstar) {
  const ReferenceOperators& r = disc.ref();
  const MetricData& md = disc.metric(e);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(r.np);
  Eigen::VectorXd g(r.nfq);
  for (int f = 0; f < 2 * r.dim; ++f) {
    const int d = face_direction(f);
    const double sg = face_sign(f);
    const Eigen::VectorXd um = r.chi_face[f] * ue;
    const Eigen::VectorXd frd = r.chi_face[f] * frc[d];
    for (int k = 0; k < r.nfq; ++k) {
      const Eigen::Vector3d& n = md.normals[f][k];
      const double na = n(0) * a[0] + n(1) * a[1] + n(2) * a[2];
      const double F = fstar(f, k, um(k));
      switch (form) {
        case SchemeForm::DGConservativeStrong:
          g(k) = F - sg * frd(k);
          break;
        case SchemeForm::DGNonConservativeStrong:
          g(k) = F - na * um(k);
          break;
        default:
          g(k) = F - 0.5 * na * um(k) - 0.5 * sg * frd(k);
          break;
      }
    }
    s += r.chi_face[f].transpose() * (r.w_face.asDiagonal() * g);
  }
  return s;
}

// Exterior trace at facet node k of face f of element e.
struct NeighborTrace {
  const Discretization& disc;
  const Eigen::VectorXd& u;
  int e;
  std::vector<Eigen::VectorXd> up;
  NeighborTrace(const Discretization& d, const Eigen::VectorXd& uu, int ee) : disc(d), u(uu), e(ee) {
    const ReferenceOperators& r = disc.ref();
    for (int f = 0; f < 2 * r.dim; ++f) {
      const FaceLink& L = disc.mesh().link(e, f);
      const Eigen::VectorXd t = r.chi_face[L.neighbor_face] * u.segment(L.neighbor * r.np, r.np);
      Eigen::VectorXd out(r.nfq);
      for (int k = 0; k < r.nfq; ++k) out(k) = t(L.perm[k]);
      up.push_back(std::move(out));
    }
  }
};

void finish(const Discretization& disc, SchemeForm form, int e, const Eigen::VectorXd& vol,
            const Eigen::VectorXd& surf, Eigen::Ref<Eigen::VectorXd> du) {
  const ElementOperators& ops = disc.ops(e);
  switch (form) {
    case SchemeForm::ESFRSplit:
      du = -ops.solve_N(vol + surf);
      break;
    case SchemeForm::ESFRClassicalSplit:
      du = -ops.solve_M(vol) - ops.solve_N(surf);
      break;
    default:
      du = -ops.solve_M(vol + surf);
      break;
  }
}

void check_config(const Discretization& disc, const SchemeConfig& cfg) {
  if (is_esfr(cfg.form) && cfg.c != disc.c())
    throw ConfigError("scheme c = " + std::to_string(cfg.c) +
                      " differs from the discretization's c = " + std::to_string(disc.c()));
}

}  // namespace

Eigen::VectorXd volume_term(const Discretization& disc, SchemeForm form, const Point& a,
                            const Eigen::Ref<const Eigen::VectorXd>& ue, int e) {
  const Eigen::VectorXd uv = disc.ref().chi * ue;
  switch (form) {
    case SchemeForm::DGConservativeStrong:
      return conservative_volume(disc, reference_flux_coeffs(disc, a, ue, e));
    case SchemeForm::DGNonConservativeStrong:
      return nonconservative_volume(disc, a, uv, e);
    default:
      return 0.5 * conservative_volume(disc, reference_flux_coeffs(disc, a, ue, e)) +
             0.5 * nonconservative_volume(disc, a, uv, e);
  }
}

ElementTerms element_terms(const Discretization& disc, const SchemeConfig& cfg,
                           const Eigen::VectorXd& u, int e) {
  const int np = disc.np();
  const auto ue = u.segment(e * np, np);
  const auto frc = reference_flux_coeffs(disc, cfg.a, ue, e);
  const NeighborTrace nb(disc, u, e);
  ElementTerms t;
  t.volume = volume_term(disc, cfg.form, cfg.a, ue, e);
  t.surface = surface_term(disc, cfg.form, cfg.a, ue, frc, e, [&](int f, int k, double um) {
    return numerical_flux(um, nb.up[f](k), disc.metric(e).normals[f][k], cfg.a, cfg.flux);
  });
  return t;
}

double face_flux_integral(const Discretization& disc, const SchemeConfig& cfg,
                          const Eigen::VectorXd& u, int e) {
  const ReferenceOperators& r = disc.ref();
  const NeighborTrace nb(disc, u, e);
  double s = 0.0;
  for (int f = 0; f < 2 * r.dim; ++f) {
    const Eigen::VectorXd um = r.chi_face[f] * u.segment(e * r.np, r.np);
    for (int k = 0; k < r.nfq; ++k)
      s += r.w_face(k) *
           numerical_flux(um(k), nb.up[f](k), disc.metric(e).normals[f][k], cfg.a, cfg.flux);
  }
  return s;
}

void residual(const Discretization& disc, const SchemeConfig& cfg, const Eigen::VectorXd& u,
              Eigen::VectorXd& du, Execution exec) {
  check_config(disc, cfg);
  const int np = disc.np(), ne = disc.num_elements();
  du.resize(disc.ndof());
  std::exception_ptr err;
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
  for (int e = 0; e < ne; ++e) {
    try {
      const ElementTerms t = element_terms(disc, cfg, u, e);
      finish(disc, cfg.form, e, t.volume, t.surface, du.segment(e * np, np));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

Eigen::VectorXd residual(const Discretization& disc, const SchemeConfig& cfg,
                         const Eigen::VectorXd& u, Execution exec) {
  Eigen::VectorXd du;
  residual(disc, cfg, u, du, exec);
  return du;
}

Eigen::VectorXd residual_reference(const Discretization& disc, const SchemeConfig& cfg,
                                   const Eigen::VectorXd& u) {
  check_config(disc, cfg);
  const ReferenceOperators& r = disc.ref();
  const Mesh& mesh = disc.mesh();
  const int np = r.np, ne = disc.num_elements(), nf = 2 * r.dim;
  // fstar[e][f](k): normal flux seen from element e.
  std::vector<std::vector<Eigen::VectorXd>> fstar(ne, std::vector<Eigen::VectorXd>(nf));
  for (int e = 0; e < ne; ++e)
    for (int f = 1; f < nf; f += 2) {
      const FaceLink& L = mesh.link(e, f);
      const Eigen::VectorXd um = r.chi_face[f] * u.segment(e * np, np);
      const Eigen::VectorXd up = r.chi_face[L.neighbor_face] * u.segment(L.neighbor * np, np);
      // Across a non-periodic wrap the two sides have unrelated normals, so
      // each side evaluates its own flux there.
      const bool shared = !L.wraps || mesh.geometrically_periodic();
      const auto& nb_normals = disc.metric(L.neighbor).normals[L.neighbor_face];
      Eigen::VectorXd mine(r.nfq), theirs(r.nfq);
      for (int k = 0; k < r.nfq; ++k) {
        const int kk = L.perm[k];
        const double F = numerical_flux(um(k), up(kk), disc.metric(e).normals[f][k], cfg.a, cfg.flux);
        mine(k) = F;
        theirs(kk) = shared ? -F : numerical_flux(up(kk), um(k), nb_normals[kk], cfg.a, cfg.flux);
      }
      fstar[e][f] = mine;
      fstar[L.neighbor][L.neighbor_face] = theirs;
    }
  Eigen::VectorXd du(disc.ndof());
  for (int e = 0; e < ne; ++e) {
    const auto ue = u.segment(e * np, np);
    const auto frc = reference_flux_coeffs(disc, cfg.a, ue, e);
    const Eigen::VectorXd vol = volume_term(disc, cfg.form, cfg.a, ue, e);
    const Eigen::VectorXd surf = surface_term(disc, cfg.form, cfg.a, ue, frc, e,
                                              [&](int f, int k, double) { return fstar[e][f](k); });
    finish(disc, cfg.form, e, vol, surf, du.segment(e * np, np));
  }
  return du;
}

static Eigen::VectorXd with_form(const Discretization& d, SchemeConfig c, SchemeForm f,
                                 const Eigen::VectorXd& u) {
  c.form = f;
  return residual(d, c, u);
}

Eigen::VectorXd residual_dg_conservative(const Discretization& d, SchemeConfig c, const Eigen::VectorXd& u) {
  return with_form(d, c, SchemeForm::DGConservativeStrong, u);
}
Eigen::VectorXd residual_dg_nonconservative(const Discretization& d, SchemeConfig c, const Eigen::VectorXd& u) {
  return with_form(d, c, SchemeForm::DGNonConservativeStrong, u);
}
Eigen::VectorXd residual_dg_split(const Discretization& d, SchemeConfig c, const Eigen::VectorXd& u) {
  return with_form(d, c, SchemeForm::DGSplit, u);
}
Eigen::VectorXd residual_esfr_split(const Discretization& d, SchemeConfig c, const Eigen::VectorXd& u) {
  return with_form(d, c, SchemeForm::ESFRSplit, u);
}
Eigen::VectorXd residual_esfr_classical_split(const Discretization& d, SchemeConfig c, const Eigen::VectorXd& u) {
  return with_form(d, c, SchemeForm::ESFRClassicalSplit, u);
}

}  // namespace frc
