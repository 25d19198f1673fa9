#include "frcurv/sbp.hpp"

namespace frc {

HybridizedOperator build_hybridized_reference(const ReferenceOperators& r) {
  HybridizedOperator h;
  h.nv = r.nq;
  h.nf = 2 * r.dim * r.nfq;
  const int nt = h.nv + h.nf;
  h.E.resize(nt, r.np);
  h.E.topRows(r.nq) = r.chi;
  for (int f = 0; f < 2 * r.dim; ++f) h.E.middleRows(r.nq + f * r.nfq, r.nfq) = r.chi_face[f];
  const Eigen::MatrixXd Ef = h.E.bottomRows(h.nf);
  for (int i = 0; i < r.dim; ++i) {
    const Eigen::MatrixXd Q = r.w.asDiagonal() * r.chi * r.D[i] * r.Pi;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(h.nf);
    for (int f = 0; f < 2 * r.dim; ++f)
      if (face_direction(f) == i) b.segment(f * r.nfq, r.nfq) = face_sign(f) * r.w_face;
    const Eigen::MatrixXd BEPi = b.asDiagonal() * Ef * r.Pi;
    Eigen::MatrixXd Qt(nt, nt);
    Qt.topLeftCorner(h.nv, h.nv) = Q - Q.transpose();
    Qt.topRightCorner(h.nv, h.nf) = BEPi.transpose();
    Qt.bottomLeftCorner(h.nf, h.nv) = -BEPi;
    Qt.bottomRightCorner(h.nf, h.nf) = b.asDiagonal();
    h.Q.push_back(Q);
    h.Qtilde.push_back(0.5 * Qt);
  }
  return h;
}

HybridizedOperator build_hybridized(const ReferenceOperators& r, const MetricData& md) {
  HybridizedOperator h = build_hybridized_reference(r);
  const int nt = h.nv + h.nf;
  for (int i = 0; i < r.dim; ++i) {
    Eigen::MatrixXd Qm = Eigen::MatrixXd::Zero(nt, nt);
    for (int j = 0; j < r.dim; ++j) {
      // Physical direction i pairs with reference direction j through C(i, j).
      Eigen::VectorXd c(nt);
      for (int k = 0; k < r.nq; ++k) c(k) = md.volume.C[k](i, j);
      for (int f = 0; f < 2 * r.dim; ++f)
        for (int k = 0; k < r.nfq; ++k) c(r.nq + f * r.nfq + k) = md.faces[f].C[k](i, j);
      Qm += c.asDiagonal() * h.Qtilde[j] + h.Qtilde[j] * c.asDiagonal();
    }
    h.Qm.push_back(0.5 * Qm);
  }
  return h;
}

Eigen::VectorXd hadamard_residual(const Discretization& disc, const SchemeConfig& cfg,
                                  const Eigen::VectorXd& u) {
  const ReferenceOperators& r = disc.ref();
  const int np = r.np;
  Eigen::VectorXd du(disc.ndof());
  for (int e = 0; e < disc.num_elements(); ++e) {
    const HybridizedOperator h = build_hybridized(r, disc.metric(e));
    const auto ue = u.segment(e * np, np);
    const Eigen::VectorXd ut = h.E * ue;
    const int nt = h.nv + h.nf;
    Eigen::VectorXd rv = Eigen::VectorXd::Zero(nt);
    for (int i = 0; i < r.dim; ++i)
      for (int j = 0; j < nt; ++j)
        for (int k = 0; k < nt; ++k)
          rv(j) += 2.0 * h.Qm[i](j, k) * cfg.a[i] * 0.5 * (ut(j) + ut(k));
    Eigen::VectorXd vol = h.E.transpose() * rv;

    // Interface term n . (f* - f(u^-)).
    Eigen::VectorXd surf = Eigen::VectorXd::Zero(np);
    for (int f = 0; f < 2 * r.dim; ++f) {
      const FaceLink& L = disc.mesh().link(e, f);
      const Eigen::VectorXd um = r.chi_face[f] * ue;
      const Eigen::VectorXd up = r.chi_face[L.neighbor_face] * u.segment(L.neighbor * np, np);
      Eigen::VectorXd g(r.nfq);
      for (int k = 0; k < r.nfq; ++k) {
        const Eigen::Vector3d& n = disc.metric(e).normals[f][k];
        const double na = n(0) * cfg.a[0] + n(1) * cfg.a[1] + n(2) * cfg.a[2];
        g(k) = numerical_flux(um(k), up(L.perm[k]), n, cfg.a, cfg.flux) - na * um(k);
      }
      surf += r.chi_face[f].transpose() * (r.w_face.asDiagonal() * g);
    }
    du.segment(e * np, np) = -disc.ops(e).solve_N(vol + surf);
  }
  return du;
}

}  // namespace frc
