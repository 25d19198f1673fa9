#include "frcurv/operators.hpp"

#include <cmath>

namespace frc {

ReferenceOperators build_reference(const TensorBasis& basis, const QuadratureRule& volume_rule,
                                   const QuadratureRule& facet_rule_1d) {
  const int p = basis.degree(), dim = basis.dim();
  if (volume_rule.exactness() < 2 * p - 1)
    throw ConfigError("build_reference: volume rule exactness " +
                      std::to_string(volume_rule.exactness()) + " is below 2p-1 = " +
                      std::to_string(2 * p - 1));
  ReferenceOperators r;
  r.p = p;
  r.dim = dim;
  r.np = basis.size();
  r.volume_1d = volume_rule;
  r.volume = tensor_rule(volume_rule, dim);
  r.nq = r.volume.size();
  r.chi = basis.eval(r.volume.points);
  r.grad = basis.gradient(r.volume.points);
  r.w = Eigen::Map<const Eigen::VectorXd>(r.volume.weights.data(), r.nq);
  r.M = r.chi.transpose() * r.w.asDiagonal() * r.chi;
  const Eigen::LLT<Eigen::MatrixXd> llt(r.M);
  if (llt.info() != Eigen::Success) throw ConfigError("build_reference: mass matrix is not SPD");
  for (int d = 0; d < dim; ++d) {
    r.S.push_back(r.chi.transpose() * r.w.asDiagonal() * r.grad[d]);
    r.D.push_back(llt.solve(r.S.back()));
  }
  r.Pi = llt.solve(r.chi.transpose() * r.w.asDiagonal());
  for (int f = 0; f < 2 * dim; ++f) {
    r.facets.push_back(facet_rule(facet_rule_1d, dim, f));
    r.chi_face.push_back(basis.eval(r.facets.back().points));
  }
  r.nfq = r.facets[0].size();
  r.w_face = Eigen::Map<const Eigen::VectorXd>(r.facets[0].weights.data(), r.nfq);
  r.selectors = admissible_selectors(p, dim);
  for (const auto& sel : r.selectors) {
    r.dsel.push_back(basis.eval_partial(sel, r.volume.points));
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(r.np, r.np);
    const int ord[3] = {sel.s, sel.v, sel.w};
    for (int d = 0; d < dim; ++d)
      for (int k = 0; k < ord[d]; ++k) P = r.D[d] * P;
    r.dpow.push_back(P);
  }
  const TensorBasis leg(BasisKind::NormalizedLegendre, p, dim);
  r.legendre = leg.eval(r.volume.points);
  for (const auto& sel : r.selectors) r.dsel_legendre.push_back(leg.eval_partial(sel, r.volume.points));
  // chi = legendre * T exactly (same polynomial space), so T from least squares.
  const Eigen::MatrixXd T = r.legendre.colPivHouseholderQr().solve(r.chi);
  r.to_basis = std::make_shared<const Eigen::MatrixXd>(T.inverse());
  return r;
}

ReferenceOperators build_reference(int p, int dim, int n_1d) {
  return build_reference(TensorBasis(BasisKind::LagrangeGLL, p, dim), gl_rule(n_1d),
                         gl_rule(n_1d));
}

double CorrectionParameter::ladder(const DerivativeSelector& sel, int p) const {
  return std::pow(c1d, sel.total() / p);
}

static Eigen::VectorXd weighted(const ReferenceOperators& ref, const std::vector<double>& J) {
  Eigen::VectorXd wj(ref.nq);
  for (int k = 0; k < ref.nq; ++k) wj(k) = ref.w(k) * J[k];
  return wj;
}

Eigen::MatrixXd build_mass(const ReferenceOperators& ref, const std::vector<double>& J) {
  return ref.chi.transpose() * weighted(ref, J).asDiagonal() * ref.chi;
}

Eigen::MatrixXd build_Km(const ReferenceOperators& ref, const std::vector<double>& J,
                         const CorrectionParameter& c) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ref.np, ref.np);
  if (c.c1d == 0.0) return K;
  const Eigen::VectorXd wj = weighted(ref, J);
  for (std::size_t s = 0; s < ref.selectors.size(); ++s)
    K += c.ladder(ref.selectors[s], ref.p) *
         (ref.dsel[s].transpose() * wj.asDiagonal() * ref.dsel[s]);
  return K;
}

Eigen::MatrixXd build_Km_sandwich(const ReferenceOperators& ref, const Eigen::MatrixXd& Mm,
                                  const CorrectionParameter& c) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ref.np, ref.np);
  if (c.c1d == 0.0) return K;
  for (std::size_t s = 0; s < ref.selectors.size(); ++s)
    K += c.ladder(ref.selectors[s], ref.p) * (ref.dpow[s].transpose() * Mm * ref.dpow[s]);
  return K;
}

Eigen::MatrixXd build_Km_jacobian_inside(const ReferenceOperators& ref,
                                         const std::vector<double>& J,
                                         const CorrectionParameter& c) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ref.np, ref.np);
  Eigen::VectorXd jv = Eigen::Map<const Eigen::VectorXd>(J.data(), ref.nq);
  const Eigen::MatrixXd Jchi = ref.Pi * jv.asDiagonal() * ref.chi;  // coefficients of J chi_j
  for (std::size_t s = 0; s < ref.selectors.size(); ++s)
    K += c.ladder(ref.selectors[s], ref.p) *
         (ref.dsel[s].transpose() * ref.w.asDiagonal() * ref.dsel[s] * Jchi);
  return K;
}

Eigen::MatrixXd build_Km_legendre(int p, int dim, const TensorRule& volume,
                                  const std::vector<double>& J, const CorrectionParameter& c) {
  const TensorBasis leg(BasisKind::NormalizedLegendre, p, dim);
  const int np = leg.size();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(np, np);
  Eigen::VectorXd wj(volume.size());
  for (int k = 0; k < volume.size(); ++k) wj(k) = volume.weights[k] * J[k];
  for (const auto& sel : admissible_selectors(p, dim)) {
    const Eigen::MatrixXd d = leg.eval_partial(sel, volume.points);
    K += c.ladder(sel, p) * (d.transpose() * wj.asDiagonal() * d);
  }
  return K;
}

Eigen::VectorXd ElementOperators::solve_N(const Eigen::VectorXd& b) const {
  if (solve == NormSolve::Nodal) return Nm_llt.solve(b);
  const Eigen::MatrixXd& A = *to_basis;
  return A * Nleg_llt.solve(A.transpose() * b);
}

Eigen::VectorXd ElementOperators::solve_M(const Eigen::VectorXd& b) const {
  return Mm_llt.solve(b);
}

ElementOperators build_element_operators(const ReferenceOperators& ref, const MetricField& volume,
                                         const CorrectionParameter& c, NormSolve solve) {
  ElementOperators eo;
  eo.solve = solve;
  eo.Mm = build_mass(ref, volume.J);
  eo.Km = build_Km(ref, volume.J, c);
  eo.Nm = eo.Mm + eo.Km;
  eo.Mm_llt.compute(eo.Mm);
  if (eo.Mm_llt.info() != Eigen::Success)
    throw DegenerateMappingError("element mass matrix is not SPD");
  const Eigen::VectorXd wj = weighted(ref, volume.J);
  Eigen::MatrixXd Nleg = ref.legendre.transpose() * wj.asDiagonal() * ref.legendre;
  if (c.c1d != 0.0)
    for (std::size_t s = 0; s < ref.selectors.size(); ++s)
      Nleg += c.ladder(ref.selectors[s], ref.p) *
              (ref.dsel_legendre[s].transpose() * wj.asDiagonal() * ref.dsel_legendre[s]);
  eo.Nleg_llt.compute(Nleg);
  if (eo.Nleg_llt.info() != Eigen::Success)
    throw StabilityDomainError("M_m + K_m is not SPD for c = " + std::to_string(c.c1d));
  eo.to_basis = ref.to_basis;
  if (solve == NormSolve::Nodal) {
    eo.Nm_llt.compute(eo.Nm);
    if (eo.Nm_llt.info() != Eigen::Success)
      throw StabilityDomainError("nodal M_m + K_m factorization failed for c = " + std::to_string(c.c1d));
  }
  for (int k = 0; k < ref.dim; ++k) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ref.nq, ref.np);
    for (int i = 0; i < ref.dim; ++i) {
      Eigen::VectorXd cki(ref.nq);
      for (int q = 0; q < ref.nq; ++q) cki(q) = volume.C[q](k, i);
      g += cki.asDiagonal() * ref.grad[i];
    }
    eo.grad_tilde.push_back(std::move(g));
  }
  return eo;
}

FilterPair build_filter(const ReferenceOperators& ref, const ElementOperators& eo,
                        const std::vector<double>& J, const CorrectionParameter& c) {
  FilterPair fp;
  fp.F.resize(eo.Mm.rows(), eo.Mm.cols());
  for (int j = 0; j < eo.Mm.cols(); ++j) fp.F.col(j) = eo.solve_N(eo.Mm.col(j));
  // T F T^-1 assembled in the Legendre basis itself. Going through F would
  // carry the conditioning of N_m into the structural zeros.
  const TensorBasis leg(BasisKind::NormalizedLegendre, ref.p, ref.dim);
  const Eigen::MatrixXd L = leg.eval(ref.volume.points);
  const Eigen::MatrixXd Mref = L.transpose() * weighted(ref, J).asDiagonal() * L;
  const Eigen::MatrixXd Kref = build_Km_legendre(ref.p, ref.dim, ref.volume, J, c);
  fp.F_ref = (Mref + Kref).llt().solve(Mref);
  return fp;
}

bool norm_is_spd(const ReferenceOperators& ref, double c1d) {
  const std::vector<double> J(ref.nq, 1.0);
  const Eigen::MatrixXd N = build_mass(ref, J) + build_Km(ref, J, {c1d});
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(N, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

double estimate_c_minus(const ReferenceOperators& ref, double tol) {
  double hi = 0.0, lo = -1.0;
  while (norm_is_spd(ref, lo)) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e12) return lo;
  }
  for (int it = 0; it < 400 && hi - lo > tol * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_is_spd(ref, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace frc
