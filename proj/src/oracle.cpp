#include "optex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

namespace optex {

namespace {

constexpr double kPreTol = 1e-12;

// Orthonormal basis of the complement of span{M} for full-column-rank M,
// from the trailing columns of a full Householder Q.
Mat complement_of(const Mat& m) {
  const Index n = m.rows();
  Eigen::HouseholderQR<Mat> qr(m);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - m.cols());
}

double cos_of_span(const Mat& basis, const Vec& x) { return (basis.adjoint() * x).norm(); }

// cos(span{V, y}, x) through an explicit orthonormal basis (V, u).
double cos_with(const OrthoBasis& v, const Vec& y, const Vec& x) {
  const double cv2 = v.coefficients(x).squaredNorm();
  Orthonormalized extra;
  try {
    extra = orthonormalize(Mat(y), v);
  } catch (const Error&) {
    return std::sqrt(cv2);
  }
  return std::min(1.0, std::sqrt(cv2 + extra.basis.coefficients(x).squaredNorm()));
}

}  // namespace

FullComplement full_complement(const OrthoBasis& v) {
  if (v.cols() >= v.rows()) {
    throw Error(ErrorKind::PreconditionViolated, "full_complement: V already spans the space");
  }
  return {OrthoBasis(complement_of(v.matrix()))};
}

double IdentityReport::max_entry() const {
  return std::max({cos_split, max_vs_bw, bw_vs_proj, bw_forms, wopt_forms, aw_direction,
                   cos_orth, cos_vr, mu_opt});
}

void IdentityReport::merge_max(const IdentityReport& o) {
  cos_split = std::max(cos_split, o.cos_split);
  max_vs_bw = std::max(max_vs_bw, o.max_vs_bw);
  bw_vs_proj = std::max(bw_vs_proj, o.bw_vs_proj);
  bw_forms = std::max(bw_forms, o.bw_forms);
  wopt_forms = std::max(wopt_forms, o.wopt_forms);
  aw_direction = std::max(aw_direction, o.aw_direction);
  cos_orth = std::max(cos_orth, o.cos_orth);
  cos_vr = std::max(cos_vr, o.cos_vr);
  mu_opt = std::max(mu_opt, o.mu_opt);
}

double expanded_cos(const Mat& a, const OrthoBasis& v, const Vec& x, const Vec& w) {
  return cos_with(v, a * w, x);
}

double restricted_pencil_mu_opt(const Mat& a, const OrthoBasis& v, const Vec& x) {
  const Mat& vm = v.matrix();
  const Mat vp = full_complement(v).v_perp.matrix();
  const Vec x_perp = vp * (vp.adjoint() * x);
  const Mat vp_av = vp.adjoint() * a * vm;  // V_perp^H A V
  const Mat cross = vp_av.adjoint();        // V^H A^H V_perp
  const RankRevealed range = rank_revealing_basis(cross);
  const Mat& u = range.basis.matrix();

  const Vec g = u.adjoint() * (vm.adjoint() * (a.adjoint() * x_perp));  // U^H V^H A^H x_perp
  Mat m1 = g * g.adjoint();
  const Mat t = vp_av * u;
  Mat m2 = t.adjoint() * t;
  m1 = 0.5 * (m1 + m1.adjoint()).eval();
  m2 = 0.5 * (m2 + m2.adjoint()).eval();

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(m1, m2, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "restricted pencil: generalized eigensolver failed");
  }
  return ges.eigenvalues().maxCoeff();
}

IdentityReport verify_identities(const Mat& a, const OrthoBasis& v, const Vec& x, const Vec& w) {
  const Index n = a.rows();
  const Mat& vm = v.matrix();
  const double anorm = norm1(a);
  if (std::abs(x.norm() - 1.0) > kPreTol) {
    throw Error(ErrorKind::PreconditionViolated, "x must be a unit vector");
  }
  if ((w - v.project(w)).norm() > 1e-10 * w.norm()) {
    throw Error(ErrorKind::PreconditionViolated, "w is not in span{V}");
  }
  const Vec x_perp = x - v.project(x);
  if (!(x_perp.norm() > kPreTol)) {
    throw Error(ErrorKind::PreconditionViolated, "x lies in span{V}");
  }
  const Vec aw = a * w;
  const Vec aw_perp = aw - v.project(aw);
  if (!(aw_perp.norm() > kPreTol * anorm * w.norm())) {
    throw Error(ErrorKind::PreconditionViolated, "A w lies in span{V}");
  }
  const Complex xw = x.dot(w);
  if (!(std::abs(xw) > kPreTol * w.norm())) {
    throw Error(ErrorKind::PreconditionViolated, "x^H w vanishes");
  }

  IdentityReport rep;
  const double cos_v = cos_of_span(vm, x);

  // Expanded space V_w through an explicit basis.
  const double cos_vw = cos_with(v, aw, x);
  const double c_aw = vector_cos(aw_perp, x);
  rep.cos_split = std::abs(cos_vw - std::sqrt(cos_v * cos_v + c_aw * c_aw));

  // Maximization characterization.
  rep.phi = x.dot(aw) / xw;
  const Vec r_w = aw - rep.phi * w;
  const Mat q_w = complement_of(Mat(r_w));
  const Mat m = q_w * (q_w.adjoint() * vm);  // Q_w Q_w^H V
  const Mat m_pinv = pinv(m);
  const Vec b_w = vm * (m_pinv * x);
  const Mat gram = vm.adjoint() * m;  // V^H Q_w Q_w^H V
  const Vec b_w_normal = vm * Eigen::PartialPivLU<Mat>(gram).solve(Vec(vm.adjoint() * x));
  rep.bw_forms = (b_w - b_w_normal).norm() / b_w.norm();
  const double sin_b_r = (q_w.adjoint() * b_w).norm() / b_w.norm();
  const double ratio = vector_cos(b_w, x) / sin_b_r;
  const Vec proj = m * (m_pinv * x);
  rep.max_vs_bw = std::abs(cos_vw - ratio);
  rep.bw_vs_proj = std::abs(ratio - vector_cos(proj, x));

  // Optimal expansion, computed three ways.
  const Mat r = a * vm - vm * (vm.adjoint() * a * vm);
  const Mat r_pinv = pinv(r);
  const Vec w_opt = vm * (r_pinv * x);
  const Mat vp = full_complement(v).v_perp.matrix();
  const Vec w_opt_perp = vm * (pinv(Mat(vp.adjoint() * a * vm)) * (vp.adjoint() * x));
  const Mat p_v = vm * vm.adjoint();
  const Vec w_opt_proj = pinv(Mat((Mat::Identity(n, n) - p_v) * a * p_v)) * x;
  rep.wopt_forms = std::max(phase_distance(w_opt / w_opt.norm(), w_opt_perp / w_opt_perp.norm()),
                                  phase_distance(w_opt / w_opt.norm(), w_opt_proj / w_opt_proj.norm()));

  const Vec g = a * w_opt - p_v * (a * w_opt);  // (I - P_V) A w_opt
  const RankRevealed qr = rank_revealing_basis(r);
  const Vec qqx = qr.basis.project(x);
  rep.aw_direction = phase_distance(g / g.norm(), qqx / qqx.norm());

  const double cos_opt = cos_with(v, a * w_opt, x);
  const Vec rrx = r * (r_pinv * x);
  const double c_orth = vector_cos(v.project(x) + rrx, x);
  Mat vr(n, vm.cols() + r.cols());
  vr << vm, r;
  const double c_vr = cos_of_span(orthonormalize(vr).basis.matrix(), x);
  rep.cos_orth = std::abs(cos_opt - c_orth);
  rep.cos_vr = std::abs(cos_opt - c_vr);

  const double mu = restricted_pencil_mu_opt(a, v, x);
  rep.mu_opt = std::abs(vector_cos(g, x) - std::sqrt(std::max(0.0, mu)));
  return rep;
}

SampledMax sampled_max_expansion(const Mat& a, const OrthoBasis& v, const Vec& x, Index samples,
                                 std::uint64_t seed, const Vec* inject) {
  if (samples < 1) throw Error(ErrorKind::PreconditionViolated, "samples must be >= 1");
  Rng rng(seed);
  SampledMax best;
  best.best_cos = -1.0;
  for (Index s = 0; s < samples; ++s) {
    Vec w;
    if (s == 0 && inject != nullptr) {
      w = *inject / inject->norm();
    } else {
      w = v.matrix() * random_gaussian(v.cols(), 1, rng, true).col(0);
      w /= w.norm();
    }
    const double c = expanded_cos(a, v, x, w);
    if (c > best.best_cos) {
      best.best_cos = c;
      best.argmax_w = w;
    }
  }
  return best;
}

IdentitySweep identity_sweep(Index n, Index k, Index instances, std::uint64_t seed, bool hermitian) {
  if (n < 2 || k < 1 || k >= n || instances < 1) {
    throw Error(ErrorKind::ConfigError, "identity sweep needs n >= 2, 1 <= k < n, instances >= 1");
  }
  Rng rng(seed);
  IdentitySweep out;
  while (out.instances < instances) {
    Mat a = random_gaussian(n, n, rng, true);
    if (hermitian) a = (0.5 * (a + a.adjoint())).eval();
    const auto eig = eig_dense(a);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    const EigenPair& pair = eig[static_cast<std::size_t>(pick(rng))];
    const Vec x = pair.vector / pair.vector.norm();

    OrthoBasis v = orthonormalize(random_gaussian(n, k, rng, true)).basis;
    if (v.cols() != k || angles(v, x).sin < 1e-3) continue;
    const Vec w = v.matrix() * random_gaussian(k, 1, rng, true).col(0);

    IdentityReport rep;
    try {
      rep = verify_identities(a, v, x, w);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PreconditionViolated) continue;
      throw;
    }
    out.worst.merge_max(rep);
    out.max_phi_gap = std::max(out.max_phi_gap, std::abs(rep.phi - pair.value));
    ++out.instances;
  }
  out.max_entry = out.worst.max_entry();
  return out;
}

}  // namespace optex
