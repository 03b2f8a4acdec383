#include "optex/subspace.hpp"

#include <cmath>

namespace optex {

SubspaceState SubspaceState::init(OperatorPtr a, const Mat& v0) {
  if (!a) throw Error(ErrorKind::PreconditionViolated, "init: null operator");
  if (v0.rows() != a->size() || v0.cols() < 1) {
    throw Error(ErrorKind::PreconditionViolated, "init: V0 must be n x d with d >= 1");
  }
  Orthonormalized orth;
  try {
    orth = orthonormalize(v0);
  } catch (const Error&) {
    throw Error(ErrorKind::DeficientStart, "V0 is numerically zero");
  }
  if (orth.basis.cols() < v0.cols()) {
    throw Error(ErrorKind::DeficientStart, "V0 is numerically rank deficient");
  }

  SubspaceState s;
  s.a_ = std::move(a);
  s.v_ = std::move(orth.basis);
  s.av_ = s.a_->apply(s.v_.matrix());
  s.h_ = s.v_.matrix().adjoint() * s.av_;
  s.r_ = s.av_ - s.v_.matrix() * s.h_;
  s.matvecs_ = s.v_.cols();
  return s;
}

SubspaceState SubspaceState::expand(const Vec& u_in, const ExpandOptions& opts) const {
  const Index n = rows();
  const Index k = dim();
  if (u_in.size() != n) throw Error(ErrorKind::PreconditionViolated, "expand: size mismatch");
  if (std::abs(u_in.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::PreconditionViolated, "expand: direction is not unit length");
  }
  const Mat& v = v_.matrix();

  // One cleanup projection; the caller's direction should already be
  // orthogonal to V to 1e-10.
  Vec u = u_in;
  u.noalias() -= v * (v.adjoint() * u);
  const double nrm = u.norm();
  if (nrm <= static_cast<double>(n) * kEps) {
    throw Error(ErrorKind::NotOrthogonal, "expand: direction lies in span{V}");
  }
  u /= nrm;
  if (max_abs(v.adjoint() * u) > 1e-10) {
    throw Error(ErrorKind::NotOrthogonal, "expand: direction not orthogonal to V");
  }

  const Vec au = a_->apply(u);
  const Eigen::RowVectorXcd row = u.adjoint() * av_;  // u^H A V
  const Vec col = v.adjoint() * au;                   // V^H A u
  const Complex corner = u.dot(au);                   // u^H A u

  SubspaceState s;
  s.a_ = a_;
  Mat vq(n, k + 1);
  vq << v, u;
  s.v_ = OrthoBasis::trusted(std::move(vq));

  s.av_.resize(n, k + 1);
  s.av_ << av_, au;

  s.h_.resize(k + 1, k + 1);
  s.h_.topLeftCorner(k, k) = h_;
  s.h_.topRightCorner(k, 1) = col;
  s.h_.bottomLeftCorner(1, k) = row;
  s.h_(k, k) = corner;

  s.r_.resize(n, k + 1);
  s.r_.leftCols(k) = r_ - u * row;
  s.r_.col(k) = au - v * col - corner * u;
  s.matvecs_ = matvecs_ + 1;

  if (opts.direct_check) {
    const StateDiscrepancy d = s.direct_discrepancy();
    const double tol = 1e-12 * a_->norm1();
    if (d.h > tol || d.r > tol || d.av > tol) {
      throw Error(ErrorKind::InconsistentState, "expand: recursion drifted from direct formulas");
    }
  }
  return s;
}

SubspaceState SubspaceState::expand(const OrthoBasis& directions, const ExpandOptions& opts) const {
  if (directions.cols() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "expand: no directions");
  }
  SubspaceState s = expand(Vec(directions.matrix().col(0)), opts);
  for (Index j = 1; j < directions.cols(); ++j) s = s.expand(Vec(directions.matrix().col(j)), opts);
  return s;
}

StateDiscrepancy SubspaceState::direct_discrepancy() const {
  const Mat& v = v_.matrix();
  const Mat av = a_->apply(v);
  const Mat h = v.adjoint() * av;
  const Mat r = av - v * h;
  StateDiscrepancy d;
  d.av = max_abs(av - av_);
  d.h = max_abs(h - h_);
  d.r = max_abs(r - r_);
  d.vr = max_abs(v.adjoint() * r_);
  d.recursion = max_abs(r_ - (av_ - v * h_));
  return d;
}

double invariant_threshold(const SubspaceState& state) {
  return 1e-13 * state.op().norm1() * std::sqrt(static_cast<double>(state.dim()));
}

ResidualBasis residual_basis(const SubspaceState& state) {
  if (state.r().norm() <= invariant_threshold(state)) {
    throw Error(ErrorKind::InvariantSubspace, "||R|| is at machine level; span{V} is invariant");
  }
  const RankRevealed rr = rank_revealing_basis(state.r());
  // The pivoted-QR basis inherits rounding-level components along V from R;
  // one projection pass restores Q perpendicular to V.
  Orthonormalized clean = orthonormalize(rr.basis.matrix(), state.basis());
  const Index rank = clean.basis.cols();
  return {std::move(clean.basis), rank};
}

Mat arnoldi_basis(const MatrixOperator& a, const Vec& v1, Index k) {
  const Index n = a.size();
  if (k < 1 || k > n) throw Error(ErrorKind::PreconditionViolated, "arnoldi_basis: bad k");
  Mat v(n, k);
  v.col(0) = v1 / v1.norm();
  for (Index j = 1; j < k; ++j) {
    const Orthonormalized next =
        orthonormalize(a.apply(Vec(v.col(j - 1))), OrthoBasis::trusted(v.leftCols(j)));
    v.col(j) = next.basis.matrix().col(0);
  }
  return v;
}

}  // namespace optex
