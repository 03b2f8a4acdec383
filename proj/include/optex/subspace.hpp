#pragma once

#include "optex/linalg.hpp"
#include "optex/operator.hpp"

namespace optex {

struct ExpandOptions {
  /// Recompute AV, H and R from scratch after the update and throw
  /// InconsistentState if the recursion drifted beyond 1e-12 * ||A||_1.
  bool direct_check = false;
};

struct StateDiscrepancy {
  double av = 0.0;     ///< ||A V - AV_cached||_max
  double h = 0.0;      ///< ||V^H A V - H||_max
  double r = 0.0;      ///< ||(I - V V^H) A V - R||_max
  double vr = 0.0;     ///< ||V^H R||_max
  double recursion = 0.0;  ///< ||R - (AV - V H)||_max on the cached values
};

/// Expanding search space: orthonormal V with cached A V, projection
/// H = V^H A V and residual R = A V - V H. Immutable; expand() returns a
/// new state and updates H and R incrementally.
class SubspaceState {
 public:
  static SubspaceState init(OperatorPtr a, const Mat& v0);

  SubspaceState expand(const Vec& u, const ExpandOptions& opts = {}) const;
  /// Adds the columns of `directions` one at a time.
  SubspaceState expand(const OrthoBasis& directions, const ExpandOptions& opts = {}) const;

  const MatrixOperator& op() const noexcept { return *a_; }
  const OperatorPtr& op_ptr() const noexcept { return a_; }
  const OrthoBasis& basis() const noexcept { return v_; }
  const Mat& av() const noexcept { return av_; }
  const Mat& h() const noexcept { return h_; }
  const Mat& r() const noexcept { return r_; }
  Index dim() const noexcept { return v_.cols(); }
  Index rows() const noexcept { return v_.rows(); }
  /// Matrix-vector products spent building this state.
  Index matvecs() const noexcept { return matvecs_; }

  StateDiscrepancy direct_discrepancy() const;

 private:
  SubspaceState() = default;

  OperatorPtr a_;
  OrthoBasis v_;
  Mat av_;
  Mat h_;
  Mat r_;
  Index matvecs_ = 0;
};

struct ResidualBasis {
  OrthoBasis q;
  Index rank = 0;
};

/// ||R||_F threshold below which the subspace counts as invariant.
double invariant_threshold(const SubspaceState& state);

/// Orthonormal basis of the numerical column space of R.
ResidualBasis residual_basis(const SubspaceState& state);

/// Arnoldi process with full reorthogonalization; returns k orthonormal
/// columns spanning K_k(A, v1).
Mat arnoldi_basis(const MatrixOperator& a, const Vec& v1, Index k);

}  // namespace optex
