#pragma once

#include <optional>
#include <random>
#include <vector>

#include "optex/types.hpp"

namespace optex {

using Rng = std::mt19937_64;

/// Column-orthonormal n x k matrix. The checked constructor re-asserts
/// ||Q^H Q - I||_max <= tol; algorithms that guarantee orthonormality by
/// construction use trusted().
class OrthoBasis {
 public:
  OrthoBasis() = default;
  explicit OrthoBasis(Mat q, double tol = 1e-12);

  static OrthoBasis trusted(Mat q);
  static OrthoBasis empty(Index rows);

  const Mat& matrix() const noexcept { return q_; }
  Index rows() const noexcept { return q_.rows(); }
  Index cols() const noexcept { return q_.cols(); }

  double orthonormality_error() const;

  /// Coefficients Q^H x.
  Vec coefficients(const Vec& x) const { return q_.adjoint() * x; }
  /// Orthogonal projection Q Q^H x.
  Vec project(const Vec& x) const { return q_ * (q_.adjoint() * x); }

  /// Concatenation (this, other); the caller guarantees mutual orthogonality.
  OrthoBasis concat(const OrthoBasis& other) const;

 private:
  Mat q_;
};

struct Orthonormalized {
  OrthoBasis basis;
  std::vector<Index> kept;
};

/// Gram-Schmidt with one unconditional reorthogonalization pass and a
/// further pass when the norm drops below 1/sqrt(2) of its pre-pass value.
/// Columns left with norm <= n * eps * ||column|| are dropped.
Orthonormalized orthonormalize(const Mat& x);
Orthonormalized orthonormalize(const Mat& x, const OrthoBasis& against);

/// SVD-based Moore-Penrose inverse; default tol = max(m, n) * sigma_max * eps.
Mat pinv(const Mat& m, std::optional<double> tol = std::nullopt);

struct RankRevealed {
  OrthoBasis basis;
  Index rank = 0;
};

/// Column-pivoted QR. Rank counts |r_ii| > tol * |r_11| with default
/// tol = max(m, n) * eps.
RankRevealed rank_revealing_basis(const Mat& m, std::optional<double> tol = std::nullopt);

RealVec singular_values(const Mat& m);

struct Angles {
  double cos = 0.0;
  double sin = 0.0;
};

/// cos and sin of the angle between span{V} and the unit vector x.
Angles angles(const OrthoBasis& v, const Vec& x);

struct EigenPair {
  Complex value;
  Vec vector;
};

inline constexpr Index kDefaultDenseCap = 4000;

/// Full eigendecomposition. Real input goes through the real Schur form so
/// that complex eigenvalues come out as exact conjugate pairs; exactly
/// Hermitian input goes through the self-adjoint solver.
std::vector<EigenPair> eig_dense(const Mat& m, Index cap = kDefaultDenseCap);

// Small helpers shared across modules.

double norm1(const Mat& m);
double max_abs(const Mat& m);
bool is_real(const Mat& m);
/// Exact test: m(i, j) == conj(m(j, i)) for all entries.
bool is_hermitian(const Mat& m);
bool all_finite(const Mat& m);
void require_finite(const Mat& m, const char* what);

/// Scales v so that its largest-magnitude entry is real and positive.
void normalize_phase(Vec& v);

/// |x^H a| / (||a|| ||x||); zero when either vector vanishes.
double vector_cos(const Vec& a, const Vec& x);

/// min over unit phases c of ||a - c b||.
double phase_distance(const Vec& a, const Vec& b);

/// Sine of the largest principal angle between span{a} and span{b}
/// (equal dimensions).
double subspace_sin(const OrthoBasis& a, const OrthoBasis& b);

/// Standard normal entries; complex entries have independent N(0, 1/2)
/// real and imaginary parts when `complex_entries` is set.
Mat random_gaussian(Index rows, Index cols, Rng& rng, bool complex_entries);

}  // namespace optex
