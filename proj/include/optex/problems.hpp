#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "optex/extraction.hpp"
#include "optex/operator.hpp"

namespace optex {

struct ReferencePair {
  Complex lambda;
  Vec x;  ///< unit vector
};

struct Problem {
  OperatorPtr a;
  std::optional<ReferencePair> reference;
  std::string label;

  /// Checks ||A x - lambda x|| <= 1e-10 ||A||_1 when a reference is given.
  static Problem make(Mat a, std::optional<ReferencePair> reference, std::string label);
  Index size() const { return a->size(); }
};

/// diag(1, 1/2, ..., 1/n) with reference (1/n, e_n).
Problem gen_inverse_diag(Index n);

/// i-th eigenvalue (1-based) of the Strakos diagonal:
///   lambda_i = lambda_1 + (i-1)/(n-1) (lambda_n - lambda_1) rho^(n-i).
double strakos_eigenvalue(Index i, Index n, double lam1, double lamn, double rho);

/// Strakos diagonal with reference (lambda_1, e_1).
Problem gen_strakos(Index n, double lam1, double lamn, double rho);

/// Unsymmetric five-point convection-diffusion operator on an nx-by-ny
/// grid: I (x) T(cx) + T(cy) (x) I with T(c) = tridiag(1 + c, -2, 1 - c).
/// No reference attached.
Problem gen_convection_diffusion(Index nx, Index ny, double cx, double cy);

/// Largest-real eigenvalue of gen_convection_diffusion in closed form.
double convection_diffusion_rightmost(Index nx, Index ny, double cx, double cy);

struct MatrixMarketHeader {
  std::string field;     ///< real, integer or complex
  std::string symmetry;  ///< general, symmetric or hermitian
  Index rows = 0;
  Index cols = 0;
  Index entries = 0;     ///< stored entries as declared in the size line
};

/// Parses and validates the banner and size line only.
MatrixMarketHeader read_matrix_market_header(const std::string& path);

/// Reads a coordinate Matrix Market file (real, integer or complex;
/// general, symmetric or hermitian). `leading` > 0 keeps only the leading
/// principal submatrix of that order. `cap` bounds the dense order.
Problem load_matrix_market(const std::string& path, Index leading = 0, Index cap = kDefaultDenseCap);

/// Writes A as a coordinate general file, nonzeros only, 17 significant
/// digits. Real matrices use the real field.
void write_matrix_market(const Mat& a, const std::string& path);

/// Attaches the pair of eig_dense(A) selected by `target`.
Problem reference_eigenpair(const Problem& p, const TargetSpec& target, Index cap = kDefaultDenseCap);

/// d standard-normal columns from `seed`, orthonormalized.
Mat random_start_basis(Index n, Index d, std::uint64_t seed, bool complex_entries);

}  // namespace optex
