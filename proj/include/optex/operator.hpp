#pragma once

#include <memory>

#include <Eigen/SparseCore>

#include "optex/types.hpp"

namespace optex {

/// Immutable n x n matrix A. Entries are held densely; when the matrix is
/// sparse enough a compressed copy is kept and used for products A * X.
class MatrixOperator {
 public:
  explicit MatrixOperator(Mat a);

  const Mat& dense() const noexcept { return a_; }
  Index size() const noexcept { return a_.rows(); }
  double norm1() const noexcept { return norm1_; }
  bool real() const noexcept { return real_; }
  bool hermitian() const noexcept { return hermitian_; }
  bool uses_sparse_product() const noexcept { return has_sparse_; }
  Index nonzeros() const noexcept { return nnz_; }

  Mat apply(const Mat& x) const;
  Vec apply(const Vec& x) const;

 private:
  Mat a_;
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> sparse_;
  bool has_sparse_ = false;
  bool real_ = false;
  bool hermitian_ = false;
  double norm1_ = 0.0;
  Index nnz_ = 0;
};

using OperatorPtr = std::shared_ptr<const MatrixOperator>;

inline OperatorPtr make_operator(Mat a) { return std::make_shared<const MatrixOperator>(std::move(a)); }

}  // namespace optex
