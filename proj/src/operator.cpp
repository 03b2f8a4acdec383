#include "optex/operator.hpp"

#include <vector>

#include "optex/linalg.hpp"

namespace optex {

namespace {
// Products switch to the compressed copy below this fill ratio.
constexpr double kSparseFill = 0.1;
}  // namespace

MatrixOperator::MatrixOperator(Mat a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "operator matrix must be square and nonempty");
  }
  require_finite(a_, "A");
  real_ = is_real(a_);
  hermitian_ = is_hermitian(a_);
  norm1_ = optex::norm1(a_);

  std::vector<Eigen::Triplet<Complex>> trips;
  for (Index j = 0; j < a_.cols(); ++j) {
    for (Index i = 0; i < a_.rows(); ++i) {
      if (a_(i, j) != Complex(0.0, 0.0)) trips.emplace_back(i, j, a_(i, j));
    }
  }
  nnz_ = static_cast<Index>(trips.size());
  const double fill = static_cast<double>(nnz_) / static_cast<double>(a_.size());
  if (fill <= kSparseFill) {
    sparse_.resize(a_.rows(), a_.cols());
    sparse_.setFromTriplets(trips.begin(), trips.end());
    has_sparse_ = true;
  }
}

Mat MatrixOperator::apply(const Mat& x) const {
  if (has_sparse_) return sparse_ * x;
  return a_ * x;
}

Vec MatrixOperator::apply(const Vec& x) const {
  if (has_sparse_) return sparse_ * x;
  return a_ * x;
}

}  // namespace optex
