#include "optex/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace optex {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::AllDeficient: return "AllDeficient";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DeficientStart: return "DeficientStart";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::InvariantSubspace: return "InvariantSubspace";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::Stagnated: return "Stagnated";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InconsistentState: return "InconsistentState";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// OrthoBasis

OrthoBasis::OrthoBasis(Mat q, double tol) : q_(std::move(q)) {
  if (q_.cols() > q_.rows()) {
    throw Error(ErrorKind::NotOrthogonal, "more columns than rows");
  }
  const double err = orthonormality_error();
  if (!(err <= tol)) {
    throw Error(ErrorKind::NotOrthogonal,
                "||Q^H Q - I||_max = " + std::to_string(err));
  }
}

OrthoBasis OrthoBasis::trusted(Mat q) {
  OrthoBasis b;
  b.q_ = std::move(q);
  return b;
}

OrthoBasis OrthoBasis::empty(Index rows) { return trusted(Mat(rows, 0)); }

double OrthoBasis::orthonormality_error() const {
  if (q_.cols() == 0) return 0.0;
  Mat g = q_.adjoint() * q_;
  g.diagonal().array() -= 1.0;
  return max_abs(g);
}

OrthoBasis OrthoBasis::concat(const OrthoBasis& other) const {
  Mat q(rows(), cols() + other.cols());
  q << q_, other.q_;
  return trusted(std::move(q));
}

// ---------------------------------------------------------------------------
// orthonormalize

namespace {

Orthonormalized orthonormalize_impl(const Mat& x, const Mat* against) {
  if (x.cols() == 0 || x.rows() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "orthonormalize: empty input");
  }
  const Index n = x.rows();
  const double drop_tol = static_cast<double>(n) * kEps;
  Mat out(n, x.cols());
  Index m = 0;
  std::vector<Index> kept;

  auto pass = [&](Vec& v) {
    if (against != nullptr && against->cols() > 0) {
      v.noalias() -= *against * (against->adjoint() * v);
    }
    if (m > 0) {
      auto b = out.leftCols(m);
      v.noalias() -= b * (b.adjoint() * v);
    }
  };

  for (Index j = 0; j < x.cols(); ++j) {
    Vec v = x.col(j);
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    pass(v);
    const double before = v.norm();
    pass(v);
    double after = v.norm();
    if (after < before / std::sqrt(2.0)) {
      pass(v);
      after = v.norm();
    }
    if (after <= drop_tol * norm0) continue;
    out.col(m++) = v / after;
    kept.push_back(j);
  }
  if (m == 0) {
    throw Error(ErrorKind::AllDeficient,
                "every column lies in the span of the reference basis");
  }
  return {OrthoBasis::trusted(out.leftCols(m)), std::move(kept)};
}

}  // namespace

Orthonormalized orthonormalize(const Mat& x) { return orthonormalize_impl(x, nullptr); }

Orthonormalized orthonormalize(const Mat& x, const OrthoBasis& against) {
  if (against.rows() != x.rows() && against.cols() > 0) {
    throw Error(ErrorKind::PreconditionViolated, "orthonormalize: row mismatch");
  }
  return orthonormalize_impl(x, &against.matrix());
}

// ---------------------------------------------------------------------------
// pinv / rank / svd

Mat pinv(const Mat& m, std::optional<double> tol) {
  if (m.size() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "pinv: empty matrix");
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut =
      tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * smax * kEps);
  RealVec inv = RealVec::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

RankRevealed rank_revealing_basis(const Mat& m, std::optional<double> tol) {
  if (m.size() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "rank_revealing_basis: empty matrix");
  }
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  const Index p = std::min(m.rows(), m.cols());
  const auto& r = qr.matrixQR();
  const double r11 = std::abs(r(0, 0));
  if (!(r11 > 0.0)) {
    throw Error(ErrorKind::ZeroMatrix, "all columns are numerically zero");
  }
  const double rel = tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * kEps);
  Index rank = 0;
  while (rank < p && std::abs(r(rank, rank)) > rel * r11) ++rank;

  Mat q = Mat::Identity(m.rows(), rank);
  q.applyOnTheLeft(qr.householderQ());
  return {OrthoBasis::trusted(std::move(q)), rank};
}

RealVec singular_values(const Mat& m) {
  if (m.size() == 0) return RealVec();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

// ---------------------------------------------------------------------------
// angles

Angles angles(const OrthoBasis& v, const Vec& x) {
  if (std::abs(x.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::PreconditionViolated, "angles: x is not unit length");
  }
  if (v.cols() == 0) return {0.0, 1.0};
  const Vec c = v.coefficients(x);
  const Vec perp = x - v.matrix() * c;
  return {c.norm(), perp.norm()};
}

// ---------------------------------------------------------------------------
// eig_dense

namespace {

EigenPair finish_pair(Complex value, Vec v) {
  const double nrm = v.norm();
  if (nrm > 0.0) v /= nrm;
  normalize_phase(v);
  return {value, std::move(v)};
}

}  // namespace

std::vector<EigenPair> eig_dense(const Mat& m, Index cap) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::PreconditionViolated, "eig_dense: matrix must be square and nonempty");
  }
  if (m.rows() > cap) {
    throw Error(ErrorKind::TooLarge, "eig_dense: order " + std::to_string(m.rows()) +
                                         " exceeds cap " + std::to_string(cap));
  }
  const Index n = m.rows();
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));

  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::NoConvergence, "self-adjoint eigensolver did not converge");
    }
    for (Index i = 0; i < n; ++i) {
      pairs.push_back(finish_pair(Complex(es.eigenvalues()(i), 0.0), es.eigenvectors().col(i)));
    }
    return pairs;
  }
  if (is_real(m)) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::NoConvergence, "real Schur iteration did not converge");
    }
    const auto values = es.eigenvalues();
    const auto vectors = es.eigenvectors();
    for (Index i = 0; i < n; ++i) pairs.push_back(finish_pair(values(i), vectors.col(i)));
    return pairs;
  }
  Eigen::ComplexEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "complex Schur iteration did not converge");
  }
  for (Index i = 0; i < n; ++i) {
    pairs.push_back(finish_pair(es.eigenvalues()(i), es.eigenvectors().col(i)));
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// helpers

double norm1(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_real(const Mat& m) { return (m.imag().array() == 0.0).all(); }

bool is_hermitian(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      if (m(i, j) != std::conj(m(j, i))) return false;
    }
  }
  return true;
}

bool all_finite(const Mat& m) {
  return m.real().array().isFinite().all() && m.imag().array().isFinite().all();
}

void require_finite(const Mat& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorKind::NotFinite, std::string(what) + " has non-finite entries");
}

void normalize_phase(Vec& v) {
  if (v.size() == 0) return;
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double a = std::abs(v(imax));
  if (a == 0.0) return;
  v *= std::conj(v(imax)) / a;
  v(imax) = Complex(v(imax).real(), 0.0);
}

double vector_cos(const Vec& a, const Vec& x) {
  const double na = a.norm();
  const double nx = x.norm();
  if (na == 0.0 || nx == 0.0) return 0.0;
  return std::abs(x.dot(a)) / (na * nx);
}

double phase_distance(const Vec& a, const Vec& b) {
  const Complex ip = b.dot(a);  // b^H a
  const double mag = std::abs(ip);
  const Complex phase = mag > 0.0 ? ip / mag : Complex(1.0, 0.0);
  return (a - phase * b).norm();
}

double subspace_sin(const OrthoBasis& a, const OrthoBasis& b) {
  if (a.cols() == 0) return 0.0;
  const Mat diff = a.matrix() - b.matrix() * (b.matrix().adjoint() * a.matrix());
  const RealVec s = singular_values(diff);
  return std::min(1.0, s.size() > 0 ? s(0) : 0.0);
}

Mat random_gaussian(Index rows, Index cols, Rng& rng, bool complex_entries) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat out(rows, cols);
  const double scale = complex_entries ? std::sqrt(0.5) : 1.0;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = dist(rng);
      const double im = complex_entries ? dist(rng) : 0.0;
      out(i, j) = Complex(scale * re, scale * im);
    }
  }
  return out;
}

}  // namespace optex
