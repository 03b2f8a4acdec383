#include "optex/extraction.hpp"

#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace optex {

const char* to_string(ExtractionKind kind) noexcept {
  switch (kind) {
    case ExtractionKind::Ritz: return "ritz";
    case ExtractionKind::Harmonic: return "harmonic";
    case ExtractionKind::Refined: return "refined";
    case ExtractionKind::RefinedHarmonic: return "refined-harmonic";
  }
  return "unknown";
}

TargetSpec TargetSpec::closest_to(Complex tau) {
  if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw Error(ErrorKind::ConfigError, "closest-to target must be finite");
  }
  return {TargetMode::ClosestTo, tau, {}};
}

TargetSpec parse_target(const std::string& text) {
  if (text == "largest-real") return TargetSpec::largest_real();
  if (text == "largest-magnitude") return TargetSpec::largest_magnitude();
  if (text == "smallest-magnitude") return TargetSpec::smallest_magnitude();
  const std::string prefix = "closest-to:";
  if (text.rfind(prefix, 0) == 0) {
    std::string rest = text.substr(prefix.size());
    const auto comma = rest.find(',');
    try {
      std::size_t used = 0;
      const double re = std::stod(rest.substr(0, comma), &used);
      double im = 0.0;
      if (comma != std::string::npos) im = std::stod(rest.substr(comma + 1));
      return TargetSpec::closest_to({re, im});
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ConfigError, "cannot parse target '" + text + "'");
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown target '" + text + "'");
}

std::string to_string(const TargetSpec& target) {
  switch (target.mode) {
    case TargetMode::LargestReal: return "largest-real";
    case TargetMode::LargestMagnitude: return "largest-magnitude";
    case TargetMode::SmallestMagnitude: return "smallest-magnitude";
    case TargetMode::NearestToReference: return "nearest-to-reference";
    case TargetMode::ClosestTo: {
      std::ostringstream os;
      os << "closest-to:" << target.tau.real() << ',' << target.tau.imag();
      return os.str();
    }
  }
  return "unknown";
}

double relative_residual(const MatrixOperator& a, Complex mu, const Vec& z) {
  return (a.apply(z) - mu * z).norm() / a.norm1();
}

namespace {

void check_shapes(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw) {
  if (w.cols() == 0 || w.rows() != a.size() || aw.rows() != w.rows() || aw.cols() != w.cols()) {
    throw Error(ErrorKind::PreconditionViolated, "extraction: basis/product shape mismatch");
  }
}

// Rotates (coeffs, ambient) together so that the ambient vector has its
// largest entry real positive, and normalizes both to the ambient length.
void normalize_pair(Vec& coeffs, Vec& ambient) {
  const double nrm = ambient.norm();
  if (nrm > 0.0) {
    coeffs /= nrm;
    ambient /= nrm;
  }
  Index imax = 0;
  ambient.cwiseAbs().maxCoeff(&imax);
  const double mag = std::abs(ambient(imax));
  if (mag == 0.0) return;
  const Complex phase = std::conj(ambient(imax)) / mag;
  coeffs *= phase;
  ambient *= phase;
  ambient(imax) = Complex(ambient(imax).real(), 0.0);
}

}  // namespace

std::vector<EigenApprox> ritz_pairs(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                    const Mat* projection) {
  check_shapes(a, w, aw);
  Mat g = projection != nullptr ? *projection : Mat(w.matrix().adjoint() * aw);
  // W^H A W of a Hermitian A is Hermitian up to rounding; symmetrize so
  // the Ritz values come out real.
  if (a.hermitian()) g = (0.5 * (g + g.adjoint())).eval();
  const auto eig = eig_dense(g);
  std::vector<EigenApprox> out;
  out.reserve(eig.size());
  for (const auto& p : eig) {
    EigenApprox e;
    e.kind = ExtractionKind::Ritz;
    e.value = p.value;
    e.coeffs = p.vector;
    e.ambient = w.matrix() * e.coeffs;
    normalize_pair(e.coeffs, e.ambient);
    e.res_norm = (aw * e.coeffs - e.value * e.ambient).norm() / a.norm1();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EigenApprox> harmonic_pairs(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                        Complex tau) {
  check_shapes(a, w, aw);
  const Index k = w.cols();

  auto right_side = [&](Complex shift) {
    const Mat b = aw - shift * w.matrix();
    return std::pair<Mat, Mat>{b.adjoint() * b, b.adjoint() * w.matrix()};
  };
  auto singular = [](const Mat& m) {
    const RealVec s = singular_values(m);
    return !(s(s.size() - 1) > kEps * s(0));
  };

  auto [lhs, rhs] = right_side(tau);
  if (singular(rhs)) {
    tau += kEps * a.norm1();
    std::tie(lhs, rhs) = right_side(tau);
    if (singular(rhs)) {
      throw Error(ErrorKind::SingularPencil, "((A - tau I) W)^H W is numerically singular");
    }
  }
  const Mat c = Eigen::PartialPivLU<Mat>(rhs).solve(lhs);
  const auto eig = eig_dense(c);

  std::vector<EigenApprox> out;
  out.reserve(static_cast<std::size_t>(k));
  for (const auto& p : eig) {
    EigenApprox e;
    e.kind = ExtractionKind::Harmonic;
    e.value = tau + p.value;
    e.coeffs = p.vector;
    e.ambient = w.matrix() * e.coeffs;
    normalize_pair(e.coeffs, e.ambient);
    e.res_norm = (aw * e.coeffs - e.value * e.ambient).norm() / a.norm1();
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

EigenApprox refine(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw, Complex mu,
                   const RefineOptions& opts, ExtractionKind kind) {
  check_shapes(a, w, aw);
  if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) {
    throw Error(ErrorKind::PreconditionViolated, "refined center must be finite");
  }
  const Index k = w.cols();
  const Mat shifted = aw - mu * w.matrix();
  Eigen::JacobiSVD<Mat, Eigen::HouseholderQRPreconditioner> svd(shifted, Eigen::ComputeFullV);
  const double smin = svd.singularValues()(k - 1);

  EigenApprox e;
  e.kind = kind;
  e.coeffs = svd.matrixV().col(k - 1);
  e.ambient = w.matrix() * e.coeffs;
  normalize_pair(e.coeffs, e.ambient);
  if (opts.rq_refresh) {
    const Vec az = aw * e.coeffs;
    e.value = e.ambient.dot(az);
    e.res_norm = (az - e.value * e.ambient).norm() / a.norm1();
  } else {
    e.value = mu;
    e.res_norm = smin / a.norm1();
  }
  return e;
}

}  // namespace

EigenApprox refined_vector(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw, Complex mu,
                           const RefineOptions& opts) {
  return refine(a, w, aw, mu, opts, ExtractionKind::Refined);
}

EigenApprox refined_vector(const MatrixOperator& a, const OrthoBasis& w, Complex mu,
                           const RefineOptions& opts) {
  return refine(a, w, a.apply(w.matrix()), mu, opts, ExtractionKind::Refined);
}

EigenApprox refined_harmonic_vector(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                    Complex theta, const RefineOptions& opts) {
  return refine(a, w, aw, theta, opts, ExtractionKind::RefinedHarmonic);
}

EigenApprox refined_harmonic_vector(const MatrixOperator& a, const OrthoBasis& w, Complex theta,
                                    const RefineOptions& opts) {
  return refine(a, w, a.apply(w.matrix()), theta, opts, ExtractionKind::RefinedHarmonic);
}

std::size_t select_index(const std::vector<EigenApprox>& pairs, const TargetSpec& target) {
  if (pairs.empty()) throw Error(ErrorKind::PreconditionViolated, "select: no pairs");
  auto score = [&](const EigenApprox& e) -> double {
    switch (target.mode) {
      case TargetMode::LargestReal: return e.value.real();
      case TargetMode::LargestMagnitude: return std::abs(e.value);
      case TargetMode::SmallestMagnitude: return -std::abs(e.value);
      case TargetMode::ClosestTo: return -std::abs(e.value - target.tau);
      case TargetMode::NearestToReference: return std::abs(target.reference.dot(e.ambient));
    }
    return 0.0;
  };
  std::size_t best = 0;
  double best_score = score(pairs[0]);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const double s = score(pairs[i]);
    if (s > best_score ||
        (s == best_score && std::abs(pairs[i].value) > std::abs(pairs[best].value))) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

EigenApprox select(const std::vector<EigenApprox>& pairs, const TargetSpec& target) {
  return pairs[select_index(pairs, target)];
}

}  // namespace optex
