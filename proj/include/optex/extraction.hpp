#pragma once

#include <string>
#include <vector>

#include "optex/linalg.hpp"
#include "optex/operator.hpp"

namespace optex {

enum class ExtractionKind { Ritz, Harmonic, Refined, RefinedHarmonic };

const char* to_string(ExtractionKind kind) noexcept;

/// Approximate eigenpair extracted from span{W}.
struct EigenApprox {
  Complex value;
  Vec coeffs;   ///< y in the basis coordinates
  Vec ambient;  ///< unit vector z = W y
  double res_norm = 0.0;  ///< ||A z - value z|| / ||A||_1
  ExtractionKind kind = ExtractionKind::Ritz;
};

enum class TargetMode { LargestReal, LargestMagnitude, SmallestMagnitude, ClosestTo, NearestToReference };

struct TargetSpec {
  TargetMode mode = TargetMode::LargestReal;
  Complex tau{0.0, 0.0};
  Vec reference;

  static TargetSpec largest_real() { return {TargetMode::LargestReal, {}, {}}; }
  static TargetSpec largest_magnitude() { return {TargetMode::LargestMagnitude, {}, {}}; }
  static TargetSpec smallest_magnitude() { return {TargetMode::SmallestMagnitude, {}, {}}; }
  static TargetSpec closest_to(Complex tau);
  static TargetSpec nearest_to(Vec reference) {
    return {TargetMode::NearestToReference, {}, std::move(reference)};
  }
};

/// Parses "largest-real", "largest-magnitude", "smallest-magnitude" and
/// "closest-to:<re>,<im>".
TargetSpec parse_target(const std::string& text);
std::string to_string(const TargetSpec& target);

/// ||A z - mu z|| / ||A||_1.
double relative_residual(const MatrixOperator& a, Complex mu, const Vec& z);

/// Standard Rayleigh-Ritz on span{W}; `aw` must equal A W. `projection`
/// may carry a cached W^H A W.
std::vector<EigenApprox> ritz_pairs(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                    const Mat* projection = nullptr);

/// Harmonic Rayleigh-Ritz with shift tau: solves
///   ((A - tau I) W)^H (A - tau I) W g = theta ((A - tau I) W)^H W g
/// and reports values tau + theta.
std::vector<EigenApprox> harmonic_pairs(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                        Complex tau);

struct RefineOptions {
  /// Replace the center by the Rayleigh quotient z^H A z of the refined
  /// vector and report the residual for that value.
  bool rq_refresh = false;
};

/// Refined vector z = W argmin_{||g||=1} ||(A - mu I) W g||.
EigenApprox refined_vector(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw, Complex mu,
                           const RefineOptions& opts = {});
EigenApprox refined_vector(const MatrixOperator& a, const OrthoBasis& w, Complex mu,
                           const RefineOptions& opts = {});

EigenApprox refined_harmonic_vector(const MatrixOperator& a, const OrthoBasis& w, const Mat& aw,
                                    Complex theta, const RefineOptions& opts = {});
EigenApprox refined_harmonic_vector(const MatrixOperator& a, const OrthoBasis& w, Complex theta,
                                    const RefineOptions& opts = {});

/// Index of the best pair for `target`; ties go to the larger |value|,
/// then to the smaller index.
std::size_t select_index(const std::vector<EigenApprox>& pairs, const TargetSpec& target);
EigenApprox select(const std::vector<EigenApprox>& pairs, const TargetSpec& target);

}  // namespace optex
