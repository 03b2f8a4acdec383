#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optex/extraction.hpp"
#include "optex/subspace.hpp"

namespace optex {

enum class StrategyTag { Stand, RitzV, RitzR, RRitzR, HarmonicR, RHarmonicR, Optimal, VR };

/// CLI / CSV name: stand, ritzV, ritzR, rRitzR, harmonicR, rHarmonicR, optimal, vr.
const char* tag_name(StrategyTag tag) noexcept;
/// Plot legend label (stand, RitzV, RitzR, r-RitzR, ...).
const char* display_label(StrategyTag tag) noexcept;
StrategyTag parse_tag(const std::string& name);
std::vector<StrategyTag> all_tags();

bool uses_residual_space(StrategyTag tag) noexcept;

struct Strategy {
  StrategyTag tag = StrategyTag::Stand;
  TargetSpec target;
  std::optional<Complex> tau;  ///< harmonic shift; present iff harmonicR / rHarmonicR

  /// Validates the tau invariant.
  static Strategy make(StrategyTag tag, TargetSpec target, std::optional<Complex> tau = std::nullopt);
};

struct ExpansionProposal {
  OrthoBasis directions;     ///< unit vectors orthogonal to V, mutually orthonormal
  std::optional<Vec> w;      ///< expansion vector in V, when requested or formed
  Complex mu{0.0, 0.0};      ///< extraction value behind the direction
  bool conjugate_pair = false;
  bool stagnated = false;
  Index matvecs = 0;         ///< products with A spent by the proposal
};

struct ProposeOptions {
  /// For span{R} strategies and `optimal`, also compute w = V R^+ v.
  bool compute_w = false;
  /// Cached residual basis of the same state, if the caller already has it.
  const ResidualBasis* residual = nullptr;
};

/// Expansion direction(s) for one step of `strategy` on `state`. The
/// reference eigenvector is required for `optimal`; `ritzV` uses it for
/// selection when present.
ExpansionProposal propose(const Strategy& strategy, const SubspaceState& state,
                          const Vec* reference = nullptr, const ProposeOptions& opts = {});

/// w_opt = V R^+ x (up to scaling and null(R) components).
Vec theoretical_w_opt(const SubspaceState& state, const Vec& x);

/// w~ = V R^+ v~ for a computable direction v~ in span{R}.
Vec computable_w_tilde(const SubspaceState& state, const Vec& v_tilde);

}  // namespace optex
