#include "optex/strategies.hpp"

#include <array>
#include <cmath>

namespace optex {

namespace {

struct TagInfo {
  StrategyTag tag;
  const char* name;
  const char* label;
};

constexpr std::array<TagInfo, 8> kTags{{
    {StrategyTag::Stand, "stand", "stand"},
    {StrategyTag::RitzV, "ritzV", "RitzV"},
    {StrategyTag::RitzR, "ritzR", "RitzR"},
    {StrategyTag::RRitzR, "rRitzR", "r-RitzR"},
    {StrategyTag::HarmonicR, "harmonicR", "harmonicR"},
    {StrategyTag::RHarmonicR, "rHarmonicR", "r-harmonicR"},
    {StrategyTag::Optimal, "optimal", "optimal"},
    {StrategyTag::VR, "vr", "VR"},
}};

const TagInfo& info(StrategyTag tag) {
  for (const auto& t : kTags) {
    if (t.tag == tag) return t;
  }
  return kTags[0];
}

bool is_harmonic(StrategyTag tag) {
  return tag == StrategyTag::HarmonicR || tag == StrategyTag::RHarmonicR;
}

// Relative size below which the real or imaginary part of a direction is
// discarded in real arithmetic.
constexpr double kTinyPart = 1e-12;

// Turns an extraction vector z (already orthogonal to V) into expansion
// directions. In real arithmetic a genuinely complex z is replaced by its
// orthonormalized real and imaginary parts.
OrthoBasis directions_from(const Vec& z, bool real_arith, bool& conjugate_pair) {
  conjugate_pair = false;
  const Index n = z.size();
  if (!real_arith) {
    return OrthoBasis::trusted(z / z.norm());
  }
  const Vec re = z.real().cast<Complex>();
  const Vec im = z.imag().cast<Complex>();
  const double nre = re.norm();
  const double nim = im.norm();
  if (nim <= kTinyPart * nre) return OrthoBasis::trusted(re / nre);
  if (nre <= kTinyPart * nim) return OrthoBasis::trusted(im / nim);
  Mat parts(n, 2);
  parts << re / nre, im / nim;
  Orthonormalized o = orthonormalize(parts);
  conjugate_pair = o.basis.cols() == 2;
  return std::move(o.basis);
}

// Directions spanned by (I - P_V) A w for w = V y, in real arithmetic when
// possible.
OrthoBasis directions_from_product(const Vec& aw, const OrthoBasis& v, bool real_arith,
                                   bool& conjugate_pair) {
  conjugate_pair = false;
  if (!real_arith) return orthonormalize(Mat(aw), v).basis;
  const Vec re = aw.real().cast<Complex>();
  const Vec im = aw.imag().cast<Complex>();
  const double nre = re.norm();
  const double nim = im.norm();
  if (nim <= kTinyPart * nre) return orthonormalize(Mat(re), v).basis;
  if (nre <= kTinyPart * nim) return orthonormalize(Mat(im), v).basis;
  Mat parts(aw.size(), 2);
  parts << re, im;
  Orthonormalized o = orthonormalize(parts, v);
  conjugate_pair = o.basis.cols() == 2;
  return std::move(o.basis);
}

}  // namespace

const char* tag_name(StrategyTag tag) noexcept { return info(tag).name; }
const char* display_label(StrategyTag tag) noexcept { return info(tag).label; }

StrategyTag parse_tag(const std::string& name) {
  for (const auto& t : kTags) {
    if (name == t.name) return t.tag;
  }
  throw Error(ErrorKind::ConfigError, "unknown strategy '" + name + "'");
}

std::vector<StrategyTag> all_tags() {
  std::vector<StrategyTag> out;
  for (const auto& t : kTags) out.push_back(t.tag);
  return out;
}

bool uses_residual_space(StrategyTag tag) noexcept {
  return tag != StrategyTag::Stand && tag != StrategyTag::RitzV;
}

Strategy Strategy::make(StrategyTag tag, TargetSpec target, std::optional<Complex> tau) {
  if (is_harmonic(tag) != tau.has_value()) {
    throw Error(ErrorKind::ConfigError,
                std::string("strategy '") + tag_name(tag) +
                    (tau ? "' does not take a harmonic shift" : "' requires a harmonic shift"));
  }
  return {tag, std::move(target), tau};
}

ExpansionProposal propose(const Strategy& strategy, const SubspaceState& state, const Vec* reference,
                          const ProposeOptions& opts) {
  const MatrixOperator& a = state.op();
  const OrthoBasis& v = state.basis();
  const Index k = state.dim();
  const bool real_arith = a.real() && is_real(v.matrix());
  ExpansionProposal p;

  switch (strategy.tag) {
    case StrategyTag::Stand: {
      p.w = v.matrix().col(k - 1);
      p.mu = state.h()(k - 1, k - 1);
      // A w is read off the cached A V.
      const Vec aw = state.av().col(k - 1);
      p.directions = directions_from_product(aw, v, real_arith, p.conjugate_pair);
      return p;
    }
    case StrategyTag::RitzV: {
      const auto pairs = ritz_pairs(a, v, state.av(), &state.h());
      const TargetSpec sel = reference != nullptr ? TargetSpec::nearest_to(*reference) : strategy.target;
      const EigenApprox e = select(pairs, sel);
      p.w = e.ambient;
      p.mu = e.value;
      const Vec aw = state.av() * e.coeffs;
      p.directions = directions_from_product(aw, v, real_arith, p.conjugate_pair);
      return p;
    }
    default:
      break;
  }

  ResidualBasis local;
  if (opts.residual == nullptr) local = residual_basis(state);
  const ResidualBasis& res = opts.residual != nullptr ? *opts.residual : local;
  const OrthoBasis& q = res.q;

  if (strategy.tag == StrategyTag::Optimal) {
    if (reference == nullptr) {
      throw Error(ErrorKind::PreconditionViolated, "optimal strategy needs the reference eigenvector");
    }
    const Vec proj = q.project(*reference);
    const double nrm = proj.norm();
    if (nrm <= 1e-14) {
      p.stagnated = true;
      throw Error(ErrorKind::Stagnated, "x is orthogonal to span{R}");
    }
    p.directions = OrthoBasis::trusted(proj / nrm);
    p.mu = Complex(nrm * nrm, 0.0);
    if (opts.compute_w) p.w = theoretical_w_opt(state, *reference);
    return p;
  }
  if (strategy.tag == StrategyTag::VR) {
    p.directions = q;
    return p;
  }

  const Mat aq = a.apply(q.matrix());
  p.matvecs = q.cols();
  Vec z;
  switch (strategy.tag) {
    case StrategyTag::RitzR: {
      const EigenApprox e = select(ritz_pairs(a, q, aq), strategy.target);
      p.mu = e.value;
      z = e.ambient;
      break;
    }
    case StrategyTag::RRitzR: {
      const EigenApprox ritz = select(ritz_pairs(a, q, aq), strategy.target);
      const EigenApprox e = refined_vector(a, q, aq, ritz.value);
      p.mu = ritz.value;
      z = e.ambient;
      break;
    }
    case StrategyTag::HarmonicR: {
      const EigenApprox e = select(harmonic_pairs(a, q, aq, *strategy.tau), strategy.target);
      p.mu = e.value;
      z = e.ambient;
      break;
    }
    case StrategyTag::RHarmonicR: {
      const EigenApprox h = select(harmonic_pairs(a, q, aq, *strategy.tau), strategy.target);
      const EigenApprox e = refined_harmonic_vector(a, q, aq, h.value);
      p.mu = h.value;
      z = e.ambient;
      break;
    }
    default:
      throw Error(ErrorKind::ConfigError, "unhandled strategy");
  }
  p.directions = directions_from(z, real_arith, p.conjugate_pair);
  if (opts.compute_w && p.directions.cols() == 1) {
    p.w = computable_w_tilde(state, Vec(p.directions.matrix().col(0)));
  }
  return p;
}

Vec theoretical_w_opt(const SubspaceState& state, const Vec& x) {
  const Angles ang = angles(state.basis(), x);
  if (!(ang.sin > 1e-12)) {
    throw Error(ErrorKind::PreconditionViolated, "x lies in span{V}");
  }
  const Vec coeffs = pinv(state.r()) * x;
  const Vec gain = state.r() * coeffs;  // (I - P_V) A w_opt = R R^+ x
  if (gain.norm() <= 1e-14) {
    throw Error(ErrorKind::Stagnated, "x is orthogonal to span{R}");
  }
  return state.basis().matrix() * coeffs;
}

Vec computable_w_tilde(const SubspaceState& state, const Vec& v_tilde) {
  const Mat rp = pinv(state.r());
  const Vec coeffs = rp * v_tilde;
  const Vec back = state.r() * coeffs;
  if ((back - v_tilde).norm() > 1e-10 * std::max(1.0, v_tilde.norm())) {
    throw Error(ErrorKind::PreconditionViolated, "v_tilde is not in span{R}");
  }
  return state.basis().matrix() * coeffs;
}

}  // namespace optex
