#pragma once

#include <cstdint>

#include "optex/linalg.hpp"

namespace optex {

/// Orthonormal V_perp with (V, V_perp) unitary.
struct FullComplement {
  OrthoBasis v_perp;
};

FullComplement full_complement(const OrthoBasis& v);

/// Absolute discrepancies between the two sides of each identity, all
/// computed by explicit dense formulas.
struct IdentityReport {
  double cos_split = 0.0;            ///< cos(V_w,x) vs sqrt(cos^2(V,x) + cos^2((I-P_V)Aw,x))
  double max_vs_bw = 0.0;   ///< cos(V_w,x) vs cos(b_w,x)/sin(b_w,r_w)
  double bw_vs_proj = 0.0;  ///< cos(b_w,x)/sin(b_w,r_w) vs cos(Pi x, x), Pi onto range(Q_w Q_w^H V)
  double bw_forms = 0.0;    ///< pseudoinverse vs normal-equation form of b_w (relative)
  double wopt_forms = 0.0;  ///< V (V_perp^H A V)^+ V_perp^H x vs ((I-P_V) A P_V)^+ x vs V R^+ x
  double aw_direction = 0.0;          ///< (I-P_V) A w_opt direction vs Q Q^H x direction, up to phase
  double cos_orth = 0.0;    ///< cos(V_{w_opt},x) vs cos(P_V x + R R^+ x, x)
  double cos_vr = 0.0;      ///< cos(V_{w_opt},x) vs cos(V + span{R}, x)
  double mu_opt = 0.0;            ///< cos((I-P_V) A w_opt, x) vs sqrt(mu_opt)
  Complex phi{0.0, 0.0};          ///< x^H A w / x^H w

  double max_entry() const;
  void merge_max(const IdentityReport& other);
};

/// Verifies the expansion identities for one instance. Requires x not in
/// span{V}, A w not in span{V} and x^H w != 0.
IdentityReport verify_identities(const Mat& a, const OrthoBasis& v, const Vec& x, const Vec& w);

/// Largest eigenvalue of the Hermitian definite pair
///   {V^H A^H x_perp x_perp^H A V, V^H A^H V_perp V_perp^H A V}
/// restricted to range(V^H A^H V_perp).
double restricted_pencil_mu_opt(const Mat& a, const OrthoBasis& v, const Vec& x);

/// cos of the angle between x and span{V, A w}, from an explicit
/// orthonormal basis of the expanded space.
double expanded_cos(const Mat& a, const OrthoBasis& v, const Vec& x, const Vec& w);

struct SampledMax {
  double best_cos = 0.0;
  Vec argmax_w;
};

/// Best cos(V_w, x) over `samples` random unit w in span{V}. A non-null
/// `inject` replaces the first draw.
SampledMax sampled_max_expansion(const Mat& a, const OrthoBasis& v, const Vec& x, Index samples,
                                 std::uint64_t seed, const Vec* inject = nullptr);

struct IdentitySweep {
  Index instances = 0;
  IdentityReport worst;
  double max_entry = 0.0;
  double max_phi_gap = 0.0;  ///< max |phi - lambda|, meaningful for Hermitian A
};

/// Random-instance sweep: complex Gaussian A (Hermitized when requested),
/// random V with sin(V, x) >= 1e-3, x an exact eigenvector, random w in V.
IdentitySweep identity_sweep(Index n, Index k, Index instances, std::uint64_t seed, bool hermitian);

}  // namespace optex
