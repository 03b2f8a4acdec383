#include <catch_amalgamated.hpp>

#include <cmath>

#include "optex/oracle.hpp"
#include "optex/subspace.hpp"
#include "test_util.hpp"

using namespace optex;
using testutil::kind_of;
using testutil::randn;

namespace {

struct Instance {
  Mat a;
  OrthoBasis v;
  Vec x;
  Complex lambda;
};

Instance make_instance(Index n, Index k, std::uint64_t seed, bool hermitian = false) {
  Mat a = randn(n, n, seed);
  if (hermitian) a = (0.5 * (a + a.adjoint())).eval();
  const auto eig = eig_dense(a);
  const auto& p = eig[static_cast<std::size_t>(seed % static_cast<std::uint64_t>(n))];
  return {a, orthonormalize(randn(n, k, seed + 7)).basis, p.vector, p.value};
}

// w_opt = V R^+ x with R formed directly.
Vec w_opt_of(const Instance& in) {
  const Mat& v = in.v.matrix();
  const Mat r = in.a * v - v * (v.adjoint() * in.a * v);
  return v * (pinv(r) * in.x);
}

}  // namespace

TEST_CASE("full complement completes V to a unitary matrix") {
  const OrthoBasis v = orthonormalize(randn(9, 4, 1)).basis;
  const Mat vp = full_complement(v).v_perp.matrix();
  REQUIRE(vp.cols() == 5);
  Mat u(9, 9);
  u << v.matrix(), vp;
  CHECK(max_abs(Mat(u.adjoint() * u - Mat::Identity(9, 9))) <= 1e-14);
  CHECK(kind_of([] { full_complement(OrthoBasis(Mat::Identity(3, 3))); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("expanded_cos agrees with an SVD basis of [V, A w]") {
  const Instance in = make_instance(20, 4, 2);
  const Vec w = in.v.matrix() * randn(4, 1, 3).col(0);
  Mat m(20, 5);
  m << in.v.matrix(), in.a * w;
  CHECK(std::abs(expanded_cos(in.a, in.v, in.x, w) - testutil::span_cos(m, in.x)) <= 1e-13);
}

TEST_CASE("identities hold on a small hand-built instance") {
  // x = e2 is an eigenvector (eigenvalue 2) of a lower-triangular A.
  Mat a = Mat::Zero(3, 3);
  a << 1.0, 0.0, 0.0, 0.5, 2.0, 0.0, -1.0, 0.0, 3.0;
  Vec x = Vec::Unit(3, 1);
  Mat vm = Mat::Zero(3, 1);
  vm(0, 0) = 0.6;
  vm(1, 0) = 0.8;
  const OrthoBasis v(vm);
  const Vec w = vm.col(0);
  const IdentityReport rep = verify_identities(a, v, x, w);
  CHECK(rep.max_entry() <= 1e-13);

  // With k = 1 every w is a multiple of V, so the expanded space is
  // span{v, A v}; its cosine with x in closed form:
  // v = (0.6, 0.8, 0), A v = (0.6, 1.9, -0.6).
  Mat m(3, 2);
  m << vm, a * vm;
  CHECK(std::abs(expanded_cos(a, v, x, w) - testutil::span_cos(m, x)) <= 1e-15);
  // x^H A w / x^H w = 1.9 / 0.8.
  CHECK(std::abs(rep.phi - 1.9 / 0.8) <= 1e-14);
}

TEST_CASE("identities hold on random instances") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    for (bool herm : {false, true}) {
      const Instance in = make_instance(25, 5, seed, herm);
      const Vec w = in.v.matrix() * randn(5, 1, seed + 50).col(0);
      const IdentityReport rep = verify_identities(in.a, in.v, in.x, w);
      INFO("seed " << seed << " hermitian " << herm);
      CHECK(rep.max_entry() <= 1e-8);
      if (herm) CHECK(std::abs(rep.phi - in.lambda) <= 1e-10);
    }
  }
}

TEST_CASE("verify_identities checks its preconditions") {
  const Instance in = make_instance(12, 3, 4);
  const Vec w = in.v.matrix().col(0);
  CHECK(kind_of([&] { verify_identities(in.a, in.v, Vec(2.0 * in.x), w); }) == ErrorKind::PreconditionViolated);
  const Vec outside = orthonormalize(randn(12, 1, 5), in.v).basis.matrix().col(0);
  CHECK(kind_of([&] { verify_identities(in.a, in.v, in.x, outside); }) == ErrorKind::PreconditionViolated);
  // x inside V.
  const Vec x_in = in.v.matrix().col(1);
  CHECK(kind_of([&] { verify_identities(in.a, in.v, x_in, w); }) == ErrorKind::PreconditionViolated);
  // x^H w = 0.
  Mat vm = Mat::Zero(4, 2);
  vm(0, 0) = 1.0;
  vm(1, 1) = 1.0;
  Mat a = randn(4, 4, 6);
  a.col(2).setZero();
  a(2, 2) = 5.0;
  CHECK(kind_of([&] {
          verify_identities(a, OrthoBasis(vm), Vec(Vec::Unit(4, 2)), Vec(Vec::Unit(4, 0)));
        }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("no sampled w beats w_opt") {
  for (std::uint64_t seed = 200; seed < 205; ++seed) {
    const Instance in = make_instance(30, 6, seed);
    const Vec wopt = w_opt_of(in);
    const double copt = expanded_cos(in.a, in.v, in.x, wopt);
    const SampledMax s = sampled_max_expansion(in.a, in.v, in.x, 2000, seed);
    CHECK(s.best_cos <= copt + 1e-12);
    const SampledMax inj = sampled_max_expansion(in.a, in.v, in.x, 100, seed, &wopt);
    CHECK(std::abs(inj.best_cos - copt) <= 1e-12);
    CHECK(phase_distance(Vec(inj.argmax_w / inj.argmax_w.norm()), Vec(wopt / wopt.norm())) <= 1e-12);
  }
  const Instance in = make_instance(10, 2, 9);
  CHECK(kind_of([&] { sampled_max_expansion(in.a, in.v, in.x, 0, 1); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("restricted pencil eigenvalue equals the squared projection onto span{R}") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const Instance in = make_instance(28, 5, seed);
    const Mat& v = in.v.matrix();
    const Mat r = in.a * v - v * (v.adjoint() * in.a * v);
    // Independent: project x onto the left singular vectors of R.
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU);
    const double qx = (svd.matrixU().adjoint() * in.x).norm();
    CHECK(std::abs(std::sqrt(restricted_pencil_mu_opt(in.a, in.v, in.x)) - qx) <= 1e-8);
  }
}

TEST_CASE("identity sweep is reproducible and small") {
  const IdentitySweep a = identity_sweep(15, 3, 10, 11, false);
  const IdentitySweep b = identity_sweep(15, 3, 10, 11, false);
  CHECK(a.instances == 10);
  CHECK(a.max_entry == b.max_entry);
  CHECK(a.max_entry <= 1e-8);
  const IdentitySweep h = identity_sweep(15, 3, 10, 12, true);
  CHECK(h.max_phi_gap <= 1e-10);
  CHECK(kind_of([] { identity_sweep(5, 5, 1, 1, false); }) == ErrorKind::ConfigError);
}
