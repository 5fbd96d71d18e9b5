// preserva: distinguishability functional tests.
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "preserva/divergences.hpp"
#include "preserva/errors.hpp"
#include "preserva/linalg.hpp"
#include "preserva/quantum.hpp"
#include "preserva/rng.hpp"

using namespace preserva;

namespace {

cmat random_density(Rng& rng, int d) {
  const cmat g = rng.ginibre(d, d);
  cmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

cmat random_full_rank_density(Rng& rng, int d) {
  cmat rho = random_density(rng, d);
  rho = 0.9 * rho + 0.1 * cmat::Identity(d, d) / d;
  return rho;
}

// Independent oracle: the optimal scale 2^{D_max} is the smallest t with
// t*sigma - rho >= 0, found by bisection on the minimum eigenvalue.  No code
// shared with the library implementation (which goes through
// sigma^{-1/2} rho sigma^{-1/2}).
double dmax_scale_by_bisection(const cmat& rho, const cmat& sigma) {
  double lo = 0.0, hi = 1.0;
  const auto feasible = [&](double t) {
    return eig_min(cmat(t * sigma - rho)) >= -1e-13;
  };
  while (!feasible(hi)) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("ExtendedReal round trips and converts") {
  const ExtendedReal f = ExtendedReal::finite(1.5);
  CHECK(!f.is_infinite);
  CHECK(f.to_double() == 1.5);
  const ExtendedReal inf = ExtendedReal::infinite();
  CHECK(inf.is_infinite);
  CHECK(std::isinf(inf.to_double()));
}

TEST_CASE("d_max of a pure state against the maximally mixed state is log2 d") {
  Rng rng(211);
  for (int d = 2; d <= 5; ++d) {
    const cmat psi = haar_random_state(d, rng);
    const ExtendedReal v = d_max(psi, cmat(cmat::Identity(d, d) / d));
    REQUIRE(!v.is_infinite);
    CHECK(v.bits == doctest::Approx(std::log2(double(d))).epsilon(1e-10));
  }
}

TEST_CASE("d_max(rho||rho) = 0 and d_max ordering") {
  Rng rng(223);
  const cmat rho = random_full_rank_density(rng, 3);
  CHECK(std::abs(d_max(rho, rho).bits) < 1e-9);
  // rho <= 2^{Dmax} sigma by definition, so Dmax >= 0 for states.
  const cmat sigma = random_full_rank_density(rng, 3);
  CHECK(d_max(rho, sigma).bits >= -1e-10);
}

TEST_CASE("d_max agrees with an independent bisection oracle") {
  Rng rng(227);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + rng.uniform_int(3);
    const cmat rho = random_density(rng, d);
    const cmat sigma = random_full_rank_density(rng, d);
    const ExtendedReal v = d_max(rho, sigma);
    REQUIRE(!v.is_infinite);
    const double oracle = dmax_scale_by_bisection(rho, sigma);
    CHECK(std::pow(2.0, v.bits) == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("d_max is infinite on support violation") {
  cmat rho = cmat::Zero(2, 2);
  rho(1, 1) = 1.0;
  cmat sigma = cmat::Zero(2, 2);
  sigma(0, 0) = 1.0;
  CHECK(d_max(rho, sigma).is_infinite);
  // Borderline: rho supported inside sigma's support stays finite.
  cmat rho2 = cmat::Zero(2, 2);
  rho2(0, 0) = 1.0;
  const ExtendedReal v = d_max(rho2, sigma);
  REQUIRE(!v.is_infinite);
  CHECK(std::abs(v.bits) < 1e-9);
}

TEST_CASE("trace_distance basics") {
  cmat zero = cmat::Zero(2, 2), one = cmat::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(zero, cmat(cmat::Identity(2, 2) / 2.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Symmetry and triangle inequality on random states.
  Rng rng(229);
  const cmat a = random_density(rng, 3), b = random_density(rng, 3),
             c = random_density(rng, 3);
  CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)));
  CHECK(trace_distance(a, c) <=
        trace_distance(a, b) + trace_distance(b, c) + 1e-12);
}

TEST_CASE("d_max satisfies data processing under channels") {
  Rng rng(233);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + rng.uniform_int(2);
    const cmat rho = random_density(rng, d);
    const cmat sigma = random_full_rank_density(rng, d);
    const QuantumChannel n = random_channel(d, 2 + rng.uniform_int(2), 2, rng);
    const ExtendedReal before = d_max(rho, sigma);
    const ExtendedReal after = d_max(n.apply(rho), n.apply(sigma));
    REQUIRE(!before.is_infinite);
    if (after.is_infinite) continue;  // cannot happen, but keep the guard honest
    CHECK(after.bits <= before.bits + 1e-8);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("d_max_continuity_gap holds and flags singular sigma") {
  Rng rng(239);
  for (int trial = 0; trial < 20; ++trial) {
    const cmat rho = random_density(rng, 3);
    const cmat rho2 = random_density(rng, 3);
    const cmat sigma = random_full_rank_density(rng, 3);
    const ContinuityGap g = d_max_continuity_gap(rho, rho2, sigma);
    CHECK(g.lhs <= g.bound + 1e-9);
    CHECK(g.lhs >= 0.0);
    CHECK(g.bound >= 0.0);
  }
  cmat singular = cmat::Zero(2, 2);
  singular(0, 0) = 1.0;
  const cmat rho = cmat::Identity(2, 2) / 2.0;
  CHECK_THROWS_AS(d_max_continuity_gap(rho, rho, singular), validation_error);
}

TEST_CASE("smooth_d_max_bounds bracket the unsmoothed value") {
  Rng rng(241);
  const cmat rho = random_density(rng, 3);
  const cmat sigma = random_full_rank_density(rng, 3);
  const ExtendedReal exact = d_max(rho, sigma);
  // epsilon = 0: bracket collapses onto the exact value.
  const SmoothBounds tight = smooth_d_max_bounds(rho, sigma, 0.0);
  CHECK(tight.upper == doctest::Approx(exact.bits).epsilon(1e-12));
  CHECK(tight.lower == doctest::Approx(exact.bits).epsilon(1e-9));
  // epsilon > 0: lower <= upper, upper stays the unsmoothed value.
  const SmoothBounds b = smooth_d_max_bounds(rho, sigma, 0.05);
  CHECK(b.lower <= b.upper + 1e-12);
  CHECK(b.upper == doctest::Approx(exact.bits).epsilon(1e-12));
  CHECK(b.epsilon == 0.05);
  CHECK_THROWS_AS(smooth_d_max_bounds(rho, sigma, -0.1), validation_error);
  CHECK_THROWS_AS(smooth_d_max_bounds(rho, sigma, 1.5), validation_error);
}

TEST_CASE("singlet_fraction closed forms") {
  CHECK(singlet_fraction(max_entangled_state(2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(singlet_fraction(max_entangled_state(3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(singlet_fraction(cmat(cmat::Identity(4, 4) / 4.0)) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // Isotropic interpolation: p*Phi + (1-p)*I/d^2 has fraction p + (1-p)/d^2.
  for (int d = 2; d <= 3; ++d) {
    const double p = 0.35;
    const cmat iso = p * max_entangled_state(d) +
                     (1.0 - p) * cmat::Identity(d * d, d * d) / double(d * d);
    CHECK(singlet_fraction(iso) ==
          doctest::Approx(p + (1.0 - p) / (d * d)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(singlet_fraction(cmat(cmat::Identity(6, 6) / 6.0)),
                  validation_error);
}

TEST_CASE("fully_entangled_fraction dominates singlet_fraction") {
  Rng rng(251);
  for (int trial = 0; trial < 6; ++trial) {
    const cmat rho = random_density(rng, 4);
    CHECK(fully_entangled_fraction(rho, 8, trial) >=
          singlet_fraction(rho) - 1e-12);
  }
}

TEST_CASE("fully_entangled_fraction recovers a locally rotated singlet") {
  Rng rng(257);
  const cmat u = rng.haar_unitary(2);
  const cmat rot = kron(u, cmat(cmat::Identity(2, 2)));
  const cmat rho = rot * max_entangled_state(2) * rot.adjoint();
  // Rotated away from the canonical singlet...
  CHECK(singlet_fraction(rho) < 1.0 - 1e-6);
  // ...but the optimized fraction finds the rotation back.
  CHECK(fully_entangled_fraction(rho, 16, 3) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(fully_entangled_fraction(rho, 0), validation_error);
}
