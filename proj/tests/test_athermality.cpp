// preserva: athermality monotone and thermal-experiment tests.
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "preserva/athermality.hpp"
#include "preserva/errors.hpp"
#include "preserva/linalg.hpp"
#include "preserva/quantum.hpp"
#include "preserva/rng.hpp"

using namespace preserva;

namespace {

rvec qubit_energies() {
  rvec e(2);
  e << 0.0, 1.0;
  return e;
}

// Gibbs populations (3/4, 1/4) on a qubit: e^{-beta} = 1/3.
ThermalSpec qubit_spec_31() { return thermal_state(qubit_energies(), std::log(3.0)); }

// Uniform reference (infinite temperature).
ThermalSpec qubit_spec_uniform() { return thermal_state(qubit_energies(), 0.0); }

}  // namespace

TEST_CASE("thermal_state builds the Gibbs state and validates input") {
  const ThermalSpec s = qubit_spec_31();
  CHECK(s.d() == 2);
  CHECK(std::abs(s.gamma(0, 0).real() - 0.75) < 1e-12);
  CHECK(std::abs(s.gamma(1, 1).real() - 0.25) < 1e-12);
  CHECK(s.p_min() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.populations()(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(s.normalized_temperature() ==
        doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-12));
  CHECK(std::isinf(qubit_spec_uniform().normalized_temperature()));

  rvec descending(2);
  descending << 1.0, 0.0;
  CHECK_THROWS_AS(thermal_state(descending, 1.0), validation_error);
  CHECK_THROWS_AS(thermal_state(qubit_energies(), -1.0), validation_error);
  CHECK_THROWS_AS(thermal_state(qubit_energies(),
                                std::numeric_limits<double>::infinity()),
                  validation_error);
}

TEST_CASE("is_gibbs_preserving accepts thermalizations and rejects replac-away") {
  const ThermalSpec s = qubit_spec_31();
  const QuantumChannel pt =
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, 0.4);
  CHECK(is_gibbs_preserving(pt, s, s));

  cmat zero = cmat::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(!is_gibbs_preserving(constant_channel(zero, 2), s.gamma, s.gamma));

  // Tensor-power inference: tracing one factor of gamma (x) gamma gives gamma.
  const QuantumChannel tr = partial_trace_channel({2, 2}, {0});
  CHECK(is_gibbs_preserving(tr, cmat(kron(s.gamma, s.gamma)), s.gamma));

  // No integer tensor powers fit a 3 -> 3 channel against qubit references.
  CHECK_THROWS_AS(
      is_gibbs_preserving(identity_channel(3), s.gamma, s.gamma),
      validation_error);
}

TEST_CASE("gibbs_channel zoo behaves as named and validates parameters") {
  const ThermalSpec s = qubit_spec_31();

  // lambda = 1 is the identity, lambda = 0 the replacer.
  const QuantumChannel keep =
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, 1.0);
  const QuantumChannel drop =
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, 0.0);
  Rng rng(401);
  const cmat rho = haar_random_state(2, rng);
  CHECK((keep.apply(rho) - rho).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((drop.apply(rho) - s.gamma).cwiseAbs().maxCoeff() < 1e-10);

  // Energy dephasing kills off-diagonals, keeps the diagonal.
  const QuantumChannel deph =
      gibbs_channel(GibbsChannelKind::energy_dephasing, s);
  const cmat out = deph.apply(rho);
  CHECK(std::abs(out(0, 1)) < 1e-12);
  CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-12);

  // Hamiltonian evolution is unitary and Gibbs preserving.
  const QuantumChannel evo =
      gibbs_channel(GibbsChannelKind::hamiltonian_evolution, s, 0.7);
  CHECK(is_gibbs_preserving(evo, s, s));
  CHECK(std::abs(evo.apply(rho).trace().real() - 1.0) < 1e-11);

  CHECK_THROWS_AS(
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, 1.5),
      validation_error);
  CHECK_THROWS_AS(
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, -0.1),
      validation_error);
}

TEST_CASE("sample_gp_channel outputs preserve the reference") {
  Rng rng(409);
  const ThermalSpec s = qubit_spec_31();
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel n = sample_gp_channel(rng, s.gamma);
    CHECK(is_gibbs_preserving(n, s, s));
  }
  // Cross-reference sampler: gamma_in -> gamma_out exactly.
  const ThermalSpec u = qubit_spec_uniform();
  for (int t = 0; t < 5; ++t) {
    const QuantumChannel n = sample_gp_measure_prepare(rng, s.gamma, u.gamma);
    CHECK((n.apply(s.gamma) - u.gamma).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("p_bar_dmax sweep on partial thermalization: log2(1+3*lambda)") {
  const ThermalSpec s = qubit_spec_uniform();
  for (double lam : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const QuantumChannel n =
        gibbs_channel(GibbsChannelKind::partial_thermalization, s, lam);
    CHECK(p_bar_dmax(n, s) ==
          doctest::Approx(std::log2(1.0 + 3.0 * lam)).epsilon(1e-9));
  }
}

TEST_CASE("p_dmax on partial thermalization: log2(lambda/p_min + 1 - lambda)") {
  const ThermalSpec s = qubit_spec_31();
  for (double lam : {0.3, 0.6, 1.0}) {
    const QuantumChannel n =
        gibbs_channel(GibbsChannelKind::partial_thermalization, s, lam);
    const PDmaxResult r = p_dmax_detailed(n, s, 16, 7);
    const double expected = std::log2(lam / 0.25 + 1.0 - lam);
    CHECK(r.bits == doctest::Approx(expected).epsilon(1e-6));
    CHECK(r.grid_certified);
    CHECK(r.bits >= r.grid_bits - 1e-9);
  }
}

TEST_CASE("p_bar_dmax dominates p_dmax on sampled free channels") {
  Rng rng(419);
  const ThermalSpec s = qubit_spec_31();
  for (int t = 0; t < 10; ++t) {
    const QuantumChannel n = sample_gp_channel(rng, s.gamma);
    CHECK(p_dmax(n, s) <= p_bar_dmax(n, s) + 1e-7);
  }
}

TEST_CASE("both monotones vanish exactly on the replacer and gate on GP") {
  const ThermalSpec s = qubit_spec_31();
  const QuantumChannel rep = constant_channel(s.gamma, 2);
  CHECK(std::abs(p_bar_dmax(rep, s)) < 1e-9);
  CHECK(std::abs(p_dmax(rep, s)) < 1e-9);

  cmat zero = cmat::Zero(2, 2);
  zero(0, 0) = 1.0;
  const QuantumChannel bad = constant_channel(zero, 2);
  CHECK_THROWS_AS(p_dmax(bad, s), validation_error);
  CHECK_THROWS_AS(p_bar_dmax(bad, s), validation_error);
}

TEST_CASE("identity on the uniform qubit reference: p_bar = 2, p = 1") {
  const ThermalSpec s = qubit_spec_uniform();
  const QuantumChannel id = identity_channel(2);
  CHECK(p_bar_dmax(id, s) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p_dmax(id, s) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("smooth_p_bar_bounds bracket: identity qubit, delta = 0.1") {
  const ThermalSpec s = qubit_spec_uniform();
  const QuantumChannel id = identity_channel(2);
  const SmoothBounds b = smooth_p_bar_bounds(id, s, 0.1);
  // Reference gamma (x) I/2 has minimum population 1/4, so the smoothed
  // scale is at least 4 - 2*0.1/(1/4) = 3.2.
  CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.lower == doctest::Approx(std::log2(3.2)).epsilon(1e-9));
  CHECK(b.epsilon == 0.1);
  const SmoothBounds tight = smooth_p_bar_bounds(id, s, 0.0);
  CHECK(tight.lower == doctest::Approx(tight.upper).epsilon(1e-12));
  CHECK_THROWS_AS(smooth_p_bar_bounds(id, s, -0.2), validation_error);
}

TEST_CASE("energy_subspace_condition decides small spectra") {
  rvec two(2), three(3), spread(3);
  two << 0.0, 1.0;
  three << 0.0, 1.0, 2.0;
  spread << 0.0, 1.0, 2.3;
  // On {0,1} every multiset total counts the ones: always distinct.
  CHECK(energy_subspace_condition(two, 4));
  // {0,2} and {1,1} collide at total 2.
  CHECK(!energy_subspace_condition(three, 2));
  // Uneven spacing avoids the collision at m = 2.
  CHECK(energy_subspace_condition(spread, 2));
  // "Up to m" includes smaller multiset sizes, so m = 3 inherits the failure.
  CHECK(!energy_subspace_condition(three, 3));

  CHECK_THROWS_AS(energy_subspace_condition(two, 7), validation_error);
  CHECK_THROWS_AS(energy_subspace_condition(two, 0), validation_error);
}

TEST_CASE("bath_bounds reports the bracket and coherence flag") {
  const ThermalSpec s = qubit_spec_31();
  const QuantumChannel deph =
      gibbs_channel(GibbsChannelKind::energy_dephasing, s);
  const BathBoundReport r = bath_bounds(deph, s, 0.25, 4, 5);
  CHECK(r.epsilon == 0.25);
  CHECK(r.coherence_annihilating);
  CHECK(r.esc_holds);  // energies {0,1}
  const double scale = std::exp2(r.p_dmax_bits);
  CHECK(r.upper_bound == doctest::Approx(scale / 0.0625).epsilon(1e-9));
  CHECK(r.lower_bound_rhs ==
        doctest::Approx(scale - 2.0 * std::sqrt(0.25) / 0.25 - 1.0)
            .epsilon(1e-9));
  CHECK(r.probes == 100);

  // The identity keeps coherences.
  const BathBoundReport r2 = bath_bounds(identity_channel(2), s, 0.25, 4, 5);
  CHECK(!r2.coherence_annihilating);
  CHECK(r2.p_dmax_bits == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(bath_bounds(deph, s, 1.5), validation_error);
  CHECK_THROWS_AS(bath_bounds(deph, s, 0.0), validation_error);
}

TEST_CASE("comm_error: GP line obeys the one-shot capacity bound") {
  Rng rng(431);
  const ThermalSpec s = qubit_spec_31();
  const cmat gamma_sa = kron(s.gamma, s.gamma);
  for (int t = 0; t < 5; ++t) {
    const QuantumChannel enc = sample_gp_measure_prepare(rng, s.gamma, gamma_sa);
    const QuantumChannel dec = sample_gp_measure_prepare(rng, gamma_sa, s.gamma);
    const CommReport r =
        comm_error(identity_channel(2), enc, dec, s, s, s, 2, 0.01);
    CHECK(r.m == 2);
    CHECK(r.avg_error >= -1e-12);
    CHECK(r.avg_error <= 1.0 + 1e-12);
    // Identity channel: the sandwiched Choi operator is rank one with
    // eigenvalue sum_i 1/gamma_i = 4/3 + 4 = 16/3.
    CHECK(r.p_bar_bits == doctest::Approx(std::log2(16.0 / 3.0)).epsilon(1e-9));
    CHECK(r.bound_holds);
  }
}

TEST_CASE("comm_error gates on dimensions and Gibbs preservation") {
  Rng rng(433);
  const ThermalSpec s = qubit_spec_31();
  const cmat gamma_sa = kron(s.gamma, s.gamma);
  const QuantumChannel enc = sample_gp_measure_prepare(rng, s.gamma, gamma_sa);
  const QuantumChannel dec = sample_gp_measure_prepare(rng, gamma_sa, s.gamma);
  // Message count above the message-system dimension.
  CHECK_THROWS_AS(comm_error(identity_channel(2), enc, dec, s, s, s, 3, 0.01),
                  validation_error);
  // Non-GP encoder: replace with a state that is not gamma_S (x) gamma_A.
  const QuantumChannel bad_enc =
      constant_channel(cmat(cmat::Identity(4, 4) / 4.0), 2);
  CHECK_THROWS_AS(comm_error(identity_channel(2), bad_enc, dec, s, s, s, 2, 0.01),
                  validation_error);
}

TEST_CASE("convex_split_experiment: permutation identity and destruction") {
  const ThermalSpec s = qubit_spec_uniform();
  const QuantumChannel e =
      gibbs_channel(GibbsChannelKind::partial_thermalization, s, 1.0 / 3.0);
  const DestructionReport r = convex_split_experiment(e, s, 2);
  CHECK(r.n == 2);
  CHECK(r.choi_permutation_dev <= 1e-9);
  CHECK(r.p == doctest::Approx(std::exp2(-p_bar_dmax(e, s))).epsilon(1e-9));
  CHECK(r.delta_premise == doctest::Approx(std::sqrt(1.0 / (r.p * 2))).epsilon(1e-9));
  CHECK(r.distance >= -1e-9);

  // The replacer destroys perfectly: every split term is gamma^(x)n.
  const QuantumChannel rep = constant_channel(s.gamma, 2);
  const DestructionReport r0 = convex_split_experiment(rep, s, 2);
  CHECK(r0.distance <= 1e-5);

  CHECK_THROWS_AS(convex_split_experiment(e, s, 4), validation_error);
  CHECK_THROWS_AS(convex_split_experiment(e, s, 1), validation_error);
  cmat zero = cmat::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK_THROWS_AS(convex_split_experiment(constant_channel(zero, 2), s, 2),
                  validation_error);
}
