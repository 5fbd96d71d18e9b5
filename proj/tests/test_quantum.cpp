// preserva: channel and state utility tests.
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

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

// Direct Kraus-sum application, independent of the channel class internals.
cmat kraus_apply(const std::vector<cmat>& ks, const cmat& rho) {
  cmat out = cmat::Zero(ks[0].rows(), ks[0].rows());
  for (const cmat& k : ks) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

TEST_CASE("max_entangled_ket and state have the right form") {
  const cvec psi = max_entangled_ket(3);
  REQUIRE(psi.size() == 9);
  CHECK(std::abs(psi(0) - complex(1.0 / std::sqrt(3.0))) < 1e-15);
  CHECK(std::abs(psi(4) - complex(1.0 / std::sqrt(3.0))) < 1e-15);
  CHECK(std::abs(psi(1)) == 0.0);
  const cmat phi = max_entangled_state(3);
  CHECK(std::abs(phi.trace().real() - 1.0) < 1e-12);
  CHECK((phi - phi * phi * 1.0).cwiseAbs().maxCoeff() < 1e-12);  // projector
}

TEST_CASE("from_kraus rejects non-trace-preserving families") {
  std::vector<cmat> ks = {0.5 * cmat::Identity(2, 2)};
  CHECK_THROWS_AS(QuantumChannel::from_kraus(ks), validation_error);
}

TEST_CASE("from_choi round trips a random channel and agrees on states") {
  Rng rng(101);
  for (int trial = 0; trial < 8; ++trial) {
    const int d_in = 2 + rng.uniform_int(2);
    const int d_out = 2 + rng.uniform_int(2);
    const QuantumChannel n = random_channel(d_in, d_out, 3, rng);
    const QuantumChannel m = QuantumChannel::from_choi(n.choi(), d_in, d_out);
    const cmat rho = random_density(rng, d_in);
    CHECK((n.apply(rho) - m.apply(rho)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((n.choi() - m.choi()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("from_choi rejects a matrix with the wrong marginal") {
  // Choi of the constant-to-|0><0| map has tr_out J = |0><0| trace-scaled,
  // but we corrupt a valid Choi instead: scale breaks the marginal.
  const cmat good = identity_channel(2).choi();
  CHECK_THROWS_AS(QuantumChannel::from_choi(2.0 * good, 2, 2),
                  validation_error);
}

TEST_CASE("apply agrees with direct Kraus summation") {
  Rng rng(103);
  const QuantumChannel n = random_channel(3, 2, 4, rng);
  const cmat rho = random_density(rng, 3);
  CHECK((n.apply(rho) - kraus_apply(n.kraus(), rho)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("apply_adjoint is the Hilbert-Schmidt adjoint of apply") {
  Rng rng(107);
  const QuantumChannel n = random_channel(2, 3, 2, rng);
  const cmat rho = random_density(rng, 2);
  const cmat x = herm_part(rng.ginibre(3, 3));
  const complex lhs = (x.adjoint() * n.apply(rho)).trace();
  const complex rhs = (n.apply_adjoint(x).adjoint() * rho).trace();
  CHECK(std::abs(lhs - rhs) < 1e-11);
  // Unitality of the adjoint: N^dag(I) = I.
  CHECK((n.apply_adjoint(cmat::Identity(3, 3)) - cmat::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("then composes in the stated order") {
  Rng rng(109);
  const QuantumChannel a = random_channel(2, 3, 2, rng);
  const QuantumChannel b = random_channel(3, 2, 2, rng);
  const QuantumChannel ab = a.then(b);  // b after a
  CHECK(ab.d_in() == 2);
  CHECK(ab.d_out() == 2);
  const cmat rho = random_density(rng, 2);
  CHECK((ab.apply(rho) - b.apply(a.apply(rho))).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tensor acts factor-wise on product states") {
  Rng rng(113);
  const QuantumChannel a = random_channel(2, 2, 2, rng);
  const QuantumChannel b = random_channel(3, 3, 2, rng);
  const QuantumChannel ab = a.tensor(b);
  CHECK(ab.d_in() == 6);
  const cmat ra = random_density(rng, 2);
  const cmat rb = random_density(rng, 3);
  CHECK((ab.apply(kron(ra, rb)) - kron(a.apply(ra), b.apply(rb)))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("identity, constant, and depolarizing channels act as named") {
  Rng rng(127);
  const cmat rho = random_density(rng, 3);
  CHECK((identity_channel(3).apply(rho) - rho).cwiseAbs().maxCoeff() < 1e-12);

  const cmat sigma = random_density(rng, 2);
  const QuantumChannel rep = constant_channel(sigma, 3);
  CHECK(rep.d_in() == 3);
  CHECK(rep.d_out() == 2);
  CHECK((rep.apply(rho) - sigma).cwiseAbs().maxCoeff() < 1e-10);

  const cmat mixed = completely_depolarizing(3).apply(rho);
  CHECK((mixed - cmat::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("constant_channel validates its target state") {
  cmat bad = cmat::Identity(2, 2);  // trace 2
  CHECK_THROWS_AS(constant_channel(bad, 2), validation_error);
}

TEST_CASE("partial_trace_channel matches partial_trace") {
  Rng rng(131);
  const cmat rho = random_density(rng, 6);
  const QuantumChannel tr_b = partial_trace_channel({2, 3}, {0});
  CHECK((tr_b.apply(rho) - partial_trace(rho, {2, 3}, {0}))
            .cwiseAbs()
            .maxCoeff() < 1e-11);
  const QuantumChannel tr_a = partial_trace_channel({2, 3}, {1});
  CHECK((tr_a.apply(rho) - partial_trace(rho, {2, 3}, {1}))
            .cwiseAbs()
            .maxCoeff() < 1e-11);
}

TEST_CASE("convex_mix validates weights and averages the action") {
  Rng rng(137);
  const QuantumChannel a = random_channel(2, 2, 2, rng);
  const QuantumChannel b = random_channel(2, 2, 2, rng);
  rvec bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(convex_mix({a, b}, bad), validation_error);
  rvec w(2);
  w << 0.3, 0.7;
  const QuantumChannel m = convex_mix({a, b}, w);
  const cmat rho = random_density(rng, 2);
  CHECK((m.apply(rho) - (0.3 * a.apply(rho) + 0.7 * b.apply(rho)))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((m.choi() - (0.3 * a.choi() + 0.7 * b.choi())).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("swap_channel reorders tensor factors") {
  Rng rng(139);
  const cmat ra = random_density(rng, 2);
  const cmat rb = random_density(rng, 3);
  const QuantumChannel sw = swap_channel({2, 3}, {1, 0});
  CHECK((sw.apply(kron(ra, rb)) - kron(rb, ra)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("random_channel is CPTP with the requested Kraus count") {
  Rng rng(149);
  const QuantumChannel n = random_channel(3, 2, 4, rng);
  CHECK(static_cast<int>(n.kraus().size()) <= 4);
  cmat sum = cmat::Zero(3, 3);
  for (const cmat& k : n.kraus()) sum += k.adjoint() * k;
  CHECK((sum - cmat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(is_psd(n.choi(), 1e-10));
  CHECK_THROWS_AS(random_channel(4, 1, 2, rng), validation_error);
}

TEST_CASE("Kraus family is compressed to at most d_in*d_out operators") {
  Rng rng(151);
  // Mix ten channels: naive Kraus count would be 20 for qubits.
  std::vector<QuantumChannel> chans;
  rvec w(10);
  for (int i = 0; i < 10; ++i) {
    chans.push_back(random_channel(2, 2, 2, rng));
    w(i) = 0.1;
  }
  const QuantumChannel m = convex_mix(chans, w);
  CHECK(static_cast<int>(m.kraus().size()) <= 4);
}

TEST_CASE("partial_transpose is an involution and transposes marginally") {
  Rng rng(157);
  const cmat rho = random_density(rng, 6);
  const cmat pt = partial_transpose(rho, {2, 3}, 1);
  CHECK((partial_transpose(pt, {2, 3}, 1) - rho).cwiseAbs().maxCoeff() <
        1e-13);
  // On products it transposes one factor.
  const cmat a = random_density(rng, 2), b = random_density(rng, 3);
  CHECK((partial_transpose(kron(a, b), {2, 3}, 1) - kron(a, cmat(b.transpose())))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK((partial_transpose(kron(a, b), {2, 3}, 0) - kron(cmat(a.transpose()), b))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("negativity of the maximally entangled state is (d-1)/2") {
  CHECK(negativity(max_entangled_state(2), 2, 2) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(negativity(max_entangled_state(3), 3, 3) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Separable states have zero negativity.
  Rng rng(163);
  const cmat a = random_density(rng, 2), b = random_density(rng, 2);
  CHECK(negativity(kron(a, b), 2, 2) < 1e-10);
  CHECK_THROWS_AS(negativity(cmat::Identity(6, 6) / 6.0, 2, 2),
                  validation_error);
}

TEST_CASE("apply_choi and apply_choi_adjoint match the channel members") {
  Rng rng(167);
  const QuantumChannel n = random_channel(2, 3, 2, rng);
  const cmat rho = random_density(rng, 2);
  const cmat x = herm_part(rng.ginibre(3, 3));
  CHECK((apply_choi(n.choi(), 2, 3, rho) - n.apply(rho)).cwiseAbs().maxCoeff() <
        1e-11);
  CHECK((apply_choi_adjoint(n.choi(), 2, 3, x) - n.apply_adjoint(x))
            .cwiseAbs()
            .maxCoeff() < 1e-11);
}

TEST_CASE("choi_of_map reproduces a channel's cached Choi") {
  Rng rng(173);
  const QuantumChannel n = random_channel(3, 2, 3, rng);
  const cmat j = choi_of_map([&](const cmat& rho) { return n.apply(rho); }, 3);
  CHECK((j - n.choi()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("choi_compose matches member composition") {
  Rng rng(179);
  const QuantumChannel a = random_channel(2, 3, 2, rng);
  const QuantumChannel b = random_channel(3, 2, 2, rng);
  const cmat j = choi_compose(b.choi(), 3, 2, a.choi(), 2);
  CHECK((j - a.then(b).choi()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("choi_tensor_id matches tensoring with the identity") {
  Rng rng(181);
  const QuantumChannel a = random_channel(2, 2, 2, rng);
  const cmat j = choi_tensor_id(a.choi(), 2, 2, 3);
  CHECK((j - a.tensor(identity_channel(3)).choi()).cwiseAbs().maxCoeff() <
        1e-11);
}
