// preserva: quantum channels and state utilities.
// SPDX-License-Identifier: MIT
//
// Channel conventions:
//   * Kraus operators are d_out x d_in.
//   * The cached Choi matrix is trace normalized, J = (N (x) id)(|Phi><Phi|)
//     with |Phi> = (1/sqrt(d_in)) sum_i |ii>, laid out on (out (x) in):
//     J[(o,a),(o',b)] = <o| N(|a><b|) |o'> / d_in.
//   * Channel application through the Choi uses
//     N(rho) = d_in * tr_in[ J (I (x) rho^T) ].

#pragma once

#include <functional>
#include <vector>

#include "preserva/linalg.hpp"
#include "preserva/rng.hpp"

namespace preserva {

// ===========================================================================
// States
// ===========================================================================

// Maximally entangled ket (1/sqrt(d)) sum_i |ii> on C^d (x) C^d.
cvec max_entangled_ket(int d);

// Projector onto the maximally entangled ket.
cmat max_entangled_state(int d);

// Validates a density matrix: Hermitian, PSD, unit trace (tolerances are the
// structural/derived defaults).  Throws on failure.
void require_density_matrix(const cmat& rho, const char* who);

// Partial transpose on system `sys` of a multipartite operator.
cmat partial_transpose(const cmat& m, const std::vector<int>& dims, int sys);

// Negativity: sum of |negative eigenvalues| of the partial transpose over
// the second factor of a (dA, dB) bipartition.
double negativity(const cmat& rho, int d_a, int d_b);

// ===========================================================================
// Channels
// ===========================================================================

class QuantumChannel {
 public:
  // Builds from Kraus operators; validates shape consistency, trace
  // preservation (sum K^dag K = I within 1e-9) and complete positivity.
  static QuantumChannel from_kraus(std::vector<cmat> kraus);

  // Builds from a trace-normalized Choi matrix on (out (x) in); validates
  // Hermiticity, positivity, and the marginal condition
  // tr_out J = I/d_in, then extracts Kraus operators spectrally.
  static QuantumChannel from_choi(const cmat& choi, int d_in, int d_out);

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  const std::vector<cmat>& kraus() const { return kraus_; }
  const cmat& choi() const { return choi_; }

  // Schrodinger-picture application.
  cmat apply(const cmat& rho) const;
  // Heisenberg-picture (adjoint) application: X -> sum K^dag X K.
  cmat apply_adjoint(const cmat& x) const;

  // Sequential composition: (after . this)(rho) = after(this(rho)).
  QuantumChannel then(const QuantumChannel& after) const;
  // Parallel composition (this (x) other).
  QuantumChannel tensor(const QuantumChannel& other) const;

 private:
  QuantumChannel() = default;
  // Reduces the Kraus family to at most d_in*d_out operators (spectral).
  void maybe_compress();

  std::vector<cmat> kraus_;
  cmat choi_;
  int d_in_ = 0;
  int d_out_ = 0;
};

// --- channel zoo ------------------------------------------------------------

QuantumChannel identity_channel(int d);
QuantumChannel unitary_channel(const cmat& u);
// rho -> sigma * tr(rho); sigma must be a density matrix.
QuantumChannel constant_channel(const cmat& sigma, int d_in);
QuantumChannel completely_depolarizing(int d);
// Channel that traces out all systems not in `keep`.
QuantumChannel partial_trace_channel(const std::vector<int>& dims,
                                     const std::vector<int>& keep);
// Convex mixture sum_k w_k N_k; weights must be nonnegative and sum to 1
// within 1e-10, all channels must share dimensions.
QuantumChannel convex_mix(const std::vector<QuantumChannel>& channels,
                          const rvec& weights);
// Unitary channel that reorders tensor factors; output slot k carries input
// system perm[k].
QuantumChannel swap_channel(const std::vector<int>& dims,
                            const std::vector<int>& perm);

// --- random objects ----------------------------------------------------------

// Haar-random pure state, returned as a projector on C^d.
cmat haar_random_state(int d, Rng& rng);
// Random channel from a Haar isometry into d_out x kraus_count (Stinespring
// dilation with a kraus_count-dimensional environment); requires
// d_out * kraus_count >= d_in.
QuantumChannel random_channel(int d_in, int d_out, int kraus_count, Rng& rng);

// --- Choi-level helpers -----------------------------------------------------

// Apply a channel given only its trace-normalized Choi matrix.
cmat apply_choi(const cmat& choi, int d_in, int d_out, const cmat& rho);

// Heisenberg-picture application through the Choi matrix.
cmat apply_choi_adjoint(const cmat& choi, int d_in, int d_out, const cmat& x);

// Choi matrix of an arbitrary linear map given as a callable (oracle/testing
// helper; the map need not be CPTP).
cmat choi_of_map(const std::function<cmat(const cmat&)>& map, int d_in);

// Choi of the composition after . before from the two Choi matrices
// (before: d_in -> d_mid, after: d_mid -> d_out).
cmat choi_compose(const cmat& choi_after, int d_mid, int d_out,
                  const cmat& choi_before, int d_in);

// Choi of (channel (x) identity on d_id), ordering (S (x) A).
cmat choi_tensor_id(const cmat& choi, int d_in, int d_out, int d_id);

}  // namespace preserva
