// preserva: completely bounded trace norm of Hermitian-preserving map
// differences.
// SPDX-License-Identifier: MIT
//
// The distance enters every channel-discrimination statement in the library:
// ||N1 - N2||_diamond via a primal-dual interior-point solve of
//
//     minimize ||tr_out Y||_inf   subject to   Y >= +-(J1 - J2)_unnormalized
//
// over Hermitian Y, reduced to real symmetric blocks (directly when the Choi
// difference is real, otherwise through the standard 2x2 real embedding,
// which preserves the optimal value).  A seeded variational ascent over pure
// inputs with ancilla provides an independent lower bound.

#pragma once

#include <cstdint>

#include "preserva/linalg.hpp"

namespace preserva {

struct DiamondResult {
  double value = 0.0;                     // certified primal value
  double primal_dual_gap = 0.0;           // conservative gap bound
  double lower_bound_variational = 0.0;   // independent ascent lower bound
};

// Diamond-norm distance between two channels given their trace-normalized
// Choi matrices on (out (x) in).  Solved to `tolerance` certified gap.
// Throws DimensionTooLarge when d_in*d_out exceeds 256 (interior-point
// memory ceiling), SolverDivergence (with bracket) if centering fails.
DiamondResult diamond_norm(const cmat& j1, const cmat& j2, int d_in, int d_out,
                           double tolerance = 1e-6);

// Variational lower bound: max over pure inputs (with a d_in-dimensional
// ancilla) of ||(Delta (x) id)(psi)||_1, by alternating eigenvector ascent.
// Every iterate evaluates a genuine feasible point, so the maximum returned
// is always a valid lower bound.
double diamond_lower_bound(const cmat& j1, const cmat& j2, int d_in, int d_out,
                           int restarts = 8, std::uint64_t seed = 0);

// Same ascent without an ancilla: lower-bounds the induced trace norm
// max_psi ||N1(psi) - N2(psi)||_1 (no stabilization).
double induced_trace_norm_lower_bound(const cmat& j1, const cmat& j2,
                                      int d_in, int d_out, int restarts = 8,
                                      std::uint64_t seed = 0);

// Closed form for a pair of unitary conjugations: 2*sqrt(1 - nu^2) with nu
// the distance from the origin to the convex hull of the eigenvalues of
// U^dagger V.  Used as an oracle against the solver.
double diamond_distance_unitaries(const cmat& u, const cmat& v);

}  // namespace preserva
