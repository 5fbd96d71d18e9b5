// preserva: scalar distinguishability functionals.
// SPDX-License-Identifier: MIT
//
// Max-relative entropy (base-2), trace distance, entangled-fraction
// functionals, and two-sided smoothing brackets derived from the continuity
// of 2^{D_max} in its first argument.

#pragma once

#include <cstdint>

#include "preserva/linalg.hpp"

namespace preserva {

// Extended real used for D_max: the +infinity case (support violation) is an
// explicit variant, never a float sentinel, so bound arithmetic cannot
// silently absorb it.
struct ExtendedReal {
  static ExtendedReal finite(double v) { return {false, v}; }
  static ExtendedReal infinite() { return {true, 0.0}; }
  bool is_infinite = false;
  double bits = 0.0;  // meaningful only when !is_infinite
  double to_double() const;
};

struct SmoothBounds {
  double lower = 0.0;  // bits; may be -inf when the bracket is vacuous
  double upper = 0.0;  // bits
  double epsilon = 0.0;
};

// Max-relative entropy D_max(rho||sigma) = log2 of the smallest lambda with
// rho <= lambda*sigma; computed as log2 lambda_max(sigma^{-1/2} rho
// sigma^{-1/2}) on sigma's support.  Infinite when rho leaks outside the
// support of sigma (kernel-projection mass > 1e-9).
ExtendedReal d_max(const cmat& rho, const cmat& sigma);

// Half trace norm of the difference, in [0,1] for states.
double trace_distance(const cmat& rho, const cmat& sigma);

// |2^{D_max(rho'||s)} - 2^{D_max(rho||s)}| together with its continuity bound
// ||rho - rho'||_1 / p_min(sigma).  Requires sigma full rank.
struct ContinuityGap {
  double lhs;
  double bound;
};
ContinuityGap d_max_continuity_gap(const cmat& rho, const cmat& rho_prime,
                                   const cmat& sigma);

// Bracket for the epsilon-smoothed D_max: upper is the unsmoothed value,
// lower follows from the continuity bound (clamped at 2^x >= 0).  The true
// smoothed value lies in [lower, upper].
SmoothBounds smooth_d_max_bounds(const cmat& rho, const cmat& sigma,
                                 double epsilon);

// Overlap with the canonical maximally entangled state on a d x d split
// (d inferred from the matrix size).
double singlet_fraction(const cmat& rho);

// Max over maximally entangled states (U (x) I)|Psi+> of the overlap,
// estimated by seeded multi-start polar-decomposition ascent.  The returned
// value is a certified lower bound on the true maximum and is always >=
// singlet_fraction(rho) (the identity is one of the starting points).
double fully_entangled_fraction(const cmat& rho, int restarts = 16,
                                std::uint64_t seed = 0);

}  // namespace preserva
