// preserva: deterministic random sources.
// SPDX-License-Identifier: MIT
//
// All randomness flows through this class so that results are reproducible
// from a single seed across platforms and standard-library implementations.
// Only the raw bit stream of std::mt19937_64 is consumed (its output is fully
// specified); Gaussian variates use an explicit Box-Muller transform instead
// of std::normal_distribution, whose algorithm is implementation defined.

#pragma once

#include <cstdint>
#include <random>

#include "preserva/linalg.hpp"

namespace preserva {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  // Uniform in (0, 1] (safe as a log argument).
  double uniform_pos();
  // Uniform integer in {0, ..., n-1} via rejection sampling (unbiased).
  int uniform_int(int n);
  // Standard normal via Box-Muller; pairs are cached.
  double normal();
  // Standard complex normal, E|z|^2 = 1.
  complex cnormal();

  // Matrix of iid standard complex normals.
  cmat ginibre(int rows, int cols);
  // Haar-distributed unitary (QR of a Ginibre matrix with the R-diagonal
  // phase correction).
  cmat haar_unitary(int d);
  // Haar-distributed unit vector.
  cvec haar_ket(int d);
  // Probability vector uniform on the simplex (normalized exponentials).
  rvec simplex_point(int k);

  // Independent child stream; deterministic in (seed, stream index).
  Rng spawn(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace preserva
