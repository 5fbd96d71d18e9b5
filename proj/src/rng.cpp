// preserva: deterministic random sources.
// SPDX-License-Identifier: MIT

#include "preserva/rng.hpp"

#include <cmath>

#include <Eigen/QR>

namespace preserva {

namespace {

// SplitMix64 finalizer; used to derive well-separated child seeds.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw err_bad_parameter("uniform_int: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

double Rng::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_normal_ = r * std::sin(kTwoPi * u2);
  have_cached_normal_ = true;
  return r * std::cos(kTwoPi * u2);
}

complex Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return complex(re, im) / std::sqrt(2.0);
}

cmat Rng::ginibre(int rows, int cols) {
  cmat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cnormal();
  return g;
}

cmat Rng::haar_unitary(int d) {
  const cmat g = ginibre(d, d);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  const cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Multiplying each column by the phase of the matching R diagonal removes
  // the QR gauge freedom and makes Q exactly Haar distributed.
  for (int k = 0; k < d; ++k) {
    const complex rkk = r(k, k);
    const double a = std::abs(rkk);
    q.col(k) *= (a > 0.0) ? rkk / a : complex(1.0, 0.0);
  }
  return q;
}

cvec Rng::haar_ket(int d) {
  cvec v(d);
  for (int i = 0; i < d; ++i) v(i) = cnormal();
  const double n = v.norm();
  if (n == 0.0) return haar_ket(d);
  return v / n;
}

rvec Rng::simplex_point(int k) {
  rvec w(k);
  for (int i = 0; i < k; ++i) w(i) = -std::log(uniform_pos());
  return w / w.sum();
}

Rng Rng::spawn(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51AFE1D5ULL)));
}

}  // namespace preserva
