// preserva: dense linear-algebra kernel tests.
// SPDX-License-Identifier: MIT

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "preserva/errors.hpp"
#include "preserva/linalg.hpp"
#include "preserva/rng.hpp"

using namespace preserva;

namespace {

cmat random_hermitian(Rng& rng, int d) {
  const cmat g = rng.ginibre(d, d);
  return herm_part(g);
}

cmat random_density(Rng& rng, int d) {
  const cmat g = rng.ginibre(d, d);
  cmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// Independent four-index contraction oracle for the partial trace, written
// directly from the definition (no shared code with the library kernel).
cmat partial_trace_oracle(const cmat& m, const std::vector<int>& dims,
                          const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> stride(dims.size());
  int total = 1;
  for (int k = n - 1; k >= 0; --k) {
    stride[static_cast<size_t>(k)] = total;
    total *= dims[static_cast<size_t>(k)];
  }
  std::vector<int> traced;
  for (int s = 0; s < n; ++s) {
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  }
  int keep_dim = 1;
  for (int k : keep) keep_dim *= dims[static_cast<size_t>(k)];

  const auto digits_of = [&](int flat) {
    std::vector<int> dg(dims.size());
    for (int s = 0; s < n; ++s) {
      dg[static_cast<size_t>(s)] =
          (flat / stride[static_cast<size_t>(s)]) % dims[static_cast<size_t>(s)];
    }
    return dg;
  };
  const auto kept_index = [&](const std::vector<int>& dg) {
    int idx = 0;
    for (int k : keep) idx = idx * dims[static_cast<size_t>(k)] + dg[static_cast<size_t>(k)];
    return idx;
  };

  cmat out = cmat::Zero(keep_dim, keep_dim);
  for (int r = 0; r < total; ++r) {
    const auto dr = digits_of(r);
    for (int c = 0; c < total; ++c) {
      const auto dc = digits_of(c);
      bool diag = true;
      for (int t : traced) {
        if (dr[static_cast<size_t>(t)] != dc[static_cast<size_t>(t)]) {
          diag = false;
          break;
        }
      }
      if (diag) out(kept_index(dr), kept_index(dc)) += m(r, c);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("kron matches a hand-expanded 2x2 example") {
  cmat a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << complex(0.0, 1.0), 0.0, 0.0, complex(0.0, -1.0);
  const cmat k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(std::abs(k(0, 0) - complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(k(1, 1) - complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(k(0, 2) - complex(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(k(3, 3) - complex(0.0, -4.0)) < 1e-15);
  CHECK(std::abs(k(2, 0) - complex(0.0, 3.0)) < 1e-15);
}

TEST_CASE("kron is multiplicative: (A (x) B)(C (x) D) = AC (x) BD") {
  Rng rng(11);
  const cmat a = rng.ginibre(2, 3), b = rng.ginibre(3, 2);
  const cmat c = rng.ginibre(3, 2), d = rng.ginibre(2, 3);
  const cmat lhs = cmat(kron(a, b)) * cmat(kron(c, d));
  const cmat rhs = kron(cmat(a * c), cmat(b * d));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("herm_eig returns ascending eigenvalues and reconstructs") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + rng.uniform_int(5);
    const cmat a = random_hermitian(rng, d);
    const EigDecomposition e = herm_eig(a);
    for (Eigen::Index i = 0; i + 1 < e.values.size(); ++i) {
      CHECK(e.values(i) <= e.values(i + 1) + 1e-12);
    }
    const cmat rebuilt =
        e.vectors * e.values.asDiagonal().toDenseMatrix().cast<complex>() *
        e.vectors.adjoint();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-10);
    // Orthonormality.
    const cmat gram = e.vectors.adjoint() * e.vectors;
    CHECK((gram - cmat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("herm_eig fixes the eigenvector phase deterministically") {
  Rng rng(13);
  const cmat a = random_hermitian(rng, 4);
  const EigDecomposition e1 = herm_eig(a);
  const EigDecomposition e2 = herm_eig(cmat(a));  // fresh copy
  CHECK((e1.vectors - e2.vectors).cwiseAbs().maxCoeff() == 0.0);
  // First sizable component of each eigenvector is real and positive.
  for (Eigen::Index c = 0; c < e1.vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < e1.vectors.rows(); ++r) {
      const complex v = e1.vectors(r, c);
      if (std::abs(v) > 1e-10) {
        CHECK(std::abs(v.imag()) < 1e-12);
        CHECK(v.real() > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  cmat a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(herm_eig(a), validation_error);
}

TEST_CASE("trace_norm equals the sum of singular values") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const cmat g = rng.ginibre(4, 4);
    Eigen::JacobiSVD<cmat> svd(g);
    CHECK(trace_norm(g) ==
          doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
  }
  // Hermitian case: sum of |eigenvalues|.
  const cmat h = random_hermitian(rng, 5);
  const EigDecomposition e = herm_eig(h);
  CHECK(trace_norm(h) ==
        doctest::Approx(e.values.cwiseAbs().sum()).epsilon(1e-10));
}

TEST_CASE("op_norm is the largest singular value") {
  Rng rng(19);
  const cmat g = rng.ginibre(3, 5);
  Eigen::JacobiSVD<cmat> svd(g);
  CHECK(op_norm(g) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
}

TEST_CASE("sqrt_psd squares back to the input") {
  Rng rng(23);
  const cmat rho = random_density(rng, 4);
  const cmat s = sqrt_psd(rho);
  CHECK((s * s - rho).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(is_psd(s, 1e-10));
}

TEST_CASE("inv_sqrt_on_support inverts on the support and annihilates the kernel") {
  Rng rng(29);
  // Rank-2 PSD matrix in dimension 4.
  const cmat g = rng.ginibre(4, 2);
  const cmat a = g * g.adjoint();
  const cmat b = inv_sqrt_on_support(a);
  const cmat p = support_projector(a);
  // b * a * b should equal the support projector.
  CHECK((b * a * b - p).cwiseAbs().maxCoeff() < 1e-8);
  // b vanishes on the kernel: b * (I - p) = 0.
  CHECK((b * (cmat::Identity(4, 4) - p)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("inv_sqrt_on_support rejects matrices with negative spectrum") {
  cmat a = -cmat::Identity(2, 2);
  CHECK_THROWS_AS(inv_sqrt_on_support(a), validation_error);
}

TEST_CASE("partial_trace matches the four-index contraction oracle") {
  Rng rng(31);
  const std::vector<std::vector<int>> shapes = {{2, 3}, {3, 2}, {2, 2, 2}, {2, 3, 2}};
  for (const auto& dims : shapes) {
    int total = 1;
    for (int d : dims) total *= d;
    const cmat m = rng.ginibre(total, total);
    for (int keep_mask = 1; keep_mask < (1 << dims.size()) - 1; ++keep_mask) {
      std::vector<int> keep;
      for (size_t s = 0; s < dims.size(); ++s) {
        if (keep_mask & (1 << s)) keep.push_back(static_cast<int>(s));
      }
      const cmat lhs = partial_trace(m, dims, keep);
      const cmat rhs = partial_trace_oracle(m, dims, keep);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("partial_trace of a product state gives the marginal") {
  Rng rng(37);
  const cmat a = random_density(rng, 2);
  const cmat b = random_density(rng, 3);
  const cmat ab = kron(a, b);
  CHECK((partial_trace(ab, {2, 3}, {0}) - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(ab, {2, 3}, {1}) - b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(partial_trace(ab, {2, 3}, {0}).trace().real() - 1.0) < 1e-12);
}

TEST_CASE("permute_systems relabels tensor factors") {
  Rng rng(41);
  const cmat a = random_density(rng, 2);
  const cmat b = random_density(rng, 3);
  const cmat ab = kron(a, b);
  const cmat ba = permute_systems(ab, {2, 3}, {1, 0});
  CHECK((ba - kron(b, a)).cwiseAbs().maxCoeff() < 1e-12);
  // Round trip.
  const cmat back = permute_systems(ba, {3, 2}, {1, 0});
  CHECK((back - ab).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("permutation_unitary conjugation agrees with permute_systems") {
  Rng rng(43);
  const std::vector<int> dims = {2, 2, 3};
  const std::vector<int> perm = {2, 0, 1};
  const cmat m = rng.ginibre(12, 12);
  const cmat u = permutation_unitary(dims, perm);
  CHECK((u * u.adjoint() - cmat::Identity(12, 12)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((u * m * u.adjoint() - permute_systems(m, dims, perm))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("permutation_unitary validates its permutation") {
  CHECK_THROWS_AS(permutation_unitary({2, 2}, {0, 0}), validation_error);
  CHECK_THROWS_AS(permutation_unitary({2, 2}, {0}), validation_error);
}

TEST_CASE("vec_rm and unvec_rm round trip row-major") {
  cmat m(2, 3);
  m << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  const cvec v = vec_rm(m);
  CHECK(v(0) == complex(1.0));
  CHECK(v(2) == complex(3.0));
  CHECK(v(3) == complex(4.0));
  CHECK((unvec_rm(v, 2, 3) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eig_max and eig_min bracket the spectrum") {
  Rng rng(47);
  const cmat h = random_hermitian(rng, 5);
  const EigDecomposition e = herm_eig(h);
  CHECK(eig_max(h) == doctest::Approx(e.values(4)).epsilon(1e-12));
  CHECK(eig_min(h) == doctest::Approx(e.values(0)).epsilon(1e-12));
}

TEST_CASE("is_psd accepts tiny negative noise and rejects real negativity") {
  cmat a = cmat::Identity(2, 2);
  a(0, 0) = -1e-12;
  CHECK(is_psd(a));
  a(0, 0) = -1e-6;
  CHECK(!is_psd(a));
}

TEST_CASE("rng determinism: same seed, same stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
  Rng c = a.spawn(5), d = b.spawn(5);
  for (int i = 0; i < 100; ++i) REQUIRE(c.next_u64() == d.next_u64());
  // Distinct streams decorrelate.
  Rng e = a.spawn(6);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || (d.next_u64() != e.next_u64());
  CHECK(differs);
}

TEST_CASE("haar_unitary is unitary; haar_ket is normalized") {
  Rng rng(53);
  const cmat u = rng.haar_unitary(4);
  CHECK((u * u.adjoint() - cmat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  const cvec k = rng.haar_ket(5);
  CHECK(std::abs(k.norm() - 1.0) < 1e-12);
}

TEST_CASE("simplex_point is a probability vector") {
  Rng rng(59);
  const rvec p = rng.simplex_point(6);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    CHECK(p(i) >= 0.0);
    sum += p(i);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal moments are sane") {
  Rng rng(61);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);
}
