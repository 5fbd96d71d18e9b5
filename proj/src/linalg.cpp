// preserva: dense linear-algebra primitives.
// SPDX-License-Identifier: MIT

#include "preserva/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace preserva {

namespace {

void require_square(const cmat& a, const char* who) {
  if (!is_square(a)) throw err_not_square(std::string(who) + ": matrix is not square");
}

void require_hermitian(const cmat& a, double tol, const char* who) {
  require_square(a, who);
  const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw err_not_hermitian(std::string(who) + ": anti-Hermitian part has max entry " +
                            std::to_string(dev));
}

// Multi-index <-> flat-index helpers for row-major tensor layouts.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[static_cast<size_t>(k)] = acc;
    acc *= dims[static_cast<size_t>(k)];
  }
  return s;
}

}  // namespace

// ===========================================================================
// Spectral operations
// ===========================================================================

EigDecomposition herm_eig(const cmat& a, double herm_tol) {
  require_hermitian(a, herm_tol, "herm_eig");
  Eigen::SelfAdjointEigenSolver<cmat> es(herm_part(a));
  if (es.info() != Eigen::Success)
    throw solver_error("SolverDivergence", "herm_eig: eigensolver failed to converge");
  EigDecomposition out;
  out.values = es.eigenvalues();  // Eigen returns ascending order already
  out.vectors = es.eigenvectors();
  // Deterministic global phase: first component of modulus > 1e-10 made real
  // and positive.
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      const complex c = out.vectors(i, k);
      if (std::abs(c) > 1e-10) {
        out.vectors.col(k) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }
  return out;
}

double eig_max(const cmat& a) { return herm_eig(a).values.maxCoeff(); }
double eig_min(const cmat& a) { return herm_eig(a).values.minCoeff(); }

double trace_norm(const cmat& a) {
  if (is_hermitian(a)) {
    return herm_eig(a).values.cwiseAbs().sum();
  }
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues().sum();
}

double op_norm(const cmat& a) {
  if (is_hermitian(a)) {
    return herm_eig(a).values.cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues().maxCoeff();
}

bool is_psd(const cmat& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  return herm_eig(a).values.minCoeff() >= -tol;
}

cmat sqrt_psd(const cmat& a, double tol) {
  EigDecomposition e = herm_eig(a);
  const double lo = e.values.minCoeff();
  if (lo < -tol)
    throw err_not_psd("sqrt_psd: most negative eigenvalue " + std::to_string(lo));
  rvec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

cmat inv_sqrt_on_support(const cmat& a, double rel_cutoff) {
  EigDecomposition e = herm_eig(a);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top == 0.0) return cmat::Zero(a.rows(), a.cols());
  const double cut = rel_cutoff * top;
  if (e.values.minCoeff() < -kTolDerived * std::max(1.0, top))
    throw err_not_psd("inv_sqrt_on_support: most negative eigenvalue " +
                      std::to_string(e.values.minCoeff()));
  rvec s = rvec::Zero(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k)
    if (e.values(k) > cut) s(k) = 1.0 / std::sqrt(e.values(k));
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

cmat support_projector(const cmat& a, double rel_cutoff) {
  EigDecomposition e = herm_eig(a);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top == 0.0) return cmat::Zero(a.rows(), a.cols());
  const double cut = rel_cutoff * top;
  cmat p = cmat::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < e.values.size(); ++k)
    if (e.values(k) > cut) p += e.vectors.col(k) * e.vectors.col(k).adjoint();
  return p;
}

// ===========================================================================
// Multi-system index plumbing
// ===========================================================================

cmat partial_trace(const cmat& m, const std::vector<int>& dims,
                   const std::vector<int>& keep) {
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
  if (m.rows() != total || m.cols() != total)
    throw err_dimension_mismatch("partial_trace: matrix size does not match product of dims");
  for (size_t i = 0; i + 1 < keep.size(); ++i)
    if (keep[i] >= keep[i + 1])
      throw err_bad_parameter("partial_trace: keep list must be strictly increasing");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw err_bad_parameter("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  const auto strides = strides_of(dims);
  int keep_dim = 1;
  for (int k : keep) keep_dim *= dims[static_cast<size_t>(k)];
  int traced_dim = 1;
  for (int t : traced) traced_dim *= dims[static_cast<size_t>(t)];

  // Flat index of a (keep multi-index, traced multi-index) pair.
  auto flat = [&](int keep_flat, int traced_flat) {
    int idx = 0;
    for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
      const int d = dims[static_cast<size_t>(keep[static_cast<size_t>(k)])];
      idx += (keep_flat % d) * strides[static_cast<size_t>(keep[static_cast<size_t>(k)])];
      keep_flat /= d;
    }
    for (int t = static_cast<int>(traced.size()) - 1; t >= 0; --t) {
      const int d = dims[static_cast<size_t>(traced[static_cast<size_t>(t)])];
      idx += (traced_flat % d) * strides[static_cast<size_t>(traced[static_cast<size_t>(t)])];
      traced_flat /= d;
    }
    return idx;
  };

  cmat out = cmat::Zero(keep_dim, keep_dim);
  for (int r = 0; r < keep_dim; ++r)
    for (int c = 0; c < keep_dim; ++c) {
      complex acc = 0.0;
      for (int t = 0; t < traced_dim; ++t) acc += m(flat(r, t), flat(c, t));
      out(r, c) = acc;
    }
  return out;
}

cmat permutation_unitary(const std::vector<int>& dims, const std::vector<int>& perm) {
  if (perm.size() != dims.size())
    throw err_bad_parameter("permutation_unitary: perm length must match dims length");
  std::vector<int> seen(dims.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(dims.size()) || seen[static_cast<size_t>(p)]++)
      throw err_bad_parameter("permutation_unitary: perm is not a permutation");
  }
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
  const auto old_strides = strides_of(dims);
  std::vector<int> new_dims(dims.size());
  for (size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[static_cast<size_t>(perm[k])];
  const auto new_strides = strides_of(new_dims);

  cmat u = cmat::Zero(total, total);
  for (int old_flat = 0; old_flat < total; ++old_flat) {
    // Decode the old multi-index, re-encode in the permuted slot order.
    int new_flat = 0;
    for (size_t slot = 0; slot < perm.size(); ++slot) {
      const int sys = perm[slot];
      const int digit = (old_flat / old_strides[static_cast<size_t>(sys)]) %
                        dims[static_cast<size_t>(sys)];
      new_flat += digit * new_strides[slot];
    }
    u(new_flat, old_flat) = 1.0;
  }
  return u;
}

cmat permute_systems(const cmat& m, const std::vector<int>& dims,
                     const std::vector<int>& perm) {
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
  if (m.rows() != total || m.cols() != total)
    throw err_dimension_mismatch("permute_systems: matrix size does not match product of dims");
  const cmat u = permutation_unitary(dims, perm);
  return u * m * u.adjoint();
}

}  // namespace preserva
