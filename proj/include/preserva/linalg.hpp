// preserva: dense linear-algebra primitives shared by every module.
// SPDX-License-Identifier: MIT
//
// Conventions used throughout the library:
//   * Hermitian eigendecompositions return eigenvalues in ascending order and
//     fix each eigenvector's global phase deterministically (the first
//     component of modulus > 1e-10 is made real and positive).
//   * Spectral cutoffs are relative: an eigenvalue counts as zero when it is
//     below 1e-12 times the largest eigenvalue magnitude.
//   * Vectorization is row-major: vec(|a><b|) sits at index a*ncols + b.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "preserva/errors.hpp"

namespace preserva {

using complex = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// Default tolerances, in one place so tests and docs agree with the code.
// structural: exact algebraic identities (Hermiticity, trace preservation).
// derived:    quantities computed through an eigendecomposition or a few
//             compositions of exact steps.
// optimization: values produced by iterative solvers.
inline constexpr double kTolStructural = 1e-10;
inline constexpr double kTolDerived = 1e-9;
inline constexpr double kTolOptimization = 1e-7;
// Relative spectral cutoff for support/kernel decisions.
inline constexpr double kSpectralCutoff = 1e-12;

struct EigDecomposition {
  rvec values;   // ascending
  cmat vectors;  // columns, phase-fixed; values[k] pairs with vectors.col(k)
};

// ===========================================================================
// Structural helpers (templated, expression friendly)
// ===========================================================================

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = std::common_type_t<typename DerivedA::Scalar,
                                    typename DerivedB::Scalar>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
  return out;
}

template <typename Derived>
auto herm_part(const Eigen::MatrixBase<Derived>& a) {
  return ((a + a.adjoint()) / 2.0).eval();
}

inline bool is_square(const cmat& a) { return a.rows() == a.cols(); }

inline bool is_hermitian(const cmat& a, double tol = kTolStructural) {
  if (!is_square(a)) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Row-major vectorization and its inverse.
inline cvec vec_rm(const cmat& m) {
  cvec v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

inline cmat unvec_rm(const cvec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw err_dimension_mismatch("unvec_rm: vector length does not factor");
  cmat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

// ===========================================================================
// Spectral operations
// ===========================================================================

// Hermitian eigendecomposition with the library's ordering and phase
// conventions.  Throws NotSquare / NotHermitian.
EigDecomposition herm_eig(const cmat& a, double herm_tol = kTolStructural);

// Largest / smallest eigenvalue of a Hermitian matrix.
double eig_max(const cmat& a);
double eig_min(const cmat& a);

// Trace norm (sum of singular values; for Hermitian input, sum of |eig|).
double trace_norm(const cmat& a);

// Operator norm (largest singular value).
double op_norm(const cmat& a);

// Whether a Hermitian matrix is positive semidefinite up to `tol` (absolute,
// applied to the most negative eigenvalue).
bool is_psd(const cmat& a, double tol = kTolStructural);

// PSD square root; eigenvalues in [-tol, 0) are clamped to zero, anything
// more negative throws NotPSD.
cmat sqrt_psd(const cmat& a, double tol = kTolDerived);

// Inverse square root on the support.  Eigenvalues below
// rel_cutoff * max_eig are treated as kernel directions and mapped to zero.
cmat inv_sqrt_on_support(const cmat& a, double rel_cutoff = kSpectralCutoff);

// Orthogonal projector onto the support of a PSD matrix (same cutoff rule).
cmat support_projector(const cmat& a, double rel_cutoff = kSpectralCutoff);

// ===========================================================================
// Multi-system index plumbing
// ===========================================================================

// Partial trace of an operator on a tensor product of systems with the given
// dimensions, keeping the listed systems (0-based, strictly increasing).
cmat partial_trace(const cmat& m, const std::vector<int>& dims,
                   const std::vector<int>& keep);

// Reorder tensor factors: returns U m U^\dagger where U maps the old product
// basis to the new one in which slot k carries old system perm[k].
cmat permute_systems(const cmat& m, const std::vector<int>& dims,
                     const std::vector<int>& perm);

// Permutation unitary used by permute_systems (handy as a channel too).
cmat permutation_unitary(const std::vector<int>& dims,
                         const std::vector<int>& perm);

}  // namespace preserva
