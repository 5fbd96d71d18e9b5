// preserva: scalar distinguishability functionals.
// SPDX-License-Identifier: MIT

#include "preserva/divergences.hpp"

#include <cmath>
#include <limits>

#include "preserva/errors.hpp"
#include "preserva/rng.hpp"

namespace preserva {

namespace {

constexpr double kSupportLeakTol = 1e-9;

void require_same_square(const cmat& a, const cmat& b, const char* who) {
  if (!is_square(a) || !is_square(b)) {
    throw err_not_square(who);
  }
  if (a.rows() != b.rows()) {
    throw err_dimension_mismatch(std::string(who) + ": operands are " +
                                 std::to_string(a.rows()) + "x" +
                                 std::to_string(a.cols()) + " and " +
                                 std::to_string(b.rows()) + "x" +
                                 std::to_string(b.cols()));
  }
}

// Side dimension of a bipartite d x d system, or throw.
int bipartite_side(const cmat& m, const char* who) {
  if (!is_square(m)) {
    throw validation_error("NotBipartiteSquare",
                           std::string(who) + ": matrix is not square");
  }
  const int n = static_cast<int>(m.rows());
  const int d = static_cast<int>(std::llround(std::sqrt(double(n))));
  if (d < 1 || d * d != n) {
    throw validation_error(
        "NotBipartiteSquare",
        std::string(who) + ": dimension " + std::to_string(n) +
            " is not a perfect square, cannot infer a d x d split");
  }
  return d;
}

double min_eigenvalue(const cmat& sigma) {
  return herm_eig(sigma).values(0);
}

}  // namespace

double ExtendedReal::to_double() const {
  return is_infinite ? std::numeric_limits<double>::infinity() : bits;
}

ExtendedReal d_max(const cmat& rho, const cmat& sigma) {
  require_same_square(rho, sigma, "d_max");
  const EigDecomposition es = herm_eig(sigma);
  const double top = es.values.size() ? es.values(es.values.size() - 1) : 0.0;
  const double cutoff = kSpectralCutoff * std::max(1.0, top);

  // Split sigma's eigenbasis into support and kernel.
  cmat b = cmat::Zero(sigma.rows(), sigma.cols());  // sigma^{-1/2} on support
  cmat kernel_proj = cmat::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const cvec v = es.vectors.col(k);
    if (es.values(k) > cutoff) {
      b += (1.0 / std::sqrt(es.values(k))) * v * v.adjoint();
    } else {
      kernel_proj += v * v.adjoint();
    }
  }

  const double leak = std::abs((kernel_proj * rho * kernel_proj).trace());
  if (leak > kSupportLeakTol) {
    return ExtendedReal::infinite();
  }
  const cmat conj_rho = b * rho * b;
  const double lam = eig_max(herm_part(conj_rho));
  if (lam <= 0.0) {
    // rho vanishes on sigma's support; by convention the divergence of the
    // zero operator is -infinity, but density inputs never hit this branch.
    return ExtendedReal::finite(-std::numeric_limits<double>::infinity());
  }
  return ExtendedReal::finite(std::log2(lam));
}

double trace_distance(const cmat& rho, const cmat& sigma) {
  require_same_square(rho, sigma, "trace_distance");
  return 0.5 * trace_norm(rho - sigma);
}

ContinuityGap d_max_continuity_gap(const cmat& rho, const cmat& rho_prime,
                                   const cmat& sigma) {
  require_same_square(rho, sigma, "d_max_continuity_gap");
  require_same_square(rho_prime, sigma, "d_max_continuity_gap");
  const double p_min = min_eigenvalue(sigma);
  if (p_min <= 1e-12) {
    throw validation_error("SigmaSingular",
                           "d_max_continuity_gap: reference state has minimum "
                           "eigenvalue " +
                               std::to_string(p_min) +
                               "; the continuity bound needs full rank");
  }
  const ExtendedReal d0 = d_max(rho, sigma);
  const ExtendedReal d1 = d_max(rho_prime, sigma);
  // Full-rank sigma makes both values finite.
  const double lhs = std::abs(std::exp2(d1.bits) - std::exp2(d0.bits));
  const double bound = trace_norm(rho - rho_prime) / p_min;
  return {lhs, bound};
}

SmoothBounds smooth_d_max_bounds(const cmat& rho, const cmat& sigma,
                                 double epsilon) {
  require_same_square(rho, sigma, "smooth_d_max_bounds");
  if (!(epsilon >= 0.0) || epsilon >= 1.0) {
    throw err_bad_parameter("smooth_d_max_bounds: epsilon must lie in [0,1), got " +
                            std::to_string(epsilon));
  }
  const double p_min = min_eigenvalue(sigma);
  if (p_min <= 1e-12) {
    throw validation_error("SigmaSingular",
                           "smooth_d_max_bounds: reference state has minimum "
                           "eigenvalue " +
                               std::to_string(p_min) +
                               "; the smoothing bracket needs full rank");
  }
  const ExtendedReal d0 = d_max(rho, sigma);
  const double upper = d0.bits;
  // Any rho' with 0.5*||rho - rho'||_1 <= epsilon satisfies
  // 2^{D_max(rho')} >= 2^{D_max(rho)} - 2*epsilon/p_min.
  const double scale = std::exp2(upper) - 2.0 * epsilon / p_min;
  const double lower = scale > 0.0
                           ? std::log2(scale)
                           : -std::numeric_limits<double>::infinity();
  return {std::min(lower, upper), upper, epsilon};
}

double singlet_fraction(const cmat& rho) {
  const int d = bipartite_side(rho, "singlet_fraction");
  // <Psi+| rho |Psi+> with |Psi+> = (1/sqrt d) sum_i |ii>.
  complex acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      acc += rho(i * d + i, j * d + j);
    }
  }
  return acc.real() / d;
}

double fully_entangled_fraction(const cmat& rho, int restarts,
                                std::uint64_t seed) {
  const int d = bipartite_side(rho, "fully_entangled_fraction");
  if (restarts < 1) {
    throw err_bad_parameter("fully_entangled_fraction: restarts must be >= 1");
  }

  // Overlap with (U (x) I)|Psi+> equals <vec(U)| rho |vec(U)> / d under the
  // row-major vec convention, so we ascend over unitaries by repeated
  // linearization: U <- polar unitary factor of mat(rho vec(U)).
  const auto overlap = [&](const cmat& u) {
    const cvec v = vec_rm(u);
    return std::real(v.dot(rho * v)) / d;  // dot conjugates the left factor
  };
  const auto polar_unitary = [&](const cmat& m) {
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return cmat(svd.matrixU() * svd.matrixV().adjoint());
  };

  Rng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    cmat u = (r == 0) ? cmat(cmat::Identity(d, d)) : rng.haar_unitary(d);
    double value = overlap(u);
    best = std::max(best, value);
    for (int it = 0; it < 200; ++it) {
      const cvec w = rho * vec_rm(u);
      const cmat m = unvec_rm(w, d, d);
      if (m.norm() < 1e-300) {
        break;  // rho annihilates the current direction; restart decides
      }
      u = polar_unitary(m);
      const double next = overlap(u);
      best = std::max(best, next);
      if (next - value <= 1e-13) {
        break;
      }
      value = next;
    }
  }
  return best;
}

}  // namespace preserva
