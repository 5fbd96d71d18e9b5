// preserva: completely bounded trace norm via interior-point LMI solves.
// SPDX-License-Identifier: MIT

#include "preserva/diamond.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "preserva/errors.hpp"
#include "preserva/quantum.hpp"
#include "preserva/rng.hpp"
#include "preserva/sdp.hpp"

namespace preserva {

namespace {

constexpr int kDiamondDimCap = 256;

void validate_choi_pair(const cmat& j1, const cmat& j2, int d_in, int d_out,
                        const char* who) {
  if (d_in < 1 || d_out < 1) {
    throw err_bad_parameter(std::string(who) + ": dimensions must be >= 1");
  }
  const Eigen::Index expect = Eigen::Index(d_in) * d_out;
  if (j1.rows() != expect || j1.cols() != expect || j2.rows() != expect ||
      j2.cols() != expect) {
    throw err_dimension_mismatch(
        std::string(who) + ": Choi matrices must be " +
        std::to_string(expect) + "x" + std::to_string(expect));
  }
  if (!is_hermitian(j1, 1e-8) || !is_hermitian(j2, 1e-8)) {
    throw err_not_hermitian(std::string(who) + ": Choi operator");
  }
}

// (Delta (x) id_anc) applied to |psi><psi|, with Delta given by its
// trace-normalized Choi difference jd on (out (x) in).
cmat apply_difference_with_ancilla(const cmat& jd, int d_in, int d_out,
                                   int d_anc, const cvec& psi) {
  const cmat t = unvec_rm(psi, d_in, d_anc);
  cmat x = cmat::Zero(Eigen::Index(d_out) * d_anc, Eigen::Index(d_out) * d_anc);
  for (int o = 0; o < d_out; ++o) {
    for (int op = 0; op < d_out; ++op) {
      for (int a = 0; a < d_anc; ++a) {
        for (int b = 0; b < d_anc; ++b) {
          complex acc = 0.0;
          for (int i = 0; i < d_in; ++i) {
            for (int j = 0; j < d_in; ++j) {
              acc += jd(Eigen::Index(o) * d_in + i, Eigen::Index(op) * d_in + j) *
                     t(i, a) * std::conj(t(j, b));
            }
          }
          x(Eigen::Index(o) * d_anc + a, Eigen::Index(op) * d_anc + b) =
              double(d_in) * acc;
        }
      }
    }
  }
  return x;
}

// Adjoint of the same map applied to a Hermitian S on (out (x) anc).
cmat apply_adjoint_with_ancilla(const cmat& jd, int d_in, int d_out, int d_anc,
                                const cmat& s) {
  cmat w = cmat::Zero(Eigen::Index(d_in) * d_anc, Eigen::Index(d_in) * d_anc);
  for (int i = 0; i < d_in; ++i) {
    for (int j = 0; j < d_in; ++j) {
      for (int a = 0; a < d_anc; ++a) {
        for (int b = 0; b < d_anc; ++b) {
          complex acc = 0.0;
          for (int o = 0; o < d_out; ++o) {
            for (int op = 0; op < d_out; ++op) {
              acc += std::conj(jd(Eigen::Index(o) * d_in + i,
                                  Eigen::Index(op) * d_in + j)) *
                     s(Eigen::Index(o) * d_anc + a, Eigen::Index(op) * d_anc + b);
            }
          }
          w(Eigen::Index(i) * d_anc + a, Eigen::Index(j) * d_anc + b) =
              double(d_in) * acc;
        }
      }
    }
  }
  return w;
}

double ascent_lower_bound(const cmat& jd, int d_in, int d_out, int d_anc,
                          int restarts, std::uint64_t seed) {
  Rng rng(seed);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    cvec psi;
    if (r == 0 && d_anc == d_in) {
      psi = max_entangled_ket(d_in);
    } else if (r == 0) {
      psi = cvec::Zero(Eigen::Index(d_in) * d_anc);
      psi(0) = 1.0;
    } else {
      psi = rng.haar_ket(d_in * d_anc);
    }
    double value = 0.0;
    for (int it = 0; it < 100; ++it) {
      const cmat x = apply_difference_with_ancilla(jd, d_in, d_out, d_anc, psi);
      const EigDecomposition ex = herm_eig(x);
      double f = 0.0;
      cmat sign_op = cmat::Zero(x.rows(), x.cols());
      for (Eigen::Index k = 0; k < ex.values.size(); ++k) {
        f += std::abs(ex.values(k));
        const double sgn = ex.values(k) >= 0.0 ? 1.0 : -1.0;
        sign_op += sgn * ex.vectors.col(k) * ex.vectors.col(k).adjoint();
      }
      best = std::max(best, f);
      const cmat w = apply_adjoint_with_ancilla(jd, d_in, d_out, d_anc, sign_op);
      const EigDecomposition ew = herm_eig(herm_part(w));
      psi = ew.vectors.col(ew.values.size() - 1);
      if (f - value <= 1e-12) break;
      value = f;
    }
  }
  return best;
}

// Triangular index of the symmetric-coordinate variable for (e <= f).
inline int sym_index(int n, int e, int f) {
  return e * n - (e * (e - 1)) / 2 + (f - e);
}

}  // namespace

DiamondResult diamond_norm(const cmat& j1, const cmat& j2, int d_in, int d_out,
                           double tolerance) {
  validate_choi_pair(j1, j2, d_in, d_out, "diamond_norm");
  const int dd = d_in * d_out;
  if (dd > kDiamondDimCap) {
    throw validation_error(
        "DimensionTooLarge",
        "diamond_norm: d_in*d_out = " + std::to_string(dd) +
            " exceeds the interior-point ceiling of " +
            std::to_string(kDiamondDimCap));
  }
  const cmat delta = double(d_in) * (j1 - j2);  // unnormalized difference
  if (delta.norm() <= 1e-12) {
    return {0.0, 0.0, 0.0};
  }

  // Real reduction: a real symmetric difference admits a real optimal Y by
  // conjugation averaging; otherwise embed C^(D x D) Hermitian matrices as
  // real symmetric 2D x 2D ones, which preserves the optimal value.
  const bool is_real = delta.imag().cwiseAbs().maxCoeff() <= 1e-13;
  const int g = is_real ? 1 : 2;
  const int n = g * dd;
  rmat dr(n, n);
  if (is_real) {
    dr = 0.5 * (delta.real() + delta.real().transpose());
  } else {
    const rmat re = 0.5 * (delta.real() + delta.real().transpose());
    const rmat im = 0.5 * (delta.imag() - delta.imag().transpose());
    dr.topLeftCorner(dd, dd) = re;
    dr.topRightCorner(dd, dd) = -im;
    dr.bottomLeftCorner(dd, dd) = im;
    dr.bottomRightCorner(dd, dd) = re;
  }

  // Variables: symmetric coordinates of Y (n(n+1)/2), then t.
  const int ny = n * (n + 1) / 2;
  const int m = ny + 1;
  const int t_var = ny;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int marg_dim = g * d_in;

  PsdProgram prog;
  prog.objective = rvec::Zero(m);
  prog.objective(t_var) = 1.0;
  prog.tolerance = tolerance;
  prog.blocks.resize(3);

  PsdBlock& lo = prog.blocks[0];   // Y - Delta >= 0
  PsdBlock& hi = prog.blocks[1];   // Y + Delta >= 0
  PsdBlock& marg = prog.blocks[2]; // t*I - tr_out(Y) >= 0
  lo.dim = n;
  hi.dim = n;
  marg.dim = marg_dim;
  lo.f0 = -dr;
  hi.f0 = dr;
  marg.f0 = rmat::Zero(marg_dim, marg_dim);
  lo.coeff.assign(m, {});
  hi.coeff.assign(m, {});
  marg.coeff.assign(m, {});

  // Flat index e = s*dd + o*d_in + i; the marginal keeps (s, i).
  const auto split = [&](int e, int* s, int* o, int* i) {
    *s = e / dd;
    const int rem = e % dd;
    *o = rem / d_in;
    *i = rem % d_in;
  };
  for (int e = 0; e < n; ++e) {
    int se, oe, ie;
    split(e, &se, &oe, &ie);
    for (int f = e; f < n; ++f) {
      int sf, of, jf;
      split(f, &sf, &of, &jf);
      const int a = sym_index(n, e, f);
      const double w = (e == f) ? 1.0 : inv_sqrt2;
      lo.coeff[a] = {{e, f, w}};
      hi.coeff[a] = {{e, f, w}};
      if (oe == of) {
        const int ue = se * d_in + ie;
        const int uf = sf * d_in + jf;
        marg.coeff[a] = {{std::min(ue, uf), std::max(ue, uf), -w}};
      }
    }
  }
  for (int u = 0; u < marg_dim; ++u) {
    marg.coeff[t_var].push_back({u, u, 1.0});
  }

  const double s0 = dr.norm() + 1.0;
  prog.slater = rvec::Zero(m);
  for (int e = 0; e < n; ++e) {
    prog.slater(sym_index(n, e, e)) = s0;
  }
  prog.slater(t_var) = s0 * d_out + 1.0;

  const PsdSolution sol = solve_psd_program(prog);
  DiamondResult out;
  out.value = std::max(sol.value, 0.0);
  out.primal_dual_gap = sol.gap;
  out.lower_bound_variational = diamond_lower_bound(j1, j2, d_in, d_out);
  return out;
}

double diamond_lower_bound(const cmat& j1, const cmat& j2, int d_in, int d_out,
                           int restarts, std::uint64_t seed) {
  validate_choi_pair(j1, j2, d_in, d_out, "diamond_lower_bound");
  if (restarts < 1) {
    throw err_bad_parameter("diamond_lower_bound: restarts must be >= 1");
  }
  return ascent_lower_bound(j1 - j2, d_in, d_out, d_in, restarts, seed);
}

double induced_trace_norm_lower_bound(const cmat& j1, const cmat& j2,
                                      int d_in, int d_out, int restarts,
                                      std::uint64_t seed) {
  validate_choi_pair(j1, j2, d_in, d_out, "induced_trace_norm_lower_bound");
  if (restarts < 1) {
    throw err_bad_parameter(
        "induced_trace_norm_lower_bound: restarts must be >= 1");
  }
  return ascent_lower_bound(j1 - j2, d_in, d_out, 1, restarts, seed);
}

double diamond_distance_unitaries(const cmat& u, const cmat& v) {
  if (!is_square(u) || !is_square(v) || u.rows() != v.rows()) {
    throw err_dimension_mismatch(
        "diamond_distance_unitaries: operands must be square with equal size");
  }
  const int d = static_cast<int>(u.rows());
  const cmat w = u.adjoint() * v;
  if ((w * w.adjoint() - cmat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8) {
    throw err_bad_parameter(
        "diamond_distance_unitaries: inputs are not unitary");
  }
  Eigen::ComplexEigenSolver<cmat> es(w);
  std::vector<double> angles(d);
  for (int k = 0; k < d; ++k) {
    angles[k] = std::arg(es.eigenvalues()(k));
  }
  std::sort(angles.begin(), angles.end());
  // nu = distance from the origin to the convex hull of the eigenvalues; for
  // points on the unit circle this is cos of half the arc they span, or 0
  // when no angular gap exceeds pi (origin inside the hull).
  double gap_max = 2.0 * M_PI - (angles.back() - angles.front());
  for (int k = 1; k < d; ++k) {
    gap_max = std::max(gap_max, angles[k] - angles[k - 1]);
  }
  const double nu = gap_max > M_PI ? std::cos((2.0 * M_PI - gap_max) / 2.0)
                                   : 0.0;
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - nu * nu));
}

}  // namespace preserva
