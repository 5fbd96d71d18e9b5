// preserva: dense interior-point solver for block LMI programs.
// SPDX-License-Identifier: MIT

#include "preserva/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "preserva/errors.hpp"

namespace preserva {

namespace {

// S_b(x) = F0_b + sum_i x_i F_i_b, densely assembled.
rmat assemble_block(const PsdBlock& block, const rvec& x) {
  rmat s = block.f0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    if (xi == 0.0) continue;
    for (const SymEntry& e : block.coeff[i]) {
      s(e.r, e.c) += xi * e.v;
      if (e.r != e.c) s(e.c, e.r) += xi * e.v;
    }
  }
  return s;
}

// tr(M F_i) for sparse symmetric F_i and dense symmetric M.
double sparse_inner(const rmat& m, const SparseSym& f) {
  double acc = 0.0;
  for (const SymEntry& e : f) {
    acc += (e.r == e.c) ? e.v * m(e.r, e.r) : 2.0 * e.v * m(e.r, e.c);
  }
  return acc;
}

// tr(M F_i M F_j) for sparse symmetric F_i, F_j and dense symmetric M.
// With E_rc the unit matrix and entries understood as v*(E_rc + E_cr) off the
// diagonal, the trace reduces to products of entries of M.
double sparse_quad(const rmat& m, const SparseSym& fi, const SparseSym& fj) {
  double acc = 0.0;
  for (const SymEntry& a : fi) {
    for (const SymEntry& b : fj) {
      double k;
      if (a.r == a.c && b.r == b.c) {
        const double mrs = m(a.r, b.r);
        k = mrs * mrs;
      } else if (a.r == a.c) {
        k = 2.0 * m(a.r, b.r) * m(a.r, b.c);
      } else if (b.r == b.c) {
        k = 2.0 * m(a.r, b.r) * m(a.c, b.r);
      } else {
        k = 2.0 * (m(a.r, b.c) * m(a.c, b.r) + m(a.r, b.r) * m(a.c, b.c));
      }
      acc += a.v * b.v * k;
    }
  }
  return acc;
}

struct BlockState {
  rmat s;        // S_b(x)
  rmat inv;      // S_b(x)^{-1}
  double logdet = 0.0;
};

// Cholesky-based refresh; returns false when S_b(x) is not positive definite.
bool refresh_block(const PsdBlock& block, const rvec& x, BlockState* st) {
  st->s = assemble_block(block, x);
  Eigen::LLT<rmat> llt(st->s);
  if (llt.info() != Eigen::Success) return false;
  const rmat l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) {
    const double dk = l(k, k);
    if (!(dk > 0.0)) return false;
    logdet += std::log(dk);
  }
  st->logdet = 2.0 * logdet;
  st->inv = llt.solve(rmat::Identity(block.dim, block.dim));
  return true;
}

}  // namespace

PsdSolution solve_psd_program(const PsdProgram& p) {
  const int m = static_cast<int>(p.objective.size());
  if (m <= 0) {
    throw err_bad_parameter("solve_psd_program: empty variable vector");
  }
  if (p.slater.size() != m) {
    throw err_bad_parameter(
        "solve_psd_program: slater point has wrong dimension");
  }
  if (p.blocks.empty()) {
    throw err_bad_parameter("solve_psd_program: no constraint blocks");
  }
  int total_dim = 0;
  for (const PsdBlock& b : p.blocks) {
    if (b.dim <= 0 || b.f0.rows() != b.dim || b.f0.cols() != b.dim) {
      throw err_bad_parameter("solve_psd_program: malformed block");
    }
    if (static_cast<int>(b.coeff.size()) != m) {
      throw err_bad_parameter(
          "solve_psd_program: block coefficient count does not match the "
          "variable count");
    }
    total_dim += b.dim;
  }
  const double tol = p.tolerance > 0 ? p.tolerance : 1e-7;

  const int nblocks = static_cast<int>(p.blocks.size());
  rvec x = p.slater;
  std::vector<BlockState> st(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    if (!refresh_block(p.blocks[b], x, &st[b])) {
      throw solver_error("Infeasible",
                         "solve_psd_program: supplied starting point is not "
                         "strictly feasible (block " +
                             std::to_string(b) + " not positive definite)");
    }
  }

  // Per-variable list of blocks it actually touches, to skip empty work.
  std::vector<std::vector<int>> touching(m);
  for (int b = 0; b < nblocks; ++b) {
    for (int i = 0; i < m; ++i) {
      if (!p.blocks[b].coeff[i].empty()) touching[i].push_back(b);
    }
  }

  const auto barrier_value = [&](double mu) {
    double v = p.objective.dot(x) / mu;
    for (const BlockState& s : st) v -= s.logdet;
    return v;
  };

  // Best certified dual lower bound seen so far. Each Newton step supplies
  // one: with dS_b = sum_i dx_i F_i_b and decrement lambda = |dx|_H < 1, the
  // matrix Z_b = mu (S_b^{-1} - S_b^{-1} dS_b S_b^{-1}) is positive definite
  // and satisfies <F_i, Z> = c_i exactly, so
  //   c'x - mu (nu - <dS, S^{-1}>),  nu = total_dim,
  // is a valid lower bound on the optimum (gap <= mu (nu + lambda sqrt(nu))).
  double best_dual = -std::numeric_limits<double>::infinity();

  // Plug-in estimate c'x + sum_b <F0_b, mu S_b^{-1}>; only a fallback for the
  // rare exit that never produced a Newton-step certificate.
  const auto plug_in_gap = [&](double mu) {
    double g = p.objective.dot(x);
    for (int b = 0; b < nblocks; ++b) {
      g += mu * (p.blocks[b].f0.array() * st[b].inv.array()).sum();
    }
    return g;
  };

  double mu = 0.0;
  for (const BlockState& s : st) mu += s.s.trace();
  mu = std::max(mu / total_dim, 1.0);
  // Stage floor: one stage below the weight whose centered certificate is
  // already inside tol, so a certified exit exists even when the smallest-mu
  // centerings turn numerically stiff.
  const double mu_final = tol / (10.0 * total_dim);

  int newton_steps = 0;
  rvec grad(m);
  rvec slack_inner(m);  // slack_inner_i = sum_b <F_i_b, S_b^{-1}>
  rmat hess(m, m);
  rvec dx(m);
  bool final_phase = false;
  bool exit_dx_valid = false;  // dx belongs to the current x with lambda < 0.9

  const auto diverge = [&](const std::string& why) -> solver_divergence {
    const double primal = p.objective.dot(x);
    const double lower = std::isfinite(best_dual)
                             ? best_dual
                             : primal - mu * total_dim * 2.0;
    return solver_divergence("solve_psd_program: " + why, lower, primal);
  };

  while (true) {
    // Newton centering at the current barrier weight.
    bool accept_early = false;
    for (;;) {
      if (newton_steps >= p.max_newton) {
        if (p.objective.dot(x) - best_dual <= tol) {
          accept_early = true;  // already certified to target accuracy
          break;
        }
        throw diverge("Newton iteration cap reached before the duality gap "
                      "target; returning the best bracket seen");
      }
      // Gradient and Hessian of  c'x/mu - sum_b log det S_b(x).
      for (int i = 0; i < m; ++i) {
        double si = 0.0;
        for (int b : touching[i]) {
          si += sparse_inner(st[b].inv, p.blocks[b].coeff[i]);
        }
        slack_inner(i) = si;
        grad(i) = p.objective(i) / mu - si;
      }
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          double h = 0.0;
          for (int b : touching[i]) {
            if (p.blocks[b].coeff[j].empty()) continue;
            h += sparse_quad(st[b].inv, p.blocks[b].coeff[i],
                             p.blocks[b].coeff[j]);
          }
          hess(i, j) = h;
          hess(j, i) = h;
        }
      }
      Eigen::LLT<rmat> hllt(hess);
      if (hllt.info() != Eigen::Success) {
        const double ridge = 1e-12 * std::max(1.0, hess.trace() / m);
        hess.diagonal().array() += ridge;
        hllt.compute(hess);
        if (hllt.info() != Eigen::Success) {
          throw diverge("Newton system is not positive definite");
        }
      }
      dx = -hllt.solve(grad);
      const double decrement_sq = -grad.dot(dx);

      // Newton-step dual certificate (see best_dual above). lambda_sq uses
      // the assembled Hessian directly so an inexact solve only makes the
      // validity test more conservative.
      const double lambda_sq = dx.dot(hess * dx);
      exit_dx_valid = std::isfinite(lambda_sq) && lambda_sq <= 0.81;
      if (exit_dx_valid) {
        const double cert_gap = mu * (total_dim - dx.dot(slack_inner));
        best_dual = std::max(best_dual, p.objective.dot(x) - cert_gap);
      }
      if (p.objective.dot(x) - best_dual <= tol) {
        accept_early = true;  // certified inside tol, whatever the stage
        break;
      }
      if (decrement_sq <= 0.25) break;  // centered enough for this stage

      // Backtracking line search: keep strict feasibility, require descent.
      const double phi0 = barrier_value(mu);
      double alpha = 1.0;
      std::vector<BlockState> trial(nblocks);
      for (;;) {
        if (alpha < 1e-14) {
          // Roundoff can stall the search once the iterate is essentially
          // optimal; accept if the certified gap already meets the target.
          if (p.objective.dot(x) - best_dual <= tol) {
            accept_early = true;
            break;
          }
          throw diverge("line search stalled (step below 1e-14)");
        }
        const rvec xt = x + alpha * dx;
        bool ok = true;
        for (int b = 0; b < nblocks && ok; ++b) {
          ok = refresh_block(p.blocks[b], xt, &trial[b]);
        }
        if (ok) {
          double phi = p.objective.dot(xt) / mu;
          for (const BlockState& s : trial) phi -= s.logdet;
          if (phi <= phi0 - 1e-4 * alpha * decrement_sq) {
            x = xt;
            st = std::move(trial);
            trial.assign(nblocks, BlockState{});
            exit_dx_valid = false;  // dx no longer matches x
            break;
          }
        }
        alpha *= 0.5;
      }
      if (accept_early) break;
      ++newton_steps;
    }

    if (final_phase || accept_early) break;
    if (mu <= mu_final) {
      final_phase = true;  // one last centering pass at the stage floor
      continue;
    }
    mu = std::max(mu * 0.2, mu_final);
    if (mu <= mu_final) final_phase = true;
  }

  PsdSolution sol;
  sol.x = x;
  sol.value = p.objective.dot(x);
  sol.gap = std::isfinite(best_dual) ? std::max(sol.value - best_dual, 0.0)
                                     : std::max(plug_in_gap(mu), 0.0);
  sol.dual_value = sol.value - sol.gap;
  sol.newton_steps = newton_steps;
  sol.certificates.reserve(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    if (exit_dx_valid) {
      // Newton-corrected dual point: exactly equality-feasible, positive
      // definite because the decrement at the exit iterate is below one.
      rmat delta = rmat::Zero(p.blocks[b].dim, p.blocks[b].dim);
      for (int i = 0; i < m; ++i) {
        const double di = dx(i);
        if (di == 0.0) continue;
        for (const SymEntry& e : p.blocks[b].coeff[i]) {
          delta(e.r, e.c) += di * e.v;
          if (e.r != e.c) delta(e.c, e.r) += di * e.v;
        }
      }
      sol.certificates.push_back(mu *
                                 (st[b].inv - st[b].inv * delta * st[b].inv));
    } else {
      sol.certificates.push_back(mu * st[b].inv);
    }
  }
  return sol;
}

}  // namespace preserva
