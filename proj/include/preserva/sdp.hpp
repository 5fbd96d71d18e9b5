// preserva: dense interior-point solver for block-diagonal linear matrix
// inequalities.
// SPDX-License-Identifier: MIT
//
// Solves   minimize    objective . x
//          subject to  F0_b + sum_i x_i F_i_b  is PSD   for every block b
//
// over real symmetric blocks, via a standard logarithmic-barrier path with
// damped Newton centering.  Coefficient matrices are sparse symmetric
// (entry lists), the constant terms dense.  The caller supplies a strictly
// feasible starting point; the solver returns the primal minimizer together
// with dual certificates and a conservative duality-gap bound.

#pragma once

#include <vector>

#include "preserva/linalg.hpp"

namespace preserva {

// One entry of a sparse real symmetric matrix: value v at (r,c) and, when
// r != c, mirrored at (c,r).  Entries must satisfy r <= c and not repeat.
struct SymEntry {
  int r = 0;
  int c = 0;
  double v = 0.0;
};
using SparseSym = std::vector<SymEntry>;

struct PsdBlock {
  int dim = 0;
  rmat f0;                        // dim x dim constant term
  std::vector<SparseSym> coeff;   // one sparse coefficient per variable
};

struct PsdProgram {
  rvec objective;
  std::vector<PsdBlock> blocks;
  rvec slater;                    // strictly feasible start
  double tolerance = 1e-7;        // target duality-gap bound
  int max_newton = 600;
};

struct PsdSolution {
  rvec x;
  double value = 0.0;        // objective at x
  double dual_value = 0.0;   // best certified dual lower bound (value - gap)
  double gap = 0.0;          // value minus the best certified dual bound
  std::vector<rmat> certificates;  // dual PSD matrix per block
  int newton_steps = 0;
};

PsdSolution solve_psd_program(const PsdProgram& p);

}  // namespace preserva
