// preserva: error taxonomy.
// SPDX-License-Identifier: MIT
//
// Every exception thrown by the library derives from preserva::error.
// validation_error covers malformed mathematical input (bad matrices, bad
// parameters, infeasible targets); solver_error covers numerical methods
// that fail to converge or detect an infeasible program.  The CLI maps the
// two branches to distinct exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace preserva {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// --- input validation -------------------------------------------------------

class validation_error : public error {
 public:
  validation_error(std::string code, const std::string& what)
      : error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// --- numerical solvers ------------------------------------------------------

class solver_error : public error {
 public:
  solver_error(std::string code, const std::string& what)
      : error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Divergent iterative solve; carries the best rigorous bracket found so far.
class solver_divergence : public solver_error {
 public:
  solver_divergence(const std::string& what, double best_lower,
                    double best_upper)
      : solver_error("SolverDivergence", what),
        best_lower_(best_lower),
        best_upper_(best_upper) {}
  double best_lower() const { return best_lower_; }
  double best_upper() const { return best_upper_; }

 private:
  double best_lower_;
  double best_upper_;
};

// Convenience constructors matching the validation codes used across the
// library, so call sites stay one-liners.
inline validation_error err_not_square(const std::string& ctx) {
  return {"NotSquare", ctx};
}
inline validation_error err_not_hermitian(const std::string& ctx) {
  return {"NotHermitian", ctx};
}
inline validation_error err_dimension_mismatch(const std::string& ctx) {
  return {"DimensionMismatch", ctx};
}
inline validation_error err_not_psd(const std::string& ctx) {
  return {"NotPSD", ctx};
}
inline validation_error err_bad_parameter(const std::string& ctx) {
  return {"BadParameter", ctx};
}

}  // namespace preserva
