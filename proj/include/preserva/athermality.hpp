// preserva: athermality monotones and thermal-operations experiments.
// SPDX-License-Identifier: MIT
//
// The free states are Gibbs states, the free channels are Gibbs-preserving
// maps.  Two channel functionals drive everything here:
//
//   p_dmax      — largest max-relative entropy of any output to the Gibbs
//                 state (variational, seeded multi-start see-saw; on qubits
//                 backed by a Bloch-sphere grid certificate);
//   p_bar_dmax  — the Choi-level relaxation, an exact closed form:
//                 log2 lambda_max((G (x) I/d)^{-1/2} J (G (x) I/d)^{-1/2}).
//
// On top sit the smoothing bracket, an energy-spectrum non-degeneracy test,
// bath-size bounds, the one-shot communication audit, and the convex-split
// destruction experiment.

#pragma once

#include <cstdint>
#include <vector>

#include "preserva/divergences.hpp"
#include "preserva/linalg.hpp"
#include "preserva/quantum.hpp"
#include "preserva/rng.hpp"

namespace preserva {

// ===========================================================================
// Thermal reference
// ===========================================================================

struct ThermalSpec {
  rvec energies;   // ascending
  double beta = 0.0;
  cmat gamma;      // diagonal Gibbs state e^{-beta E}/Z, populations nonincreasing
  int d() const { return static_cast<int>(energies.size()); }
  double p_min() const;
  rvec populations() const;
  // k_B T / ||H||_inf with k_B = 1; infinite at beta = 0 for nonzero H.
  double normalized_temperature() const;
};

// Validates ascending energies (NotAscending) and 0 <= beta < inf
// (BadParameter), and builds the Gibbs state.
ThermalSpec thermal_state(const rvec& energies, double beta);

// True when N maps gamma_in^{(x)k} to gamma_out^{(x)l} with k, l inferred
// from the channel dimensions (DimensionMismatch when no integer tensor
// powers fit).
bool is_gibbs_preserving(const QuantumChannel& n, const cmat& gamma_in,
                         const cmat& gamma_out, double tol = kTolDerived);
bool is_gibbs_preserving(const QuantumChannel& n, const ThermalSpec& spec_in,
                         const ThermalSpec& spec_out, double tol = kTolDerived);

// ===========================================================================
// Reference Gibbs-preserving channels
// ===========================================================================

enum class GibbsChannelKind {
  partial_thermalization,  // rho -> lambda rho + (1-lambda) gamma .. param = lambda
  energy_dephasing,        // kills energy-basis off-diagonals ...... param unused
  hamiltonian_evolution,   // conjugation by exp(-i H t) ............ param = t
};

// BadParameter for out-of-range parameters (e.g. lambda outside [0,1]).
QuantumChannel gibbs_channel(GibbsChannelKind kind, const ThermalSpec& spec,
                             double param = 0.0);

// Seeded sampler over compositions and mixtures of Gibbs-preserving
// generators (thermalizations, dephasings, energy-basis unitaries, and exact
// measure-and-prepare maps).  The output preserves `gamma` by construction.
QuantumChannel sample_gp_channel(Rng& rng, const cmat& gamma);

// Measure-and-prepare channel carrying gamma_in to gamma_out exactly;
// also the generic sampler between different references.
QuantumChannel sample_gp_measure_prepare(Rng& rng, const cmat& gamma_in,
                                         const cmat& gamma_out);

// ===========================================================================
// Preservability monotones
// ===========================================================================

struct PDmaxResult {
  double bits = 0.0;        // best certified lower bound found (exact in practice)
  double seesaw_bits = 0.0;
  double grid_bits = 0.0;   // qubit-only Bloch grid; -inf otherwise
  bool grid_certified = false;  // see-saw matched or beat the grid scan
};

// sup over input states of D_max(N(rho) || gamma), attained on pure inputs
// without ancilla.  Throws NotGibbsPreserving when N fails the gamma gate.
double p_dmax(const QuantumChannel& n, const ThermalSpec& spec);
PDmaxResult p_dmax_detailed(const QuantumChannel& n, const ThermalSpec& spec,
                            int restarts = 32, std::uint64_t seed = 0);

// Choi-level bound log2 lambda_max((G (x) I/d)^{-1/2} J (G (x) I/d)^{-1/2});
// always >= p_dmax, vanishing exactly on the constant-to-gamma channel.
double p_bar_dmax(const QuantumChannel& n, const ThermalSpec& spec);

// Same closed form against an explicit diagonal reference (used for
// composite systems whose product reference is not population-sorted).
// Returns +inf if the Choi leaks outside the reference support.
double p_bar_dmax_core(const QuantumChannel& n, const cmat& gamma_out);

// Two-sided bracket for the delta-smoothed variant.
SmoothBounds smooth_p_bar_bounds(const QuantumChannel& n,
                                 const ThermalSpec& spec, double delta);

// ===========================================================================
// Spectrum condition, bath bounds, communication, convex split
// ===========================================================================

// Energy subspace condition: all multisets of up to m_max energies (with
// repetition) have distinct total energy.  Decided by exhaustive enumeration
// of compositions; m_max > 6 throws CapExceeded.
bool energy_subspace_condition(const rvec& energies, int m_max);

struct BathBoundReport {
  double epsilon = 0.0;
  double p_dmax_bits = 0.0;
  double upper_bound = 0.0;      // 2^{p_dmax} / epsilon^2
  double lower_bound_rhs = 0.0;  // 2^{p_dmax} - 2 sqrt(eps)/p_min - 1
  bool esc_holds = false;
  bool coherence_annihilating = false;
  int probes = 0;
  int m_max = 0;
};

// Bath-size bounds for epsilon-approximate realization by thermal contact;
// never simulates the contact model itself.  BadEpsilon unless 0 < eps < 1.
BathBoundReport bath_bounds(const QuantumChannel& n, const ThermalSpec& spec,
                            double epsilon, int m_max = 4,
                            std::uint64_t seed = 0);

struct CommReport {
  int m = 0;                   // messages
  double avg_error = 0.0;      // 1 - mean success probability
  double p_bar_bits = 0.0;
  double delta = 0.0;
  double capacity_bound = 0.0; // p_bar + log2(1/(1 - eps - delta)), +inf when clamped
  bool bound_holds = false;    // log2(m) <= capacity_bound
};

// One-shot classical communication audit: encoder gamma_C -> gamma_S (x)
// gamma_A, channel (x) replacer on the ancilla, decoder back to the message
// system.  All three maps must be Gibbs-preserving for their references.
CommReport comm_error(const QuantumChannel& n, const QuantumChannel& enc,
                      const QuantumChannel& dec, const ThermalSpec& spec_s,
                      const ThermalSpec& spec_a, const ThermalSpec& spec_c,
                      int m, double delta);

struct DestructionReport {
  int n = 0;
  double p = 0.0;              // 2^{-p_bar_dmax(E)}
  double delta_premise = 0.0;  // sqrt(1/(p n))
  double distance = 0.0;       // diamond distance of the split mixture to gamma^(x)n
  bool premise_holds = false;
  double choi_permutation_dev = 0.0;  // permuted-process vs direct mixture
};

// Randomly positioning one use of E among n - 1 replacers and averaging:
// checks the permutation identity at the Choi level and certifies the
// destruction distance by a diamond-norm solve.  DimensionTooLarge when the
// n-fold system exceeds the solver ceiling.
DestructionReport convex_split_experiment(const QuantumChannel& e,
                                          const ThermalSpec& spec, int n);

}  // namespace preserva
