// preserva: entanglement-preserving local-thermalization channels.
// SPDX-License-Identifier: MIT
//
// Bipartite channels whose two output marginals are exact local thermal
// states for every input, yet which keep (or activate) entanglement.  Two
// families, indexed by a mixing weight eps in [0, eps_star]:
//
//   W = (1-eps) (L_A (x) L_B) . T  +  eps T
//   E = (1-eps) Replace[eta_A (x) eta_B] . T  +  eps T
//
// with T the isotropic twirl, L_X ladder cascades carrying I/d to the
// boosted target eta_X, and eta_X = gamma_X + eps/(1-eps) (gamma_X - I/d)
// chosen so both marginals land exactly on gamma_X.  On top: audits of the
// separation from entanglement-annihilating channels, the small-eps
// preservability search, the interpolation boundary, and the activation
// window of isotropic visibilities.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "preserva/linalg.hpp"
#include "preserva/quantum.hpp"

namespace preserva {

// ===========================================================================
// Twirl and isotropic states
// ===========================================================================

// Exact projection onto the isotropic commutant: infers d from the size
// (NotBipartiteSquare otherwise).
cmat twirl(const cmat& x);

// The twirl as a channel on a d x d bipartite system.
QuantumChannel twirl_channel(int d);

// p |Psi+><Psi+| + (1-p) I/d^2; BadParameter outside [-1/(d^2-1), 1].
cmat isotropic(double p, int d);

// ===========================================================================
// Ladder cascade
// ===========================================================================

// Elementary population push between adjacent inverted-order levels
// |~n> = |d-1-n>: moves weight delta from tilde-level i to i+1.
// BadIndex unless 0 <= i <= d-2; BadParameter unless delta in [0,1].
QuantumChannel ladder_channel(int i, double delta, int d);

struct LadderParams {
  int d = 0;
  rvec deltas;  // delta_0 .. delta_{d-2}, applied in that order
  rvec gammas;  // running normalizers Gamma_{-1} .. Gamma_{d-2}
};

// Stage weights such that the cascade (delta_0 first) carries I/d exactly to
// the diagonal state with the given energy-basis populations.  The tilde
// populations target[d-1-n] must be ascending (NotAscending); weights
// outside [0,1] beyond 1e-12 slack throw TargetInfeasible.
LadderParams solve_deltas(const rvec& target_populations);

// The full cascade as a channel (delta_0 applied first).
QuantumChannel ladder_compose(const LadderParams& lp);

// ===========================================================================
// Families
// ===========================================================================

// Boosted local target (gamma - eps/d) / (1-eps) entrywise; OutOfRange
// unless 0 <= eps <= d*min(gamma).
rvec eta_eps(const rvec& gamma_diag, double eps);
double eps_star(const rvec& gamma_diag);

enum class EpltFamily { W, E };

struct EpltParams {
  int d = 0;
  rvec gamma_a, gamma_b;
  double eps = 0.0;
  double p_min = 0.0;     // min population over both references
  double eps_star = 0.0;  // d * p_min
  rvec eta_a, eta_b;
  // k_B T / ||H||_inf per side with k_B = 1, in the gauge E_0 = 0, beta = 1;
  // +inf for the uniform reference.
  double temperature_a = 0.0, temperature_b = 0.0;
  EpltFamily family = EpltFamily::W;
};

// Validates the references and eps (OutOfRange beyond eps_star) and derives
// the family parameters.
EpltParams eplt_params(const rvec& gamma_a, const rvec& gamma_b, double eps,
                       EpltFamily family);

// Trace-normalized Choi matrix of the family member, assembled by sparse
// ladder application on the cached twirl Choi (fast path used by sweeps).
cmat build_eplt_choi(const EpltParams& params);

// The family member as a validated channel.
QuantumChannel build_eplt(const rvec& gamma_a, const rvec& gamma_b, double eps,
                          EpltFamily family);

// ===========================================================================
// Verification and audits
// ===========================================================================

struct ThermalizationCheck {
  bool pass = false;
  double choi_marginal_dev = 0.0;  // Choi-level identity, all inputs at once
  double probe_dev = 0.0;          // worst sampled-state marginal deviation
  int probes = 0;
};

// Both output marginals equal their targets: checked exactly at the Choi
// level (covers every input by linearity) and on sampled probes including
// |Psi+>, I/d^2, the product basis, and Haar states.
ThermalizationCheck verify_local_thermalization_detailed(
    const cmat& choi, int d, const rvec& gamma_a, const rvec& gamma_b,
    int samples = 16, double tol = 1e-9, std::uint64_t seed = 0);
bool verify_local_thermalization(const QuantumChannel& n, const rvec& gamma_a,
                                 const rvec& gamma_b, int samples = 16,
                                 double tol = 1e-9);

// Negative partial transpose across a d_a x d_b split.
bool is_npt(const cmat& rho, int d_a, int d_b, double tol = 1e-10);

struct CandidateDistance {
  std::string label;
  double diamond_distance = 0.0;    // to the audited family member
  double trace_lower = 0.0;         // ascent lower bound on ||T - cand||_1
  bool annihilating_certified = false;
};

struct Theorem6Report {
  int d = 0;
  double p_min = 0.0;
  double bound = 0.0;        // (3d - 1) p_min - 2
  bool nonvacuous = false;   // bound > 0
  std::vector<CandidateDistance> candidates;
  double min_diamond_distance = 0.0;
  double min_trace_lower = 0.0;
  double trace_bound = 0.0;  // 1 - 1/d
  bool diamond_ok = false;   // all certified candidates clear the bound
  bool trace_ok = false;
};

// Distance audit of the E family at eps_star against a battery of
// entanglement-annihilating candidates, in both diamond and induced trace
// norms.
Theorem6Report theorem6_audit(const rvec& gamma_a, const rvec& gamma_b,
                              std::uint64_t seed = 0);

struct Theorem7Report {
  bool success = false;
  double eps = 0.0;
  double delta = 0.0;
  double distance = 0.0;       // ||T - (L_A (x) L_B) . T||_diamond at eps
  double upper_bound = 0.0;    // eps * distance, certified preservability bound
  double singlet_fraction = 0.0;
  double min_pt_eig = 0.0;
  bool npt = false;
  int k_eps = 0;               // 1 + floor((1-eps) d / (eps (d-1)))
};

// Scans eps downward from eps_star for the first W-family member whose
// certified preservability upper bound drops below delta while the output on
// |Psi+> is still entangled (NPT with singlet fraction above 1/d).
// SearchFailed when no eps on the grid qualifies.
Theorem7Report small_preservability_search(const rvec& gamma_a,
                                           const rvec& gamma_b, double delta,
                                           std::uint64_t seed = 0);

// Largest p (to 1e-4) at which p L0 + (1-p) Replace[gamma_A (x) gamma_B]
// stops firing the NPT witness on the given inputs, found by bisection.
// WitnessNeverFires if even p = 1 shows no NPT output.
double interpolation_boundary(const QuantumChannel& l0, const rvec& gamma_a,
                              const rvec& gamma_b,
                              const std::vector<cmat>& witness_inputs);

struct ActivationWindow {
  int d = 0;
  double lower = 0.0;   // 1/(d+1)
  double upper = 0.0;   // (d-1)^{d-1} (3d-1) / ((d+1) d^d)
  bool nonempty = false;
  double midpoint_fef = 0.0;  // entangled fraction at the window midpoint
};

// Isotropic-visibility window in which entanglement is annihilated for a
// single copy yet still activatable; the midpoint witness keeps entangled
// fraction above 1/d.
ActivationWindow activation_window(int d);

// Choi PPT criterion, exact for 2x2 and 2x3 output/input splits;
// DimensionUnsupported beyond.
bool is_entanglement_breaking_2x2(const QuantumChannel& n);

}  // namespace preserva
