// preserva: general preservability monotones and the axiom harness.
// SPDX-License-Identifier: MIT
//
// A preservability monotone scores a channel by how much of a state resource
// it can keep alive:
//
//     P(E) = max over a probe family of  f(Q((E (x) id)(rho))) / g(Q(rho)),
//
// where Q quantifies the state resource, f and g are nondecreasing
// nonnegative scalar maps, and each probe may carry an ancilla that the
// channel does not touch.  With g == 1 this is the absolute form (the best
// output resource), with f == g == id the relative form (the best kept
// fraction).  The axiom harness stress-tests the concrete monotones against
// the defining properties: vanishing on resource-destroying channels,
// monotonicity under free super-channels, convexity of the robustness scale,
// and tensor behavior.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "preserva/athermality.hpp"
#include "preserva/quantum.hpp"
#include "preserva/rng.hpp"

namespace preserva {

// ===========================================================================
// Building blocks
// ===========================================================================

// A state-resource quantifier Q(rho, d_anc); rho lives on system (x) ancilla
// with the ancilla factor last.
struct StateMonotoneSpec {
  std::string name;
  std::function<double(const cmat& rho, int d_anc)> evaluator;
  bool faithful = false;  // zero exactly on the free states
};

// Scalar post-processing pair (f, g); both must be nondecreasing and
// nonnegative on [0, 64] (checked on a 1000-point grid before use).
struct MonotoneFns {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> g;
};

MonotoneFns fns_identity();    // f = id, g = 1: absolute output resource
MonotoneFns fns_ratio();       // f = g = id: kept fraction
MonotoneFns fns_robustness();  // f = g = 2^x - 1: robustness scale

// Throws BadParameter when f or g fails the grid certificate.
void validate_monotone_fns(const MonotoneFns& fns);

// D_max-to-reference athermality quantifier in bits: Q(rho, d_anc) =
// D_max(rho || gamma (x) I/d_anc).  Faithful.
StateMonotoneSpec athermality_quantifier(const rvec& gamma);

// Negativity across the (d_a | d_b * d_anc) cut, ordering (A, B, ancilla).
// Faithful only where PPT is conclusive (d_a * d_b <= 6).
StateMonotoneSpec negativity_quantifier(int d_a, int d_b);

// A probe state, possibly extended by an untouched ancilla (last factor).
struct ProbeState {
  cmat rho;
  int d_anc = 1;
};

// P(E) = max over the family of ratio(f(Q_out), g(Q_in)), with the
// conventions 0/0 = 0 and x/0 = +inf for x > 0.  Throws EmptyFamily when the
// family has no probes and DimensionMismatch when a probe does not match
// d_in * d_anc.
double eval_general_monotone(const QuantumChannel& e,
                             const std::vector<ProbeState>& family,
                             const StateMonotoneSpec& input_quantifier,
                             const StateMonotoneSpec& output_quantifier,
                             const MonotoneFns& fns);

// ===========================================================================
// Free super-channels
// ===========================================================================

// F(E) = post . (E (x) id_anc) . pre.
struct SuperChannelSpec {
  QuantumChannel pre = identity_channel(1);   // d_in' -> d_in * d_anc
  QuantumChannel post = identity_channel(1);  // d_out * d_anc -> d_out'
  int d_anc = 1;
  std::string label;
};

QuantumChannel apply_superchannel(const SuperChannelSpec& s,
                                  const QuantumChannel& e);

// Free super-channel for the athermality theory with reference gamma
// (diagonal): Gibbs-preserving pre into system (x) ancilla and
// Gibbs-preserving post back to the system.
SuperChannelSpec sample_free_superchannel_athermality(Rng& rng,
                                                      const cmat& gamma);

// Free super-channel for the entanglement theory on a d x d pair: local
// pre- and post-processing on each party, no side channel.
SuperChannelSpec sample_free_superchannel_entanglement(Rng& rng, int d);

// Dispatch by theory name ("athermality" with the uniform reference, or
// "entanglement"); BadParameter otherwise.
SuperChannelSpec sample_free_superchannel(const std::string& theory, int d,
                                          Rng& rng);

// Measure-and-prepare channel on a d_a x d_b pair whose preparations are
// product states; its outputs are separable by construction.
QuantumChannel sample_entanglement_breaking(int d_a, int d_b, Rng& rng);

// ===========================================================================
// Axiom harness
// ===========================================================================

struct AxiomReport {
  std::string theory;
  int trials = 0;
  // M1: the monotone vanishes on resource-destroying channels.
  int m1_checks = 0, m1_violations = 0;
  // M2: monotone under sampled free super-channels.
  int m2_checks = 0, m2_violations = 0;
  // M3: the robustness scale 2^P (athermality) or P itself (entanglement)
  // is convex in the channel.
  int m3_checks = 0, m3_violations = 0;
  // M4: tensor behavior — multiplicativity of the athermality scale with
  // the equality branch against the replacer, absorption for entanglement.
  int m4_checks = 0, m4_violations = 0;
  double max_m2_excess = 0.0;
  double max_m3_excess = 0.0;
  double max_m4_excess = 0.0;
  bool pass = false;
};

AxiomReport axiom_harness_athermality(const ThermalSpec& spec, int trials,
                                      std::uint64_t seed = 0);
AxiomReport axiom_harness_entanglement(int d, int trials,
                                       std::uint64_t seed = 0);

// Dispatch by theory name; athermality runs on the qubit reference
// diag(3/4, 1/4), entanglement on 2 x 2 pairs.  BadParameter for unknown
// theories or trials < 1.
AxiomReport axiom_harness(const std::string& theory, int trials,
                          std::uint64_t seed = 0);

}  // namespace preserva
