// preserva: general preservability monotones and the axiom harness.
// SPDX-License-Identifier: MIT

#include "preserva/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "preserva/divergences.hpp"
#include "preserva/errors.hpp"

namespace preserva {

namespace {

constexpr double kRatioTol = 1e-12;

double safe_ratio(double a, double b) {
  if (!std::isfinite(b)) return std::isfinite(a) ? 0.0 : 1.0;
  if (b <= kRatioTol) {
    return (a <= kRatioTol) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
  return a / b;
}

cmat diag_state(const rvec& populations) {
  cmat g = cmat::Zero(populations.size(), populations.size());
  for (Eigen::Index i = 0; i < populations.size(); ++i) g(i, i) = populations(i);
  return g;
}

}  // namespace

// ===========================================================================
// Building blocks
// ===========================================================================

MonotoneFns fns_identity() {
  return {"identity", [](double x) { return x; }, [](double) { return 1.0; }};
}

MonotoneFns fns_ratio() {
  return {"ratio", [](double x) { return x; }, [](double x) { return x; }};
}

MonotoneFns fns_robustness() {
  const auto scale = [](double x) { return std::exp2(x) - 1.0; };
  return {"robustness", scale, scale};
}

void validate_monotone_fns(const MonotoneFns& fns) {
  if (!fns.f || !fns.g) {
    throw err_bad_parameter("monotone fns '" + fns.name +
                            "': f and g must both be set");
  }
  constexpr int kGrid = 1000;
  constexpr double kHi = 64.0;
  double prev_f = -std::numeric_limits<double>::infinity();
  double prev_g = prev_f;
  for (int k = 0; k <= kGrid; ++k) {
    const double x = kHi * double(k) / double(kGrid);
    const double fv = fns.f(x);
    const double gv = fns.g(x);
    if (!(fv >= -1e-12) || !(gv >= -1e-12)) {
      throw err_bad_parameter("monotone fns '" + fns.name +
                              "': f and g must be nonnegative");
    }
    if (fv < prev_f - 1e-12 || gv < prev_g - 1e-12) {
      throw err_bad_parameter("monotone fns '" + fns.name +
                              "': f and g must be nondecreasing");
    }
    prev_f = fv;
    prev_g = gv;
  }
}

StateMonotoneSpec athermality_quantifier(const rvec& gamma) {
  const cmat g = diag_state(gamma);
  StateMonotoneSpec spec;
  spec.name = "dmax_athermality";
  spec.faithful = true;
  spec.evaluator = [g](const cmat& rho, int d_anc) {
    cmat ref = g;
    if (d_anc > 1) {
      ref = kron(g, cmat::Identity(d_anc, d_anc) / double(d_anc));
    }
    const ExtendedReal q = d_max(rho, ref);
    if (q.is_infinite) return std::numeric_limits<double>::infinity();
    return std::max(q.bits, 0.0);
  };
  return spec;
}

StateMonotoneSpec negativity_quantifier(int d_a, int d_b) {
  if (d_a < 2 || d_b < 2) {
    throw err_bad_parameter("negativity_quantifier: both sides need dim >= 2");
  }
  StateMonotoneSpec spec;
  spec.name = "negativity";
  spec.faithful = d_a * d_b <= 6;
  spec.evaluator = [d_a, d_b](const cmat& rho, int d_anc) {
    return negativity(rho, d_a, d_b * d_anc);
  };
  return spec;
}

double eval_general_monotone(const QuantumChannel& e,
                             const std::vector<ProbeState>& family,
                             const StateMonotoneSpec& input_quantifier,
                             const StateMonotoneSpec& output_quantifier,
                             const MonotoneFns& fns) {
  if (family.empty()) {
    throw validation_error("EmptyFamily",
                           "eval_general_monotone: the probe family is empty");
  }
  validate_monotone_fns(fns);
  std::map<int, QuantumChannel> extended;  // by ancilla dimension
  double best = 0.0;
  for (const ProbeState& probe : family) {
    if (probe.d_anc < 1) {
      throw err_bad_parameter("eval_general_monotone: d_anc must be >= 1");
    }
    if (probe.rho.rows() != Eigen::Index(e.d_in()) * probe.d_anc ||
        probe.rho.rows() != probe.rho.cols()) {
      throw err_dimension_mismatch(
          "eval_general_monotone: probe does not live on d_in * d_anc");
    }
    auto it = extended.find(probe.d_anc);
    if (it == extended.end()) {
      QuantumChannel ch =
          probe.d_anc == 1 ? e : e.tensor(identity_channel(probe.d_anc));
      it = extended.emplace(probe.d_anc, std::move(ch)).first;
    }
    const cmat out = it->second.apply(probe.rho);
    const double qi = input_quantifier.evaluator(probe.rho, probe.d_anc);
    const double qo = output_quantifier.evaluator(out, probe.d_anc);
    best = std::max(best, safe_ratio(fns.f(qo), fns.g(qi)));
  }
  return best;
}

// ===========================================================================
// Free super-channels
// ===========================================================================

QuantumChannel apply_superchannel(const SuperChannelSpec& s,
                                  const QuantumChannel& e) {
  if (s.d_anc < 1) {
    throw err_bad_parameter("apply_superchannel: d_anc must be >= 1");
  }
  if (s.pre.d_out() != e.d_in() * s.d_anc ||
      s.post.d_in() != e.d_out() * s.d_anc) {
    throw err_dimension_mismatch(
        "apply_superchannel: pre/post do not match the plugged channel");
  }
  const QuantumChannel mid =
      s.d_anc == 1 ? e : e.tensor(identity_channel(s.d_anc));
  return s.pre.then(mid).then(s.post);
}

SuperChannelSpec sample_free_superchannel_athermality(Rng& rng,
                                                      const cmat& gamma) {
  const int d = static_cast<int>(gamma.rows());
  SuperChannelSpec s;
  s.d_anc = 1 + static_cast<int>(rng.uniform_int(2));
  const rvec anc_pops = rng.simplex_point(s.d_anc);
  const cmat ganc = diag_state(anc_pops);
  const cmat joint = kron(gamma, ganc);

  QuantumChannel pre =
      sample_gp_channel(rng, gamma).tensor(constant_channel(ganc, 1));
  if (rng.uniform() < 0.5) pre = pre.then(sample_gp_channel(rng, joint));

  QuantumChannel post =
      partial_trace_channel({d, s.d_anc}, {0});
  if (rng.uniform() < 0.5) post = sample_gp_channel(rng, joint).then(post);
  if (rng.uniform() < 0.5) post = post.then(sample_gp_channel(rng, gamma));

  s.pre = std::move(pre);
  s.post = std::move(post);
  s.label = "gp_comb_anc" + std::to_string(s.d_anc);
  return s;
}

SuperChannelSpec sample_free_superchannel_entanglement(Rng& rng, int d) {
  if (d < 2) {
    throw err_bad_parameter(
        "sample_free_superchannel_entanglement: d must be >= 2");
  }
  const auto local = [&]() {
    return random_channel(d, d, 1 + static_cast<int>(rng.uniform_int(3)), rng);
  };
  SuperChannelSpec s;
  s.d_anc = 1;
  s.pre = local().tensor(local());
  s.post = local().tensor(local());
  s.label = "local_pre_post";
  return s;
}

SuperChannelSpec sample_free_superchannel(const std::string& theory, int d,
                                          Rng& rng) {
  if (theory == "athermality") {
    if (d < 2) throw err_bad_parameter("sample_free_superchannel: d >= 2");
    return sample_free_superchannel_athermality(
        rng, cmat::Identity(d, d) / double(d));
  }
  if (theory == "entanglement") {
    return sample_free_superchannel_entanglement(rng, d);
  }
  throw err_bad_parameter("sample_free_superchannel: unknown theory '" +
                          theory + "'");
}

QuantumChannel sample_entanglement_breaking(int d_a, int d_b, Rng& rng) {
  if (d_a < 2 || d_b < 2) {
    throw err_bad_parameter(
        "sample_entanglement_breaking: both sides need dim >= 2");
  }
  const int dd = d_a * d_b;
  const cmat basis = rng.haar_unitary(dd);
  std::vector<cmat> ks;
  for (int k = 0; k < dd; ++k) {
    const cvec prep = kron(static_cast<cmat>(rng.haar_ket(d_a)),
                           static_cast<cmat>(rng.haar_ket(d_b)));
    ks.push_back(prep * basis.col(k).adjoint());
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

// ===========================================================================
// Axiom harness
// ===========================================================================

AxiomReport axiom_harness_athermality(const ThermalSpec& spec, int trials,
                                      std::uint64_t seed) {
  if (trials < 1) {
    throw err_bad_parameter("axiom_harness: trials must be >= 1");
  }
  AxiomReport rep;
  rep.theory = "athermality";
  rep.trials = trials;
  Rng rng(seed);
  const int d = spec.d();
  const QuantumChannel replacer = constant_channel(spec.gamma, d);

  for (int t = 0; t < trials; ++t) {
    const QuantumChannel e = sample_gp_channel(rng, spec.gamma);
    const double pbar_e = p_bar_dmax(e, spec);

    // M1: composing any channel with the replacer destroys athermality.
    if (t % 8 == 0) {
      ++rep.m1_checks;
      if (std::abs(p_bar_dmax(e.then(replacer), spec)) > 1e-9) {
        ++rep.m1_violations;
      }
    }

    // M2: monotone under sampled free super-channels.
    {
      ++rep.m2_checks;
      const SuperChannelSpec f =
          sample_free_superchannel_athermality(rng, spec.gamma);
      const double pbar_fe = p_bar_dmax(apply_superchannel(f, e), spec);
      const double excess = pbar_fe - pbar_e;
      rep.max_m2_excess = std::max(rep.max_m2_excess, excess);
      if (excess > 1e-7) ++rep.m2_violations;
    }

    // M3: convexity of the robustness scale 2^P.
    {
      ++rep.m3_checks;
      const QuantumChannel e2 = sample_gp_channel(rng, spec.gamma);
      const double w = rng.uniform();
      rvec weights(2);
      weights << w, 1.0 - w;
      const QuantumChannel mix = convex_mix({e, e2}, weights);
      const double lhs = std::exp2(p_bar_dmax(mix, spec));
      const double rhs = w * std::exp2(pbar_e) +
                         (1.0 - w) * std::exp2(p_bar_dmax(e2, spec));
      const double excess = lhs - rhs;
      rep.max_m3_excess = std::max(rep.max_m3_excess, excess);
      if (excess > 1e-7) ++rep.m3_violations;
    }

    // M4: the scale is multiplicative under tensoring, with equality against
    // the replacer branch.
    if (t % 4 == 0) {
      ++rep.m4_checks;
      const QuantumChannel e2 = sample_gp_channel(rng, spec.gamma);
      const double s1 = std::exp2(pbar_e);
      const double s2 = std::exp2(p_bar_dmax(e2, spec));
      const double s12 = std::exp2(p_bar_dmax(e.tensor(e2), spec));
      const double mult_dev = std::abs(s12 - s1 * s2) / std::max(1.0, s1 * s2);
      const double eq_dev =
          std::abs(p_bar_dmax(e.tensor(replacer), spec) - pbar_e);
      const double excess = std::max(mult_dev, eq_dev);
      rep.max_m4_excess = std::max(rep.max_m4_excess, excess);
      if (mult_dev > 1e-6 || eq_dev > 1e-7) ++rep.m4_violations;
    }
  }
  rep.pass = rep.m1_violations == 0 && rep.m2_violations == 0 &&
             rep.m3_violations == 0 && rep.m4_violations == 0;
  return rep;
}

AxiomReport axiom_harness_entanglement(int d, int trials, std::uint64_t seed) {
  if (trials < 1) {
    throw err_bad_parameter("axiom_harness: trials must be >= 1");
  }
  if (d < 2) throw err_bad_parameter("axiom_harness: d must be >= 2");
  AxiomReport rep;
  rep.theory = "entanglement";
  rep.trials = trials;
  Rng rng(seed);
  const int dd = d * d;
  const StateMonotoneSpec neg = negativity_quantifier(d, d);
  const MonotoneFns fns = fns_identity();

  std::vector<ProbeState> base;
  base.push_back({max_entangled_state(d), 1});
  base.push_back({cmat::Identity(dd, dd) / double(dd), 1});
  {
    cmat e00 = cmat::Zero(dd, dd);
    e00(0, 0) = 1.0;
    base.push_back({e00, 1});
  }
  for (int k = 0; k < 2; ++k) base.push_back({haar_random_state(dd, rng), 1});

  const auto score = [&](const QuantumChannel& e,
                         const std::vector<ProbeState>& fam) {
    return eval_general_monotone(e, fam, neg, neg, fns);
  };

  for (int t = 0; t < trials; ++t) {
    const QuantumChannel e =
        random_channel(dd, dd, 1 + static_cast<int>(rng.uniform_int(4)), rng);

    // M1: entanglement-breaking channels score zero.
    if (t % 4 == 0) {
      ++rep.m1_checks;
      if (score(sample_entanglement_breaking(d, d, rng), base) > 1e-9) {
        ++rep.m1_violations;
      }
    }

    // M2: local pre/post cannot raise the score once the family is closed
    // under the sampled pre-processing.
    {
      ++rep.m2_checks;
      const SuperChannelSpec f = sample_free_superchannel_entanglement(rng, d);
      std::vector<ProbeState> aug = base;
      for (const ProbeState& p : base) {
        aug.push_back({f.pre.apply(p.rho), 1});
      }
      const double excess = score(apply_superchannel(f, e), base) -
                            score(e, aug);
      rep.max_m2_excess = std::max(rep.max_m2_excess, excess);
      if (excess > 1e-9) ++rep.m2_violations;
    }

    // M3: convexity in the channel.
    {
      ++rep.m3_checks;
      const QuantumChannel e2 = random_channel(
          dd, dd, 1 + static_cast<int>(rng.uniform_int(4)), rng);
      const double w = rng.uniform();
      rvec weights(2);
      weights << w, 1.0 - w;
      const double excess =
          score(convex_mix({e, e2}, weights), base) -
          (w * score(e, base) + (1.0 - w) * score(e2, base));
      rep.max_m3_excess = std::max(rep.max_m3_excess, excess);
      if (excess > 1e-9) ++rep.m3_violations;
    }

    // M4: an entanglement-breaking tail absorbs any score.
    if (t % 4 == 0) {
      ++rep.m4_checks;
      const double tail =
          score(e.then(sample_entanglement_breaking(d, d, rng)), base);
      rep.max_m4_excess = std::max(rep.max_m4_excess, tail);
      if (tail > 1e-9) ++rep.m4_violations;
    }
  }
  rep.pass = rep.m1_violations == 0 && rep.m2_violations == 0 &&
             rep.m3_violations == 0 && rep.m4_violations == 0;
  return rep;
}

AxiomReport axiom_harness(const std::string& theory, int trials,
                          std::uint64_t seed) {
  if (theory == "athermality") {
    rvec energies(2);
    energies << 0.0, 1.0;
    return axiom_harness_athermality(thermal_state(energies, std::log(3.0)),
                                     trials, seed);
  }
  if (theory == "entanglement") {
    return axiom_harness_entanglement(2, trials, seed);
  }
  throw err_bad_parameter("axiom_harness: unknown theory '" + theory + "'");
}

}  // namespace preserva
