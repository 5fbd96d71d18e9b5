// preserva command-line interface.
// SPDX-License-Identifier: MIT
//
// Subcommands:
//   athermality preservability --channel FILE --gamma FILE
//   athermality bath --epsilon X
//   athermality comm --messages M --trials T
//   athermality destroy --n N
//   eplt build --family W|E --eps X --gammaA FILE --gammaB FILE --out FILE
//   eplt verify --bundle FILE
//   eplt theorem6
//   eplt theorem7 --delta X
//   eplt activation --d D
//   monotone harness --theory T --trials K
//
// Exit codes: 0 success, 2 validation error, 3 solver error, 64 usage error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "preserva/athermality.hpp"
#include "preserva/diamond.hpp"
#include "preserva/eplt.hpp"
#include "preserva/errors.hpp"
#include "preserva/io.hpp"
#include "preserva/monotones.hpp"
#include "preserva/quantum.hpp"
#include "preserva/report.hpp"

#ifndef PRESERVA_GIT_DESCRIBE
#define PRESERVA_GIT_DESCRIBE "unknown"
#endif

namespace {

using namespace preserva;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    write_text_file(out_path, text + "\n");
  }
}

void write_vector(JsonWriter& w, const std::string& key, const rvec& v) {
  w.key(key);
  w.begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) w.number(v(i));
  w.end_array();
}

// Thermal reference from populations in the gauge beta = 1, E_0 = 0.
// Populations must be positive and nonincreasing (ascending energies).
ThermalSpec spec_from_populations(const rvec& pops) {
  rvec energies(pops.size());
  for (Eigen::Index i = 0; i < pops.size(); ++i) {
    if (pops(i) <= 0.0) {
      throw err_bad_parameter(
          "thermal populations must be strictly positive");
    }
    energies(i) = std::log(pops(0) / pops(i));
  }
  return thermal_state(energies, 1.0);
}

rvec uniform_pops(int d) { return rvec::Constant(d, 1.0 / d); }

// --- athermality -------------------------------------------------------------

int run_preservability(const std::string& channel_path,
                       const std::string& gamma_path, int restarts,
                       std::uint64_t seed, const std::string& out_path) {
  const rvec pops =
      gamma_path.empty() ? uniform_pops(2) : load_populations(gamma_path);
  const ThermalSpec spec = spec_from_populations(pops);
  const QuantumChannel n = channel_path.empty()
                               ? identity_channel(spec.d())
                               : load_channel(channel_path);
  const double pbar = p_bar_dmax(n, spec);
  const PDmaxResult p = p_dmax_detailed(n, spec, restarts, seed);

  JsonWriter w;
  begin_report(w, "preservability");
  w.field("d_in", n.d_in());
  w.field("d_out", n.d_out());
  write_vector(w, "gamma", pops);
  w.field("p_bar_dmax", pbar);
  w.field("p_dmax", p.bits);
  w.field("p_dmax_seesaw", p.seesaw_bits);
  w.field("p_dmax_grid", p.grid_bits);
  w.field("grid_certified", p.grid_certified);
  w.field("gap", pbar - p.bits);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_bath(double epsilon, const std::string& channel_path,
             const std::string& gamma_path, int m_max, std::uint64_t seed,
             const std::string& out_path) {
  rvec pops;
  if (gamma_path.empty()) {
    pops = rvec(2);
    pops << 0.75, 0.25;  // energies (0, 1) at beta = ln 3
  } else {
    pops = load_populations(gamma_path);
  }
  const ThermalSpec spec = spec_from_populations(pops);
  const QuantumChannel n =
      channel_path.empty()
          ? gibbs_channel(GibbsChannelKind::energy_dephasing, spec)
          : load_channel(channel_path);
  const BathBoundReport rep = bath_bounds(n, spec, epsilon, m_max, seed);

  JsonWriter w;
  begin_report(w, "bath_bounds");
  w.field("epsilon", rep.epsilon);
  write_vector(w, "gamma", pops);
  w.field("p_dmax", rep.p_dmax_bits);
  w.field("upper_bound", rep.upper_bound);
  w.field("lower_bound_rhs", rep.lower_bound_rhs);
  w.field("esc_holds", rep.esc_holds);
  w.field("coherence_annihilating", rep.coherence_annihilating);
  w.field("probes", rep.probes);
  w.field("m_max", rep.m_max);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_comm(int messages, int trials, double delta,
             const std::string& channel_path, std::uint64_t seed,
             const std::string& out_path) {
  if (trials < 1) throw err_bad_parameter("comm: trials must be >= 1");
  rvec pops(2);
  pops << 0.75, 0.25;
  const ThermalSpec spec = spec_from_populations(pops);
  const cmat joint = kron(spec.gamma, spec.gamma);
  const QuantumChannel n = channel_path.empty() ? identity_channel(spec.d())
                                                : load_channel(channel_path);
  Rng rng(seed);
  double worst_error = 0.0;
  double sum_error = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  bool all_hold = true;
  double capacity = 0.0;
  for (int t = 0; t < trials; ++t) {
    QuantumChannel enc = sample_gp_measure_prepare(rng, spec.gamma, joint);
    if (rng.uniform() < 0.5) enc = enc.then(sample_gp_channel(rng, joint));
    QuantumChannel dec = sample_gp_measure_prepare(rng, joint, spec.gamma);
    if (rng.uniform() < 0.5) dec = dec.then(sample_gp_channel(rng, spec.gamma));
    const CommReport rep =
        comm_error(n, enc, dec, spec, spec, spec, messages, delta);
    worst_error = std::max(worst_error, rep.avg_error);
    sum_error += rep.avg_error;
    min_margin = std::min(min_margin,
                          rep.capacity_bound - std::log2(double(messages)));
    all_hold = all_hold && rep.bound_holds;
    capacity = rep.capacity_bound;
  }
  JsonWriter w;
  begin_report(w, "comm");
  w.field("messages", messages);
  w.field("trials", trials);
  w.field("delta", delta);
  w.field("worst_error", worst_error);
  w.field("mean_error", sum_error / trials);
  w.field("capacity_bound", capacity);
  w.field("min_margin", min_margin);
  w.field("bound_holds", all_hold);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_destroy(int n_systems, double lambda, std::uint64_t seed,
                const std::string& out_path) {
  (void)seed;
  rvec energies(2);
  energies << 0.0, 1.0;
  const ThermalSpec spec = thermal_state(energies, 0.0);  // gamma = I/2
  const QuantumChannel e =
      gibbs_channel(GibbsChannelKind::partial_thermalization, spec, lambda);
  const DestructionReport rep = convex_split_experiment(e, spec, n_systems);

  JsonWriter w;
  begin_report(w, "convex_split");
  w.field("n", rep.n);
  w.field("lambda", lambda);
  w.field("p", rep.p);
  w.field("delta_premise", rep.delta_premise);
  w.field("distance", rep.distance);
  w.field("premise_holds", rep.premise_holds);
  w.field("choi_permutation_dev", rep.choi_permutation_dev);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

// --- eplt --------------------------------------------------------------------

int run_eplt_build(const std::string& family, double eps,
                   const std::string& gamma_a_path,
                   const std::string& gamma_b_path, const std::string& out_path,
                   const std::string& report_path) {
  const rvec ga = gamma_a_path.empty() ? uniform_pops(2)
                                       : load_populations(gamma_a_path);
  const rvec gb = gamma_b_path.empty() ? uniform_pops(2)
                                       : load_populations(gamma_b_path);
  const EpltFamily fam = family == "E" ? EpltFamily::E : EpltFamily::W;
  if (family != "W" && family != "E") {
    throw err_bad_parameter("eplt build: family must be W or E");
  }
  const EpltParams params = eplt_params(ga, gb, eps, fam);

  EpltBundle bundle;
  bundle.gamma_a = ga;
  bundle.gamma_b = gb;
  bundle.eps = params.eps;
  bundle.family = family;
  if (fam == EpltFamily::W && 1.0 - params.eps > 1e-14) {
    bundle.deltas_a = solve_deltas(params.eta_a).deltas;
    bundle.deltas_b = solve_deltas(params.eta_b).deltas;
  }
  save_bundle(out_path, bundle);

  JsonWriter w;
  begin_report(w, "eplt_build");
  w.field("family", family);
  w.field("d", params.d);
  w.field("eps", params.eps);
  w.field("eps_star", params.eps_star);
  w.field("p_min", params.p_min);
  write_vector(w, "eta_A", params.eta_a);
  write_vector(w, "eta_B", params.eta_b);
  w.field("temperature_A", params.temperature_a);
  w.field("temperature_B", params.temperature_b);
  w.field("bundle", out_path);
  w.end_object();
  emit(report_path, w.str());
  return 0;
}

int run_eplt_verify(const std::string& bundle_path, int samples, double tol,
                    std::uint64_t seed, const std::string& out_path) {
  const EpltBundle b = load_bundle(bundle_path);
  const EpltFamily fam = b.family == "E" ? EpltFamily::E : EpltFamily::W;
  const EpltParams params = eplt_params(b.gamma_a, b.gamma_b, b.eps, fam);
  const cmat choi = build_eplt_choi(params);
  const ThermalizationCheck check = verify_local_thermalization_detailed(
      choi, params.d, b.gamma_a, b.gamma_b, samples, tol, seed);

  double delta_dev = 0.0;
  if (fam == EpltFamily::W && 1.0 - params.eps > 1e-14) {
    const rvec da = solve_deltas(params.eta_a).deltas;
    const rvec db = solve_deltas(params.eta_b).deltas;
    if (b.deltas_a.size() == da.size()) {
      delta_dev = std::max(delta_dev, (b.deltas_a - da).cwiseAbs().maxCoeff());
    } else if (b.deltas_a.size() > 0) {
      delta_dev = std::numeric_limits<double>::infinity();
    }
    if (b.deltas_b.size() == db.size()) {
      delta_dev = std::max(delta_dev, (b.deltas_b - db).cwiseAbs().maxCoeff());
    } else if (b.deltas_b.size() > 0) {
      delta_dev = std::numeric_limits<double>::infinity();
    }
  }

  JsonWriter w;
  begin_report(w, "eplt_verify");
  w.field("family", b.family);
  w.field("d", params.d);
  w.field("eps", params.eps);
  w.field("pass", check.pass && delta_dev <= tol);
  w.field("choi_marginal_dev", check.choi_marginal_dev);
  w.field("probe_dev", check.probe_dev);
  w.field("probes", check.probes);
  w.field("delta_dev", delta_dev);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_theorem6(const std::string& gamma_a_path,
                 const std::string& gamma_b_path, std::uint64_t seed,
                 const std::string& out_path) {
  rvec ga, gb;
  if (gamma_a_path.empty()) {
    ga = rvec(2);
    ga << 0.55, 0.45;
  } else {
    ga = load_populations(gamma_a_path);
  }
  gb = gamma_b_path.empty() ? ga : load_populations(gamma_b_path);
  const Theorem6Report rep = theorem6_audit(ga, gb, seed);

  JsonWriter w;
  begin_report(w, "theorem6_audit");
  w.field("d", rep.d);
  w.field("p_min", rep.p_min);
  w.field("bound", rep.bound);
  w.field("nonvacuous", rep.nonvacuous);
  w.field("min_diamond_distance", rep.min_diamond_distance);
  w.field("min_trace_lower", rep.min_trace_lower);
  w.field("trace_bound", rep.trace_bound);
  w.field("diamond_ok", rep.diamond_ok);
  w.field("trace_ok", rep.trace_ok);
  w.key("candidates");
  w.begin_array();
  for (const CandidateDistance& c : rep.candidates) {
    w.begin_object();
    w.field("label", c.label);
    w.field("diamond_distance", c.diamond_distance);
    w.field("trace_lower", c.trace_lower);
    w.field("annihilating_certified", c.annihilating_certified);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_theorem7(double delta, const std::string& gamma_a_path,
                 const std::string& gamma_b_path, std::uint64_t seed,
                 const std::string& out_path) {
  const rvec ga = gamma_a_path.empty() ? uniform_pops(2)
                                       : load_populations(gamma_a_path);
  const rvec gb = gamma_b_path.empty() ? ga : load_populations(gamma_b_path);
  const Theorem7Report rep = small_preservability_search(ga, gb, delta, seed);

  JsonWriter w;
  begin_report(w, "theorem7_search");
  w.field("success", rep.success);
  w.field("delta", rep.delta);
  w.field("eps", rep.eps);
  w.field("distance", rep.distance);
  w.field("upper_bound", rep.upper_bound);
  w.field("singlet_fraction", rep.singlet_fraction);
  w.field("min_pt_eig", rep.min_pt_eig);
  w.field("npt", rep.npt);
  w.field("k_eps", rep.k_eps);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

int run_activation(int d, const std::string& out_path) {
  const ActivationWindow win = activation_window(d);
  JsonWriter w;
  begin_report(w, "activation_window");
  w.field("d", win.d);
  w.field("lower", win.lower);
  w.field("upper", win.upper);
  w.field("nonempty", win.nonempty);
  w.field("midpoint_fef", win.midpoint_fef);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

// --- monotone ----------------------------------------------------------------

int run_harness(const std::string& theory, int trials, std::uint64_t seed,
                const std::string& out_path) {
  const AxiomReport rep = axiom_harness(theory, trials, seed);
  JsonWriter w;
  begin_report(w, "axiom_harness");
  w.field("theory", rep.theory);
  w.field("trials", rep.trials);
  w.field("m1_checks", rep.m1_checks);
  w.field("m1_violations", rep.m1_violations);
  w.field("m2_checks", rep.m2_checks);
  w.field("m2_violations", rep.m2_violations);
  w.field("m3_checks", rep.m3_checks);
  w.field("m3_violations", rep.m3_violations);
  w.field("m4_checks", rep.m4_checks);
  w.field("m4_violations", rep.m4_violations);
  w.field("max_m2_excess", rep.max_m2_excess);
  w.field("max_m3_excess", rep.max_m3_excess);
  w.field("max_m4_excess", rep.max_m4_excess);
  w.field("pass", rep.pass);
  w.end_object();
  emit(out_path, w.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"preserva: preservability monotones and local-thermalization "
               "channel construction"};
  app.set_version_flag("--version", std::string("preserva ") +
                                        PRESERVA_GIT_DESCRIBE);
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_path;

  // -- athermality
  auto* ath = app.add_subcommand("athermality",
                                 "thermal preservability monotones");
  ath->require_subcommand(1);

  std::string channel_path, gamma_path;
  int restarts = 32;
  auto* pres = ath->add_subcommand(
      "preservability", "p_bar and p for a channel against a reference");
  pres->add_option("--channel", channel_path, "channel JSON file");
  pres->add_option("--gamma", gamma_path, "thermal populations JSON file");
  pres->add_option("--restarts", restarts, "see-saw restarts");
  pres->add_option("--seed", seed, "RNG seed");
  pres->add_option("--out", out_path, "write the report to this file");

  double epsilon = 0.1;
  int m_max = 4;
  auto* bath = ath->add_subcommand("bath", "bath-size bounds");
  bath->add_option("--epsilon", epsilon, "approximation accuracy in (0,1)")
      ->required();
  bath->add_option("--channel", channel_path, "channel JSON file");
  bath->add_option("--gamma", gamma_path, "thermal populations JSON file");
  bath->add_option("--mmax", m_max, "spectrum-condition cap");
  bath->add_option("--seed", seed, "RNG seed");
  bath->add_option("--out", out_path, "write the report to this file");

  int messages = 2;
  int trials = 50;
  double comm_delta = 0.01;
  auto* comm = ath->add_subcommand("comm", "one-shot communication audit");
  comm->add_option("--messages", messages, "number of messages")->required();
  comm->add_option("--trials", trials, "random encoder/decoder pairs")
      ->required();
  comm->add_option("--delta", comm_delta, "smoothing parameter");
  comm->add_option("--channel", channel_path, "channel JSON file");
  comm->add_option("--seed", seed, "RNG seed");
  comm->add_option("--out", out_path, "write the report to this file");

  int n_systems = 2;
  double lambda = 1.0 / 3.0;
  auto* destroy = ath->add_subcommand("destroy", "convex-split destruction");
  destroy->add_option("--n", n_systems, "number of split positions")
      ->required();
  destroy->add_option("--lambda", lambda, "partial-thermalization weight");
  destroy->add_option("--seed", seed, "RNG seed");
  destroy->add_option("--out", out_path, "write the report to this file");

  // -- eplt
  auto* ep = app.add_subcommand("eplt", "local-thermalization families");
  ep->require_subcommand(1);

  std::string family = "W", gamma_a_path, gamma_b_path, bundle_out,
              bundle_path;
  double eps = 0.1;
  auto* build = ep->add_subcommand("build", "construct a family member");
  build->add_option("--family", family, "W or E")->required();
  build->add_option("--eps", eps, "entanglement weight")->required();
  build->add_option("--gammaA", gamma_a_path, "side-A populations file");
  build->add_option("--gammaB", gamma_b_path, "side-B populations file");
  build->add_option("--out", bundle_out, "bundle output file")->required();
  build->add_option("--report", out_path, "write the report to this file");

  int samples = 16;
  double tol = 1e-9;
  auto* verify = ep->add_subcommand("verify", "verify a bundle");
  verify->add_option("--bundle", bundle_path, "bundle file")->required();
  verify->add_option("--samples", samples, "random probe states");
  verify->add_option("--tol", tol, "verification tolerance");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--out", out_path, "write the report to this file");

  auto* th6 = ep->add_subcommand("theorem6", "distance-to-annihilating audit");
  th6->add_option("--gammaA", gamma_a_path, "side-A populations file");
  th6->add_option("--gammaB", gamma_b_path, "side-B populations file");
  th6->add_option("--seed", seed, "RNG seed");
  th6->add_option("--out", out_path, "write the report to this file");

  double delta = 0.1;
  auto* th7 = ep->add_subcommand(
      "theorem7", "small-preservability entangled-witness search");
  th7->add_option("--delta", delta, "preservability budget")->required();
  th7->add_option("--gammaA", gamma_a_path, "side-A populations file");
  th7->add_option("--gammaB", gamma_b_path, "side-B populations file");
  th7->add_option("--seed", seed, "RNG seed");
  th7->add_option("--out", out_path, "write the report to this file");

  int d = 2;
  auto* act = ep->add_subcommand("activation", "activation window endpoints");
  act->add_option("--d", d, "local dimension")->required();
  act->add_option("--out", out_path, "write the report to this file");

  // -- monotone
  auto* mono = app.add_subcommand("monotone", "general monotone tooling");
  mono->require_subcommand(1);
  std::string theory = "athermality";
  int harness_trials = 50;
  auto* harness = mono->add_subcommand("harness", "axiom stress test");
  harness->add_option("--theory", theory, "athermality or entanglement")
      ->required();
  harness->add_option("--trials", harness_trials, "number of trials")
      ->required();
  harness->add_option("--seed", seed, "RNG seed");
  harness->add_option("--out", out_path, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (pres->parsed()) {
      return run_preservability(channel_path, gamma_path, restarts, seed,
                                out_path);
    }
    if (bath->parsed()) {
      return run_bath(epsilon, channel_path, gamma_path, m_max, seed,
                      out_path);
    }
    if (comm->parsed()) {
      return run_comm(messages, trials, comm_delta, channel_path, seed,
                      out_path);
    }
    if (destroy->parsed()) {
      return run_destroy(n_systems, lambda, seed, out_path);
    }
    if (build->parsed()) {
      return run_eplt_build(family, eps, gamma_a_path, gamma_b_path,
                            bundle_out, out_path);
    }
    if (verify->parsed()) {
      return run_eplt_verify(bundle_path, samples, tol, seed, out_path);
    }
    if (th6->parsed()) {
      return run_theorem6(gamma_a_path, gamma_b_path, seed, out_path);
    }
    if (th7->parsed()) {
      return run_theorem7(delta, gamma_a_path, gamma_b_path, seed, out_path);
    }
    if (act->parsed()) {
      return run_activation(d, out_path);
    }
    if (harness->parsed()) {
      return run_harness(theory, harness_trials, seed, out_path);
    }
    std::cerr << "no subcommand selected\n";
    return 64;
  } catch (const solver_divergence& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
