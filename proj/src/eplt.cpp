// preserva: entanglement-preserving local-thermalization channels.
// SPDX-License-Identifier: MIT

#include "preserva/eplt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "preserva/diamond.hpp"
#include "preserva/divergences.hpp"
#include "preserva/errors.hpp"
#include "preserva/rng.hpp"

namespace preserva {

namespace {

int bipartite_side_of(const cmat& m, const char* who) {
  if (!is_square(m)) {
    throw validation_error("NotBipartiteSquare",
                           std::string(who) + ": matrix is not square");
  }
  const int n = static_cast<int>(m.rows());
  const int d = static_cast<int>(std::llround(std::sqrt(double(n))));
  if (d < 1 || d * d != n) {
    throw validation_error("NotBipartiteSquare",
                           std::string(who) + ": dimension " +
                               std::to_string(n) +
                               " is not a perfect square");
  }
  return d;
}

void require_population_vector(const rvec& gamma, const char* who) {
  if (gamma.size() < 2) {
    throw err_bad_parameter(std::string(who) +
                            ": reference needs dimension >= 2");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma(i) < -1e-12) {
      throw err_bad_parameter(std::string(who) +
                              ": negative population " +
                              std::to_string(gamma(i)));
    }
    sum += gamma(i);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw err_bad_parameter(std::string(who) + ": populations sum to " +
                            std::to_string(sum));
  }
}

cmat diag_state(const rvec& populations) {
  cmat g = cmat::Zero(populations.size(), populations.size());
  for (Eigen::Index i = 0; i < populations.size(); ++i) g(i, i) = populations(i);
  return g;
}

// k_B T / ||H||_inf in the gauge E_0 = 0, beta = 1 (so E_i = ln(p_0/p_i)).
double gauge_temperature(const rvec& gamma) {
  const double p_max = gamma.maxCoeff();
  const double p_min = gamma.minCoeff();
  if (p_min <= 0.0) return 0.0;
  const double span = std::log(p_max / p_min);
  if (span <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / span;
}

}  // namespace

// ===========================================================================
// Twirl and isotropic states
// ===========================================================================

cmat twirl(const cmat& x) {
  const int d = bipartite_side_of(x, "twirl");
  const cmat phi = max_entangled_state(d);
  const complex tr = x.trace();
  complex overlap = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      overlap += x(i * d + i, j * d + j);
    }
  }
  overlap /= d;  // <Psi+| X |Psi+>
  const complex a = (double(d * d) * overlap - tr) / double(d * d - 1);
  const complex b = tr - a;
  return a * phi +
         (b / double(d * d)) * cmat::Identity(x.rows(), x.cols());
}

QuantumChannel twirl_channel(int d) {
  if (d < 2) throw err_bad_parameter("twirl_channel: d must be >= 2");
  static std::map<int, QuantumChannel> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    const cmat j = choi_of_map([](const cmat& x) { return twirl(x); }, d * d);
    it = cache.emplace(d, QuantumChannel::from_choi(j, d * d, d * d)).first;
  }
  return it->second;
}

cmat isotropic(double p, int d) {
  if (d < 2) throw err_bad_parameter("isotropic: d must be >= 2");
  const double lo = -1.0 / double(d * d - 1);
  if (!(p >= lo && p <= 1.0)) {
    throw err_bad_parameter("isotropic: visibility " + std::to_string(p) +
                            " outside [" + std::to_string(lo) + ", 1]");
  }
  return p * max_entangled_state(d) +
         ((1.0 - p) / double(d * d)) * cmat::Identity(d * d, d * d);
}

// ===========================================================================
// Ladder cascade
// ===========================================================================

namespace {

// Stage Kraus in energy-basis labels: (target, source, amplitude); every
// Kraus operator of a stage is amp |target><source| with basis kets.
std::vector<std::tuple<int, int, double>> stage_kraus(int i, double delta,
                                                      int d) {
  const int src = d - 1 - i;       // tilde level i
  const int dst = d - 2 - i;       // tilde level i+1
  std::vector<std::tuple<int, int, double>> ks;
  ks.emplace_back(src, src, std::sqrt(1.0 - delta));
  ks.emplace_back(dst, src, std::sqrt(delta));
  for (int e = 0; e < d; ++e) {
    if (e != src) ks.emplace_back(e, e, 1.0);
  }
  return ks;
}

}  // namespace

QuantumChannel ladder_channel(int i, double delta, int d) {
  if (d < 2) throw err_bad_parameter("ladder_channel: d must be >= 2");
  if (i < 0 || i > d - 2) {
    throw validation_error("BadIndex",
                           "ladder_channel: stage index " + std::to_string(i) +
                               " outside [0, " + std::to_string(d - 2) + "]");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw err_bad_parameter("ladder_channel: weight " + std::to_string(delta) +
                            " outside [0,1]");
  }
  std::vector<cmat> ks;
  for (const auto& [dst, src, amp] : stage_kraus(i, delta, d)) {
    cmat op = cmat::Zero(d, d);
    op(dst, src) = amp;
    ks.push_back(op);
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

LadderParams solve_deltas(const rvec& target_populations) {
  require_population_vector(target_populations, "solve_deltas");
  const int d = static_cast<int>(target_populations.size());
  // Tilde populations q_n = target[d-1-n] must ascend.
  for (int n = 0; n + 1 < d; ++n) {
    const double qn = target_populations(d - 1 - n);
    const double qn1 = target_populations(d - 2 - n);
    if (qn > qn1 + 1e-12) {
      throw validation_error(
          "NotAscending",
          "solve_deltas: tilde populations must be ascending; level " +
              std::to_string(n) + " has " + std::to_string(qn) + " > " +
              std::to_string(qn1));
    }
  }
  LadderParams lp;
  lp.d = d;
  lp.deltas = rvec::Zero(d - 1);
  lp.gammas = rvec::Zero(d);  // Gamma_{-1} .. Gamma_{d-2}
  double running = 1.0;       // Gamma_{-1}
  lp.gammas(0) = running;
  for (int n = 0; n <= d - 2; ++n) {
    const double q = target_populations(d - 1 - n);
    double delta = 1.0 - double(d) * q / running;
    if (delta < -1e-12 || delta > 1.0 + 1e-12) {
      throw validation_error(
          "TargetInfeasible",
          "solve_deltas: stage " + std::to_string(n) +
              " needs weight " + std::to_string(delta) + " outside [0,1]");
    }
    delta = std::clamp(delta, 0.0, 1.0);
    lp.deltas(n) = delta;
    running = running * delta + 1.0;  // Gamma_n
    lp.gammas(n + 1) = running;
  }
  return lp;
}

QuantumChannel ladder_compose(const LadderParams& lp) {
  QuantumChannel ch = ladder_channel(0, lp.deltas(0), lp.d);
  for (int n = 1; n <= lp.d - 2; ++n) {
    ch = ch.then(ladder_channel(n, lp.deltas(n), lp.d));
  }
  return ch;
}

// ===========================================================================
// Families
// ===========================================================================

double eps_star(const rvec& gamma_diag) {
  require_population_vector(gamma_diag, "eps_star");
  return double(gamma_diag.size()) * gamma_diag.minCoeff();
}

rvec eta_eps(const rvec& gamma_diag, double eps) {
  require_population_vector(gamma_diag, "eta_eps");
  const int d = static_cast<int>(gamma_diag.size());
  const double cap = eps_star(gamma_diag);
  if (!(eps >= 0.0) || eps > cap + 1e-12) {
    throw validation_error("OutOfRange",
                           "eta_eps: eps = " + std::to_string(eps) +
                               " outside [0, " + std::to_string(cap) + "]");
  }
  if (1.0 - eps <= 1e-14) {
    // eps_star can only reach 1 for the uniform reference, whose boost is
    // the uniform state itself.
    return rvec::Constant(d, 1.0 / d);
  }
  rvec eta(d);
  for (int i = 0; i < d; ++i) {
    eta(i) = std::max((gamma_diag(i) - eps / d) / (1.0 - eps), 0.0);
  }
  return eta;
}

EpltParams eplt_params(const rvec& gamma_a, const rvec& gamma_b, double eps,
                       EpltFamily family) {
  require_population_vector(gamma_a, "eplt_params");
  require_population_vector(gamma_b, "eplt_params");
  if (gamma_a.size() != gamma_b.size()) {
    throw err_dimension_mismatch(
        "eplt_params: the two references must share one local dimension");
  }
  EpltParams p;
  p.d = static_cast<int>(gamma_a.size());
  p.gamma_a = gamma_a;
  p.gamma_b = gamma_b;
  p.family = family;
  p.p_min = std::min(gamma_a.minCoeff(), gamma_b.minCoeff());
  p.eps_star = double(p.d) * p.p_min;
  if (!(eps >= 0.0) || eps > p.eps_star + 1e-12) {
    throw validation_error("OutOfRange",
                           "eplt_params: eps = " + std::to_string(eps) +
                               " outside [0, " + std::to_string(p.eps_star) +
                               "]");
  }
  p.eps = std::min(eps, p.eps_star);
  p.eta_a = eta_eps(gamma_a, p.eps);
  p.eta_b = eta_eps(gamma_b, p.eps);
  p.temperature_a = gauge_temperature(gamma_a);
  p.temperature_b = gauge_temperature(gamma_b);
  return p;
}

namespace {

// sum_k (K_k on `factor`) M (K_k on factor)^dag for one-sparse Kraus
// operators K_k = amp |dst><src| on that tensor factor.
cmat apply_factor_kraus(const cmat& m, const std::vector<int>& dims,
                        int factor,
                        const std::vector<std::tuple<int, int, double>>& ks) {
  const int total = static_cast<int>(m.rows());
  std::vector<int> stride(dims.size());
  {
    int acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      stride[static_cast<size_t>(k)] = acc;
      acc *= dims[static_cast<size_t>(k)];
    }
  }
  const int df = dims[static_cast<size_t>(factor)];
  const int sf = stride[static_cast<size_t>(factor)];

  // Indices whose `factor` digit equals a given level.
  std::vector<std::vector<int>> by_level(static_cast<size_t>(df));
  for (int r = 0; r < total; ++r) {
    by_level[static_cast<size_t>((r / sf) % df)].push_back(r);
  }

  cmat out = cmat::Zero(total, total);
  for (const auto& [dst, src, amp] : ks) {
    const double w = amp * amp;
    if (w == 0.0) continue;
    const int shift = (dst - src) * sf;
    const auto& rows = by_level[static_cast<size_t>(src)];
    for (int r : rows) {
      for (int c : rows) {
        out(r + shift, c + shift) += w * m(r, c);
      }
    }
  }
  return out;
}

// Ladder cascade applied to one out-side factor of a bipartite-output Choi.
cmat apply_ladder_to_choi_factor(cmat j, int d, int factor,
                                 const LadderParams& lp) {
  const std::vector<int> dims = {d, d, d * d};  // (A_out, B_out, in)
  for (int n = 0; n <= d - 2; ++n) {
    j = apply_factor_kraus(j, dims, factor, stage_kraus(n, lp.deltas(n), d));
  }
  return j;
}

}  // namespace

cmat build_eplt_choi(const EpltParams& params) {
  const int d = params.d;
  const cmat jt = twirl_channel(d).choi();
  const double eps = params.eps;
  if (1.0 - eps <= 1e-14) {
    return jt;  // both families collapse onto the twirl at eps = 1
  }
  cmat j_free;
  if (params.family == EpltFamily::W) {
    cmat j = apply_ladder_to_choi_factor(jt, d, 0, solve_deltas(params.eta_a));
    j_free = apply_ladder_to_choi_factor(j, d, 1, solve_deltas(params.eta_b));
  } else {
    const cmat sigma =
        kron(diag_state(params.eta_a), diag_state(params.eta_b));
    j_free = kron(sigma, cmat::Identity(d * d, d * d)) / double(d * d);
  }
  return (1.0 - eps) * j_free + eps * jt;
}

QuantumChannel build_eplt(const rvec& gamma_a, const rvec& gamma_b, double eps,
                          EpltFamily family) {
  const EpltParams p = eplt_params(gamma_a, gamma_b, eps, family);
  const int dd = p.d * p.d;
  return QuantumChannel::from_choi(build_eplt_choi(p), dd, dd);
}

// ===========================================================================
// Verification and audits
// ===========================================================================

ThermalizationCheck verify_local_thermalization_detailed(
    const cmat& choi, int d, const rvec& gamma_a, const rvec& gamma_b,
    int samples, double tol, std::uint64_t seed) {
  require_population_vector(gamma_a, "verify_local_thermalization");
  require_population_vector(gamma_b, "verify_local_thermalization");
  const int dd = d * d;
  if (choi.rows() != Eigen::Index(dd) * dd) {
    throw err_dimension_mismatch(
        "verify_local_thermalization: Choi size does not match d");
  }
  ThermalizationCheck check;

  // Choi-level identity: tracing out the other output side must leave the
  // Choi of the constant-to-target channel.  By linearity this covers every
  // input state at once.
  const cmat expect_a =
      kron(diag_state(gamma_a), cmat::Identity(dd, dd)) / double(dd);
  const cmat expect_b =
      kron(diag_state(gamma_b), cmat::Identity(dd, dd)) / double(dd);
  const cmat marg_a = partial_trace(choi, {d, d, dd}, {0, 2});
  const cmat marg_b = partial_trace(choi, {d, d, dd}, {1, 2});
  check.choi_marginal_dev =
      std::max((marg_a - expect_a).cwiseAbs().maxCoeff(),
               (marg_b - expect_b).cwiseAbs().maxCoeff());

  // Probe states: maximally entangled, maximally mixed, the product basis,
  // and Haar samples.
  std::vector<cmat> probes;
  probes.push_back(max_entangled_state(d));
  probes.push_back(cmat::Identity(dd, dd) / double(dd));
  for (int k = 0; k < dd; ++k) {
    cmat e = cmat::Zero(dd, dd);
    e(k, k) = 1.0;
    probes.push_back(e);
  }
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const cvec psi = rng.haar_ket(dd);
    probes.push_back(psi * psi.adjoint());
  }
  const cmat ga = diag_state(gamma_a);
  const cmat gb = diag_state(gamma_b);
  double dev = 0.0;
  for (const cmat& rho : probes) {
    const cmat out = apply_choi(choi, dd, dd, rho);
    dev = std::max(dev,
                   (partial_trace(out, {d, d}, {0}) - ga).cwiseAbs().maxCoeff());
    dev = std::max(dev,
                   (partial_trace(out, {d, d}, {1}) - gb).cwiseAbs().maxCoeff());
  }
  check.probe_dev = dev;
  check.probes = static_cast<int>(probes.size());
  check.pass = check.choi_marginal_dev <= tol && check.probe_dev <= tol;
  return check;
}

bool verify_local_thermalization(const QuantumChannel& n, const rvec& gamma_a,
                                 const rvec& gamma_b, int samples, double tol) {
  const int d = static_cast<int>(gamma_a.size());
  if (n.d_in() != d * d || n.d_out() != d * d) {
    throw err_dimension_mismatch(
        "verify_local_thermalization: channel is not on a d x d pair");
  }
  return verify_local_thermalization_detailed(n.choi(), d, gamma_a, gamma_b,
                                              samples, tol)
      .pass;
}

bool is_npt(const cmat& rho, int d_a, int d_b, double tol) {
  if (!is_square(rho) || rho.rows() != Eigen::Index(d_a) * d_b) {
    throw validation_error("NotBipartiteSquare",
                           "is_npt: state is not square of size d_a*d_b");
  }
  const cmat pt = partial_transpose(rho, {d_a, d_b}, 1);
  return herm_eig(herm_part(pt)).values.minCoeff() < -tol;
}

namespace {

// Entanglement-annihilation certificate: all probe outputs must be PPT.
// At 2x2 the PPT check alone is exact; beyond qubits it certifies only
// candidates that are separable-output by construction (a replacement
// channel with separable target, or a cascade of one-sparse Kraus maps
// whose outputs are diagonal in the product basis).
bool certify_annihilating_on_probes(const cmat& choi, int d,
                                    bool separable_by_construction,
                                    std::uint64_t seed) {
  const int dd = d * d;
  std::vector<cmat> probes;
  probes.push_back(max_entangled_state(d));
  probes.push_back(cmat::Identity(dd, dd) / double(dd));
  probes.push_back(isotropic(0.5, d));
  for (int k = 0; k < dd; ++k) {
    cmat e = cmat::Zero(dd, dd);
    e(k, k) = 1.0;
    probes.push_back(e);
  }
  Rng rng(seed);
  for (int s = 0; s < 20; ++s) {
    const cvec psi = rng.haar_ket(dd);
    probes.push_back(psi * psi.adjoint());
  }
  for (const cmat& rho : probes) {
    const cmat out = apply_choi(choi, dd, dd, rho);
    if (is_npt(out, d, d, 1e-10)) return false;
  }
  return d == 2 || separable_by_construction;
}

}  // namespace

Theorem6Report theorem6_audit(const rvec& gamma_a, const rvec& gamma_b,
                              std::uint64_t seed) {
  require_population_vector(gamma_a, "theorem6_audit");
  require_population_vector(gamma_b, "theorem6_audit");
  if (gamma_a.size() != gamma_b.size()) {
    throw err_dimension_mismatch("theorem6_audit: references disagree on d");
  }
  Theorem6Report rep;
  rep.d = static_cast<int>(gamma_a.size());
  const int d = rep.d;
  const int dd = d * d;
  rep.p_min = std::min(gamma_a.minCoeff(), gamma_b.minCoeff());
  rep.bound = (3.0 * d - 1.0) * rep.p_min - 2.0;
  rep.nonvacuous = rep.bound > 0.0;
  rep.trace_bound = 1.0 - 1.0 / d;

  const double es = double(d) * rep.p_min;
  const cmat je =
      build_eplt_choi(eplt_params(gamma_a, gamma_b, es, EpltFamily::E));
  const cmat jt = twirl_channel(d).choi();

  // Candidate annihilating channels.
  std::vector<std::pair<std::string, cmat>> cands;
  const cmat id_in = cmat::Identity(dd, dd);
  cands.emplace_back(
      "replace_product_gamma",
      kron(kron(diag_state(gamma_a), diag_state(gamma_b)), id_in) /
          double(dd));
  cands.emplace_back(
      "replace_product_eta",
      kron(kron(diag_state(eta_eps(gamma_a, es)),
                diag_state(eta_eps(gamma_b, es))),
           id_in) /
          double(dd));
  const cmat j_ladder0 =
      build_eplt_choi(eplt_params(gamma_a, gamma_b, 0.0, EpltFamily::W));
  cands.emplace_back("dephasing_cascade_twirl", j_ladder0);
  cands.emplace_back("half_mixture",
                     0.5 * cands[0].second + 0.5 * j_ladder0);
  Rng rng(seed);
  for (int k = 0; k < 3; ++k) {
    cmat sigma = cmat::Zero(dd, dd);
    rvec w = rng.simplex_point(3);
    for (int j = 0; j < 3; ++j) {
      const cmat ga_r = rng.ginibre(d, d);
      const cmat gb_r = rng.ginibre(d, d);
      cmat ra = ga_r * ga_r.adjoint();
      cmat rb = gb_r * gb_r.adjoint();
      ra /= ra.trace().real();
      rb /= rb.trace().real();
      sigma += w(j) * kron(ra, rb);
    }
    cands.emplace_back("replace_separable_" + std::to_string(k),
                       kron(sigma, id_in) / double(dd));
  }

  rep.min_diamond_distance = std::numeric_limits<double>::infinity();
  rep.min_trace_lower = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < cands.size(); ++c) {
    CandidateDistance cd;
    cd.label = cands[c].first;
    cd.annihilating_certified = certify_annihilating_on_probes(
        cands[c].second, d, /*separable_by_construction=*/true,
        seed + 17 * c);
    cd.diamond_distance =
        diamond_norm(je, cands[c].second, dd, dd).value;
    cd.trace_lower = induced_trace_norm_lower_bound(jt, cands[c].second, dd,
                                                    dd, 8, seed + 31 * c);
    if (cd.annihilating_certified) {
      rep.min_diamond_distance =
          std::min(rep.min_diamond_distance, cd.diamond_distance);
      rep.min_trace_lower = std::min(rep.min_trace_lower, cd.trace_lower);
    }
    rep.candidates.push_back(std::move(cd));
  }
  rep.diamond_ok =
      !rep.nonvacuous || rep.min_diamond_distance >= rep.bound - 1e-6;
  rep.trace_ok = rep.min_trace_lower >= rep.trace_bound - 1e-6;
  return rep;
}

Theorem7Report small_preservability_search(const rvec& gamma_a,
                                           const rvec& gamma_b, double delta,
                                           std::uint64_t seed) {
  require_population_vector(gamma_a, "small_preservability_search");
  require_population_vector(gamma_b, "small_preservability_search");
  if (!(delta > 0.0)) {
    throw err_bad_parameter(
        "small_preservability_search: delta must be positive");
  }
  const int d = static_cast<int>(gamma_a.size());
  const int dd = d * d;
  const double cap =
      double(d) * std::min(gamma_a.minCoeff(), gamma_b.minCoeff());
  const cmat jt = twirl_channel(d).choi();
  const cmat phi = max_entangled_state(d);

  constexpr int kGrid = 200;
  for (int k = kGrid; k >= 1; --k) {
    const double eps = cap * double(k) / double(kGrid);
    const EpltParams params = eplt_params(gamma_a, gamma_b, eps, EpltFamily::W);
    if (1.0 - eps <= 1e-14) continue;  // W collapses onto the twirl there

    // ||W - (L_A x L_B).T||_diamond = eps * ||T - (L_A x L_B).T||_diamond,
    // and the dephasing cascade composed with the twirl annihilates
    // entanglement, so eps * distance certifies a preservability bound.
    cmat j_free =
        apply_ladder_to_choi_factor(jt, d, 0, solve_deltas(params.eta_a));
    j_free = apply_ladder_to_choi_factor(j_free, d, 1,
                                         solve_deltas(params.eta_b));
    const double dist = diamond_norm(jt, j_free, dd, dd).value;
    const double upper = eps * dist;
    if (upper >= delta) continue;

    const cmat jw = (1.0 - eps) * j_free + eps * jt;
    const cmat out = apply_choi(jw, dd, dd, phi);
    const double sf = singlet_fraction(out);
    const cmat pt = partial_transpose(out, {d, d}, 1);
    const double min_pt = herm_eig(herm_part(pt)).values.minCoeff();
    if (sf > 1.0 / d && min_pt < -1e-10) {
      Theorem7Report rep;
      rep.success = true;
      rep.eps = eps;
      rep.delta = delta;
      rep.distance = dist;
      rep.upper_bound = upper;
      rep.singlet_fraction = sf;
      rep.min_pt_eig = min_pt;
      rep.npt = true;
      rep.k_eps =
          1 + static_cast<int>(std::floor((1.0 - eps) * d /
                                          (eps * double(d - 1))));
      (void)seed;
      return rep;
    }
  }
  throw solver_error(
      "SearchFailed",
      "small_preservability_search: no eps on the grid reached a certified "
      "preservability bound below " +
          std::to_string(delta) + " with an entangled witness output");
}

double interpolation_boundary(const QuantumChannel& l0, const rvec& gamma_a,
                              const rvec& gamma_b,
                              const std::vector<cmat>& witness_inputs) {
  require_population_vector(gamma_a, "interpolation_boundary");
  require_population_vector(gamma_b, "interpolation_boundary");
  const int d = static_cast<int>(gamma_a.size());
  const int dd = d * d;
  if (l0.d_in() != dd || l0.d_out() != dd) {
    throw err_dimension_mismatch(
        "interpolation_boundary: channel is not on a d x d pair");
  }
  if (witness_inputs.empty()) {
    throw err_bad_parameter("interpolation_boundary: no witness inputs");
  }
  const cmat target = kron(diag_state(gamma_a), diag_state(gamma_b));
  const auto fires = [&](double p) {
    for (const cmat& rho : witness_inputs) {
      const cmat out = p * l0.apply(rho) + (1.0 - p) * target * rho.trace();
      if (is_npt(out, d, d, 1e-10)) return true;
    }
    return false;
  };
  if (!fires(1.0)) {
    throw solver_error("WitnessNeverFires",
                       "interpolation_boundary: the NPT witness does not fire "
                       "even at p = 1");
  }
  double lo = 0.0, hi = 1.0;
  if (fires(0.0)) return 0.0;  // fires everywhere above p = 0
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (fires(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

ActivationWindow activation_window(int d) {
  if (d < 2) throw err_bad_parameter("activation_window: d must be >= 2");
  ActivationWindow w;
  w.d = d;
  w.lower = 1.0 / double(d + 1);
  w.upper = std::pow(double(d - 1), d - 1) * (3.0 * d - 1.0) /
            (double(d + 1) * std::pow(double(d), d));
  w.nonempty = w.upper > w.lower;
  const double p_mid = 0.5 * (w.lower + w.upper);
  // Twirl-invariant channels turn |Psi+> into the isotropic state at the
  // window visibility, whose entangled fraction has the closed form below.
  w.midpoint_fef = p_mid + (1.0 - p_mid) / double(d * d);
  return w;
}

bool is_entanglement_breaking_2x2(const QuantumChannel& n) {
  const int din = n.d_in();
  const int dout = n.d_out();
  const bool supported = (din == 2 && dout == 2) || (din == 2 && dout == 3) ||
                         (din == 3 && dout == 2);
  if (!supported) {
    throw validation_error(
        "DimensionUnsupported",
        "is_entanglement_breaking_2x2: PPT is conclusive only for 2x2 and "
        "2x3 splits, got " +
            std::to_string(dout) + "x" + std::to_string(din));
  }
  const cmat pt = partial_transpose(n.choi(), {dout, din}, 1);
  return herm_eig(herm_part(pt)).values.minCoeff() >= -1e-10;
}

}  // namespace preserva
