// preserva: athermality monotones and thermal-operations experiments.
// SPDX-License-Identifier: MIT

#include "preserva/athermality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "preserva/diamond.hpp"
#include "preserva/errors.hpp"

namespace preserva {

namespace {

constexpr double kEscTol = 1e-9;

rvec diag_populations(const cmat& gamma) {
  rvec p(gamma.rows());
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) p(i) = gamma(i, i).real();
  return p;
}

void require_diagonal_state(const cmat& gamma, const char* who) {
  require_density_matrix(gamma, who);
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
      if (i != j && std::abs(gamma(i, j)) > kTolStructural) {
        throw err_bad_parameter(std::string(who) +
                                ": reference state must be diagonal");
      }
    }
  }
}

// Smallest k with base^k == value, or -1.
int tensor_power(int base, int value) {
  if (base < 2) return value == base ? 1 : -1;
  int k = 0;
  long long acc = 1;
  while (acc < value) {
    acc *= base;
    ++k;
  }
  return acc == value ? k : -1;
}

cmat kron_power(const cmat& a, int k) {
  cmat out = a;
  for (int i = 1; i < k; ++i) out = kron(out, a);
  return out;
}

}  // namespace

// ===========================================================================
// Thermal reference
// ===========================================================================

double ThermalSpec::p_min() const {
  return diag_populations(gamma).minCoeff();
}

rvec ThermalSpec::populations() const { return diag_populations(gamma); }

double ThermalSpec::normalized_temperature() const {
  const double h_norm = energies.cwiseAbs().maxCoeff();
  const double denom = beta * h_norm;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / denom;
}

ThermalSpec thermal_state(const rvec& energies, double beta) {
  const int d = static_cast<int>(energies.size());
  if (d < 1) {
    throw err_bad_parameter("thermal_state: empty energy list");
  }
  for (int i = 0; i + 1 < d; ++i) {
    if (!(energies(i) <= energies(i + 1))) {
      throw validation_error(
          "NotAscending",
          "thermal_state: energies must be ascending, got E[" +
              std::to_string(i) + "] = " + std::to_string(energies(i)) +
              " > E[" + std::to_string(i + 1) +
              "] = " + std::to_string(energies(i + 1)));
    }
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw err_bad_parameter("thermal_state: beta must be finite and >= 0");
  }
  // Shift by the ground energy before exponentiating for numerical safety.
  rvec w(d);
  for (int i = 0; i < d; ++i) {
    w(i) = std::exp(-beta * (energies(i) - energies(0)));
  }
  ThermalSpec spec;
  spec.energies = energies;
  spec.beta = beta;
  spec.gamma = cmat::Zero(d, d);
  const double z = w.sum();
  for (int i = 0; i < d; ++i) spec.gamma(i, i) = w(i) / z;
  return spec;
}

bool is_gibbs_preserving(const QuantumChannel& n, const cmat& gamma_in,
                         const cmat& gamma_out, double tol) {
  require_diagonal_state(gamma_in, "is_gibbs_preserving");
  require_diagonal_state(gamma_out, "is_gibbs_preserving");
  const int k = tensor_power(static_cast<int>(gamma_in.rows()), n.d_in());
  const int l = tensor_power(static_cast<int>(gamma_out.rows()), n.d_out());
  if (k < 1 || l < 1) {
    throw err_dimension_mismatch(
        "is_gibbs_preserving: channel dimensions are not tensor powers of the "
        "reference dimensions");
  }
  const cmat in = kron_power(gamma_in, k);
  const cmat expect = kron_power(gamma_out, l);
  return (n.apply(in) - expect).cwiseAbs().maxCoeff() <= tol;
}

bool is_gibbs_preserving(const QuantumChannel& n, const ThermalSpec& spec_in,
                         const ThermalSpec& spec_out, double tol) {
  return is_gibbs_preserving(n, spec_in.gamma, spec_out.gamma, tol);
}

// ===========================================================================
// Reference Gibbs-preserving channels
// ===========================================================================

namespace {

QuantumChannel partial_thermalization_to(const cmat& gamma, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw err_bad_parameter(
        "gibbs_channel: thermalization weight must lie in [0,1], got " +
        std::to_string(lambda));
  }
  const int d = static_cast<int>(gamma.rows());
  std::vector<cmat> ks;
  ks.push_back(std::sqrt(lambda) * cmat::Identity(d, d));
  const rvec pops = diag_populations(gamma);
  for (int i = 0; i < d; ++i) {
    if (pops(i) <= 0.0) continue;
    for (int j = 0; j < d; ++j) {
      cmat op = cmat::Zero(d, d);
      op(i, j) = std::sqrt((1.0 - lambda) * pops(i));
      ks.push_back(op);
    }
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

QuantumChannel dephasing_channel(int d) {
  std::vector<cmat> ks;
  for (int i = 0; i < d; ++i) {
    cmat op = cmat::Zero(d, d);
    op(i, i) = 1.0;
    ks.push_back(op);
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

}  // namespace

QuantumChannel gibbs_channel(GibbsChannelKind kind, const ThermalSpec& spec,
                             double param) {
  const int d = spec.d();
  switch (kind) {
    case GibbsChannelKind::partial_thermalization:
      return partial_thermalization_to(spec.gamma, param);
    case GibbsChannelKind::energy_dephasing:
      return dephasing_channel(d);
    case GibbsChannelKind::hamiltonian_evolution: {
      if (!std::isfinite(param)) {
        throw err_bad_parameter("gibbs_channel: evolution time must be finite");
      }
      cmat u = cmat::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        u(i, i) = std::exp(complex(0.0, -spec.energies(i) * param));
      }
      return unitary_channel(u);
    }
  }
  throw err_bad_parameter("gibbs_channel: unknown kind");
}

QuantumChannel sample_gp_measure_prepare(Rng& rng, const cmat& gamma_in,
                                         const cmat& gamma_out) {
  require_diagonal_state(gamma_in, "sample_gp_measure_prepare");
  require_diagonal_state(gamma_out, "sample_gp_measure_prepare");
  const int d_in = static_cast<int>(gamma_in.rows());
  const int d_out = static_cast<int>(gamma_out.rows());

  // Random projective measurement basis.
  const cmat basis = rng.haar_unitary(d_in);
  rvec probs(d_in);
  for (int k = 0; k < d_in; ++k) {
    probs(k) = std::real(
        (basis.col(k).adjoint() * gamma_in * basis.col(k))(0, 0));
  }

  // Random prepared states, recentered so the gamma_in-average is exactly
  // gamma_out: sigma_k = gamma_out + s*(tau_k - mean), with s halved until
  // every sigma_k is PSD.
  std::vector<cmat> tau(d_in);
  cmat mean = cmat::Zero(d_out, d_out);
  for (int k = 0; k < d_in; ++k) {
    const cmat g = rng.ginibre(d_out, d_out);
    cmat t = g * g.adjoint();
    t /= t.trace().real();
    tau[k] = t;
    mean += probs(k) * t;
  }
  double s = 1.0;
  std::vector<cmat> sigma(d_in);
  for (int tries = 0; tries < 200; ++tries) {
    bool ok = true;
    for (int k = 0; k < d_in && ok; ++k) {
      sigma[k] = gamma_out + s * (tau[k] - mean);
      ok = herm_eig(herm_part(sigma[k])).values.minCoeff() >= 0.0;
    }
    if (ok) break;
    s *= 0.5;
    if (tries == 199) {
      for (int k = 0; k < d_in; ++k) sigma[k] = gamma_out;
    }
  }

  std::vector<cmat> ks;
  for (int k = 0; k < d_in; ++k) {
    const EigDecomposition e = herm_eig(herm_part(sigma[k]));
    for (Eigen::Index j = 0; j < e.values.size(); ++j) {
      const double lam = std::max(e.values(j), 0.0);
      if (lam <= 1e-15) continue;
      ks.push_back(std::sqrt(lam) * e.vectors.col(j) *
                   basis.col(k).adjoint());
    }
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

QuantumChannel sample_gp_channel(Rng& rng, const cmat& gamma) {
  require_diagonal_state(gamma, "sample_gp_channel");
  const int d = static_cast<int>(gamma.rows());

  const auto sample_generator = [&]() -> QuantumChannel {
    switch (rng.uniform_int(4)) {
      case 0:
        return partial_thermalization_to(gamma, rng.uniform());
      case 1:
        return dephasing_channel(d);
      case 2: {
        cmat u = cmat::Zero(d, d);
        for (int i = 0; i < d; ++i) {
          u(i, i) = std::exp(complex(0.0, 2.0 * M_PI * rng.uniform()));
        }
        return unitary_channel(u);
      }
      default:
        return sample_gp_measure_prepare(rng, gamma, gamma);
    }
  };

  QuantumChannel ch = sample_generator();
  const int extra_stages = static_cast<int>(rng.uniform_int(3));
  for (int s = 0; s < extra_stages; ++s) {
    ch = ch.then(sample_generator());
  }
  if (rng.uniform() < 0.3) {
    const double w = rng.uniform();
    rvec weights(2);
    weights << w, 1.0 - w;
    ch = convex_mix({ch, sample_generator()}, weights);
  }
  return ch;
}

// ===========================================================================
// Preservability monotones
// ===========================================================================

namespace {

// Resolve the output reference gamma_out^{(x)l} for a channel gated on a
// single-system spec, inferring tensor powers from the dimensions.
cmat resolve_output_reference(const QuantumChannel& n, const ThermalSpec& spec,
                              const char* who) {
  if (!is_gibbs_preserving(n, spec, spec)) {
    throw validation_error(
        "NotGibbsPreserving",
        std::string(who) +
            ": channel does not preserve the Gibbs reference to tolerance");
  }
  const int l = tensor_power(spec.d(), n.d_out());
  return kron_power(spec.gamma, l);
}

double lambda_max_2x2(const cmat& a) {
  const double half_tr = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double half_diff = 0.5 * (a(0, 0).real() - a(1, 1).real());
  return half_tr + std::sqrt(half_diff * half_diff + std::norm(a(0, 1)));
}

}  // namespace

double p_bar_dmax_core(const QuantumChannel& n, const cmat& gamma_out) {
  const cmat ref =
      kron(gamma_out, cmat::Identity(n.d_in(), n.d_in())) / double(n.d_in());
  const cmat b = inv_sqrt_on_support(ref);
  const cmat proj = b * ref * b;  // support projector
  const cmat j = n.choi();
  const double leak =
      std::abs(j.trace() - (proj * j * proj).trace());
  if (leak > 1e-9) return std::numeric_limits<double>::infinity();
  return std::log2(eig_max(herm_part(b * j * b)));
}

double p_bar_dmax(const QuantumChannel& n, const ThermalSpec& spec) {
  return p_bar_dmax_core(n, resolve_output_reference(n, spec, "p_bar_dmax"));
}

PDmaxResult p_dmax_detailed(const QuantumChannel& n, const ThermalSpec& spec,
                            int restarts, std::uint64_t seed) {
  if (restarts < 1) {
    throw err_bad_parameter("p_dmax: restarts must be >= 1");
  }
  const cmat gamma_out = resolve_output_reference(n, spec, "p_dmax");
  const int d_in = n.d_in();
  const int d_out = n.d_out();
  rvec inv_sqrt_pop(d_out);
  for (int i = 0; i < d_out; ++i) {
    inv_sqrt_pop(i) = 1.0 / std::sqrt(gamma_out(i, i).real());
  }
  const auto conjugated = [&](const cmat& x) {
    cmat a(d_out, d_out);
    for (int i = 0; i < d_out; ++i) {
      for (int j = 0; j < d_out; ++j) {
        a(i, j) = x(i, j) * inv_sqrt_pop(i) * inv_sqrt_pop(j);
      }
    }
    return a;
  };
  const auto objective = [&](const cvec& psi) {
    const cmat a = conjugated(n.apply(psi * psi.adjoint()));
    return d_out == 2 ? lambda_max_2x2(a) : eig_max(herm_part(a));
  };

  // Alternating eigenvector ascent on the bilinear form
  // <phi| G^{-1/2} N(psi psi^dag) G^{-1/2} |phi>.
  Rng rng(seed);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    cvec psi;
    if (r < d_in) {
      psi = cvec::Zero(d_in);
      psi(r) = 1.0;
    } else {
      psi = rng.haar_ket(d_in);
    }
    double prev = -1.0;
    for (int it = 0; it < 200; ++it) {
      const cmat a = herm_part(conjugated(n.apply(psi * psi.adjoint())));
      const EigDecomposition ea = herm_eig(a);
      const double lam = ea.values(ea.values.size() - 1);
      best = std::max(best, lam);
      if (lam - prev <= 1e-13) break;
      prev = lam;
      const cvec phi = ea.vectors.col(ea.values.size() - 1);
      const cmat w = herm_part(
          n.apply_adjoint(conjugated(phi * phi.adjoint())));
      const EigDecomposition ew = herm_eig(w);
      psi = ew.vectors.col(ew.values.size() - 1);
    }
  }

  PDmaxResult res;
  res.seesaw_bits = std::log2(best);
  res.grid_bits = -std::numeric_limits<double>::infinity();
  if (d_in == 2) {
    // Bloch-sphere sweep at 1e-2 rad: an independent certificate that the
    // see-saw did not miss a basin.
    double grid_best = 0.0;
    const double step = 1e-2;
    const int n_theta = static_cast<int>(std::ceil(M_PI / step));
    const int n_phi = static_cast<int>(std::ceil(2.0 * M_PI / step));
    cvec psi(2);
    for (int it = 0; it <= n_theta; ++it) {
      const double theta = std::min(it * step, M_PI);
      const double c = std::cos(theta / 2.0);
      const double s = std::sin(theta / 2.0);
      for (int ip = 0; ip < n_phi; ++ip) {
        const double phi_ang = ip * step;
        psi(0) = c;
        psi(1) = complex(s * std::cos(phi_ang), s * std::sin(phi_ang));
        grid_best = std::max(grid_best, objective(psi));
      }
    }
    res.grid_bits = std::log2(grid_best);
    res.grid_certified = best >= grid_best - 1e-9;
    best = std::max(best, grid_best);
  } else {
    res.grid_certified = false;
  }
  res.bits = std::log2(best);
  return res;
}

double p_dmax(const QuantumChannel& n, const ThermalSpec& spec) {
  return p_dmax_detailed(n, spec).bits;
}

SmoothBounds smooth_p_bar_bounds(const QuantumChannel& n,
                                 const ThermalSpec& spec, double delta) {
  if (!(delta >= 0.0) || delta >= 1.0) {
    throw err_bad_parameter(
        "smooth_p_bar_bounds: delta must lie in [0,1), got " +
        std::to_string(delta));
  }
  const cmat gamma_out =
      resolve_output_reference(n, spec, "smooth_p_bar_bounds");
  const double upper = p_bar_dmax_core(n, gamma_out);
  // Reference minimum population of gamma_out (x) I/d_in; any channel within
  // diamond radius delta moves the robustness scale by at most
  // 2*delta / p_min(ref), and no channel drops below scale 1.
  double ref_pmin = 1.0;
  for (Eigen::Index i = 0; i < gamma_out.rows(); ++i) {
    ref_pmin = std::min(ref_pmin, gamma_out(i, i).real());
  }
  ref_pmin /= double(n.d_in());
  const double scale = std::exp2(upper) - 2.0 * delta / ref_pmin;
  const double lower = std::log2(std::max(1.0, scale));
  return {std::min(lower, upper), upper, delta};
}

// ===========================================================================
// Spectrum condition, bath bounds, communication, convex split
// ===========================================================================

bool energy_subspace_condition(const rvec& energies, int m_max) {
  if (m_max < 1) {
    throw err_bad_parameter("energy_subspace_condition: m_max must be >= 1");
  }
  if (m_max > 6) {
    throw validation_error(
        "CapExceeded",
        "energy_subspace_condition: m_max = " + std::to_string(m_max) +
            " exceeds the enumeration cap of 6");
  }
  const int d = static_cast<int>(energies.size());
  // For each multiset size, enumerate all compositions (occupation vectors)
  // and require pairwise-distinct total energies.
  for (int total = 1; total <= m_max; ++total) {
    std::vector<double> sums;
    std::vector<int> occ(d, 0);
    const std::function<void(int, int, double)> enumerate =
        [&](int level, int remaining, double acc) {
          if (level == d - 1) {
            sums.push_back(acc + remaining * energies(level));
            return;
          }
          for (int take = 0; take <= remaining; ++take) {
            enumerate(level + 1, remaining - take,
                      acc + take * energies(level));
          }
        };
    enumerate(0, total, 0.0);
    std::sort(sums.begin(), sums.end());
    for (size_t i = 0; i + 1 < sums.size(); ++i) {
      if (sums[i + 1] - sums[i] <= kEscTol) return false;
    }
  }
  return true;
}

BathBoundReport bath_bounds(const QuantumChannel& n, const ThermalSpec& spec,
                            double epsilon, int m_max, std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw validation_error(
        "BadEpsilon", "bath_bounds: epsilon must lie in (0,1), got " +
                          std::to_string(epsilon));
  }
  BathBoundReport rep;
  rep.epsilon = epsilon;
  rep.m_max = m_max;
  rep.p_dmax_bits = p_dmax(n, spec);
  const double scale = std::exp2(rep.p_dmax_bits);
  rep.upper_bound = scale / (epsilon * epsilon);
  rep.lower_bound_rhs = scale - 2.0 * std::sqrt(epsilon) / spec.p_min() - 1.0;
  rep.esc_holds = energy_subspace_condition(spec.energies, m_max);

  // Coherence annihilation: outputs of random pure probes must be diagonal
  // in the energy basis.
  Rng rng(seed);
  rep.probes = 100;
  rep.coherence_annihilating = true;
  for (int t = 0; t < rep.probes; ++t) {
    const cvec psi = rng.haar_ket(n.d_in());
    const cmat out = n.apply(psi * psi.adjoint());
    for (Eigen::Index i = 0; i < out.rows() && rep.coherence_annihilating; ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        if (i != j && std::abs(out(i, j)) > 1e-9) {
          rep.coherence_annihilating = false;
          break;
        }
      }
    }
    if (!rep.coherence_annihilating) break;
  }
  return rep;
}

CommReport comm_error(const QuantumChannel& n, const QuantumChannel& enc,
                      const QuantumChannel& dec, const ThermalSpec& spec_s,
                      const ThermalSpec& spec_a, const ThermalSpec& spec_c,
                      int m, double delta) {
  const int d_s = spec_s.d();
  const int d_a = spec_a.d();
  const int d_c = spec_c.d();
  if (n.d_in() != d_s || n.d_out() != d_s) {
    throw err_dimension_mismatch("comm_error: channel is not on the system");
  }
  if (enc.d_in() != d_c || enc.d_out() != d_s * d_a) {
    throw err_dimension_mismatch(
        "comm_error: encoder must map the message system to system (x) "
        "ancilla");
  }
  if (dec.d_in() != d_s * d_a || dec.d_out() != d_c) {
    throw err_dimension_mismatch(
        "comm_error: decoder must map system (x) ancilla to the message "
        "system");
  }
  if (m < 1 || m > d_c) {
    throw err_dimension_mismatch(
        "comm_error: message count must lie in [1, dim of message system]");
  }
  const cmat gamma_sa = kron(spec_s.gamma, spec_a.gamma);
  if (!is_gibbs_preserving(n, spec_s, spec_s) ||
      !is_gibbs_preserving(enc, spec_c.gamma, gamma_sa) ||
      !is_gibbs_preserving(dec, gamma_sa, spec_c.gamma)) {
    throw validation_error(
        "NotGibbsPreserving",
        "comm_error: encoder, channel, and decoder must all preserve their "
        "Gibbs references");
  }

  const QuantumChannel replacer = constant_channel(spec_a.gamma, d_a);
  const QuantumChannel line = enc.then(n.tensor(replacer)).then(dec);

  double success = 0.0;
  for (int msg = 0; msg < m; ++msg) {
    cmat e = cmat::Zero(d_c, d_c);
    e(msg, msg) = 1.0;
    success += line.apply(e)(msg, msg).real();
  }
  CommReport rep;
  rep.m = m;
  rep.delta = delta;
  rep.avg_error = 1.0 - success / m;
  rep.p_bar_bits = p_bar_dmax(n, spec_s);
  const double margin = 1.0 - rep.avg_error - delta;
  rep.capacity_bound = margin > 0.0
                           ? rep.p_bar_bits + std::log2(1.0 / margin)
                           : std::numeric_limits<double>::infinity();
  rep.bound_holds = std::log2(double(m)) <= rep.capacity_bound + 1e-9;
  return rep;
}

DestructionReport convex_split_experiment(const QuantumChannel& e,
                                          const ThermalSpec& spec, int n) {
  const int d = spec.d();
  if (e.d_in() != d || e.d_out() != d) {
    throw err_dimension_mismatch(
        "convex_split_experiment: channel dimensions must match the "
        "reference system");
  }
  if (n < 2 || n > 3) {
    throw validation_error(
        "DimensionTooLarge",
        "convex_split_experiment: n = " + std::to_string(n) +
            " is outside the supported range {2,3} (the n-fold diamond solve "
            "exceeds the interior-point ceiling beyond that)");
  }
  if (!is_gibbs_preserving(e, spec, spec)) {
    throw validation_error(
        "NotGibbsPreserving",
        "convex_split_experiment: channel must preserve the Gibbs reference");
  }

  DestructionReport rep;
  rep.n = n;
  rep.p = std::exp2(-p_bar_dmax(e, spec));
  rep.delta_premise = std::sqrt(1.0 / (rep.p * n));
  rep.premise_holds =
      std::log2(double(n)) + 1e-9 >=
      std::log2(1.0 / rep.p) + 2.0 * std::log2(1.0 / rep.delta_premise);

  const QuantumChannel replacer = constant_channel(spec.gamma, d);

  // Direct mixture: E in slot i, replacers elsewhere, uniform over i.
  std::vector<QuantumChannel> terms;
  for (int slot = 0; slot < n; ++slot) {
    QuantumChannel chain = (slot == 0) ? e : replacer;
    for (int j = 1; j < n; ++j) {
      chain = chain.tensor(slot == j ? e : replacer);
    }
    terms.push_back(std::move(chain));
  }
  const rvec weights = rvec::Constant(n, 1.0 / n);
  const QuantumChannel mixture = convex_mix(terms, weights);

  // Equivalent form: conjugate E (x) replacer^(x)(n-1) by slot swaps.
  const std::vector<int> dims(static_cast<size_t>(n), d);
  QuantumChannel base = e;
  for (int j = 1; j < n; ++j) base = base.tensor(replacer);
  std::vector<QuantumChannel> permuted_terms;
  for (int slot = 0; slot < n; ++slot) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) perm[static_cast<size_t>(j)] = j;
    std::swap(perm[0], perm[static_cast<size_t>(slot)]);
    const QuantumChannel swap_ch =
        unitary_channel(permutation_unitary(dims, perm));
    permuted_terms.push_back(swap_ch.then(base).then(swap_ch));
  }
  const QuantumChannel permuted = convex_mix(permuted_terms, weights);
  rep.choi_permutation_dev =
      (permuted.choi() - mixture.choi()).cwiseAbs().maxCoeff();

  QuantumChannel target = replacer;
  for (int j = 1; j < n; ++j) target = target.tensor(replacer);
  const DiamondResult dist = diamond_norm(mixture.choi(), target.choi(),
                                          mixture.d_in(), mixture.d_out());
  rep.distance = dist.value;
  return rep;
}

}  // namespace preserva
