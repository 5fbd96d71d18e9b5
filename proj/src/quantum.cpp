// preserva: quantum channels and state utilities.
// SPDX-License-Identifier: MIT

#include "preserva/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace preserva {

namespace {

std::string fmt_val(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

// ===========================================================================
// States
// ===========================================================================

cvec max_entangled_ket(int d) {
  if (d < 1) throw err_bad_parameter("max_entangled_ket: d must be positive");
  cvec v = cvec::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

cmat max_entangled_state(int d) {
  const cvec v = max_entangled_ket(d);
  return v * v.adjoint();
}

void require_density_matrix(const cmat& rho, const char* who) {
  if (!is_square(rho)) throw err_not_square(std::string(who) + ": state is not square");
  if (!is_hermitian(rho))
    throw err_not_hermitian(std::string(who) + ": state is not Hermitian");
  const double tr_err = std::abs(rho.trace() - complex(1.0, 0.0));
  if (tr_err > kTolDerived)
    throw validation_error("BadParameter",
                           std::string(who) + ": state trace deviates from 1 by " + fmt_val(tr_err));
  const double lo = herm_eig(rho).values.minCoeff();
  if (lo < -kTolDerived)
    throw err_not_psd(std::string(who) + ": state has eigenvalue " + fmt_val(lo));
}

cmat partial_transpose(const cmat& m, const std::vector<int>& dims, int sys) {
  int total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw err_dimension_mismatch("partial_transpose: matrix size does not match dims");
  if (sys < 0 || sys >= static_cast<int>(dims.size()))
    throw err_bad_parameter("partial_transpose: system index out of range");

  // Row-major strides.
  std::vector<int> stride(dims.size());
  {
    int acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      stride[static_cast<size_t>(k)] = acc;
      acc *= dims[static_cast<size_t>(k)];
    }
  }
  const int ds = dims[static_cast<size_t>(sys)];
  const int ss = stride[static_cast<size_t>(sys)];

  cmat out(total, total);
  for (int r = 0; r < total; ++r) {
    const int rs = (r / ss) % ds;   // digit of `sys` in the row index
    for (int c = 0; c < total; ++c) {
      const int cs = (c / ss) % ds;
      // Swap the `sys` digits between row and column.
      const int r2 = r + (cs - rs) * ss;
      const int c2 = c + (rs - cs) * ss;
      out(r, c) = m(r2, c2);
    }
  }
  return out;
}

double negativity(const cmat& rho, int d_a, int d_b) {
  if (!is_square(rho) || rho.rows() != static_cast<Eigen::Index>(d_a) * d_b)
    throw validation_error("NotBipartiteSquare",
                           "negativity: state is not square of size d_a*d_b");
  const cmat pt = partial_transpose(rho, {d_a, d_b}, 1);
  const rvec ev = herm_eig(pt).values;
  double neg = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) < 0.0) neg -= ev(k);
  return neg;
}

// ===========================================================================
// QuantumChannel
// ===========================================================================

QuantumChannel QuantumChannel::from_kraus(std::vector<cmat> kraus) {
  if (kraus.empty())
    throw err_bad_parameter("QuantumChannel: empty Kraus family");
  const Eigen::Index d_out = kraus.front().rows();
  const Eigen::Index d_in = kraus.front().cols();
  if (d_out < 1 || d_in < 1)
    throw err_bad_parameter("QuantumChannel: Kraus operators must be nonempty");
  for (const cmat& k : kraus)
    if (k.rows() != d_out || k.cols() != d_in)
      throw err_dimension_mismatch("QuantumChannel: inconsistent Kraus shapes");

  // Trace preservation: sum K^dag K = I.
  cmat acc = cmat::Zero(d_in, d_in);
  for (const cmat& k : kraus) acc += k.adjoint() * k;
  const double tp_err = (acc - cmat::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  if (tp_err > kTolDerived)
    throw validation_error("NotTracePreserving",
                           "QuantumChannel: sum K^dag K deviates from identity by " + fmt_val(tp_err));

  QuantumChannel ch;
  ch.d_in_ = static_cast<int>(d_in);
  ch.d_out_ = static_cast<int>(d_out);
  ch.kraus_ = std::move(kraus);
  // Choi from Kraus is PSD by construction: J = (1/d_in) sum vec(K)vec(K)^dag.
  ch.choi_ = cmat::Zero(d_out * d_in, d_out * d_in);
  for (const cmat& k : ch.kraus_) {
    const cvec w = vec_rm(k);
    ch.choi_.noalias() += w * w.adjoint();
  }
  ch.choi_ /= static_cast<double>(d_in);
  ch.maybe_compress();
  return ch;
}

QuantumChannel QuantumChannel::from_choi(const cmat& choi, int d_in, int d_out) {
  if (d_in < 1 || d_out < 1)
    throw err_bad_parameter("QuantumChannel: dimensions must be positive");
  if (choi.rows() != static_cast<Eigen::Index>(d_in) * d_out || choi.cols() != choi.rows())
    throw err_dimension_mismatch("QuantumChannel: Choi size does not match d_out*d_in");
  if (!is_hermitian(choi))
    throw err_not_hermitian("QuantumChannel: Choi matrix is not Hermitian");

  EigDecomposition e = herm_eig(choi);
  const double lo = e.values.minCoeff();
  if (lo < -kTolDerived)
    throw validation_error("NotCompletelyPositive",
                           "QuantumChannel: Choi eigenvalue " + fmt_val(lo));
  // Marginal condition tr_out J = I/d_in (trace preservation).
  const cmat marg = partial_trace(choi, {d_out, d_in}, {1});
  const double tp_err =
      (marg - cmat::Identity(d_in, d_in) / static_cast<double>(d_in)).cwiseAbs().maxCoeff();
  if (tp_err > kTolDerived)
    throw validation_error("NotTracePreserving",
                           "QuantumChannel: tr_out(Choi) deviates from I/d_in by " + fmt_val(tp_err));

  QuantumChannel ch;
  ch.d_in_ = d_in;
  ch.d_out_ = d_out;
  ch.choi_ = herm_part(choi);
  const double cutoff = kSpectralCutoff * e.values.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > cutoff) {
      const cvec w = std::sqrt(d_in * e.values(k)) * e.vectors.col(k);
      ch.kraus_.push_back(unvec_rm(w, d_out, d_in));
    }
  }
  if (ch.kraus_.empty())
    throw validation_error("NotCompletelyPositive", "QuantumChannel: Choi has empty support");
  return ch;
}

void QuantumChannel::maybe_compress() {
  if (static_cast<int>(kraus_.size()) <= d_in_ * d_out_) return;
  EigDecomposition e = herm_eig(choi_);
  const double cutoff = kSpectralCutoff * e.values.cwiseAbs().maxCoeff();
  std::vector<cmat> reduced;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > cutoff) {
      const cvec w = std::sqrt(d_in_ * e.values(k)) * e.vectors.col(k);
      reduced.push_back(unvec_rm(w, d_out_, d_in_));
    }
  }
  kraus_ = std::move(reduced);
}

cmat QuantumChannel::apply(const cmat& rho) const {
  if (rho.rows() != d_in_ || rho.cols() != d_in_)
    throw err_dimension_mismatch("QuantumChannel::apply: state size does not match d_in");
  cmat out = cmat::Zero(d_out_, d_out_);
  for (const cmat& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

cmat QuantumChannel::apply_adjoint(const cmat& x) const {
  if (x.rows() != d_out_ || x.cols() != d_out_)
    throw err_dimension_mismatch("QuantumChannel::apply_adjoint: operator size does not match d_out");
  cmat out = cmat::Zero(d_in_, d_in_);
  for (const cmat& k : kraus_) out.noalias() += k.adjoint() * x * k;
  return out;
}

QuantumChannel QuantumChannel::then(const QuantumChannel& after) const {
  if (after.d_in_ != d_out_)
    throw err_dimension_mismatch("QuantumChannel::then: intermediate dimensions disagree");
  std::vector<cmat> ks;
  ks.reserve(kraus_.size() * after.kraus_.size());
  for (const cmat& a : after.kraus_)
    for (const cmat& b : kraus_) ks.push_back(a * b);
  return from_kraus(std::move(ks));
}

QuantumChannel QuantumChannel::tensor(const QuantumChannel& other) const {
  std::vector<cmat> ks;
  ks.reserve(kraus_.size() * other.kraus_.size());
  for (const cmat& a : kraus_)
    for (const cmat& b : other.kraus_) ks.push_back(kron(a, b));
  return from_kraus(std::move(ks));
}

// ===========================================================================
// Channel zoo
// ===========================================================================

QuantumChannel identity_channel(int d) {
  return QuantumChannel::from_kraus({cmat::Identity(d, d)});
}

QuantumChannel unitary_channel(const cmat& u) {
  if (!is_square(u)) throw err_not_square("unitary_channel: u is not square");
  const double dev =
      (u.adjoint() * u - cmat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (dev > kTolDerived)
    throw err_bad_parameter("unitary_channel: u deviates from unitarity by " + fmt_val(dev));
  return QuantumChannel::from_kraus({u});
}

QuantumChannel constant_channel(const cmat& sigma, int d_in) {
  require_density_matrix(sigma, "constant_channel");
  // Kraus: sqrt(lambda_k)|e_k><j| over output eigenvectors and input basis.
  EigDecomposition e = herm_eig(sigma);
  std::vector<cmat> ks;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    const double lam = std::max(e.values(k), 0.0);
    if (lam <= 0.0) continue;
    for (int j = 0; j < d_in; ++j) {
      cmat op = cmat::Zero(sigma.rows(), d_in);
      op.col(j) = std::sqrt(lam) * e.vectors.col(k);
      ks.push_back(op);
    }
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

QuantumChannel completely_depolarizing(int d) {
  return constant_channel(cmat::Identity(d, d) / static_cast<double>(d), d);
}

QuantumChannel partial_trace_channel(const std::vector<int>& dims,
                                     const std::vector<int>& keep) {
  int total = 1;
  for (int d : dims) total *= d;
  int keep_dim = 1;
  for (int k : keep) keep_dim *= dims[static_cast<size_t>(k)];
  // One Kraus operator per traced-out basis label: K_t = <t|_traced.
  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  int traced_dim = total / keep_dim;

  // Build via the permutation that brings kept systems to the front.
  std::vector<int> perm = keep;
  perm.insert(perm.end(), traced.begin(), traced.end());
  const cmat u = permutation_unitary(dims, perm);

  std::vector<cmat> ks;
  for (int t = 0; t < traced_dim; ++t) {
    cmat sel = cmat::Zero(keep_dim, total);
    for (int r = 0; r < keep_dim; ++r) sel(r, r * traced_dim + t) = 1.0;
    ks.push_back(sel * u);
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

QuantumChannel convex_mix(const std::vector<QuantumChannel>& channels,
                          const rvec& weights) {
  if (channels.empty() || weights.size() != static_cast<Eigen::Index>(channels.size()))
    throw validation_error("BadWeights", "convex_mix: weights/channels length mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < -kTolStructural)
      throw validation_error("BadWeights", "convex_mix: negative weight " + fmt_val(weights(i)));
    sum += weights(i);
  }
  if (std::abs(sum - 1.0) > kTolStructural)
    throw validation_error("BadWeights", "convex_mix: weights sum to " + fmt_val(sum));
  const int d_in = channels.front().d_in();
  const int d_out = channels.front().d_out();
  std::vector<cmat> ks;
  for (size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].d_in() != d_in || channels[c].d_out() != d_out)
      throw err_dimension_mismatch("convex_mix: channels have mismatched dimensions");
    const double w = std::max(weights(static_cast<Eigen::Index>(c)), 0.0);
    if (w == 0.0) continue;
    for (const cmat& k : channels[c].kraus()) ks.push_back(std::sqrt(w) * k);
  }
  return QuantumChannel::from_kraus(std::move(ks));
}

QuantumChannel swap_channel(const std::vector<int>& dims,
                            const std::vector<int>& perm) {
  return unitary_channel(permutation_unitary(dims, perm));
}

// ===========================================================================
// Random objects
// ===========================================================================

cmat haar_random_state(int d, Rng& rng) {
  if (d < 1) throw err_bad_parameter("haar_random_state: d must be >= 1");
  const cvec psi = rng.haar_ket(d);
  return psi * psi.adjoint();
}

QuantumChannel random_channel(int d_in, int d_out, int kraus_count, Rng& rng) {
  if (d_in < 1 || d_out < 1 || kraus_count < 1)
    throw err_bad_parameter("random_channel: dimensions must be >= 1");
  if (d_out * kraus_count < d_in)
    throw err_bad_parameter(
        "random_channel: d_out * kraus_count must be >= d_in for an isometry");
  const cmat u = rng.haar_unitary(d_out * kraus_count);
  std::vector<cmat> ks;
  for (int j = 0; j < kraus_count; ++j)
    ks.push_back(u.block(j * d_out, 0, d_out, d_in));
  return QuantumChannel::from_kraus(std::move(ks));
}

// ===========================================================================
// Choi-level helpers
// ===========================================================================

cmat apply_choi(const cmat& choi, int d_in, int d_out, const cmat& rho) {
  if (rho.rows() != d_in || rho.cols() != d_in)
    throw err_dimension_mismatch("apply_choi: state size does not match d_in");
  // N(rho)_{o,o'} = d_in * sum_{a,b} J[(o,a),(o',b)] rho_{a,b}
  cmat out = cmat::Zero(d_out, d_out);
  for (int o = 0; o < d_out; ++o)
    for (int o2 = 0; o2 < d_out; ++o2) {
      complex acc = 0.0;
      for (int a = 0; a < d_in; ++a)
        for (int b = 0; b < d_in; ++b)
          acc += choi(o * d_in + a, o2 * d_in + b) * rho(a, b);
      out(o, o2) = static_cast<double>(d_in) * acc;
    }
  return out;
}

cmat apply_choi_adjoint(const cmat& choi, int d_in, int d_out, const cmat& x) {
  if (x.rows() != d_out || x.cols() != d_out)
    throw err_dimension_mismatch("apply_choi_adjoint: operator size does not match d_out");
  // N^dag(X)_{a,b} = d_in * sum_{o,o'} conj(J[(o,a),(o',b)]) X_{o,o'}
  cmat out = cmat::Zero(d_in, d_in);
  for (int a = 0; a < d_in; ++a)
    for (int b = 0; b < d_in; ++b) {
      complex acc = 0.0;
      for (int o = 0; o < d_out; ++o)
        for (int o2 = 0; o2 < d_out; ++o2)
          acc += std::conj(choi(o * d_in + a, o2 * d_in + b)) * x(o, o2);
      out(a, b) = static_cast<double>(d_in) * acc;
    }
  return out;
}

cmat choi_of_map(const std::function<cmat(const cmat&)>& map, int d_in) {
  cmat out;
  int d_out = 0;
  for (int a = 0; a < d_in; ++a)
    for (int b = 0; b < d_in; ++b) {
      cmat e = cmat::Zero(d_in, d_in);
      e(a, b) = 1.0;
      const cmat img = map(e);
      if (d_out == 0) {
        d_out = static_cast<int>(img.rows());
        out = cmat::Zero(d_out * d_in, d_out * d_in);
      }
      for (int o = 0; o < d_out; ++o)
        for (int o2 = 0; o2 < d_out; ++o2)
          out(o * d_in + a, o2 * d_in + b) = img(o, o2) / static_cast<double>(d_in);
    }
  return out;
}

cmat choi_compose(const cmat& choi_after, int d_mid, int d_out,
                  const cmat& choi_before, int d_in) {
  if (choi_before.rows() != static_cast<Eigen::Index>(d_mid) * d_in)
    throw err_dimension_mismatch("choi_compose: before-Choi size mismatch");
  if (choi_after.rows() != static_cast<Eigen::Index>(d_out) * d_mid)
    throw err_dimension_mismatch("choi_compose: after-Choi size mismatch");
  cmat out = cmat::Zero(d_out * d_in, d_out * d_in);
  cmat x(d_mid, d_mid);
  for (int a = 0; a < d_in; ++a)
    for (int b = 0; b < d_in; ++b) {
      // X = before(E_ab), read off the Choi blocks.
      for (int m = 0; m < d_mid; ++m)
        for (int m2 = 0; m2 < d_mid; ++m2)
          x(m, m2) = static_cast<double>(d_in) * choi_before(m * d_in + a, m2 * d_in + b);
      const cmat y = apply_choi(choi_after, d_mid, d_out, x);
      for (int o = 0; o < d_out; ++o)
        for (int o2 = 0; o2 < d_out; ++o2)
          out(o * d_in + a, o2 * d_in + b) = y(o, o2) / static_cast<double>(d_in);
    }
  return out;
}

cmat choi_tensor_id(const cmat& choi, int d_in, int d_out, int d_id) {
  const int din2 = d_in * d_id;
  const int dout2 = d_out * d_id;
  cmat out = cmat::Zero(static_cast<Eigen::Index>(dout2) * din2,
                        static_cast<Eigen::Index>(dout2) * din2);
  // J2[((o,x),(a,y)),((o',x'),(a',y'))] = J[(o,a),(o',a')] delta_{x y} delta_{x' y'} / d_id
  for (int o = 0; o < d_out; ++o)
    for (int a = 0; a < d_in; ++a)
      for (int o2 = 0; o2 < d_out; ++o2)
        for (int a2 = 0; a2 < d_in; ++a2) {
          const complex v = choi(o * d_in + a, o2 * d_in + a2) / static_cast<double>(d_id);
          for (int x = 0; x < d_id; ++x)
            for (int x2 = 0; x2 < d_id; ++x2) {
              const Eigen::Index r = (static_cast<Eigen::Index>(o) * d_id + x) * din2 + a * d_id + x;
              const Eigen::Index c = (static_cast<Eigen::Index>(o2) * d_id + x2) * din2 + a2 * d_id + x2;
              out(r, c) = v;
            }
        }
  return out;
}

}  // namespace preserva
