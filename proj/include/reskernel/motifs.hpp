#pragma once

// Motifs of the temporal kernel: eigenvectors m_i of the metric tensor Q with
// weights omega_i = sqrt(lambda_i). Alongside the empirical extraction this
// header carries closed-form predictions for the three coupling regimes
// (random i.i.d., symmetric, scaled cyclic permutation) and a comparison
// report between the two.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"
#include "temporal_kernel.hpp"

namespace reskernel {

// Q has an eigenvalue below -1e-9 * lambda_max: not round-off, a real bug.
class psd_violation : public std::domain_error {
 public:
  psd_violation(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

inline constexpr double kDefaultThresholdRatio = 1e-2;
inline constexpr double kNegativeClampRatio = 1e-9;
inline constexpr double kClusterTolerance = 1e-8;

struct MotifSet {
  std::vector<Vector> motifs;  // unit norm, mutually orthogonal
  Vector weights;              // omega_i, descending
  Vector spectrum;             // all clamped eigenvalues of Q, descending
  double threshold_ratio = kDefaultThresholdRatio;
  std::size_t tau = 0;
  std::size_t state_dimension = 0;

  std::size_t size() const noexcept { return motifs.size(); }
  bool empty() const noexcept { return motifs.empty(); }
};

inline MotifSet extract_motifs(const MetricTensor& Q,
                               double threshold_ratio = kDefaultThresholdRatio) {
  detail::require(threshold_ratio > 0.0 && threshold_ratio <= 1.0,
                  "extract_motifs: threshold ratio must lie in (0, 1]");
  MotifSet out;
  out.threshold_ratio = threshold_ratio;
  out.tau = Q.horizon();
  out.state_dimension = Q.state_dimension;

  const EigenDecomposition eig = sym_eig(Q.q);
  const double top = std::max(eig.values.front(), 0.0);
  out.spectrum = eig.values;
  for (double& lambda : out.spectrum) {
    if (lambda >= 0.0) continue;
    if (lambda < -kNegativeClampRatio * top)
      throw psd_violation(
          detail::concat("extract_motifs: metric tensor is not PSD (eigenvalue ", lambda,
                         ", largest ", top, ")"),
          lambda);
    lambda = 0.0;
  }
  if (top == 0.0) return out;

  const double omega_max = std::sqrt(top);
  for (std::size_t k = 0; k < out.spectrum.size(); ++k) {
    const double omega = std::sqrt(out.spectrum[k]);
    if (omega == 0.0 || omega < threshold_ratio * omega_max) break;
    out.motifs.push_back(eig.vectors.column(k));
    out.weights.push_back(omega);
  }
  return out;
}

// Matching scores omega_i <m_i, u>; <represent(u), represent(v)> recovers
// K(u, v) up to the discarded part of the spectrum.
inline Vector represent(const MotifSet& set, const TimeSeries& u) {
  detail::require(u.horizon() == set.tau,
                  detail::concat("represent: series horizon ", u.horizon(),
                                 " differs from motif length ", set.tau));
  Vector out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = set.weights[i] * dot(set.motifs[i], u.values);
  return out;
}

// ---------------------------------------------------------------------------
// Predictions

enum class PredictionKind { random_markovian, symmetric_components, cycle_blocks, cycle_periodic };

inline std::string_view to_string(PredictionKind k) {
  switch (k) {
    case PredictionKind::random_markovian: return "random";
    case PredictionKind::symmetric_components: return "symmetric";
    case PredictionKind::cycle_blocks: return "cycle";
    case PredictionKind::cycle_periodic: return "cycle-periodic";
  }
  return "?";
}

struct MotifPrediction {
  PredictionKind kind = PredictionKind::random_markovian;
  std::size_t tau = 0;
  std::vector<Vector> motifs;  // unit norm, descending weight
  Vector weights;

  // Symmetric coupling only. The component motifs are not orthogonal and
  // are not eigenvectors of Q; they must not be compared against Q's motifs.
  Vector component_eigenvalues;   // sigma_a, sorted with the motifs
  Vector component_projections;   // s_a^T w, sorted with the motifs
  Matrix reconstructed_q;         // sum_a (s_a^T w)^2 m^(a) m^(a)^T

  // Cycle couplings: the small core matrix (R, or T for periodic inputs),
  // its eigenpairs, and the geometric block factor sum_k nu^(2 k b), where b
  // is the block length. omega_i = sqrt(core_eigenvalue_i * block_factor).
  Matrix core_matrix;
  std::vector<Vector> core_motifs;
  Vector core_eigenvalues;
  double block_factor = 1.0;

  bool comparable_to_empirical() const noexcept {
    return kind != PredictionKind::symmetric_components;
  }
  std::size_t size() const noexcept { return motifs.size(); }
};

// Random i.i.d. coupling, large N: Q is close to
// ||w||^2 diag(1, (nu/2)^2, (nu/2)^4, ...), so the motifs are the standard
// basis with weights ||w|| (nu/2)^(i-1).
inline MotifPrediction predict_random(std::size_t n, double nu, double w_norm, std::size_t tau) {
  detail::require(n >= 1 && tau >= 1, "predict_random: N and tau must be positive");
  MotifPrediction out;
  out.kind = PredictionKind::random_markovian;
  out.tau = tau;
  const std::size_t count = std::min(n, tau);
  double weight = w_norm;
  for (std::size_t i = 0; i < count; ++i) {
    Vector e(tau, 0.0);
    e[i] = 1.0;
    out.motifs.push_back(std::move(e));
    out.weights.push_back(weight);
    weight *= nu / 2.0;
  }
  return out;
}

// Predicted eigenvalue lambda_hat_i = ||w||^2 (nu/2)^(2(i-1)), i >= 1.
inline double predicted_random_eigenvalue(std::size_t i, double nu, double w_norm) {
  detail::require(i >= 1, "predicted_random_eigenvalue: index is 1-based");
  return w_norm * w_norm * std::pow(nu / 2.0, 2.0 * static_cast<double>(i - 1));
}

namespace detail {

// (1, r, r^2, ..., r^(len-1))
inline Vector geometric_profile(double r, std::size_t len) {
  Vector m(len);
  double x = 1.0;
  for (auto& v : m) {
    v = x;
    x *= r;
  }
  return m;
}

inline void normalize(Vector& v) {
  const double len = norm2(v);
  if (len > 0.0)
    for (auto& x : v) x /= len;
}

// sum_{k=0}^{count-1} ratio^k, stable at ratio = 1.
inline double geometric_sum(double ratio, std::size_t count) {
  double s = 0.0, term = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    s += term;
    term *= ratio;
  }
  return s;
}

// Lift the eigenpairs of a b x b core matrix to tau-long block motifs
// (m, d m, d^2 m, ...) with d = nu^b.
inline void assemble_blocks(MotifPrediction& out, const Matrix& core, double nu, std::size_t tau) {
  const std::size_t b = core.rows();
  require(b >= 1 && tau % b == 0, "block length must divide tau");
  const std::size_t copies = tau / b;
  const double decay = std::pow(nu, static_cast<double>(b));
  out.core_matrix = core;
  out.block_factor = geometric_sum(decay * decay, copies);
  const EigenDecomposition eig = sym_eig(core);
  for (std::size_t i = 0; i < b; ++i) {
    const double lambda = std::max(eig.values[i], 0.0);
    Vector core_motif = eig.vectors.column(i);
    Vector m(tau);
    double scale = 1.0;
    for (std::size_t c = 0; c < copies; ++c) {
      for (std::size_t k = 0; k < b; ++k) m[c * b + k] = scale * core_motif[k];
      scale *= decay;
    }
    normalize(m);
    out.core_motifs.push_back(std::move(core_motif));
    out.core_eigenvalues.push_back(eig.values[i]);
    out.motifs.push_back(std::move(m));
    out.weights.push_back(std::sqrt(lambda * out.block_factor));
  }
}

// <a, P^k a> for the right-shift cyclic permutation, k = 0..n-1.
inline Vector cyclic_autocorrelation(std::span<const double> a) {
  const std::size_t n = a.size();
  Vector c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[(i + n - k) % n];
    c[k] = s;
  }
  return c;
}

}  // namespace detail

// Symmetric coupling W = S diag(sigma) S^T: Q = sum_a (s_a^T w)^2 m^(a) m^(a)^T
// with m^(a) = (1, sigma_a, ..., sigma_a^(tau-1)). Each component is reported
// as a normalized motif with weight |s_a^T w| ||m^(a)||.
inline MotifPrediction predict_symmetric(const Matrix& W, std::span<const double> w,
                                         std::size_t tau) {
  detail::check_reservoir(W, w);
  detail::require(tau >= 1, "predict_symmetric: tau must be positive");
  detail::require(asymmetry(W) <= 1e-12, "predict_symmetric: coupling W is not symmetric");
  const EigenDecomposition eig = sym_eig(W);
  const std::size_t n = W.rows();

  struct Component {
    double sigma, projection, weight;
    Vector raw;
  };
  std::vector<Component> comps;
  for (std::size_t a = 0; a < n; ++a) {
    const Vector s = eig.vectors.column(a);
    Component c{eig.values[a], dot(s, w), 0.0, detail::geometric_profile(eig.values[a], tau)};
    c.weight = std::abs(c.projection) * norm2(c.raw);
    comps.push_back(std::move(c));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const Component& x, const Component& y) { return x.weight > y.weight; });

  MotifPrediction out;
  out.kind = PredictionKind::symmetric_components;
  out.tau = tau;
  out.reconstructed_q = Matrix(tau, tau);
  for (const auto& c : comps) {
    const double coef = c.projection * c.projection;
    for (std::size_t i = 0; i < tau; ++i)
      for (std::size_t j = i; j < tau; ++j) out.reconstructed_q(i, j) += coef * c.raw[i] * c.raw[j];
    Vector m = c.raw;
    detail::normalize(m);
    out.motifs.push_back(std::move(m));
    out.weights.push_back(c.weight);
    out.component_eigenvalues.push_back(c.sigma);
    out.component_projections.push_back(c.projection);
  }
  for (std::size_t i = 0; i < tau; ++i)
    for (std::size_t j = 0; j < i; ++j) out.reconstructed_q(i, j) = out.reconstructed_q(j, i);
  return out;
}

// Metric tensor at horizon N for W = nu P: R(i,j) = nu^(i+j-2) w^T P^(j-i) w.
inline Matrix cycle_core_matrix(double nu, std::span<const double> w) {
  const std::size_t n = w.size();
  const Vector corr = detail::cyclic_autocorrelation(w);
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = std::pow(nu, static_cast<double>(i + j)) * corr[(j + n - i) % n];
  return r;
}

// W = nu P, tau = ell N: motifs are ell decaying copies of the eigenvectors
// of R, weights sqrt(lambda_R) * sqrt((1 - nu^(2 tau)) / (1 - nu^(2N))).
inline MotifPrediction predict_cycle(std::size_t n, double nu, std::span<const double> w,
                                     std::size_t ell) {
  detail::require(ell >= 1, "predict_cycle: ell must be at least 1");
  detail::require(n >= 1 && w.size() == n, "predict_cycle: input coupling must have length N");
  detail::require(nu > 0.0 && nu <= 1.0, "predict_cycle: nu must lie in (0, 1]");
  MotifPrediction out;
  out.kind = PredictionKind::cycle_blocks;
  out.tau = ell * n;
  detail::assemble_blocks(out, cycle_core_matrix(nu, w), nu, out.tau);
  return out;
}

// Periodic input coupling: w is k = N/p copies of a block s (the block of
// the actual w, including any normalization). The p x p core matrix is
//   T(i,j) = k nu^(i+j-2) <s, Pbar^|j-i| s>
// and motifs are tau/p decaying copies of its eigenvectors. At most p
// motifs carry non-zero weight.
inline Matrix periodic_core_matrix(std::size_t n, double nu, std::span<const double> s) {
  const std::size_t p = s.size();
  detail::require(p >= 1 && n % p == 0,
                  detail::concat("periodic core: period ", p, " does not divide N=", n));
  const double copies = static_cast<double>(n / p);
  const Vector corr = detail::cyclic_autocorrelation(s);
  Matrix t(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t lag = i > j ? i - j : j - i;
      t(i, j) = copies * std::pow(nu, static_cast<double>(i + j)) * corr[lag];
    }
  return t;
}

inline MotifPrediction predict_cycle_periodic(std::size_t n, double nu, std::size_t p,
                                              std::span<const double> block, std::size_t ell) {
  detail::require(ell >= 1, "predict_cycle_periodic: ell must be at least 1");
  detail::require(block.size() == p, "predict_cycle_periodic: block length must equal p");
  detail::require(nu > 0.0 && nu <= 1.0, "predict_cycle_periodic: nu must lie in (0, 1]");
  MotifPrediction out;
  out.kind = PredictionKind::cycle_periodic;
  out.tau = ell * n;
  detail::assemble_blocks(out, periodic_core_matrix(n, nu, block), nu, out.tau);
  return out;
}

// ---------------------------------------------------------------------------
// Comparison

struct MotifComparison {
  std::size_t count = 0;
  Vector alignment;          // |<m_emp, m_pred>|, or principal-angle cosine within a cluster
  Vector weight_rel_error;   // |omega_emp - omega_pred| / omega_pred
  Vector empirical_weights;
  Vector predicted_weights;
  std::vector<std::size_t> cluster;  // cluster id per index
  double min_alignment = 1.0;
  double max_weight_rel_error = 0.0;
};

namespace detail {

inline bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Cosines of the principal angles between span(a) and span(b), descending.
inline Vector principal_cosines(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  const std::size_t k = a.size();
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = dot(a[i], b[j]);
  Matrix g = m.transpose() * m;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
  const auto eig = sym_eig(g);
  Vector cosines(k);
  for (std::size_t i = 0; i < k; ++i) cosines[i] = std::min(1.0, std::sqrt(std::max(eig.values[i], 0.0)));
  return cosines;
}

}  // namespace detail

// Index-by-index comparison of the leading min(|emp|, |pred|) motifs. Runs of
// (near-)equal weights on either side form clusters, compared as subspaces.
inline MotifComparison compare_motifs(const MotifSet& empirical, const MotifPrediction& predicted) {
  detail::require(predicted.comparable_to_empirical(),
                  "compare_motifs: symmetric-coupling component motifs are not kernel motifs");
  detail::require(empirical.tau == predicted.tau, "compare_motifs: horizons differ");
  MotifComparison out;
  const std::size_t count = std::min(empirical.size(), predicted.size());
  out.count = count;
  out.alignment.assign(count, 0.0);
  out.weight_rel_error.assign(count, 0.0);
  out.cluster.assign(count, 0);
  out.empirical_weights.assign(empirical.weights.begin(), empirical.weights.begin() + count);
  out.predicted_weights.assign(predicted.weights.begin(), predicted.weights.begin() + count);

  std::size_t start = 0, id = 0;
  while (start < count) {
    std::size_t end = start + 1;
    while (end < count) {
      const bool emp_tie = detail::close_relative(empirical.weights[end - 1] * empirical.weights[end - 1],
                                                  empirical.weights[end] * empirical.weights[end],
                                                  kClusterTolerance);
      const bool pred_tie = detail::close_relative(predicted.weights[end - 1] * predicted.weights[end - 1],
                                                   predicted.weights[end] * predicted.weights[end],
                                                   kClusterTolerance);
      if (!emp_tie && !pred_tie) break;
      ++end;
    }
    if (end - start == 1) {
      out.alignment[start] = std::min(1.0, std::abs(dot(empirical.motifs[start], predicted.motifs[start])));
    } else {
      const std::vector<Vector> a(empirical.motifs.begin() + start, empirical.motifs.begin() + end);
      const std::vector<Vector> b(predicted.motifs.begin() + start, predicted.motifs.begin() + end);
      const Vector cosines = detail::principal_cosines(a, b);
      for (std::size_t i = start; i < end; ++i) out.alignment[i] = cosines[i - start];
    }
    for (std::size_t i = start; i < end; ++i) out.cluster[i] = id;
    start = end;
    ++id;
  }

  for (std::size_t i = 0; i < count; ++i) {
    const double pred = predicted.weights[i];
    const double emp = empirical.weights[i];
    out.weight_rel_error[i] = pred != 0.0 ? std::abs(emp - pred) / pred : (emp == 0.0 ? 0.0 : INFINITY);
    out.min_alignment = std::min(out.min_alignment, out.alignment[i]);
    out.max_weight_rel_error = std::max(out.max_weight_rel_error, out.weight_rel_error[i]);
  }
  return out;
}

}  // namespace reskernel
