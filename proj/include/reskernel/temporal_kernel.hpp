#pragma once

// Linear reservoir x(t) = W x(t-1) + w u(t) viewed as a kernel machine.
//
// A time series over a horizon tau is stored most-recent-first:
// values[0] = u(0), values[1] = u(-1), ..., values[tau-1] = u(-tau+1).
// With zero initial state the reservoir state after the series is
//   phi(u) = sum_i u_i W^{i-1} w = Phi u,
// where column i of Phi is W^{i-1} w, and the induced kernel is
//   K(u, v) = <phi(u), phi(v)> = u^T Q v,   Q = Phi^T Phi.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coupling.hpp"
#include "numerics.hpp"

namespace reskernel {

struct TimeSeries {
  Vector values;  // most recent first

  TimeSeries() = default;
  explicit TimeSeries(Vector v) : values(std::move(v)) {}

  std::size_t horizon() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Where a metric tensor came from, when it was built from generator specs.
struct TensorSource {
  ReservoirSpec reservoir;
  InputCouplingSpec input;
  Seed seed;
};

struct MetricTensor {
  Matrix q;                    // tau x tau, symmetric PSD
  std::size_t state_dimension = 0;
  std::optional<TensorSource> source;

  std::size_t horizon() const noexcept { return q.rows(); }
  // The kernel analysis assumes tau >= N; shorter horizons are allowed but
  // flagged.
  bool short_horizon() const noexcept { return horizon() < state_dimension; }
};

namespace detail {

inline void check_reservoir(const Matrix& W, std::span<const double> w) {
  require(W.is_square(), "reservoir coupling W must be square");
  require(W.rows() == w.size(),
          concat("input coupling length ", w.size(), " does not match W dimension ", W.rows()));
}

}  // namespace detail

// Iterates the state equation over u, oldest sample first, starting from
// x(-tau) = x_init. Returns x(0).
inline Vector simulate_state(const Matrix& W, std::span<const double> w, const TimeSeries& u,
                             std::span<const double> x_init) {
  detail::check_reservoir(W, w);
  detail::require(x_init.size() == w.size(), "simulate_state: initial state has wrong dimension");
  Vector x(x_init.begin(), x_init.end());
  for (std::size_t k = u.horizon(); k-- > 0;) {
    Vector next = W * x;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += w[i] * u[k];
    x = std::move(next);
  }
  return x;
}

inline Vector feature_map(const Matrix& W, std::span<const double> w, const TimeSeries& u) {
  const Vector zero(w.size(), 0.0);
  return simulate_state(W, w, u, zero);
}

// Columns W^{i-1} w, i = 1..tau, stored as rows of the result (tau x N).
inline Matrix feature_columns(const Matrix& W, std::span<const double> w, std::size_t tau) {
  detail::check_reservoir(W, w);
  detail::require(tau >= 1, "horizon tau must be positive");
  const std::size_t n = w.size();
  Matrix cols(tau, n);
  std::copy(w.begin(), w.end(), cols.row(0).begin());
  for (std::size_t i = 1; i < tau; ++i) {
    const Vector next = W * cols.row(i - 1);
    std::copy(next.begin(), next.end(), cols.row(i).begin());
  }
  return cols;
}

inline MetricTensor build_metric_tensor(const Matrix& W, std::span<const double> w,
                                        std::size_t tau) {
  const Matrix phi = feature_columns(W, w, tau);
  Matrix q(tau, tau);
  for (std::size_t i = 0; i < tau; ++i) {
    for (std::size_t j = i; j < tau; ++j) {
      const double v = dot(phi.row(i), phi.row(j));
      q(i, j) = v;
      q(j, i) = v;
    }
  }
  return MetricTensor{std::move(q), w.size(), std::nullopt};
}

inline MetricTensor build_metric_tensor(const ReservoirSpec& reservoir,
                                        const InputCouplingSpec& input, Seed seed,
                                        std::size_t tau) {
  const Matrix W = generate_reservoir(reservoir, derive_seed(seed, {1}));
  const Vector w = generate_input(input, derive_seed(seed, {2}));
  MetricTensor mt = build_metric_tensor(W, w, tau);
  mt.source = TensorSource{reservoir, input, seed};
  return mt;
}

inline double kernel_eval(const MetricTensor& Q, const TimeSeries& u, const TimeSeries& v) {
  const std::size_t tau = Q.horizon();
  detail::require(u.horizon() == tau && v.horizon() == tau,
                  detail::concat("kernel_eval: series horizons (", u.horizon(), ", ", v.horizon(),
                                 ") differ from metric tensor horizon ", tau));
  return dot(u.values, Q.q * std::span<const double>(v.values));
}

// (K(u, v) + offset)^degree
inline double kernel_poly(const MetricTensor& Q, const TimeSeries& u, const TimeSeries& v,
                          double offset, int degree) {
  detail::require(degree >= 1, "kernel_poly: degree must be at least 1");
  const double base = kernel_eval(Q, u, v) + offset;
  double out = 1.0;
  for (int k = 0; k < degree; ++k) out *= base;
  return out;
}

struct ReadoutModel {
  std::vector<TimeSeries> supports;
  Vector coefficients;  // one per support series
  double bias = 0.0;
};

// sum_i beta_i K(u_i, v) + b
inline double readout_eval(const ReadoutModel& model, const MetricTensor& Q, const TimeSeries& v) {
  detail::require(model.supports.size() == model.coefficients.size(),
                  "readout_eval: support and coefficient counts differ");
  double y = model.bias;
  for (std::size_t i = 0; i < model.supports.size(); ++i)
    y += model.coefficients[i] * kernel_eval(Q, model.supports[i], v);
  return y;
}

// ---------------------------------------------------------------------------
// Sensitivity of the kernel to the initial state.
//
// For inputs in [-U, U], ||w|| <= B, largest singular value nu < zeta < 1 and
// ||x(-tau)|| <= c * zeta^-tau with c >= B U / ((1 - nu)(1 - nu/zeta)),
// eps = K(u, v; x(-tau)) - K(u, v; 0) satisfies, with eta = nu / zeta,
//   -eta^tau [2c/(1-nu) B U]  <=  eps  <=  eta^tau [c^2 eta^tau + 2c/(1-nu) B U].

struct BoundParams {
  double input_bound = 1.0;     // U
  double coupling_bound = 1.0;  // B
  double zeta = 0.95;
  double c = 0.0;
  std::size_t tau = 1;
};

struct EpsilonBounds {
  double lower;
  double upper;
};

inline double minimal_bound_constant(double input_bound, double coupling_bound, double nu,
                                     double zeta) {
  return coupling_bound * input_bound / ((1.0 - nu) * (1.0 - nu / zeta));
}

inline void validate(const BoundParams& p, double nu) {
  detail::require(nu > 0.0 && nu < 1.0, "bounds: nu must lie in (0, 1)");
  detail::require(p.zeta > nu && p.zeta < 1.0,
                  detail::concat("bounds: zeta=", p.zeta, " must satisfy nu < zeta < 1 (nu=", nu, ")"));
  detail::require(p.input_bound > 0.0 && p.coupling_bound > 0.0,
                  "bounds: U and B must be positive");
  detail::require(p.tau >= 1, "bounds: tau must be positive");
  const double cmin = minimal_bound_constant(p.input_bound, p.coupling_bound, nu, p.zeta);
  detail::require(p.c >= cmin, detail::concat("bounds: c=", p.c, " below required ", cmin));
}

// Largest admissible initial-state norm A(tau) = c zeta^-tau.
inline double initial_state_radius(const BoundParams& p) {
  return p.c * std::pow(p.zeta, -static_cast<double>(p.tau));
}

inline EpsilonBounds initial_state_bounds(const BoundParams& p, double nu) {
  validate(p, nu);
  const double eta_tau = std::pow(nu / p.zeta, static_cast<double>(p.tau));
  const double cross = 2.0 * p.c / (1.0 - nu) * p.coupling_bound * p.input_bound;
  return {-eta_tau * cross, eta_tau * (p.c * p.c * eta_tau + cross)};
}

// eps = K(u, v; x_init) - K(u, v; 0), measured by running the reservoir twice
// per series.
inline double initial_state_effect(const Matrix& W, std::span<const double> w,
                                   const TimeSeries& u, const TimeSeries& v,
                                   std::span<const double> x_init) {
  const Vector zero(w.size(), 0.0);
  const double with_init =
      dot(simulate_state(W, w, u, x_init), simulate_state(W, w, v, x_init));
  const double from_zero = dot(simulate_state(W, w, u, zero), simulate_state(W, w, v, zero));
  return with_init - from_zero;
}

}  // namespace reskernel
