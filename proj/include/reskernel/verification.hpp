#pragma once

// Randomized property checks on generated reservoirs, shared by the
// `verify` command and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "motifs.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "temporal_kernel.hpp"

namespace reskernel {

struct PropertyOutcome {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  double worst = 0.0;     // worst observed value of the checked quantity
  double tolerance = 0.0;
  std::string failure;    // description of the first offending instance
};

// One random reservoir configuration and its metric tensor.
struct Instance {
  ReservoirSpec reservoir;
  InputCouplingSpec input;
  Seed seed;
  std::size_t tau = 0;
  Matrix W;
  Vector w;
  MetricTensor q;

  std::string describe() const {
    return detail::concat("regime=", to_string(reservoir.regime), " N=", reservoir.dimension,
                          " nu=", reservoir.target_scale, " input=", to_string(input.kind),
                          " tau=", tau, " seed=", seed.base);
  }
};

inline Instance make_instance(const ReservoirSpec& rs, const InputCouplingSpec& is, Seed seed,
                              std::size_t tau) {
  Instance inst{rs, is, seed, tau, generate_reservoir(rs, derive_seed(seed, {1})),
                generate_input(is, derive_seed(seed, {2})), {}};
  inst.q = build_metric_tensor(inst.W, inst.w, tau);
  inst.q.source = TensorSource{rs, is, seed};
  return inst;
}

// Random configuration cycling through the three regimes: N in [1, max_n],
// tau in [N, max_tau] (or [1, max_tau] if N > max_tau), nu in [0.5, 0.999].
inline Instance random_instance(std::size_t index, Seed seed, std::size_t max_n = 100,
                                std::size_t max_tau = 200) {
  Xoshiro256 rng(seed);
  static constexpr Regime kRegimes[] = {Regime::random_iid, Regime::symmetric_wigner,
                                        Regime::cycle_permutation};
  static constexpr InputKind kInputs[] = {InputKind::gaussian, InputKind::uniform,
                                          InputKind::ones_random_signs, InputKind::ones_pi_signs,
                                          InputKind::ones_e_signs};
  const std::size_t n = 1 + rng.next() % max_n;
  const std::size_t lo = std::min(n, max_tau);
  const std::size_t tau = lo + rng.next() % (max_tau - lo + 1);
  const double nu = rng.uniform(0.5, 0.999);
  ReservoirSpec rs{n, kRegimes[index % 3], Distribution::gaussian, nu};
  InputCouplingSpec is{n, kInputs[rng.next() % 5], 0, (rng.next() & 1) != 0};
  return make_instance(rs, is, derive_seed(seed, {index}), tau);
}

inline TimeSeries random_series(Xoshiro256& rng, std::size_t tau, double bound = 1.0) {
  Vector v(tau);
  for (auto& x : v) x = rng.uniform(-bound, bound);
  return TimeSeries(std::move(v));
}

namespace detail {

inline void record(PropertyOutcome& out, double value, bool ok, const std::string& where) {
  ++out.checked;
  out.worst = std::max(out.worst, value);
  if (!ok && out.passed) {
    out.passed = false;
    out.failure = where;
  }
}

}  // namespace detail

// |u^T Q v - <phi(u), phi(v)>| <= 1e-10 max(1, |u^T Q v|) on random pairs.
inline void check_kernel_state_equivalence(PropertyOutcome& out, const Instance& inst,
                                           Xoshiro256& rng, std::size_t pairs) {
  out.tolerance = 1e-10;
  for (std::size_t k = 0; k < pairs; ++k) {
    const TimeSeries u = random_series(rng, inst.tau);
    const TimeSeries v = random_series(rng, inst.tau);
    const double kq = kernel_eval(inst.q, u, v);
    const double ks = dot(feature_map(inst.W, inst.w, u), feature_map(inst.W, inst.w, v));
    const double rel = std::abs(kq - ks) / std::max(1.0, std::abs(kq));
    detail::record(out, rel, rel <= out.tolerance,
                   detail::concat(inst.describe(), " pair=", k, " uQv=", kq, " <phi,phi>=", ks));
  }
}

// |Q_ij| <= nu^(i+j-2) ||w||^2 + 1e-9; reports the largest excess.
inline void check_decay_bound(PropertyOutcome& out, const Instance& inst) {
  out.tolerance = 1e-9;
  const double nu = inst.reservoir.target_scale;
  const double w2 = dot(inst.w, inst.w);
  const Matrix& q = inst.q.q;
  double excess = -INFINITY;
  std::string where;
  Vector powers(2 * q.rows(), 1.0);
  for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * nu;
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) {
      const double e = std::abs(q(i, j)) - powers[i + j] * w2;
      if (e > excess) {
        excess = e;
        where = detail::concat(inst.describe(), " i=", i + 1, " j=", j + 1, " Q=", q(i, j));
      }
    }
  detail::record(out, std::max(excess, 0.0), excess <= out.tolerance, where);
}

// Exact symmetry, min eigenvalue >= -1e-9 lambda_max, numerical rank <= N.
inline void check_psd_and_rank(PropertyOutcome& psd, PropertyOutcome& rank, const Instance& inst) {
  psd.tolerance = 1e-9;
  rank.tolerance = 1e-10;
  const double asym = asymmetry(inst.q.q);
  if (asym != 0.0) {
    detail::record(psd, asym, false, detail::concat(inst.describe(), " asymmetry=", asym));
    return;
  }
  const EigenDecomposition eig = sym_eig(inst.q.q);
  const double top = std::max(eig.values.front(), 0.0);
  const double bottom = eig.values.back();
  const double neg = top > 0.0 ? std::max(0.0, -bottom / top) : 0.0;
  detail::record(psd, neg, neg <= psd.tolerance,
                 detail::concat(inst.describe(), " min eigenvalue=", bottom, " max=", top));
  const std::size_t r = top > 0.0 ? static_cast<std::size_t>(std::count_if(
                                         eig.values.begin(), eig.values.end(),
                                         [&](double x) { return x > rank.tolerance * top; }))
                                   : 0;
  detail::record(rank, static_cast<double>(r), r <= inst.reservoir.dimension,
                 detail::concat(inst.describe(), " rank=", r));
}

struct InitialStateTrialSpec {
  std::size_t dimension = 50;
  std::size_t tau = 300;
  double nu = 0.9;
  double zeta = 0.95;
  double input_bound = 1.0;
};

// One randomized trial: random reservoir (regime cycled by index), unit w,
// u, v uniform in [-U, U]^tau, x_init uniform on the sphere of radius
// min(A(tau), 1e150). Checks eps against the bounds.
inline void check_initial_state_trial(PropertyOutcome& out, const InitialStateTrialSpec& spec,
                                      std::size_t index, Seed seed) {
  static constexpr Regime kRegimes[] = {Regime::random_iid, Regime::symmetric_wigner,
                                        Regime::cycle_permutation};
  const Seed s = derive_seed(seed, {index});
  const ReservoirSpec rs{spec.dimension, kRegimes[index % 3], Distribution::gaussian, spec.nu};
  const InputCouplingSpec is{spec.dimension, InputKind::gaussian, 0, true};
  const Matrix W = generate_reservoir(rs, derive_seed(s, {1}));
  const Vector w = generate_input(is, derive_seed(s, {2}));

  BoundParams params;
  params.input_bound = spec.input_bound;
  params.coupling_bound = norm2(w);
  params.zeta = spec.zeta;
  params.tau = spec.tau;
  params.c = minimal_bound_constant(params.input_bound, params.coupling_bound, spec.nu, spec.zeta);
  const EpsilonBounds b = initial_state_bounds(params, spec.nu);

  Xoshiro256 rng(derive_seed(s, {3}));
  const TimeSeries u = random_series(rng, spec.tau, spec.input_bound);
  const TimeSeries v = random_series(rng, spec.tau, spec.input_bound);
  Vector x(spec.dimension);
  for (auto& xi : x) xi = rng.gaussian();
  const double radius = std::min(initial_state_radius(params), 1e150);
  const double len = norm2(x);
  for (auto& xi : x) xi *= radius / len;

  const double eps = initial_state_effect(W, w, u, v, x);
  // Distance outside the interval, relative to its width (0 when inside).
  const double width = b.upper - b.lower;
  const double outside = std::max({0.0, b.lower - eps, eps - b.upper}) / width;
  detail::record(out, outside, eps >= b.lower && eps <= b.upper,
                 detail::concat("trial=", index, " regime=", to_string(rs.regime), " seed=", s.base,
                                " eps=", eps, " bounds=[", b.lower, ", ", b.upper, "]"));
}

}  // namespace reskernel
