#pragma once

// Motif richness from the spread of motif Fourier coefficients.
//
// Every retained motif is transformed with an unnormalized DFT; each of its
// tau coefficients is tagged with the motif's weight, normalized so that the
// retained weights sum to one. The square [-7, 7]^2 of the complex plane is
// cut into half-open cells of side 0.05 (280 x 280 = 78400 cells).
//   relative area          = visited cells / total cells
//   weighted relative area = sum over visited cells of the mean tag / total cells
// Coefficients falling outside the square are dropped and counted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "coupling.hpp"
#include "motifs.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "temporal_kernel.hpp"

namespace reskernel {

struct CoefficientPoint {
  Complex z;
  double q;  // normalized weight of the source motif
};

struct CoefficientCloud {
  std::vector<CoefficientPoint> points;
  std::size_t motif_count = 0;
};

struct GridSpec {
  double half_width = 7.0;
  double cell_side = 0.05;

  std::size_t cells_per_axis() const {
    return static_cast<std::size_t>(std::llround(2.0 * half_width / cell_side));
  }
  std::size_t total_cells() const { return cells_per_axis() * cells_per_axis(); }

  void validate() const {
    detail::require(half_width > 0.0 && cell_side > 0.0, "GridSpec: sizes must be positive");
    detail::require(cells_per_axis() >= 1, "GridSpec: cell larger than the grid");
  }

  // Cell of one coordinate, or nullopt outside [-half_width, half_width].
  // Cells are half-open [lo, hi); the closing edge +half_width joins the
  // last cell.
  std::optional<std::size_t> axis_cell(double x) const {
    if (!(x >= -half_width && x <= half_width)) return std::nullopt;
    const auto idx = static_cast<std::size_t>(std::floor((x + half_width) / cell_side));
    return std::min(idx, cells_per_axis() - 1);
  }
};

inline CoefficientCloud coefficient_cloud(const MotifSet& set) {
  CoefficientCloud cloud;
  cloud.motif_count = set.size();
  if (set.empty()) return cloud;
  double total = 0.0;
  for (double w : set.weights) total += w;
  detail::require(total > 0.0, "coefficient_cloud: motif weights sum to zero");
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double q = set.weights[i] / total;
    for (const Complex& z : dft(set.motifs[i])) cloud.points.push_back({z, q});
  }
  return cloud;
}

struct RichnessMeasures {
  double relative_area = 0.0;
  double weighted_relative_area = 0.0;
  std::size_t cells_visited = 0;
  std::size_t discarded_points = 0;
};

inline RichnessMeasures measure_richness(const CoefficientCloud& cloud, const GridSpec& grid = {}) {
  grid.validate();
  const std::size_t side = grid.cells_per_axis();
  std::vector<double> weight_sum(grid.total_cells(), 0.0);
  std::vector<std::uint32_t> hits(grid.total_cells(), 0);
  RichnessMeasures out;
  for (const auto& pt : cloud.points) {
    const auto ix = grid.axis_cell(pt.z.real());
    const auto iy = grid.axis_cell(pt.z.imag());
    if (!ix || !iy) {
      ++out.discarded_points;
      continue;
    }
    const std::size_t cell = *ix * side + *iy;
    weight_sum[cell] += pt.q;
    ++hits[cell];
  }
  double mean_total = 0.0;
  for (std::size_t c = 0; c < hits.size(); ++c) {
    if (hits[c] == 0) continue;
    ++out.cells_visited;
    mean_total += weight_sum[c] / hits[c];
  }
  const auto total = static_cast<double>(grid.total_cells());
  out.relative_area = static_cast<double>(out.cells_visited) / total;
  out.weighted_relative_area = mean_total / total;
  return out;
}

inline double relative_area(const CoefficientCloud& cloud, const GridSpec& grid = {}) {
  return measure_richness(cloud, grid).relative_area;
}

inline double weighted_relative_area(const CoefficientCloud& cloud, const GridSpec& grid = {}) {
  return measure_richness(cloud, grid).weighted_relative_area;
}

// ---------------------------------------------------------------------------
// nu sweep

struct SweepConfig {
  Vector nus;
  std::vector<Regime> regimes{Regime::cycle_permutation};
  std::vector<InputKind> inputs{InputKind::ones_pi_signs};
  Distribution distribution = Distribution::gaussian;
  std::size_t dimension = 100;
  std::size_t ell = 2;  // tau = ell * N
  std::size_t period = 0;
  std::optional<std::size_t> trials;  // overrides the per-configuration default
  Seed seed{};
  double threshold_ratio = kDefaultThresholdRatio;
  GridSpec grid{};
};

struct RichnessReport {
  double nu = 0.0;
  Regime regime = Regime::cycle_permutation;
  InputKind input = InputKind::ones_pi_signs;
  std::size_t trial = 0;
  std::size_t n_motifs = 0;
  RichnessMeasures measures;
  Seed seed{};
};

inline bool input_is_random(InputKind k) {
  return k == InputKind::gaussian || k == InputKind::uniform || k == InputKind::ones_random_signs;
}

// 1 trial when nothing is random, 30 when one of W, w is random, 60 when both are.
inline std::size_t default_trials(Regime regime, InputKind input) {
  const int random_parts = (regime != Regime::cycle_permutation) + input_is_random(input);
  return random_parts == 0 ? 1 : random_parts == 1 ? 30 : 60;
}

// 0.90, 0.905, ..., 1.00 (21 values).
inline Vector default_nu_grid() {
  Vector g;
  for (int k = 0; k <= 20; ++k) g.push_back(std::round((0.90 + 0.005 * k) * 1e6) / 1e6);
  return g;
}

inline RichnessReport richness_trial(const SweepConfig& cfg, double nu, Regime regime,
                                     InputKind input, std::size_t trial, Seed seed) {
  const ReservoirSpec rs{cfg.dimension, regime, cfg.distribution, nu};
  const InputCouplingSpec is{cfg.dimension, input, cfg.period, true};
  const MetricTensor q = build_metric_tensor(rs, is, seed, cfg.ell * cfg.dimension);
  const MotifSet motifs = extract_motifs(q, cfg.threshold_ratio);
  RichnessReport r;
  r.nu = nu;
  r.regime = regime;
  r.input = input;
  r.trial = trial;
  r.n_motifs = motifs.size();
  r.measures = measure_richness(coefficient_cloud(motifs), cfg.grid);
  r.seed = seed;
  return r;
}

inline std::vector<RichnessReport> sweep(const SweepConfig& cfg) {
  detail::require(!cfg.nus.empty(), "sweep: empty nu grid");
  for (double nu : cfg.nus)
    detail::require(nu > 0.0 && nu <= 1.0, detail::concat("sweep: nu=", nu, " outside (0, 1]"));
  detail::require(cfg.ell >= 1 && cfg.dimension >= 1, "sweep: N and ell must be positive");
  cfg.grid.validate();

  std::vector<RichnessReport> out;
  for (std::size_t vi = 0; vi < cfg.nus.size(); ++vi) {
    for (Regime regime : cfg.regimes) {
      for (InputKind input : cfg.inputs) {
        const std::size_t trials = cfg.trials.value_or(default_trials(regime, input));
        for (std::size_t t = 0; t < trials; ++t) {
          const Seed s = derive_seed(cfg.seed, {vi, t});
          out.push_back(richness_trial(cfg, cfg.nus[vi], regime, input, t, s));
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const RichnessReport& a, const RichnessReport& b) {
    return std::tuple(a.nu, static_cast<int>(a.regime), static_cast<int>(a.input), a.trial) <
           std::tuple(b.nu, static_cast<int>(b.regime), static_cast<int>(b.input), b.trial);
  });
  return out;
}

struct RichnessAggregate {
  double nu = 0.0;
  Regime regime = Regime::cycle_permutation;
  InputKind input = InputKind::ones_pi_signs;
  std::size_t trials = 0;
  double mean_area = 0.0, std_area = 0.0;
  double mean_weighted = 0.0, std_weighted = 0.0;
  double mean_motifs = 0.0;
};

// Mean and sample standard deviation per (nu, regime, input). Expects the
// canonical ordering produced by sweep().
inline std::vector<RichnessAggregate> aggregate(const std::vector<RichnessReport>& reports) {
  std::vector<RichnessAggregate> out;
  std::size_t i = 0;
  while (i < reports.size()) {
    std::size_t j = i;
    while (j < reports.size() && reports[j].nu == reports[i].nu &&
           reports[j].regime == reports[i].regime && reports[j].input == reports[i].input)
      ++j;
    RichnessAggregate a;
    a.nu = reports[i].nu;
    a.regime = reports[i].regime;
    a.input = reports[i].input;
    a.trials = j - i;
    const auto n = static_cast<double>(a.trials);
    for (std::size_t k = i; k < j; ++k) {
      a.mean_area += reports[k].measures.relative_area / n;
      a.mean_weighted += reports[k].measures.weighted_relative_area / n;
      a.mean_motifs += static_cast<double>(reports[k].n_motifs) / n;
    }
    if (a.trials > 1) {
      double va = 0.0, vw = 0.0;
      for (std::size_t k = i; k < j; ++k) {
        va += std::pow(reports[k].measures.relative_area - a.mean_area, 2);
        vw += std::pow(reports[k].measures.weighted_relative_area - a.mean_weighted, 2);
      }
      a.std_area = std::sqrt(va / (n - 1.0));
      a.std_weighted = std::sqrt(vw / (n - 1.0));
    }
    out.push_back(a);
    i = j;
  }
  return out;
}

}  // namespace reskernel
