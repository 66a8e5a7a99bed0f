#pragma once

// Experiment commands behind the `reskernel` executable. Each command takes
// a fully parsed ExperimentConfig, writes its CSV files under config.out and
// returns a process exit code.

#include <cmath>
#include <cstdint>
#include <map>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <reskernel/reskernel.hpp>

namespace reskernel::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kPropertyFailure = 2,
  kNumericFailure = 3,
};

struct ExperimentConfig {
  std::string command;
  std::vector<std::string> regimes{"cycle"};
  std::vector<std::string> inputs{"pi-signs"};
  std::string distribution = "gaussian";
  std::size_t N = 100;
  std::vector<double> nu;  // empty: command default
  std::string nu_grid;     // lo:step:hi, sweep only
  std::size_t ell = 2;
  std::optional<std::size_t> tau;
  std::size_t period = 10;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  double threshold = kDefaultThresholdRatio;
  std::string out = ".";
  bool raw_input = false;  // skip unit normalization of w
  bool write_q = false;

  // kernel
  std::string u_file;
  std::string v_file;
  double offset = 0.0;
  int degree = 1;
  std::vector<std::string> supports;
  std::vector<double> beta;
  double bias = 0.0;

  // verify
  std::size_t pairs = 100;
  double zeta = 0.95;
  bool inject_asymmetric = false;  // test hook: corrupts Q before checking
};

inline Regime parse_regime(const std::string& s) {
  if (s == "random") return Regime::random_iid;
  if (s == "symmetric") return Regime::symmetric_wigner;
  if (s == "cycle") return Regime::cycle_permutation;
  throw contract_violation("unknown regime '" + s + "' (expected random|symmetric|cycle)");
}

inline InputKind parse_input(const std::string& s) {
  for (InputKind k : {InputKind::gaussian, InputKind::uniform, InputKind::ones_random_signs,
                      InputKind::ones_pi_signs, InputKind::ones_e_signs, InputKind::periodic_binary,
                      InputKind::periodic_bipolar})
    if (s == to_string(k)) return k;
  throw contract_violation("unknown input kind '" + s + "'");
}

inline Distribution parse_distribution(const std::string& s) {
  for (Distribution d : {Distribution::gaussian, Distribution::uniform, Distribution::random_signs})
    if (s == to_string(d)) return d;
  throw contract_violation("unknown distribution '" + s + "' (expected gaussian|uniform|signs)");
}

// "lo:step:hi", inclusive of hi up to rounding; values rounded to 1e-9.
inline Vector parse_nu_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  detail::require(a != std::string::npos && b != std::string::npos,
                  "nu grid must look like lo:step:hi, got '" + spec + "'");
  double lo = 0, step = 0, hi = 0;
  try {
    lo = std::stod(spec.substr(0, a));
    step = std::stod(spec.substr(a + 1, b - a - 1));
    hi = std::stod(spec.substr(b + 1));
  } catch (const std::exception&) {
    throw contract_violation("nu grid must look like lo:step:hi, got '" + spec + "'");
  }
  detail::require(step > 0.0 && hi >= lo, "nu grid needs step > 0 and hi >= lo");
  Vector grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k)
    grid.push_back(std::round((lo + step * static_cast<double>(k)) * 1e9) / 1e9);
  return grid;
}

// Mean and sample standard deviation (0 for fewer than two values).
inline std::pair<double, double> mean_std(const Vector& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size() - 1))};
}

inline ReservoirSpec reservoir_spec(const ExperimentConfig& c, double nu) {
  return {c.N, parse_regime(c.regimes.at(0)), parse_distribution(c.distribution), nu};
}

inline InputCouplingSpec input_spec(const ExperimentConfig& c) {
  const InputKind kind = parse_input(c.inputs.at(0));
  return {c.N, kind, is_periodic(kind) ? c.period : 0, !c.raw_input};
}

inline double single_nu(const ExperimentConfig& c) {
  detail::require(c.nu.size() <= 1, "this command takes a single --nu");
  return c.nu.empty() ? 0.995 : c.nu.front();
}

inline std::size_t horizon(const ExperimentConfig& c) { return c.tau.value_or(c.ell * c.N); }

inline std::filesystem::path out_path(const ExperimentConfig& c, const std::string& name) {
  return std::filesystem::path(c.out) / name;
}

inline void warn_short_horizon(const MetricTensor& q, std::ostream& err) {
  if (q.short_horizon())
    err << "warning: horizon tau=" << q.horizon() << " is shorter than N=" << q.state_dimension
        << "; the kernel analysis assumes tau >= N\n";
}

// ---------------------------------------------------------------------------

inline int cmd_motifs(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const double nu = single_nu(c);
  const ReservoirSpec rs = reservoir_spec(c, nu);
  const InputCouplingSpec is = input_spec(c);
  const std::size_t tau = horizon(c);
  const std::size_t trials = c.trials.value_or(1);
  detail::require(trials >= 1, "--trials must be at least 1");

  std::vector<MotifSet> sets;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed seed = trials == 1 ? Seed{c.seed} : derive_seed(Seed{c.seed}, {t});
    const Instance inst = make_instance(rs, is, seed, tau);
    if (t == 0) {
      warn_short_horizon(inst.q, err);
      if (c.write_q) write_file_atomic(out_path(c, "metric_tensor.csv"), matrix_csv(inst.q.q));
    }
    sets.push_back(extract_motifs(inst.q, c.threshold));
  }

  const MotifSet& first = sets.front();
  write_file_atomic(out_path(c, "motifs.csv"), motifs_csv(first));
  std::string weights = "index,weight,eigenvalue\n";
  for (std::size_t i = 0; i < first.size(); ++i)
    weights += std::to_string(i + 1) + ',' + format_double(first.weights[i]) + ',' +
               format_double(first.spectrum[i]) + '\n';
  write_file_atomic(out_path(c, "weights.csv"), weights);

  if (trials > 1) {
    std::size_t longest = 0;
    for (const auto& s : sets) longest = std::max(longest, s.size());
    std::string ws = "index,trials,mean_weight,std_weight,mean_eigenvalue,std_eigenvalue\n";
    for (std::size_t i = 0; i < longest; ++i) {
      Vector om, la;
      for (const auto& s : sets)
        if (i < s.size()) {
          om.push_back(s.weights[i]);
          la.push_back(s.spectrum[i]);
        }
      const auto [mo, so] = mean_std(om);
      const auto [ml, sl] = mean_std(la);
      ws += std::to_string(i + 1) + ',' + std::to_string(om.size()) + ',' + format_double(mo) + ',' +
            format_double(so) + ',' + format_double(ml) + ',' + format_double(sl) + '\n';
    }
    write_file_atomic(out_path(c, "weights_mean_std.csv"), ws);

    // Element-wise statistics of the four leading motifs.
    std::string ms = "motif,element,trials,mean,std\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(4, longest); ++i)
      for (std::size_t e = 0; e < tau; ++e) {
        Vector vals;
        for (const auto& s : sets)
          if (i < s.size()) vals.push_back(s.motifs[i][e]);
        const auto [m, sd] = mean_std(vals);
        ms += std::to_string(i + 1) + ',' + std::to_string(e + 1) + ',' + std::to_string(vals.size()) +
              ',' + format_double(m) + ',' + format_double(sd) + '\n';
      }
    write_file_atomic(out_path(c, "motifs_mean_std.csv"), ms);
  }

  out << "regime=" << to_string(rs.regime) << " input=" << to_string(is.kind) << " N=" << c.N
      << " nu=" << nu << " tau=" << tau << " trials=" << trials << " motifs=" << first.size() << "\n";
  return kSuccess;
}

inline int cmd_predict(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const double nu = single_nu(c);
  const ReservoirSpec rs = reservoir_spec(c, nu);
  const InputCouplingSpec is = input_spec(c);
  const std::size_t tau = horizon(c);
  const Instance inst = make_instance(rs, is, Seed{c.seed}, tau);
  warn_short_horizon(inst.q, err);
  const MotifSet empirical = extract_motifs(inst.q, c.threshold);

  MotifPrediction pred;
  switch (rs.regime) {
    case Regime::random_iid:
      pred = predict_random(c.N, nu, norm2(inst.w), tau);
      break;
    case Regime::symmetric_wigner:
      pred = predict_symmetric(inst.W, inst.w, tau);
      break;
    case Regime::cycle_permutation:
      if (tau % c.N != 0)
        throw contract_violation(detail::concat("cycle prediction needs tau to be a multiple of N (tau=",
                                                tau, ", N=", c.N, ")"));
      if (is_periodic(is.kind)) {
        const Vector block(inst.w.begin(), inst.w.begin() + static_cast<std::ptrdiff_t>(is.period));
        pred = predict_cycle_periodic(c.N, nu, is.period, block, tau / c.N);
      } else {
        pred = predict_cycle(c.N, nu, inst.w, tau / c.N);
      }
      break;
  }

  write_file_atomic(out_path(c, "predicted_motifs.csv"), motifs_csv(pred.motifs, pred.weights, tau));
  std::string pw = "index,weight\n";
  for (std::size_t i = 0; i < pred.size(); ++i)
    pw += std::to_string(i + 1) + ',' + format_double(pred.weights[i]) + '\n';
  write_file_atomic(out_path(c, "predicted_weights.csv"), pw);
  write_file_atomic(out_path(c, "motifs.csv"), motifs_csv(empirical));

  if (!pred.comparable_to_empirical()) {
    // Symmetric coupling: component kernels plus the reconstruction check.
    std::string comps = "index,sigma,projection,weight\n";
    for (std::size_t a = 0; a < pred.size(); ++a)
      comps += std::to_string(a + 1) + ',' + format_double(pred.component_eigenvalues[a]) + ',' +
               format_double(pred.component_projections[a]) + ',' + format_double(pred.weights[a]) + '\n';
    write_file_atomic(out_path(c, "components.csv"), comps);
    const double residual = max_abs(pred.reconstructed_q - inst.q.q);
    write_file_atomic(out_path(c, "reconstruction.csv"),
                      "max_abs_residual,q_max_abs\n" + format_double(residual) + ',' +
                          format_double(max_abs(inst.q.q)) + '\n');
    out << "symmetric components=" << pred.size() << " reconstruction residual=" << residual << "\n";
    return kSuccess;
  }

  const MotifComparison cmp = compare_motifs(empirical, pred);
  std::string cs = "index,cluster,alignment,empirical_weight,predicted_weight,weight_rel_error\n";
  for (std::size_t i = 0; i < cmp.count; ++i)
    cs += std::to_string(i + 1) + ',' + std::to_string(cmp.cluster[i] + 1) + ',' +
          format_double(cmp.alignment[i]) + ',' + format_double(cmp.empirical_weights[i]) + ',' +
          format_double(cmp.predicted_weights[i]) + ',' + format_double(cmp.weight_rel_error[i]) + '\n';
  write_file_atomic(out_path(c, "comparison.csv"), cs);
  out << to_string(pred.kind) << " compared=" << cmp.count << " min_alignment=" << cmp.min_alignment
      << " max_weight_rel_error=" << cmp.max_weight_rel_error << "\n";
  return kSuccess;
}

inline SweepConfig sweep_config(const ExperimentConfig& c) {
  SweepConfig s;
  if (!c.nu_grid.empty()) {
    detail::require(c.nu.empty(), "give either --nu or --nu-grid, not both");
    s.nus = parse_nu_grid(c.nu_grid);
  } else if (!c.nu.empty()) {
    s.nus = c.nu;
  } else {
    s.nus = default_nu_grid();
  }
  s.regimes.clear();
  for (const auto& r : c.regimes) s.regimes.push_back(parse_regime(r));
  s.inputs.clear();
  for (const auto& i : c.inputs) s.inputs.push_back(parse_input(i));
  s.distribution = parse_distribution(c.distribution);
  s.dimension = c.N;
  if (c.tau) {
    detail::require(*c.tau % c.N == 0, "sweep: --tau must be a multiple of N");
    s.ell = *c.tau / c.N;
  } else {
    s.ell = c.ell;
  }
  s.period = c.period;
  s.trials = c.trials;
  s.seed = Seed{c.seed};
  s.threshold_ratio = c.threshold;
  return s;
}

inline int cmd_sweep(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const SweepConfig s = sweep_config(c);
  const auto reports = sweep(s);
  std::string rows =
      "nu,regime,input_kind,trial,n_motifs,cells_visited,relative_area,weighted_relative_area,"
      "discarded_points\n";
  for (const auto& r : reports)
    rows += format_double(r.nu) + ',' + std::string(to_string(r.regime)) + ',' +
            std::string(to_string(r.input)) + ',' + std::to_string(r.trial) + ',' +
            std::to_string(r.n_motifs) + ',' + std::to_string(r.measures.cells_visited) + ',' +
            format_double(r.measures.relative_area) + ',' +
            format_double(r.measures.weighted_relative_area) + ',' +
            std::to_string(r.measures.discarded_points) + '\n';
  write_file_atomic(out_path(c, "sweep.csv"), rows);

  std::string summary =
      "nu,regime,input_kind,trials,mean_n_motifs,mean_relative_area,std_relative_area,"
      "mean_weighted_relative_area,std_weighted_relative_area\n";
  for (const auto& a : aggregate(reports))
    summary += format_double(a.nu) + ',' + std::string(to_string(a.regime)) + ',' +
               std::string(to_string(a.input)) + ',' + std::to_string(a.trials) + ',' +
               format_double(a.mean_motifs) + ',' + format_double(a.mean_area) + ',' +
               format_double(a.std_area) + ',' + format_double(a.mean_weighted) + ',' +
               format_double(a.std_weighted) + '\n';
  write_file_atomic(out_path(c, "sweep_summary.csv"), summary);
  out << "sweep rows=" << reports.size() << "\n";
  return kSuccess;
}

inline PropertyOutcome named_outcome(std::string name) {
  PropertyOutcome p;
  p.name = std::move(name);
  return p;
}

inline int cmd_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const std::size_t configs = c.trials.value_or(100);
  const std::size_t max_tau = c.tau.value_or(200);
  const Seed base{c.seed};

  PropertyOutcome equivalence = named_outcome("kernel_state_equivalence");
  PropertyOutcome psd = named_outcome("symmetric_psd");
  PropertyOutcome rank = named_outcome("rank_at_most_N");
  PropertyOutcome decay = named_outcome("decay_bound");
  for (std::size_t i = 0; i < configs; ++i) {
    Instance inst = random_instance(i, derive_seed(base, {0, i}), c.N, max_tau);
    if (c.inject_asymmetric && inst.tau > 1) inst.q.q(0, 1) += 1e-3;
    Xoshiro256 rng(derive_seed(base, {1, i}));
    check_kernel_state_equivalence(equivalence, inst, rng, c.pairs);
    check_psd_and_rank(psd, rank, inst);
    check_decay_bound(decay, inst);
  }

  PropertyOutcome bounds = named_outcome("initial_state_bounds");
  InitialStateTrialSpec ts;
  ts.zeta = c.zeta;
  for (std::size_t t = 0; t < 50; ++t) check_initial_state_trial(bounds, ts, t, derive_seed(base, {2}));

  bool all = true;
  std::string failures;
  for (const auto* p : {&equivalence, &psd, &rank, &decay, &bounds}) {
    out << (p->passed ? "PASS " : "FAIL ") << p->name << " checked=" << p->checked
        << " worst=" << p->worst << " tol=" << p->tolerance << "\n";
    if (!p->passed) {
      all = false;
      err << "offending instance for " << p->name << ": " << p->failure << "\n";
      failures += p->name + ": " + p->failure + "\n";
    }
  }
  if (!all) {
    failures += detail::concat("replay: reskernel verify --seed ", c.seed, " --trials ", configs,
                               " --N ", c.N, " --tau ", max_tau, "\n");
    write_file_atomic(out_path(c, "verify_failures.txt"), failures);
  }
  return all ? kSuccess : kPropertyFailure;
}

inline int cmd_kernel(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  detail::require(!c.u_file.empty(), "kernel: --u <file> is required");
  const TimeSeries u = read_time_series(c.u_file);
  const TimeSeries v = c.v_file.empty() ? u : read_time_series(c.v_file);
  if (c.tau) detail::require(*c.tau == u.horizon(), "kernel: --tau does not match the series length");
  const Instance inst = make_instance(reservoir_spec(c, single_nu(c)), input_spec(c), Seed{c.seed},
                                      u.horizon());
  warn_short_horizon(inst.q, err);

  std::string csv = "quantity,value\n";
  const double k = kernel_eval(inst.q, u, v);
  csv += "K," + format_double(k) + '\n';
  const double kp = kernel_poly(inst.q, u, v, c.offset, c.degree);
  csv += "K_poly," + format_double(kp) + '\n';
  out << "K=" << format_double(k) << " K_poly=" << format_double(kp);
  if (!c.supports.empty()) {
    detail::require(c.beta.size() == c.supports.size(), "kernel: need one --beta per --support");
    ReadoutModel model;
    for (const auto& f : c.supports) model.supports.push_back(read_time_series(f));
    model.coefficients = c.beta;
    model.bias = c.bias;
    const double y = readout_eval(model, inst.q, v);
    csv += "readout," + format_double(y) + '\n';
    out << " readout=" << format_double(y);
  }
  out << "\n";
  write_file_atomic(out_path(c, "kernel.csv"), csv);
  return kSuccess;
}

// ---------------------------------------------------------------------------

// Registers every option on `app` (flat, shared by all subcommands) and the
// subcommands themselves. After app.parse(), config.command is set.
inline void configure(CLI::App& app, ExperimentConfig& c) {
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.require_subcommand(1);

  app.add_option("--regime", c.regimes, "random|symmetric|cycle (comma list for sweep)")
      ->delimiter(',');
  app.add_option("--input", c.inputs,
                 "gaussian|uniform|ones-random-signs|pi-signs|e-signs|periodic-binary|"
                 "periodic-bipolar (comma list for sweep)")
      ->delimiter(',');
  app.add_option("--distribution", c.distribution, "entry distribution of random W: gaussian|uniform|signs");
  app.add_option("--N", c.N, "state dimension")->check(CLI::PositiveNumber);
  app.add_option("--nu", c.nu, "largest singular value of W (comma list for sweep)")->delimiter(',');
  app.add_option("--nu-grid", c.nu_grid, "sweep grid lo:step:hi");
  app.add_option("--ell", c.ell, "horizon in units of N (tau = ell * N)")->check(CLI::PositiveNumber);
  app.add_option("--tau", c.tau, "horizon (overrides --ell)")->check(CLI::PositiveNumber);
  app.add_option("--period", c.period, "period p of periodic inputs")->check(CLI::PositiveNumber);
  app.add_option("--trials", c.trials, "number of trials / random configurations");
  app.add_option("--seed", c.seed, "base seed");
  app.add_option("--threshold", c.threshold, "motif weight threshold relative to the largest");
  app.add_option("--out", c.out, "output directory");
  app.add_flag("--raw-input", c.raw_input, "do not normalize w to unit length");
  app.add_flag("--write-q", c.write_q, "motifs: also write metric_tensor.csv");

  app.add_option("--u", c.u_file, "kernel: first time series file (u(0) on the first line)");
  app.add_option("--v", c.v_file, "kernel: second time series file (defaults to --u)");
  app.add_option("--offset", c.offset, "kernel: polynomial kernel offset a");
  app.add_option("--degree", c.degree, "kernel: polynomial kernel degree d")->check(CLI::PositiveNumber);
  app.add_option("--support", c.supports, "kernel: readout support series files")->delimiter(',');
  app.add_option("--beta", c.beta, "kernel: readout coefficients")->delimiter(',');
  app.add_option("--bias", c.bias, "kernel: readout bias");

  app.add_option("--pairs", c.pairs, "verify: random (u, v) pairs per configuration");
  app.add_option("--zeta", c.zeta, "verify: zeta of the initial-state bound");
  app.add_flag("--inject-asymmetric", c.inject_asymmetric, "verify: test hook corrupting Q")
      ->group("");

  for (const char* name : {"motifs", "predict", "sweep", "verify", "kernel"}) {
    static const std::map<std::string, std::string> help = {
        {"motifs", "extract motifs and weights of the metric tensor"},
        {"predict", "closed-form motif prediction and comparison"},
        {"sweep", "motif richness over a nu grid"},
        {"verify", "randomized property suites"},
        {"kernel", "evaluate K, the polynomial kernel and a readout on series files"}};
    app.add_subcommand(name, help.at(name))->fallthrough()->callback([&c, name] { c.command = name; });
  }
}

inline int dispatch(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "motifs") return cmd_motifs(c, out, err);
    if (c.command == "predict") return cmd_predict(c, out, err);
    if (c.command == "sweep") return cmd_sweep(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "kernel") return cmd_kernel(c, out, err);
    err << "error: unknown command '" << c.command << "'\n";
    return kUsageError;
  } catch (const contract_violation& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const convergence_error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const psd_violation& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

// Full command-line entry point; argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Linear reservoir temporal kernels: motifs, predictions, richness sweeps"};
  app.name("reskernel");
  ExperimentConfig config;
  configure(app, config);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsageError;
  }
  return dispatch(config, out, err);
}

}  // namespace reskernel::cli
