#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace wsr {

using namespace warmstandby;

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::size_t kBoundsProbes = 4096;

std::filesystem::path prepare(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output.directory);
  return cfg.output.directory;
}

void emit(const ExperimentConfig& cfg, const CsvTable& table, const char* name) {
  if (cfg.output.csv) table.write(prepare(cfg) / name);
}

// Thinning needs the declared bounds to hold; a violation is a config error.
void require_bounds(const ExperimentConfig& cfg) {
  const BoundsReport rep = validate_bounds(cfg.intensity_model(), kBoundsProbes, cfg.sim.master_seed);
  if (!rep.passed) {
    const auto& v = *rep.violation;
    throw ConfigError("intensity " + v.intensity + " = " + format_double(v.value) + " at state " +
                      to_string(v.state) + " lies outside its declared bounds [" +
                      format_double(v.bounds.lo) + ", " + format_double(v.bounds.hi) + "]");
  }
}

SimConfig hat_config(const SimConfig& sim) {
  SimConfig c = sim;
  c.master_seed = splitmix64(sim.master_seed);
  return c;
}

double bin_cap(const ExperimentConfig& cfg) {
  return cfg.sim.bin_cap > 0.0 ? cfg.sim.bin_cap : 5.0 / cfg.intensity_model().bounds().min_lower();
}

std::vector<CurvePoint> tv_curve(const ExperimentConfig& cfg, const Ensemble& a, const Ensemble& b) {
  std::vector<CurvePoint> curve;
  const double cap = bin_cap(cfg);
  for (const double t : cfg.sim.time_grid) {
    const auto ha = state_histogram(a, t, cfg.sim.hist_bins, cap);
    const auto hb = state_histogram(b, t, cfg.sim.hist_bins, cap);
    curve.push_back({t, estimate_tv(ha, hb), tv_standard_error(ha, hb)});
  }
  return curve;
}

std::vector<CouplingRun> coupled_runs(const ExperimentConfig& cfg, double epsilon) {
  CouplingOptions opts;
  opts.epsilon = epsilon;
  opts.failure_channel = cfg.coupling.failure_channel;
  return run_coupled_batch(cfg.intensity_model(), cfg.model.initial, cfg.model.initial_hat,
                           cfg.sim.horizon, cfg.coupling.n_runs, cfg.sim.master_seed, opts,
                           cfg.sim.threads);
}

std::string certificate_block(const BoundResult& r) {
  std::ostringstream s;
  s << "certificate\n"
    << "  strategy     " << to_string(r.strategy) << '\n'
    << "  epsilon      " << format_double(r.epsilon) << '\n'
    << "  pi1          " << format_double(r.pi1) << '\n'
    << "  pi2          " << format_double(r.pi2) << '\n'
    << "  kappa1       " << format_double(r.kappa1) << '\n'
    << "  kappa_tilde  " << format_double(r.kappa_tilde) << '\n';
  if (r.valid) {
    s << "  alpha        " << format_double(r.alpha) << '\n'
      << "  K            " << format_double(r.K) << '\n'
      << "  bound        TV(t) <= K exp(-alpha t)\n";
  } else {
    s << "  no certificate\n";
  }
  if (!r.note.empty()) s << "  note         " << r.note << '\n';
  return s.str();
}

CsvTable certificate_table(const BoundResult& r) {
  CsvTable t({"epsilon", "strategy", "pi1", "pi2", "kappa1", "kappa_tilde", "alpha", "K", "valid"});
  t.row({r.epsilon, to_string(r.strategy), r.pi1, r.pi2, r.kappa1, r.kappa_tilde, r.alpha, r.K,
         static_cast<long long>(r.valid)});
  return t;
}

}  // namespace

BoundResult config_certificate(const ExperimentConfig& cfg) {
  const IntensityBounds& b = cfg.intensity_model().bounds();
  if (cfg.coupling.epsilon) return certify(b, *cfg.coupling.epsilon, cfg.coupling.strategy);
  const auto grid =
      default_epsilon_grid(b, cfg.bounds.grid_points, cfg.bounds.grid_lo, cfg.bounds.grid_hi);
  return optimize_epsilon(b, cfg.coupling.strategy, grid);
}

int cmd_exact(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  if (!cfg.model.params) throw ConfigError("exact requires [model] type = exponential");
  const ExpParams& p = *cfg.model.params;
  const auto& x0 = cfg.model.initial;
  const MarkovDist p0 = MarkovDist::point_mass(state_index(flag(x0.main), flag(x0.standby)));
  const auto dists = solve_kolmogorov(p, p0, cfg.sim.time_grid);

  CsvTable curve({"t", "p00", "p10", "p01", "p11", "availability"});
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const auto& d = dists[k];
    curve.row({cfg.sim.time_grid[k], d.p00(), d.p10(), d.p01(), d.p11(), 1.0 - d.p11()});
  }
  emit(cfg, curve, "exact_availability.csv");

  const Spectrum sp = spectrum(p);
  CsvTable eig({"index", "real", "imag"});
  for (std::size_t k = 0; k < 4; ++k) {
    eig.row({static_cast<long long>(k), sp.eigenvalues[k].real(), sp.eigenvalues[k].imag()});
  }
  emit(cfg, eig, "spectrum.csv");

  const MarkovDist pi = stationary(p);
  CsvTable st({"state", "i", "j", "probability"});
  const char* names[] = {"00", "10", "01", "11"};
  for (std::size_t k = 0; k < 4; ++k) {
    st.row({std::string(names[k]), static_cast<long long>(k % 2), static_cast<long long>(k / 2),
            pi.p[k]});
  }
  emit(cfg, st, "stationary.csv");

  const auto diag = printed_formula_diagnostic(p);
  out << "stationary availability " << format_double(1.0 - pi.p11()) << '\n'
      << "spectral gap " << format_double(sp.spectral_gap()) << '\n'
      << "closed-form eigenvalue expression " << (diag.eigenvalues_agree ? "agrees" : "disagrees")
      << " with the generator spectrum\n";
  return kSuccess;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  require_bounds(cfg);
  const IntensityModel& model = cfg.intensity_model();
  const Ensemble ens = simulate_ensemble(model, cfg.model.initial, cfg.sim);
  const Ensemble ens_hat = simulate_ensemble(model, cfg.model.initial_hat, hat_config(cfg.sim));

  CsvTable avail({"t", "availability", "std_error", "ci_lo", "ci_hi"});
  for (const auto& e : estimate_availability(ens, cfg.sim.time_grid)) {
    avail.row({e.t, e.value, e.std_error, std::max(0.0, e.value - kZ95 * e.std_error),
               std::min(1.0, e.value + kZ95 * e.std_error)});
  }
  emit(cfg, avail, "availability.csv");

  CsvTable flags({"t", "p00", "p10", "p01", "p11", "se00", "se10", "se01", "se11"});
  for (const auto& f : estimate_flag_distribution(ens, cfg.sim.time_grid)) {
    flags.row({f.t, f.p[0], f.p[1], f.p[2], f.p[3], f.std_error[0], f.std_error[1], f.std_error[2],
               f.std_error[3]});
  }
  emit(cfg, flags, "flag_distribution.csv");

  const auto h = state_histogram(ens, cfg.sim.horizon, cfg.sim.hist_bins, bin_cap(cfg));
  CsvTable hist({"mode", "x_bin", "y_bin", "probability"});
  const std::size_t cells = h.cells_per_axis();
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t xb = 0; xb < cells; ++xb) {
      for (std::size_t yb = 0; yb < cells; ++yb) {
        hist.row({static_cast<long long>(m), static_cast<long long>(xb),
                  static_cast<long long>(yb), h.probability[h.index(m, xb, yb)]});
      }
    }
  }
  emit(cfg, hist, "histogram.csv");

  CsvTable tv({"t", "tv", "std_error"});
  for (const auto& p : tv_curve(cfg, ens, ens_hat)) tv.row({p.t, p.value, p.std_error});
  emit(cfg, tv, "tv.csv");

  const CycleStatistics cs = cycle_statistics(ens);
  const auto& b = model.bounds();
  CsvTable cyc({"cycles", "censored", "mean_length", "std_error", "mean_cycles_per_path", "mean_bound"});
  cyc.row({static_cast<long long>(cs.cycles), static_cast<long long>(cs.censored), cs.mean_length, cs.std_error, cs.mean_cycles_per_path,
           1.0 / b.lambda1.lo + 1.0 / b.mu1.lo});
  emit(cfg, cyc, "epochs.csv");

  CsvTable hits({"epsilon", "windows", "hits", "frequency", "std_error", "lower_bound"});
  for (const double eps : {0.1, 0.5, 1.0}) {
    const auto w = fresh_set_window_hits(ens, eps);
    hits.row({eps, static_cast<long long>(w.windows), static_cast<long long>(w.hits), w.frequency,
              w.std_error, fresh_set_hit_probability(eps, b)});
  }
  emit(cfg, hits, "window_hits.csv");

  if (cfg.dump_events) {
    CsvTable events({"t", "component", "transition", "path_id"});
    for (std::size_t k = 0; k < ens.paths.size(); ++k) {
      for (const Event& e : ens.paths[k].events) {
        events.row({e.t, std::string(e.component == Component::main ? "main" : "standby"),
                    std::string(e.transition == Transition::fail ? "fail" : "repair"),
                    static_cast<long long>(k)});
      }
    }
    emit(cfg, events, "events.csv");
  }

  out << "simulated " << ens.paths.size() << " paths from each initial state up to t = "
      << format_double(cfg.sim.horizon) << '\n'
      << "mean cycle length " << format_double(cs.mean_length) << " +- "
      << format_double(cs.std_error) << '\n';
  return kSuccess;
}

int cmd_couple(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  require_bounds(cfg);
  const double eps =
      cfg.coupling.epsilon ? *cfg.coupling.epsilon : config_certificate(cfg).epsilon;
  const auto runs = coupled_runs(cfg, eps);

  CsvTable taus({"run_id", "tau", "attempts", "windows_hit"});
  std::size_t coupled = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    coupled += r.tau.has_value();
    taus.row({static_cast<long long>(k),
              r.tau ? format_double(*r.tau) : std::string("censored"),
              static_cast<long long>(r.attempts.size()), static_cast<long long>(r.windows_hit())});
  }
  emit(cfg, taus, "tau.csv");

  CsvTable tail({"t", "tail", "std_error", "ci_lo", "ci_hi"});
  for (const auto& p : coupling_tail(runs, cfg.sim.time_grid)) {
    tail.row({p.t, p.tail, p.std_error, p.ci_lo, p.ci_hi});
  }
  emit(cfg, tail, "tail.csv");

  out << "coupled " << coupled << " of " << runs.size() << " runs before t = "
      << format_double(cfg.sim.horizon) << " with epsilon " << format_double(eps) << '\n';
  return kSuccess;
}

int cmd_bounds(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const BoundResult r = config_certificate(cfg);
  emit(cfg, certificate_table(r), "certificate.csv");
  const std::string block = certificate_block(r);
  if (cfg.output.text) {
    std::ofstream(prepare(cfg) / "certificate.txt", std::ios::binary) << block;
  }
  out << block;
  if (!r.valid) {
    err << "no certificate: " << r.note << '\n';
    return kAssertionFailed;
  }
  return kSuccess;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const BoundResult r = config_certificate(cfg);
  out << certificate_block(r);
  if (!r.valid) {
    err << "no certificate: " << r.note << '\n';
    return kAssertionFailed;
  }
  require_bounds(cfg);
  const IntensityModel& model = cfg.intensity_model();
  const Ensemble ens = simulate_ensemble(model, cfg.model.initial, cfg.sim);
  const Ensemble ens_hat = simulate_ensemble(model, cfg.model.initial_hat, hat_config(cfg.sim));
  const auto tv = tv_curve(cfg, ens, ens_hat);

  const auto runs = coupled_runs(cfg, r.epsilon);
  std::vector<CurvePoint> tail;
  for (const auto& p : coupling_tail(runs, cfg.sim.time_grid)) {
    tail.push_back({p.t, p.tail, p.std_error});
  }

  std::optional<ExactReference> exact;
  if (cfg.model.params) {
    const auto& x0 = cfg.model.initial;
    exact = ExactReference{*cfg.model.params,
                           MarkovDist::point_mass(state_index(flag(x0.main), flag(x0.standby))),
                           cfg.sim.time_grid};
  }
  const CertificateReport rep = tv_certificate_check(r, tv, tail, exact);

  CsvTable table({"quantity", "t", "observed", "bound", "passed"});
  for (const auto& c : rep.checks) {
    table.row({c.quantity, c.t, c.observed, c.bound, static_cast<long long>(c.passed)});
  }
  emit(cfg, table, "verify.csv");

  out << rep.message << '\n';
  if (!rep.passed) {
    for (const auto& c : rep.checks) {
      if (!c.passed) {
        err << "domination failed: " << c.quantity << " at t = " << format_double(c.t) << ": "
            << format_double(c.observed) << " > " << format_double(c.bound) << '\n';
      }
    }
    if (!rep.alpha_below_gap) err << "certified rate exceeds the exact spectral gap\n";
    return kAssertionFailed;
  }
  return kSuccess;
}

}  // namespace wsr
