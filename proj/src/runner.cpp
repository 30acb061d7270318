#include "ddpo/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "ddpo/config.hpp"
#include "ddpo/lie.hpp"
#include "ddpo/output.hpp"
#include "ddpo/splitstep.hpp"

namespace ddpo {

namespace fs = std::filesystem;

namespace {

constexpr const char* kTimeUnit = "t [1/omega0]";

void write_theta_csv(const fs::path& dir, const std::vector<double>& times,
                     const std::vector<Su2State>& su2) {
  CsvWriter csv(dir / "theta.csv");
  csv.comment(std::string(kTimeUnit) + "; theta components dimensionless");
  csv.columns({"t", "re_theta_plus", "im_theta_plus", "re_theta_zero", "im_theta_zero",
               "re_theta_minus", "im_theta_minus"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& s = su2[i];
    csv.row({times[i], s.theta_plus.real(), s.theta_plus.imag(), s.theta_zero.real(),
             s.theta_zero.imag(), s.theta_minus.real(), s.theta_minus.imag()});
  }
}

void write_k_csv(const fs::path& dir, const std::vector<double>& times,
                 const std::vector<std::array<double, 3>>& ks) {
  CsvWriter csv(dir / "K.csv");
  csv.comment(std::string(kTimeUnit) + "; K1,K2,K3 dimensionless frame coefficients");
  csv.columns({"t", "K1", "K2", "K3"});
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({times[i], ks[i][0], ks[i][1], ks[i][2]});
}

void write_classical_csv(const fs::path& dir, const std::vector<double>& times,
                         const std::vector<H4State>& h4) {
  CsvWriter csv(dir / "classical.csv");
  csv.comment(std::string(kTimeUnit) + "; x,p in zero-point units; s action [hbar]");
  csv.columns({"t", "x", "p", "s"});
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({times[i], h4[i].alpha, -h4[i].beta, h4[i].s});
}

void write_params_csv(const fs::path& dir, const ScenarioResult& res) {
  CsvWriter csv(dir / "params.csv");
  csv.comment(std::string(kTimeUnit) +
              "; alpha,beta zero-point units; s action [hbar]; thetas and Ks dimensionless");
  csv.columns({"t", "alpha", "beta", "s", "re_theta_plus", "im_theta_plus", "re_theta_zero",
               "im_theta_zero", "re_theta_minus", "im_theta_minus", "K1", "K2", "K3"});
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    const auto& h = res.h4[i];
    const auto& s = res.su2[i];
    csv.row({res.times[i], h.alpha, h.beta, h.s, s.theta_plus.real(), s.theta_plus.imag(),
             s.theta_zero.real(), s.theta_zero.imag(), s.theta_minus.real(),
             s.theta_minus.imag(), res.ks[i][0], res.ks[i][1], res.ks[i][2]});
  }
}

void write_moments_csv(const fs::path& dir, const std::vector<double>& times,
                       const std::vector<Moments>& moments, const std::vector<double>& invariant) {
  CsvWriter csv(dir / "moments.csv");
  csv.comment(std::string(kTimeUnit) + "; positions/momenta in zero-point units; norm dimensionless");
  std::vector<std::string> cols{"t", "mean_x", "mean_p", "delta_x", "delta_p", "norm"};
  bool with_inv = !invariant.empty();
  if (with_inv) cols.push_back("invariant");
  csv.columns(cols);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i],           moments[i].mean_x, moments[i].mean_p,
                            moments[i].delta_x, moments[i].delta_p, moments[i].norm};
    if (with_inv) row.push_back(invariant[i]);
    csv.row(row);
  }
}

void write_density_outputs(const fs::path& dir, const Grid& grid,
                           const std::vector<double>& times,
                           const std::vector<WaveState>& frames, bool pgm) {
  std::vector<std::vector<double>> rows;
  rows.reserve(frames.size());
  for (const auto& f : frames) rows.push_back(density(f));

  {
    CsvWriter csv(dir / "density.csv");
    csv.comment("rows: one per output time (see density_meta.json); columns: |psi|^2 at x_j");
    for (const auto& r : rows) csv.row(r);
  }
  nlohmann::json meta;
  meta["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n", grid.n}};
  meta["times"] = times;
  write_text_file(dir / "density_meta.json", meta.dump(2) + "\n");
  if (pgm && !rows.empty()) write_pgm(dir / "density.pgm", rows);
}

void write_scenario_plot(const fs::path& dir, bool with_grid) {
  std::string gp =
      "# gnuplot script for a scenario result bundle\n"
      "set datafile separator ','\n"
      "set key outside\n"
      "set xlabel 't [1/omega0]'\n"
      "set terminal pngcairo size 900,600\n"
      "set output 'classical.png'\n"
      "plot 'classical.csv' using 1:2 with lines title 'x(t)', \\\n"
      "     'classical.csv' using 1:3 with lines title 'p(t)'\n"
      "set output 'theta.png'\n"
      "plot 'theta.csv' using 1:2 with lines title 'Re theta+', \\\n"
      "     'theta.csv' using 1:4 with lines title 'Re theta0', \\\n"
      "     'theta.csv' using 1:6 with lines title 'Re theta-'\n";
  if (with_grid) {
    gp +=
        "set output 'moments.png'\n"
        "plot 'moments.csv' using 1:4 with lines title 'delta x', \\\n"
        "     'moments.csv' using 1:5 with lines title 'delta p', \\\n"
        "     'moments.csv' using 1:6 with lines title 'norm'\n";
  }
  write_text_file(dir / "plot.gp", gp);
}

fs::path prepare_dir(const std::string& configured, const std::string& override_dir) {
  fs::path dir = override_dir.empty() ? fs::path(configured) : fs::path(override_dir);
  fs::create_directories(dir);
  return dir;
}

int failure_code(const std::exception& e, const char* what) {
  std::cerr << what << ": " << e.what() << "\n";
  return 3;
}

struct OracleSummary {
  double max_l2 = 0;
  double max_norm_drift = 0;
};

OracleSummary write_oracle_csv(const fs::path& dir, const Scenario& sc,
                               const ScenarioResult& res) {
  OracleSummary sum;
  if (res.frames.empty()) return sum;
  SplitStepPropagator prop(SplitStepHamiltonian::from(sc.cs), res.frames.front(), sc.base_dt);
  CsvWriter csv(dir / "oracle.csv");
  csv.comment(std::string(kTimeUnit) + "; l2_error = ||psi_lie - psi_direct||_2");
  csv.columns({"t", "l2_error"});
  double norm0 = std::sqrt(norm_sq(res.frames.front()));
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    prop.advance_to(res.times[i]);
    double err = l2_distance(res.frames[i], prop.state());
    csv.row({res.times[i], err});
    sum.max_l2 = std::max(sum.max_l2, err);
    double drift = std::abs(std::sqrt(norm_sq(res.frames[i])) - norm0);
    sum.max_norm_drift = std::max(sum.max_norm_drift, drift);
  }
  return sum;
}

int run_one_scenario(const ScenarioConfig& cfg, const fs::path& dir, const CliOptions& opt,
                     bool flows_only, OracleSummary* oracle_out = nullptr) {
  if (cfg.is_well_model()) {
    if (flows_only) throw ConfigError("free-well models have no parameter-flow-only mode");
    WellScenario ws = cfg.well_scenario();
    WellResult wr = run_well_scenario(ws);
    CsvWriter csv(dir / "classical.csv");
    csv.comment(std::string(kTimeUnit) + "; x,p zero-point units; L well width");
    csv.columns({"t", "x", "p", "L"});
    for (std::size_t i = 0; i < wr.times.size(); ++i)
      csv.row({wr.times[i], wr.xc[i], wr.pc[i], wr.width[i]});
    write_moments_csv(dir, wr.times, wr.frame_moments, wr.invariant);
    write_density_outputs(dir, ws.grid, wr.times, wr.frames, opt.pgm);
    write_events_json(dir / "events.json", {});
    write_scenario_plot(dir, true);
    return 0;
  }

  Scenario sc = cfg.scenario();
  ScenarioResult res = flows_only ? run_scenario_flows(sc) : run_scenario(sc);

  // zero horizon yields header-only tables
  if (sc.horizon <= 0.0) {
    res.times.clear();
    res.h4.clear();
    res.su2.clear();
    res.ks.clear();
    res.frames.clear();
    res.frame_moments.clear();
    res.invariant.clear();
  }

  write_params_csv(dir, res);
  write_classical_csv(dir, res.times, res.h4);
  write_theta_csv(dir, res.times, res.su2);
  write_k_csv(dir, res.times, res.ks);
  write_events_json(dir / "events.json", res.events);
  if (!flows_only) {
    write_moments_csv(dir, res.times, res.frame_moments, res.invariant);
    write_density_outputs(dir, sc.grid, res.times, res.frames, opt.pgm);
    if (opt.oracle) {
      OracleSummary sum = write_oracle_csv(dir, sc, res);
      if (oracle_out) *oracle_out = sum;
    }
  }
  write_scenario_plot(dir, !flows_only);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

  if (opt.strict && res.truncated) {
    std::cerr << "divergence event truncated the run";
    if (!res.events.empty())
      std::cerr << " (first at t=" << format_double(res.events.front().time) << ")";
    std::cerr << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int cmd_classical(const CliOptions& opt) {
  ClassicalConfig cfg;
  try {
    cfg = ClassicalConfig::from_json(load_json_file(opt.config_path));
    if (cfg.horizon <= 0) throw ConfigError("horizon must be positive");
    if (cfg.dt <= 0) throw ConfigError("dt must be positive");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    fs::path dir = prepare_dir(cfg.output_dir, opt.out_dir);
    const DdhoParams& p = cfg.ddho;

    // scaled coefficient set equivalent to x'' + 2 gamma x' + omega0^2 x = drive
    auto b = TimeFunction::constant(p.omega0 * p.omega0) * TimeFunction::exponential(2.0 * p.gamma);
    auto cs = CoefficientSet::make(
        TimeFunction::exponential(-2.0 * p.gamma), b, TimeFunction::constant(0),
        TimeFunction::constant(0),
        -(TimeFunction::exponential(2.0 * p.gamma) *
          TimeFunction::harmonic(p.f0, p.omega_drive, p.phi)),
        TimeFunction::constant(0));
    ClassicalTrajectory traj = integrate_classical(cs, p.x0, p.p0, cfg.horizon, cfg.dt);

    {
      CsvWriter csv(dir / "trajectory.csv");
      csv.comment(std::string(kTimeUnit) + "; x,p in initial-oscillator units; s action [hbar]");
      csv.columns({"t", "x", "p", "s"});
      for (std::size_t i = 0; i < traj.times.size(); ++i)
        csv.row({traj.times[i], traj.x[i], traj.p[i], traj.action[i]});
    }
    {
      Spectrum sp = power_spectrum(traj.x, cfg.dt);
      CsvWriter csv(dir / "spectrum.csv");
      csv.comment("freq [omega0]; power (cosine-amplitude^2 / 2, Hann window)");
      csv.columns({"freq", "power"});
      for (std::size_t i = 0; i < sp.freq.size(); ++i) csv.row({sp.freq[i], sp.power[i]});
    }
    if (cfg.sweep) {
      const auto& sw = *cfg.sweep;
      CsvWriter csv(dir / "response.csv");
      csv.comment("omega [omega0]; F0 drive strength; A2 amplitude; phi2 [rad]; X1,X2 quadratures");
      csv.columns({"omega", "F0", "A2", "phi2", "X1", "X2"});
      for (double f0 : sw.f0_values) {
        for (std::size_t i = 0; i < sw.count; ++i) {
          double w = sw.omega_min + (sw.omega_max - sw.omega_min) * static_cast<double>(i) /
                                        static_cast<double>(sw.count - 1);
          DdhoParams q = p;
          q.f0 = f0;
          q.omega_drive = w;
          SteadyResponse r = steady_response(q);
          csv.row({w, f0, r.amplitude, r.phase, r.in_phase, r.out_phase});
        }
      }
    }
    write_text_file(dir / "plot.gp",
                    "# gnuplot script for the classical bundle\n"
                    "set datafile separator ','\n"
                    "set terminal pngcairo size 900,600\n"
                    "set output 'trajectory.png'\n"
                    "plot 'trajectory.csv' using 1:2 with lines title 'x(t)'\n"
                    "set output 'phase_portrait.png'\n"
                    "plot 'trajectory.csv' using 2:3 with lines title 'orbit'\n"
                    "set output 'spectrum.png'\n"
                    "set logscale y\n"
                    "plot 'spectrum.csv' using 1:2 with lines title 'power'\n");
    return 0;
  } catch (const std::exception& e) {
    return failure_code(e, "classical run failed");
  }
}

int cmd_evolve(const CliOptions& opt) {
  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::from_json(load_json_file(opt.config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    fs::path dir = prepare_dir(cfg.output_dir, opt.out_dir);
    return run_one_scenario(cfg, dir, opt, /*flows_only=*/false);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    return failure_code(e, "evolve failed");
  }
}

int cmd_params(const CliOptions& opt) {
  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::from_json(load_json_file(opt.config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    fs::path dir = prepare_dir(cfg.output_dir, opt.out_dir);
    return run_one_scenario(cfg, dir, opt, /*flows_only=*/true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    return failure_code(e, "params failed");
  }
}

int cmd_sweep(const CliOptions& opt) {
  SweepConfig cfg;
  try {
    cfg = SweepConfig::from_json(load_json_file(opt.config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    fs::path base = prepare_dir(cfg.output_dir, opt.out_dir);
    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    std::mutex log_mutex;
    int jobs = std::max(1, opt.jobs);
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cfg.scenarios.size()) return;
        const ScenarioConfig& sc = cfg.scenarios[i];
        fs::path dir = base / sc.name;
        fs::create_directories(dir);
        int rc = 0;
        try {
          rc = run_one_scenario(sc, dir, opt, /*flows_only=*/false);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(log_mutex);
          std::cerr << "scenario '" << sc.name << "' failed: " << e.what() << "\n";
          rc = 3;
        }
        int cur = worst.load();
        while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return worst.load();
  } catch (const std::exception& e) {
    return failure_code(e, "sweep failed");
  }
}

int cmd_verify(const CliOptions& opt) {
  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::from_json(load_json_file(opt.config_path));
    if (cfg.is_well_model()) throw ConfigError("verify needs a grid scenario, not free-well");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    fs::path dir = prepare_dir(cfg.output_dir, opt.out_dir);
    CliOptions vopt = opt;
    vopt.oracle = true;
    OracleSummary sum;
    int rc = run_one_scenario(cfg, dir, vopt, /*flows_only=*/false, &sum);
    const double l2_tol = 1e-6, norm_tol = 1e-8;
    bool ok = rc == 0 && sum.max_l2 < l2_tol && sum.max_norm_drift < norm_tol;
    std::cout << (ok ? "PASS" : "FAIL") << " max_l2=" << format_double(sum.max_l2)
              << " (tol " << format_double(l2_tol) << ")"
              << " max_norm_drift=" << format_double(sum.max_norm_drift) << " (tol "
              << format_double(norm_tol) << ")\n";
    return ok ? 0 : 3;
  } catch (const std::exception& e) {
    return failure_code(e, "verify failed");
  }
}

}  // namespace ddpo
