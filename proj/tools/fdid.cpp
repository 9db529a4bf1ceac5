// fdid: frequency-domain identification of linear ODE systems.
//
//   fdid simulate   --preset paper --fs 80 --out run/
//   fdid identify   --x run/x.csv --u run/u.csv --method corrected --window cinf:4
//   fdid window     --window sin:2 --out win/
//   fdid sweep      --fs 80,160,320 --methods corrected,ps --windows cinf:4
//   fdid montecarlo --trials 100 --sigmas 1e-2,1e-8 --windows sin:1,cinf:4
//   fdid overlap    --windows rect,sin:2 --L 100
//
// Every subcommand accepts --config FILE (flat key=value lines, keys are the
// long option names without dashes); flags on the command line win. The
// resolved configuration is written to <out>/config.ini.
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 1 otherwise.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdid/fdid.hpp"

namespace fs = std::filesystem;
using namespace fdid;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string out = ".";
  std::uint64_t seed = 1;
};

// Defaults reproduce the reference experiment.
struct SimArgs {
  std::string preset = "paper";
  int n_x = 5, n_u = 5, n_a = 1, n_b = 0;
  std::size_t n_f = 85;
  double f_min = 1.0;
  double f_max = 20.0 * std::numbers::sqrt2;
  double dt = 1.0 / 28800.0;
  double T = 1.0;
  double sigma = 0.0;
};

// Real-valued option whose default is recorded with full precision, so that
// a written config.ini reproduces the run exactly.
CLI::Option* add_real(CLI::App* app, const std::string& name, double& value, const std::string& description) {
  std::ostringstream text;
  text << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return app->add_option(name, value, description)->default_str(text.str());
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Root seed");
}

void add_sim(CLI::App* app, SimArgs& s) {
  app->add_option("--preset", s.preset, "Starting configuration; individual flags override it")
      ->check(CLI::IsMember({"paper"}));
  app->add_option("--nx", s.n_x, "State dimension");
  app->add_option("--nu", s.n_u, "Input dimension");
  app->add_option("--na", s.n_a, "Highest state derivative");
  app->add_option("--nb", s.n_b, "Highest input derivative");
  app->add_option("--nf", s.n_f, "Number of forcing tones");
  add_real(app, "--f-min", s.f_min, "Lowest forcing frequency [Hz]");
  add_real(app, "--f-max", s.f_max, "Highest forcing frequency [Hz]");
  add_real(app, "--dt", s.dt, "Integrator step [s]");
  add_real(app, "--T", s.T, "Record length [s]");
  add_real(app, "--sigma", s.sigma, "Measurement noise standard deviation");
}

Experiment make_experiment(const SimArgs& s, std::uint64_t seed) {
  Experiment e;
  e.config.structure = {s.n_x, s.n_u, s.n_a, s.n_b};
  e.config.structure.validate();
  e.config.dt = s.dt;
  e.config.T = s.T;
  e.config.seed = seed;
  e.config.sigma = s.sigma;
  e.n_f = s.n_f;
  e.f_min = s.f_min;
  e.f_max = s.f_max;
  return e;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == item.size(), "bad " + what + " entry '" + item + "'");
      out.push_back(static_cast<T>(v));
    }
  }
  require(!out.empty(), what + " list is empty");
  return out;
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, "cannot create output directory " + dir + ": " + ec.message());
}

void write_config(const CLI::App* app, const std::string& dir) {
  auto out = io::open_out((fs::path(dir) / "config.ini").string());
  out << "# " << app->get_name() << "\n" << app->config_to_str(true, false);
}

struct IdentifyArgs {
  std::string method = "corrected";
  std::string window = "cinf:4";
  int n_p = 0;
  std::optional<double> f_min, f_max;
  std::string band = "default";
  bool endpoint_average = false;
};

void add_identify(CLI::App* app, IdentifyArgs& a, bool with_method) {
  if (with_method)
    app->add_option("--method", a.method, "corrected | ps | mixed | naive")
        ->check(CLI::IsMember({"corrected", "ps", "mixed", "naive"}));
  if (with_method) app->add_option("--window", a.window, "Window for corrected/mixed: sin:n | cinf:n");
  app->add_option("--np", a.n_p, "Transient polynomial terms per output (ps, mixed)");
  app->add_option("--band-f-min,--f-min-band", a.f_min, "Lowest fitted frequency [Hz]");
  app->add_option("--band-f-max,--f-max-band", a.f_max, "Highest fitted frequency [Hz]");
  app->add_option("--band", a.band, "default | one-sided | two-sided")
      ->check(CLI::IsMember({"default", "one-sided", "two-sided"}));
  app->add_flag("--endpoint-average", a.endpoint_average, "Replace sample 0 by (s(0) + s(T)) / 2");
}

IdentifyOptions make_options(const IdentifyArgs& a, Method method, const std::string& window, std::size_t N, double T) {
  IdentifyOptions o;
  o.method = method;
  if (uses_window(method)) o.window = WindowSpec::parse(window, T);
  o.n_p = a.n_p;
  o.f_min = a.f_min;
  o.f_max = a.f_max;
  if (a.band == "one-sided") o.band = one_sided_bins(N);
  if (a.band == "two-sided") o.band = two_sided_bins(N);
  o.endpoint = a.endpoint_average ? Endpoint::average : Endpoint::as_sampled;
  return o;
}

std::size_t sample_count(double fs, double T) {
  const double n = fs * T;
  require(std::abs(n - std::round(n)) <= 1e-9 * n && n >= 2, "f_s * T must be an integer >= 2");
  return static_cast<std::size_t>(std::llround(n));
}

// ---------------------------------------------------------------- simulate

void cmd_simulate(const CLI::App* app, const Common& c, const SimArgs& s, double fs) {
  const Experiment e = make_experiment(s, c.seed);
  prepare_out(c.out);
  const Simulation sim = simulate(e);
  const std::size_t n = fs > 0.0 ? sample_count(fs, e.config.T) : sim.x.N();
  auto [x, u] = observed_records(sim, static_cast<double>(n) / e.config.T, s.sigma, c.seed);
  io::write_signal_csv((fs::path(c.out) / "x.csv").string(), x);
  io::write_signal_csv((fs::path(c.out) / "u.csv").string(), u);
  nlohmann::json truth;
  truth["theta"] = io::params_to_json(sim.theta);
  truth["forcing"] = io::forcing_to_json(sim.forcing);
  truth["x0"] = io::matrix_to_json(Eigen::MatrixXcd(sim.z0));
  truth["seeds"] = {{"root", c.seed},
                    {"system", derive_seed(c.seed, "system")},
                    {"forcing", derive_seed(c.seed, "forcing")},
                    {"x0", derive_seed(c.seed, "x0")},
                    {"noise-x", derive_seed(c.seed, "noise-x")},
                    {"noise-u", derive_seed(c.seed, "noise-u")}};
  truth["system_attempts"] = sim.system_attempts;
  truth["dt"] = e.config.dt;
  truth["T"] = e.config.T;
  truth["fs"] = static_cast<double>(n) / e.config.T;
  truth["sigma"] = s.sigma;
  truth["prng"] = "splitmix64-counter";
  io::write_json((fs::path(c.out) / "truth.json").string(), truth);
  write_config(app, c.out);
  std::cout << "wrote " << n << " samples x " << x.channels() << " states to " << c.out << "\n";
}

// ---------------------------------------------------------------- identify

void cmd_identify(const CLI::App* app, const Common& c, const IdentifyArgs& a, const std::string& x_path,
                  const std::string& u_path, int n_a, int n_b, const std::string& truth_path) {
  const Signal x = io::read_signal_csv(x_path);
  const Signal u = io::read_signal_csv(u_path);
  const ModelStructure st{static_cast<int>(x.channels()), static_cast<int>(u.channels()), n_a, n_b};
  const Method method = parse_method(a.method);
  const IdentifyOptions o = make_options(a, method, a.window, x.N(), x.T);
  prepare_out(c.out);
  const EstimateReport r = identify(x, u, st, o);
  nlohmann::json j = io::report_to_json(r);
  j["structure"] = io::structure_to_json(st);
  j["seed"] = c.seed;
  j["N"] = x.N();
  j["T"] = x.T;
  if (!truth_path.empty()) {
    const ModelParams truth = io::params_from_json(io::read_json(truth_path).at("theta"));
    j["param_error"] = param_error(truth, r.theta_hat);
  }
  io::write_json((fs::path(c.out) / "report.json").string(), j);
  io::write_spectrum_csv((fs::path(c.out) / "residual.csv").string(), r.residual, true);
  write_config(app, c.out);
  std::cout << to_string(r.method) << ": ||E|| = " << r.norms.l2;
  if (j.contains("param_error")) std::cout << ", ||theta - theta_hat|| = " << j["param_error"].get<double>();
  std::cout << ", " << r.wall_time << " s\n";
}

// ---------------------------------------------------------------- window

void cmd_window(const CLI::App* app, const Common& c, const std::string& spec_text, std::size_t N, int max_deriv,
                int oversample, double f_max) {
  const WindowSpec w = WindowSpec::parse(spec_text);
  require(max_deriv >= 0 && max_deriv <= 3, "--max-deriv must lie in 0..3");
  require(w.family != WindowFamily::rectangular || max_deriv == 0,
          "rectangular window has no derivative samples; use --max-deriv 0");
  prepare_out(c.out);
  const WindowTable table = window_table(w, N, max_deriv);
  {
    auto out = io::open_out((fs::path(c.out) / "window.csv").string());
    out << "t";
    for (int k = 0; k <= max_deriv; ++k) out << ",w" << k;
    out << "\n";
    for (std::size_t j = 0; j <= N; ++j) {
      out << w.length * static_cast<double>(j) / static_cast<double>(N);
      for (int k = 0; k <= max_deriv; ++k)
        out << ',' << (j < N ? table.samples(k, static_cast<Eigen::Index>(j)) : table.end_values(k));
      out << "\n";
    }
  }
  {
    std::vector<Spectrum> spectra;
    for (int k = 0; k <= max_deriv; ++k) spectra.push_back(window_spectrum(w, k, oversample, f_max));
    auto out = io::open_out((fs::path(c.out) / "spectrum.csv").string());
    out << "f";
    for (int k = 0; k <= max_deriv; ++k) out << ",w" << k << "_re,w" << k << "_im,w" << k << "_abs";
    out << "\n";
    for (std::size_t i = 0; i < spectra[0].size(); ++i) {
      out << spectra[0].frequency(i);
      for (const auto& s : spectra) {
        const auto v = s.coeffs(0, static_cast<Eigen::Index>(i));
        out << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v);
      }
      out << "\n";
    }
  }
  {
    auto out = io::open_out((fs::path(c.out) / "ferr.csv").string());
    out << "window,k,p,f_err\n";
    for (int k = 0; k <= max_deriv; ++k)
      for (double p : {1e-3, 1e-6, 1e-12}) {
        const auto f = f_err(w, k, p);
        out << w.name() << ',' << k << ',' << p << ',' << (f ? std::to_string(*f) : std::string("> 10000")) << "\n";
      }
  }
  write_config(app, c.out);
  std::cout << "wrote window.csv, spectrum.csv, ferr.csv for " << w.name() << " to " << c.out << "\n";
}

// ---------------------------------------------------------------- sweep

void cmd_sweep(const CLI::App* app, const Common& c, const SimArgs& s, const IdentifyArgs& a,
               const std::string& rates_text, const std::string& methods_text, const std::string& windows_text,
               double f_star) {
  const Experiment e = make_experiment(s, c.seed);
  const auto rates = parse_list<double>(rates_text, "--fs");
  const auto methods = parse_list<std::string>(methods_text, "--methods");
  const auto windows = parse_list<std::string>(windows_text, "--windows");
  prepare_out(c.out);
  const Simulation sim = simulate(e);
  IdentifyArgs per_case = a;
  per_case.band = "default";  // explicit bands are built per rate below
  std::vector<IdentifyOptions> cases;
  for (const auto& m : methods) {
    const Method method = parse_method(m);
    if (uses_window(method)) {
      for (const auto& w : windows) cases.push_back(make_options(per_case, method, w, 0, e.config.T));
    } else {
      cases.push_back(make_options(per_case, method, "", 0, e.config.T));
    }
  }
  std::vector<SweepPoint> points(rates.size() * cases.size());
  parallel_for(points.size(), [&](std::size_t i) {
    IdentifyOptions o = cases[i % cases.size()];
    const double fs = rates[i / cases.size()];
    const std::size_t n = sample_count(fs, e.config.T);
    if (a.band == "one-sided") o.band = one_sided_bins(n);
    if (a.band == "two-sided") o.band = two_sided_bins(n);
    points[i] = sweep_point(sim, fs, o, f_star, s.sigma, c.seed);
  });
  auto out = io::open_out((fs::path(c.out) / "sweep.csv").string());
  out << "fs,method,window,n_p,e_fstar,E_true,E_fit,param_error,wall_time,rank,condition,imag_norm\n";
  for (const auto& p : points)
    out << p.fs << ',' << to_string(p.method) << ',' << p.window << ',' << p.n_p << ',' << p.e_fstar << ','
        << p.E_true << ',' << p.E_fit << ',' << p.param_error << ',' << p.wall_time << ',' << p.rank << ','
        << p.condition << ',' << p.imag_norm << "\n";
  write_config(app, c.out);
  std::cout << "wrote " << points.size() << " sweep rows to " << c.out << "/sweep.csv\n";
}

// ---------------------------------------------------------------- montecarlo

void cmd_montecarlo(const CLI::App* app, const Common& c, const SimArgs& s, const IdentifyArgs& a, double fs,
                    std::size_t trials, const std::string& sigmas_text, const std::string& windows_text) {
  const Experiment e = make_experiment(s, c.seed);
  const auto sigmas = parse_list<double>(sigmas_text, "--sigmas");
  const auto windows = parse_list<std::string>(windows_text, "--windows");
  const Method method = parse_method(a.method);
  prepare_out(c.out);
  const Simulation sim = simulate(e);
  const std::size_t n = sample_count(fs, e.config.T);
  auto out = io::open_out((fs::path(c.out) / "ensemble.csv").string());
  out << "sigma,method,window,K,seed,trial_error,mean_error,std_norm\n";
  nlohmann::json summary = nlohmann::json::array();
  for (double sigma : sigmas) {
    for (const auto& w : uses_window(method) ? windows : std::vector<std::string>{"rect"}) {
      const IdentifyOptions o = make_options(a, method, w, n, e.config.T);
      const EnsembleResult r = monte_carlo(sim, fs, sigma, o, trials, c.seed);
      for (std::size_t k = 0; k < trials; ++k)
        out << sigma << ',' << to_string(method) << ',' << w << ',' << k + 1 << ',' << r.seeds[k] << ','
            << r.stats.trial_error[k] << ',' << r.stats.mean_error[k] << ',' << r.stats.std_norm[k] << "\n";
      summary.push_back({{"sigma", sigma},
                         {"method", to_string(method)},
                         {"window", w},
                         {"trials", trials},
                         {"mean_trial_error", r.mean_trial_error},
                         {"ensemble_mean_error", r.stats.mean_error.back()}});
      std::cout << "sigma=" << sigma << " " << w << ": mean trial error " << r.mean_trial_error << "\n";
    }
  }
  io::write_json((fs::path(c.out) / "summary.json").string(), summary);
  write_config(app, c.out);
}

// ---------------------------------------------------------------- overlap

void cmd_overlap(const CLI::App* app, const Common& c, const std::string& windows_text, const std::string& taus_text,
                 std::size_t K, double L) {
  const auto windows = parse_list<std::string>(windows_text, "--windows");
  std::vector<double> taus;
  if (taus_text.empty()) {
    for (int i = 0; i <= 19; ++i) taus.push_back(0.05 * i);
  } else {
    taus = parse_list<double>(taus_text, "--taus");
  }
  prepare_out(c.out);
  auto out = io::open_out((fs::path(c.out) / "overlap.csv").string());
  out << "window,tau,K,variance,normalized,half_power_width,normalized_x_width\n";
  for (const auto& name : windows) {
    const WindowSpec w = WindowSpec::parse(name);
    const double hpw = half_power_width(w);
    for (double tau : taus) {
      const std::size_t k = K > 0 ? K : windows_in_record(w.length, L, tau);
      const double var = overlap_variance(w, tau, k);
      const double norm = K > 0 ? var / overlap_variance(w, 0.0, K) : normalized_overlap_variance(w, tau, L);
      out << w.name() << ',' << tau << ',' << k << ',' << var << ',' << norm << ',' << hpw << ',' << norm * hpw << "\n";
    }
  }
  write_config(app, c.out);
  std::cout << "wrote overlap.csv to " << c.out << "\n";
}

// Flat key=value config: injected ahead of the user's flags so that flags
// given on the command line take precedence (last value wins).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!config || out.empty()) return out;
  std::vector<std::string> injected{out.front()};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(*config);
  } catch (const CLI::FileError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    require(item.parents.empty() || (item.parents.size() == 1 && item.parents[0] == out.front()),
            *config + ": section for another subcommand: " + item.fullname());
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") injected.push_back("--" + item.name);
      continue;
    }
    injected.push_back("--" + item.name);
    for (const auto& v : item.inputs) injected.push_back(v);
  }
  injected.insert(injected.end(), out.begin() + 1, out.end());
  return injected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain identification of linear ODE systems"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  Common common;
  SimArgs sim;
  IdentifyArgs ident;

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate the test system and write x.csv, u.csv, truth.json");
  add_common(simulate_cmd, common);
  add_sim(simulate_cmd, sim);
  double out_fs = 80.0;
  add_real(simulate_cmd, "--fs", out_fs, "Output sampling rate [Hz]; 0 keeps the integrator grid");

  auto* identify_cmd = app.add_subcommand("identify", "Estimate parameters from x.csv and u.csv");
  add_common(identify_cmd, common);
  add_identify(identify_cmd, ident, true);
  std::string x_path, u_path, truth_path;
  int id_na = 1, id_nb = 0;
  identify_cmd->add_option("--x", x_path, "State record CSV")->required();
  identify_cmd->add_option("--u", u_path, "Input record CSV")->required();
  identify_cmd->add_option("--na", id_na, "Highest state derivative");
  identify_cmd->add_option("--nb", id_nb, "Highest input derivative");
  identify_cmd->add_option("--truth", truth_path, "truth.json for the parameter error");

  auto* window_cmd = app.add_subcommand("window", "Window samples, spectra and f_err table");
  add_common(window_cmd, common);
  std::string window_spec = "cinf:1";
  std::size_t window_n = 1024;
  int window_deriv = 3, window_os = 16;
  double window_fmax = 100.0;
  window_cmd->add_option("--window", window_spec, "rect | sin:n | cinf:n | poly:n");
  window_cmd->add_option("--N", window_n, "Samples per window");
  window_cmd->add_option("--max-deriv", window_deriv, "Highest derivative row (0..3)");
  window_cmd->add_option("--oversample", window_os, "Spectrum grid points per 1/T");
  add_real(window_cmd, "--f-max", window_fmax, "Highest spectrum frequency [1/T]");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sampling-rate sweep of estimation accuracy");
  add_common(sweep_cmd, common);
  add_sim(sweep_cmd, sim);
  add_identify(sweep_cmd, ident, false);
  std::string sweep_rates = "60,72,80,90,96,120,144,160,180,192,225,240,288,320,360,400,450,480,576,600,720,800,900";
  std::string sweep_methods = "corrected,ps,naive";
  std::string sweep_windows = "sin:1,sin:2,sin:3,sin:4,cinf:1,cinf:4";
  double f_star = 2.0;
  sweep_cmd->add_option("--fs", sweep_rates, "Comma-separated sampling rates [Hz]");
  sweep_cmd->add_option("--methods", sweep_methods, "Comma-separated methods");
  sweep_cmd->add_option("--windows", sweep_windows, "Comma-separated windows for corrected/mixed");
  add_real(sweep_cmd, "--f-star", f_star, "Frequency of the single-bin residual [Hz]");

  auto* mc_cmd = app.add_subcommand("montecarlo", "Noisy ensemble at a fixed sampling rate");
  add_common(mc_cmd, common);
  add_sim(mc_cmd, sim);
  add_identify(mc_cmd, ident, false);
  double mc_fs = 80.0;
  std::size_t trials = 100;
  std::string mc_sigmas = "1e-2,1e-8";
  std::string mc_windows = "sin:1,cinf:4";
  mc_cmd->add_option("--method", ident.method, "corrected | ps | mixed | naive")
      ->check(CLI::IsMember({"corrected", "ps", "mixed", "naive"}));
  add_real(mc_cmd, "--fs", mc_fs, "Sampling rate [Hz]");
  mc_cmd->add_option("--trials", trials, "Trials per configuration; trial i uses seed + i");
  mc_cmd->add_option("--sigmas", mc_sigmas, "Comma-separated noise levels");
  mc_cmd->add_option("--windows", mc_windows, "Comma-separated windows");

  auto* overlap_cmd = app.add_subcommand("overlap", "Variance reduction from overlapping windows");
  add_common(overlap_cmd, common);
  std::string overlap_windows = "rect,sin:1,sin:2,sin:3,sin:4,cinf:1,cinf:4,poly:2,poly:4";
  std::string overlap_taus;
  std::size_t overlap_K = 0;
  double overlap_L = 100.0;
  overlap_cmd->add_option("--windows", overlap_windows, "Comma-separated windows");
  overlap_cmd->add_option("--taus", overlap_taus, "Comma-separated overlap fractions (default 0, 0.05, .., 0.95)");
  overlap_cmd->add_option("--K", overlap_K, "Fixed window count (0: fixed record length --L)");
  add_real(overlap_cmd, "--L", overlap_L, "Record length in window lengths");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (*simulate_cmd) cmd_simulate(simulate_cmd, common, sim, out_fs);
    if (*identify_cmd) cmd_identify(identify_cmd, common, ident, x_path, u_path, id_na, id_nb, truth_path);
    if (*window_cmd) cmd_window(window_cmd, common, window_spec, window_n, window_deriv, window_os, window_fmax);
    if (*sweep_cmd) cmd_sweep(sweep_cmd, common, sim, ident, sweep_rates, sweep_methods, sweep_windows, f_star);
    if (*mc_cmd) cmd_montecarlo(mc_cmd, common, sim, ident, mc_fs, trials, mc_sigmas, mc_windows);
    if (*overlap_cmd) cmd_overlap(overlap_cmd, common, overlap_windows, overlap_taus, overlap_K, overlap_L);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
