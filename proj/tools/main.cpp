// Command-line front end: system ingestion (FCIDUMP / native JSON / presets),
// single runs, shift sweeps, algorithm comparisons, Lojasiewicz probes and
// format conversion. Exit codes: 0 converged, 1 input error, 2 oscillating,
// 3 max-iterations, 4 well-posedness failure.

#include <CLI11.hpp>

#include "hfopt/analysis.hpp"
#include "hfopt/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace hfopt;

namespace {

struct SystemOpts {
  std::string system_path;
  std::string preset;
  int sites = 6;
  double hop = 1.0;
  double u = 1.0;
  int n_basis = 6;
  double interaction_scale = 1.0;
  std::uint64_t seed = 0;
  int n_electrons = 2;
  std::string convention = "rhf";
};

struct RunOpts {
  std::string algorithm = "roothaan";
  double fixed_t = 0.0;
  bool alpha_step = false;
  double shift_b = 0.0;
  double tol = 1e-8;
  long max_iter = 100000;
  bool store_iterates = false;
  std::uint64_t d0_seed = 0;
  bool random_d0 = false;
  std::string out_dir = ".";
};

void add_system_options(CLI::App* cmd, SystemOpts& o) {
  auto* sys = cmd->add_option("--system", o.system_path,
                              "FCIDUMP or native JSON system file");
  auto* preset =
      cmd->add_option("--preset", o.preset, "Preset system: hubbard-ring | random");
  sys->excludes(preset);
  cmd->add_option("--L", o.sites, "hubbard-ring: number of sites");
  cmd->add_option("--hop", o.hop, "hubbard-ring: hopping t_h");
  cmd->add_option("--U", o.u, "hubbard-ring: on-site repulsion");
  cmd->add_option("--n-basis", o.n_basis, "random: basis size");
  cmd->add_option("--interaction-scale", o.interaction_scale,
                  "random: two-electron integral scale");
  cmd->add_option("--seed", o.seed, "random: system seed");
  cmd->add_option("--n-electrons", o.n_electrons, "electron count");
  cmd->add_option("--convention", o.convention, "spinless | rhf");
}

void add_run_options(CLI::App* cmd, RunOpts& o) {
  cmd->add_option("--algorithm", o.algorithm,
                  "gradient | roothaan | level-shifting");
  cmd->add_option("--t", o.fixed_t, "gradient: fixed step size (default: backtracking)");
  cmd->add_flag("--alpha-step", o.alpha_step, "gradient: fixed step t = 1/alpha");
  cmd->add_option("--b", o.shift_b, "level-shifting: shift parameter");
  cmd->add_option("--tol", o.tol, "gradient-norm stopping tolerance");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap");
  cmd->add_flag("--store-iterates", o.store_iterates, "keep all D_k (memory-heavy)");
  cmd->add_option("--d0-seed", o.d0_seed, "random initial guess seed");
  cmd->add_flag("--random-d0", o.random_d0, "randomize the initial guess");
  cmd->add_option("--out", o.out_dir, "output directory");
}

ElectronicSystem build_system(const SystemOpts& o) {
  const Convention conv = convention_from_name(o.convention);
  if (!o.system_path.empty()) return load_system(o.system_path, conv);
  if (o.preset == "hubbard-ring")
    return hubbard_ring(o.sites, o.hop, o.u, o.n_electrons, conv);
  if (o.preset == "random")
    return random_system(o.seed, o.n_basis, o.n_electrons, conv, o.interaction_scale);
  throw std::runtime_error("no system source: pass --system or --preset");
}

SolverConfig build_config(const RunOpts& o) {
  SolverConfig cfg;
  if (o.algorithm == "gradient") {
    cfg.algorithm = Algorithm::GradientDescent;
    if (o.fixed_t > 0)
      cfg.step = FixedStep{o.fixed_t};
    else if (o.alpha_step)
      cfg.step = AlphaFormula{};
    else
      cfg.step = Backtracking{};
  } else if (o.algorithm == "roothaan") {
    cfg.algorithm = Algorithm::Roothaan;
  } else if (o.algorithm == "level-shifting") {
    cfg.algorithm = Algorithm::LevelShifting;
    cfg.shift_b = o.shift_b;
  } else {
    throw std::runtime_error("unknown algorithm '" + o.algorithm + "'");
  }
  cfg.tol_grad = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.record_matrices = o.store_iterates;
  return cfg;
}

DensityMatrix initial_guess(const ElectronicSystem& sys, const RunOpts& o) {
  if (o.random_d0) return random_guess(sys, o.d0_seed);
  return default_guess(sys);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int status_exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return 0;
    case RunStatus::Oscillating: return 2;
    case RunStatus::MaxIterations: return 3;
    case RunStatus::WellPosednessFailure: return 4;
  }
  return 1;
}

int cmd_run(const SystemOpts& so, const RunOpts& ro) {
  const ElectronicSystem sys = build_system(so);
  const SolverConfig cfg = build_config(ro);
  const RunResult result = run(sys, initial_guess(sys, ro), cfg);
  write_file(fs::path(ro.out_dir) / "trace.csv", trace_to_csv(result.trace));
  write_file(fs::path(ro.out_dir) / "summary.json",
             summary_to_json(result, ro.algorithm));
  std::cout << "status: " << status_name(result.status)
            << "  iterations: " << result.trace.back().k
            << "  energy: " << format_double(result.trace.back().energy) << "\n";
  return status_exit_code(result.status);
}

int cmd_sweep_shift(const SystemOpts& so, const RunOpts& ro,
                    const std::string& b_grid_str, int jobs) {
  const ElectronicSystem sys = build_system(so);
  SolverConfig cfg = build_config(ro);
  cfg.algorithm = Algorithm::LevelShifting;
  const DensityMatrix d0 = initial_guess(sys, ro);

  std::vector<double> b_grid;
  std::stringstream ss(b_grid_str);
  for (std::string tok; std::getline(ss, tok, ',');) b_grid.push_back(std::stod(tok));
  if (b_grid.empty()) throw std::runtime_error("--b-grid is empty");

  struct Row {
    double b;
    RunStatus status;
    double nu = kNaN;
  };
  std::vector<Row> rows(b_grid.size());
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(next_mutex);
        if (next >= b_grid.size()) return;
        i = next++;
      }
      SolverConfig c = cfg;
      c.shift_b = b_grid[i];
      const RunResult r = run_level_shifting(sys, d0, c);
      rows[i].b = b_grid[i];
      rows[i].status = r.status;
      if (r.status == RunStatus::Converged) {
        std::vector<double> grads;
        for (const IterationRecord& rec : r.trace) grads.push_back(rec.grad_norm);
        try {
          rows[i].nu = fit_geometric_rate(grads).nu;
        } catch (const std::invalid_argument&) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::ostringstream csv;
  csv << "b,nu,status\n";
  bool all_ok = true;
  for (const Row& r : rows) {
    csv << format_double(r.b) << ',';
    if (std::isfinite(r.nu)) csv << format_double(r.nu);
    csv << ',' << status_name(r.status) << '\n';
    all_ok = all_ok && r.status == RunStatus::Converged && std::isfinite(r.nu);
  }
  write_file(fs::path(ro.out_dir) / "shift_sweep.csv", csv.str());

  if (all_ok) {
    // slope over the largest-b half of the grid
    std::vector<std::pair<double, double>> pts;
    for (const Row& r : rows) pts.emplace_back(r.b, r.nu);
    std::sort(pts.begin(), pts.end());
    const std::size_t half = pts.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size() - half);
    for (std::size_t i = half; i < pts.size(); ++i) {
      const double x = std::log(pts[i].first), y = std::log(pts[i].second);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::ostringstream json;
    json << "{\n  \"loglog_slope\": " << format_double(slope) << "\n}\n";
    write_file(fs::path(ro.out_dir) / "shift_sweep_summary.json", json.str());
    std::cout << "loglog slope: " << format_double(slope) << "\n";
    return 0;
  }
  std::cerr << "sweep: one or more shifts did not converge (see shift_sweep.csv)\n";
  return 3;
}

int cmd_compare(const SystemOpts& so, const RunOpts& ro,
                const std::string& algorithms) {
  const ElectronicSystem sys = build_system(so);
  const DensityMatrix d0 = initial_guess(sys, ro);

  std::vector<std::pair<std::string, SolverConfig>> configs;
  std::stringstream ss(algorithms);
  for (std::string tok; std::getline(ss, tok, ',');) {
    RunOpts one = ro;
    one.algorithm = tok == "gradient-fixed" ? "gradient" : tok;
    if (tok == "gradient-fixed") one.alpha_step = true;
    configs.emplace_back(tok, build_config(one));
  }
  const std::vector<ComparisonRow> rows = compare_algorithms(sys, d0, configs);

  std::ostringstream csv;
  csv << "algorithm,status,iterations_to_tol,final_energy,nu,nu_r2\n";
  for (const ComparisonRow& r : rows) {
    csv << r.name << ',' << status_name(r.status) << ',' << r.iterations_to_tol
        << ',' << format_double(r.final_energy) << ',';
    if (std::isfinite(r.nu)) csv << format_double(r.nu);
    csv << ',';
    if (std::isfinite(r.nu_r2)) csv << format_double(r.nu_r2);
    csv << '\n';
  }
  write_file(fs::path(ro.out_dir) / "comparison.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_probe_loja(const SystemOpts& so, RunOpts ro) {
  if (ro.tol > 1e-12) ro.tol = 1e-12;  // the probe needs a deep tail
  const ElectronicSystem sys = build_system(so);
  const SolverConfig cfg = build_config(ro);
  const RunResult result = run(sys, initial_guess(sys, ro), cfg);
  if (result.status != RunStatus::Converged) {
    std::cerr << "probe-loja: run ended " << status_name(result.status) << "\n";
    return status_exit_code(result.status);
  }
  const LojaFit fit = lojasiewicz_probe(result.trace);
  std::ostringstream json;
  json << "{\n  \"theta\": " << format_double(fit.theta)
       << ",\n  \"kappa\": " << format_double(fit.kappa)
       << ",\n  \"slope\": " << format_double(fit.slope)
       << ",\n  \"clamped\": " << (fit.clamped ? "true" : "false")
       << ",\n  \"points_used\": " << fit.points_used << "\n}\n";
  write_file(fs::path(ro.out_dir) / "loja.json", json.str());
  std::cout << json.str();
  return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path,
                const std::string& convention) {
  const ElectronicSystem sys =
      read_fcidump_file(in_path, convention_from_name(convention));
  write_file(out_path, write_native_json(sys));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hartree-Fock solvers on the density-matrix manifold"};
  app.require_subcommand(1);

  SystemOpts so;
  RunOpts ro;

  auto* c_run = app.add_subcommand("run", "solve one system and write trace/summary");
  add_system_options(c_run, so);
  add_run_options(c_run, ro);

  auto* c_sweep = app.add_subcommand("sweep-shift",
                                     "Level-Shifting rate vs shift parameter");
  std::string b_grid = "8,16,32,64,128,256";
  int jobs = 1;
  add_system_options(c_sweep, so);
  add_run_options(c_sweep, ro);
  c_sweep->add_option("--b-grid", b_grid, "comma-separated shift values");
  c_sweep->add_option("--jobs", jobs, "concurrent runs");

  auto* c_cmp = app.add_subcommand("compare", "cross-algorithm comparison table");
  std::string algorithms = "roothaan,gradient";
  add_system_options(c_cmp, so);
  add_run_options(c_cmp, ro);
  c_cmp->add_option("--algorithms", algorithms,
                    "comma list: roothaan|gradient|gradient-fixed|level-shifting");

  auto* c_loja = app.add_subcommand("probe-loja",
                                    "run to tight tolerance and fit theta/kappa");
  add_system_options(c_loja, so);
  add_run_options(c_loja, ro);

  auto* c_conv = app.add_subcommand("convert", "FCIDUMP -> native JSON");
  std::string conv_in, conv_out, conv_convention = "rhf";
  c_conv->add_option("input", conv_in, "FCIDUMP path")->required();
  c_conv->add_option("output", conv_out, "native JSON output path")->required();
  c_conv->add_option("--convention", conv_convention, "spinless | rhf");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(so, ro);
    if (c_sweep->parsed()) return cmd_sweep_shift(so, ro, b_grid, jobs);
    if (c_cmp->parsed()) return cmd_compare(so, ro, algorithms);
    if (c_loja->parsed()) return cmd_probe_loja(so, ro);
    if (c_conv->parsed()) return cmd_convert(conv_in, conv_out, conv_convention);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
