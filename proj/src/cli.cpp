#include "cdpath/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdpath/agp.hpp"
#include "cdpath/config.hpp"
#include "cdpath/dynamics.hpp"
#include "cdpath/floquet.hpp"
#include "cdpath/iterative.hpp"
#include "cdpath/models.hpp"
#include "cdpath/optimize.hpp"
#include "cdpath/spectra.hpp"

#ifndef CDPATH_GIT_DESCRIBE
#define CDPATH_GIT_DESCRIBE "unknown"
#endif

namespace cdpath {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestVersion = 1;

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_fidelity(double f) {
  char buf[40];
  if (std::abs(f) < 1e-4)
    std::snprintf(buf, sizeof(buf), "%.8e", f);
  else
    std::snprintf(buf, sizeof(buf), "%.10f", f);
  return buf;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double log_infidelity(double f) {
  return std::log10(std::max(1.0 - f, 1e-16));
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::vector<std::string>& columns)
      : path_(path) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    ++rows_;
  }
  long rows() const { return rows_; }
  std::string filename() const { return path_.filename().string(); }

 private:
  fs::path path_;
  std::ofstream out_;
  long rows_ = 0;
};

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed) {
      const int i = next.fetch_add(1);
      if (i >= n) break;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(threads, n);
  pool.reserve(k);
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RunContext {
  Config cfg;
  fs::path out_dir;
  int threads = 1;
  unsigned seed = 0;
  std::string subcommand;
  std::string started;
  json rows = json::array();

  std::string run_id() const { return config_hash(cfg, subcommand); }

  void note_file(const CsvFile& file) {
    rows.push_back(
        {{"file", file.filename()}, {"run_id", run_id()}, {"count", file.rows()}});
  }

  void write_manifest() {
    json config_echo;
    for (const auto& [key, value] : cfg.entries()) config_echo[key] = value;
    const json manifest = {
        {"version", kManifestVersion}, {"config", config_echo},
        {"git_describe", CDPATH_GIT_DESCRIBE}, {"started", started},
        {"finished", iso_now()},       {"rows", rows}};
    std::ofstream out(out_dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
};

std::vector<int> sites_list(const Config& cfg) {
  if (cfg.has("model.N_list")) return cfg.get_ints("model.N_list");
  return {cfg.get_int("model.N")};
}

std::vector<int> ell_list_of(const Config& cfg) {
  if (cfg.has("protocol.ell_list")) return cfg.get_ints("protocol.ell_list");
  return {cfg.get_int("protocol.ell", 1)};
}

std::vector<double> tau_list_of(const Config& cfg) {
  if (cfg.has("protocol.tau_list")) return cfg.get_doubles("protocol.tau_list");
  return {cfg.get_double("protocol.tau", 1.0)};
}

ModelKind parse_kind(const std::string& s) {
  if (s == "short_range_ising") return ModelKind::ShortRangeIsing;
  if (s == "ltfim") return ModelKind::Ltfim;
  if (s == "long_range_ising") return ModelKind::LongRangeIsing;
  if (s == "collective_spin") return ModelKind::CollectiveSpin;
  throw ConfigError("unknown model.kind '" + s +
                    "' (expected short_range_ising, ltfim, long_range_ising "
                    "or collective_spin)");
}

ModelSpec model_spec_from(const Config& cfg, int sites) {
  ModelSpec spec;
  spec.kind = parse_kind(cfg.get_string("model.kind"));
  spec.sites = sites;
  spec.alpha = cfg.get_double("model.alpha", 2.0);
  spec.h_x = cfg.get_double("model.h_x", 0.0);
  spec.h_z = cfg.get_double("model.h_z", 0.0);
  const std::string boundary = cfg.get_string("model.boundary", "periodic");
  if (boundary != "periodic" && boundary != "open")
    throw ConfigError("model.boundary must be 'periodic' or 'open'");
  spec.periodic = boundary == "periodic";
  const std::string sector = cfg.get_string("model.sector", "symmetric");
  if (sector != "symmetric" && sector != "full")
    throw ConfigError("model.sector must be 'symmetric' or 'full'");
  spec.sector = sector == "symmetric" ? SectorMode::Symmetric : SectorMode::Full;

  const std::string mode = cfg.get_string("protocol.mode", "fast");
  if (mode == "fast") {
    spec.schedule.mode = ScheduleMode::FastLimit;
  } else if (mode == "finite") {
    spec.schedule.mode = ScheduleMode::FiniteTime;
    spec.schedule.tau = cfg.get_double("protocol.tau", 1.0);
  } else {
    throw ConfigError("protocol.mode must be 'fast' or 'finite'");
  }
  return spec;
}

OperatorMatrix control_field_z(const SpinBasis& basis) {
  std::vector<PauliStringTerm> terms;
  for (int i = 0; i < basis.sites(); ++i)
    terms.push_back({{{i, PauliAxis::Z}}, 1.0});
  return build_operator(terms, basis);
}

void attach_controls(AnnealingProblem& problem, const Config& cfg) {
  const std::string set = cfg.get_string("controls.set", "none");
  const int harmonics = cfg.get_int("controls.harmonics", 1);
  if (harmonics < 1) throw ConfigError("controls.harmonics must be >= 1");
  std::vector<OperatorMatrix> ops;
  if (set == "none") {
  } else if (set == "commutator") {
    auto [hc1, hc2] = commutator_controls(problem.h0, problem.h1);
    ops.push_back(std::move(hc1));
    ops.push_back(std::move(hc2));
  } else if (set == "named") {
    std::istringstream in(cfg.get_string("controls.named"));
    std::string tok;
    while (in >> tok) {
      if (tok == "yy")
        ops.push_back(control_yy(problem.basis()));
      else if (tok == "zxz")
        ops.push_back(control_zxz(problem.basis()));
      else if (tok == "z")
        ops.push_back(control_field_z(problem.basis()));
      else
        throw ConfigError("unknown named control '" + tok +
                          "' (expected yy, zxz or z)");
    }
    if (ops.empty()) throw ConfigError("controls.named lists no controls");
  } else {
    throw ConfigError("controls.set must be 'none', 'commutator' or 'named'");
  }
  for (auto& op : ops) {
    ControlTerm term;
    term.op = std::move(op);
    term.harmonics.assign(harmonics, 0.0);
    problem.controls.push_back(std::move(term));
  }
  if (cfg.has("controls.beta")) {
    const std::vector<double> beta = cfg.get_doubles("controls.beta");
    if (beta.size() != problem.controls.size() * harmonics)
      throw ConfigError("controls.beta needs one value per control harmonic (" +
                        std::to_string(problem.controls.size() * harmonics) +
                        " expected)");
    std::size_t i = 0;
    for (auto& term : problem.controls)
      for (int k = 0; k < harmonics; ++k) term.harmonics[k] = beta[i++];
  }
}

EvolutionOptions evolution_options_from(const Config& cfg, int ell) {
  EvolutionOptions opt;
  opt.ell = ell;
  opt.steps = cfg.get_int("protocol.steps", 0);
  opt.include_agp = cfg.get_bool("protocol.include_agp", true);
  const std::string weight = cfg.get_string("protocol.weight", "trace");
  if (weight == "trace")
    opt.weight = WeightPolicy::InfiniteT;
  else if (weight == "ground_state")
    opt.weight = WeightPolicy::TrueGroundState;
  else
    throw ConfigError("protocol.weight must be 'trace' or 'ground_state'");
  return opt;
}

EvolutionResult run_one(const AnnealingProblem& problem,
                        const EvolutionOptions& opt) {
  return problem.schedule.mode == ScheduleMode::FastLimit
             ? evolve_fast_limit(problem, opt)
             : evolve_cd(problem, opt);
}

// [optimizer] free = 0:0 1:0 ...  (control:harmonic pairs); defaults to every
// harmonic of every control.
std::vector<std::pair<int, int>> free_parameters_of(
    const AnnealingProblem& problem, const Config& cfg) {
  std::vector<std::pair<int, int>> free;
  if (!cfg.has("optimizer.free")) {
    for (std::size_t c = 0; c < problem.controls.size(); ++c)
      for (std::size_t h = 0; h < problem.controls[c].harmonics.size(); ++h)
        free.push_back({static_cast<int>(c), static_cast<int>(h)});
    return free;
  }
  std::istringstream in(cfg.get_string("optimizer.free"));
  std::string tok;
  while (in >> tok) {
    const auto colon = tok.find(':');
    try {
      const int c = std::stoi(tok.substr(0, colon));
      const int h = colon == std::string::npos ? 0 : std::stoi(tok.substr(colon + 1));
      free.push_back({c, h});
    } catch (const std::exception&) {
      throw ConfigError("optimizer.free entries must be control:harmonic pairs, got '" +
                        tok + "'");
    }
  }
  if (free.empty()) throw ConfigError("optimizer.free lists no parameters");
  return free;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void cmd_run(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  const std::vector<int> n_list = sites_list(cfg);
  const std::vector<int> ell_list = ell_list_of(cfg);
  const bool finite = cfg.get_string("protocol.mode", "fast") == "finite";
  const std::vector<double> tau_list =
      finite ? tau_list_of(cfg) : std::vector<double>{0.0};

  CsvFile csv(ctx.out_dir / "run.csv",
              {"N", "ell", "mode", "tau", "steps", "fidelity", "log_infidelity",
               "norm_drift"});
  for (const int n : n_list) {
    AnnealingProblem problem = make_model(model_spec_from(cfg, n));
    attach_controls(problem, cfg);
    for (const int ell : ell_list) {
      for (const double tau : tau_list) {
        AnnealingProblem p = problem;
        if (finite) p.schedule.tau = tau;
        const EvolutionOptions opt = evolution_options_from(cfg, ell);
        const EvolutionResult r = run_one(p, opt);
        csv.row({std::to_string(n), std::to_string(ell),
                 finite ? "finite" : "fast", format_number(tau),
                 std::to_string(r.steps_used), format_fidelity(r.fidelity),
                 format_number(log_infidelity(r.fidelity)),
                 format_number(r.norm_drift)});
      }
    }
  }
  ctx.note_file(csv);
}

void cmd_sweep(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  const std::vector<int> n_list = sites_list(cfg);
  const std::vector<int> ell_list = ell_list_of(cfg);

  struct Cell {
    int n, ell;
    double naive = 0.0, augmented = 0.0;
  };
  std::vector<std::vector<Cell>> chains(ell_list.size());

  // Cells along one ell chain share warm starts across N; chains are
  // independent and may run on separate workers.
  parallel_for(static_cast<int>(ell_list.size()), ctx.threads, [&](int ei) {
    const int ell = ell_list[ei];
    std::vector<double> warm;
    for (const int n : n_list) {
      AnnealingProblem problem = make_model(model_spec_from(cfg, n));
      attach_controls(problem, cfg);
      if (problem.controls.empty())
        throw ConfigError("sweep needs a non-empty [controls] set");
      EvolutionOptions opt = evolution_options_from(cfg, ell);

      Cell cell;
      cell.n = n;
      cell.ell = ell;
      {
        AnnealingProblem naive = problem;
        for (auto& c : naive.controls)
          std::fill(c.harmonics.begin(), c.harmonics.end(), 0.0);
        cell.naive = run_one(naive, opt).fidelity;
      }
      OptimizationSpec spec;
      spec.free_parameters = free_parameters_of(problem, cfg);
      spec.bound = cfg.get_double("optimizer.bound", 3.0);
      spec.restarts = cfg.get_int("optimizer.restarts", 5);
      spec.tol = cfg.get_double("optimizer.tol", 1e-5);
      spec.evolution = opt;
      spec.seed = ctx.seed;
      if (!warm.empty()) spec.extra_seeds.push_back(warm);
      const OptimizationResult res = optimize_controls(problem, spec);
      cell.augmented = res.best_fidelity;
      warm = res.best_betas;
      chains[ei].push_back(cell);
    }
  });

  CsvFile csv(ctx.out_dir / "sweep.csv",
              {"N", "ell", "path", "fidelity", "log_infidelity"});
  for (std::size_t ni = 0; ni < n_list.size(); ++ni)
    for (std::size_t ei = 0; ei < ell_list.size(); ++ei) {
      const Cell& cell = chains[ei][ni];
      csv.row({std::to_string(cell.n), std::to_string(cell.ell), "naive",
               format_fidelity(cell.naive),
               format_number(log_infidelity(cell.naive))});
      csv.row({std::to_string(cell.n), std::to_string(cell.ell), "augmented",
               format_fidelity(cell.augmented),
               format_number(log_infidelity(cell.augmented))});
    }
  ctx.note_file(csv);
}

void cmd_optimize(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  const std::vector<int> n_list = sites_list(cfg);
  const std::vector<int> ell_list = ell_list_of(cfg);

  std::vector<std::string> columns = {"N",          "ell",
                                      "naive_fidelity", "best_fidelity",
                                      "evaluations", "restarts"};
  int n_params = -1;
  std::vector<std::vector<std::string>> rows;
  for (const int n : n_list) {
    AnnealingProblem problem = make_model(model_spec_from(cfg, n));
    attach_controls(problem, cfg);
    if (problem.controls.empty())
      throw ConfigError("optimize needs a non-empty [controls] set");
    for (const int ell : ell_list) {
      EvolutionOptions opt = evolution_options_from(cfg, ell);
      OptimizationSpec spec;
      spec.free_parameters = free_parameters_of(problem, cfg);
      spec.bound = cfg.get_double("optimizer.bound", 3.0);
      spec.restarts = cfg.get_int("optimizer.restarts", 5);
      spec.tol = cfg.get_double("optimizer.tol", 1e-5);
      spec.evolution = opt;
      spec.seed = ctx.seed;
      if (n_params < 0) {
        n_params = static_cast<int>(spec.free_parameters.size());
        for (int i = 0; i < n_params; ++i)
          columns.push_back("beta" + std::to_string(i + 1));
      }
      AnnealingProblem naive = problem;
      for (auto& c : naive.controls)
        std::fill(c.harmonics.begin(), c.harmonics.end(), 0.0);
      const double f_naive = run_one(naive, opt).fidelity;
      const OptimizationResult res = optimize_controls(problem, spec);
      std::vector<std::string> row = {
          std::to_string(n),
          std::to_string(ell),
          format_fidelity(f_naive),
          format_fidelity(res.best_fidelity),
          std::to_string(res.evaluation_count),
          std::to_string(res.restarts.size())};
      for (const double b : res.best_betas) row.push_back(format_number(b));
      rows.push_back(std::move(row));
    }
  }
  CsvFile csv(ctx.out_dir / "optimize.csv", columns);
  for (const auto& row : rows) csv.row(row);
  ctx.note_file(csv);
}

void cmd_scan(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  AnnealingProblem problem = make_model(model_spec_from(cfg, cfg.get_int("model.N")));
  attach_controls(problem, cfg);
  if (problem.controls.size() < 2)
    throw ConfigError("scan needs at least two controls");
  const double lo = cfg.get_double("scan.min", -3.0);
  const double hi = cfg.get_double("scan.max", 3.0);
  const int points = cfg.get_int("scan.points", 11);
  const int ell = cfg.get_int("protocol.ell", 1);
  const EvolutionOptions opt = evolution_options_from(cfg, ell);
  const BetaScanResult scan = beta_scan(problem, 0, 1, lo, hi, points, opt);

  CsvFile csv(ctx.out_dir / "scan.csv", {"beta1", "beta2", "fidelity"});
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      csv.row({format_number(scan.axis1[i]), format_number(scan.axis2[j]),
               format_fidelity(scan.fidelity(i, j))});
  ctx.note_file(csv);
}

void cmd_iterate(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  AnnealingProblem problem = make_model(model_spec_from(cfg, cfg.get_int("model.N")));
  attach_controls(problem, cfg);
  IterativeOptions opt;
  opt.ell = cfg.get_int("protocol.ell", 1);
  opt.steps = cfg.get_int("protocol.steps", 0);
  opt.max_iters = cfg.get_int("iterate.max_iters", 20);
  opt.conv_tol = cfg.get_double("iterate.conv_tol", 1e-6);
  const auto records = iterative_gs_protocol(problem, opt);

  CsvFile csv(ctx.out_dir / "iterate.csv",
              {"iteration", "fidelity", "max_action_delta", "converged"});
  for (const auto& rec : records)
    csv.row({std::to_string(rec.iteration), format_fidelity(rec.fidelity),
             format_number(rec.max_action_delta), rec.converged ? "1" : "0"});
  ctx.note_file(csv);
}

void cmd_floquet_check(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  AnnealingProblem problem = make_model(model_spec_from(cfg, cfg.get_int("model.N", 2)));
  const double lambda = cfg.get_double("floquet.lambda", 0.4);
  const double tau = cfg.get_double("floquet.tau", 1.0);
  const double beta1 = cfg.get_double("floquet.beta1", 0.5);
  const double beta2 = cfg.get_double("floquet.beta2", 0.5);
  const std::vector<double> periods =
      cfg.get_doubles("floquet.periods", {1e-2, 1e-3, 1e-4, 1e-5});

  // lambda_dot on the smooth schedule at the time where lambda(t) = lambda.
  double t_lo = 0.0, t_hi = tau;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (t_lo + t_hi);
    (lambda_schedule(mid, tau).lambda < lambda ? t_lo : t_hi) = mid;
  }
  const double lambda_dot = lambda_schedule(0.5 * (t_lo + t_hi), tau).lambda_dot;

  // First-order AGP coefficient of the bare path at this lambda:
  // A = i gamma_1 O_1 with O_1 = [H, dH] / (b0 b1).
  const OperatorMatrix h = annealing_hamiltonian(lambda, problem);
  const OperatorMatrix dh = augmented_hamiltonian_derivative(lambda, problem);
  const KrylovData kry = krylov_basis(h, dh, 1, InnerProductWeight::trace());
  const std::vector<double> gam = agp_gammas(kry.lanczos, 1);
  const double alpha1 = gam[0] / (kry.lanczos[0] * kry.lanczos[1]);

  const auto points = verify_floquet_match(lambda, lambda_dot, alpha1, beta1,
                                           beta2, problem.h0, problem.h1, periods);
  CsvFile csv(ctx.out_dir / "floquet.csv",
              {"T", "error", "f0_over_T", "f1_over_T", "f01_over_T",
               "f010_over_T", "f110_over_T"});
  for (const auto& pt : points)
    csv.row({format_number(pt.period), format_number(pt.error),
             format_number(pt.targets.f0), format_number(pt.targets.f1),
             format_number(pt.targets.f01), format_number(pt.targets.f010),
             format_number(pt.targets.f110)});
  ctx.note_file(csv);
}

void cmd_spectrum(RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  AnnealingProblem problem = make_model(model_spec_from(cfg, cfg.get_int("model.N")));
  attach_controls(problem, cfg);
  const double lambda = cfg.get_double("spectrum.lambda", 0.5);
  const int ell = cfg.get_int("protocol.ell", 1);

  const OperatorMatrix h = augmented_hamiltonian(lambda, problem);
  const OperatorMatrix dh = augmented_hamiltonian_derivative(lambda, problem);
  const KrylovData kry = krylov_basis(h, dh, ell, InnerProductWeight::trace());
  const AGPSolution sol =
      assemble_agp(kry, agp_gammas(kry.lanczos, std::min(ell, kry.effective_ell)));
  const OperatorMatrix exact = exact_agp(h, dh);
  const FitCurveResult fit = fit_curve(sol, exact, h, dh);

  CsvFile data_csv(ctx.out_dir / "spectrum.csv", {"omega", "weight", "ratio"});
  for (const auto& d : fit.data)
    data_csv.row({format_number(d.omega), format_number(d.weight),
                  d.ratio_defined ? format_number(d.ratio) : "nan"});
  ctx.note_file(data_csv);

  CsvFile curve_csv(ctx.out_dir / "spectrum_curve.csv",
                    {"omega", "f", "omega_f"});
  for (const auto& c : fit.curve)
    curve_csv.row({format_number(c.omega), format_number(c.f),
                   format_number(c.omega_f)});
  ctx.note_file(curve_csv);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Local counterdiabatic driving toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir_flag;
  int threads = 1;
  unsigned seed = 0;

  const std::vector<std::pair<std::string, std::function<void(RunContext&)>>>
      commands = {{"run", cmd_run},
                  {"optimize", cmd_optimize},
                  {"scan", cmd_scan},
                  {"iterate", cmd_iterate},
                  {"floquet-check", cmd_floquet_check},
                  {"spectrum", cmd_spectrum},
                  {"sweep", cmd_sweep}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir_flag, "output directory");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--seed", seed, "seed for extra optimizer restarts");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  RunContext ctx{Config{}, fs::path{}, 1, 0, "", iso_now(), json::array()};
  try {
    ctx.cfg = Config::parse_file(config_path);
    ctx.threads = std::max(1, threads);
    ctx.seed = seed;
    const std::string out =
        !out_dir_flag.empty() ? out_dir_flag
                              : ctx.cfg.get_string("output.directory", "out");
    ctx.out_dir = out;
    fs::create_directories(ctx.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const auto& [name, fn] : commands) {
    if (!app.get_subcommand(name)->parsed()) continue;
    ctx.subcommand = name;
    try {
      fn(ctx);
      ctx.write_manifest();
      return 0;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << name << " failed: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace cdpath
